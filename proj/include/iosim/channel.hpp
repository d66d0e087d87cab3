#pragma once

#include "iosim/element_model.hpp"
#include "iosim/geometry.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace iosim {

/// A fixed antenna: base-station element or user terminal. The radiation
/// pattern is cos^q about the surface normal on the antenna's own side
/// (antennas face the surface), so link formulas evaluate it at the
/// elevation of the antenna's ray to each element.
struct AntennaParams {
    Vec3 position;
    double gain = 1.0;
    double pattern_exponent = 0.0; // q in cos^q; 0 = isotropic
    std::string label;
};

/// cos^q pattern factor of an antenna at the given elevation. The gain is
/// applied separately inside the link formulas.
double antenna_pattern(double gain, double pattern_exponent, double theta_deg);

enum class DirectLinkModel { Blocked, FreeSpace };

/// Full physical description of one deployment.
struct Scenario {
    double frequency_hz = 0.0;
    IosGrid grid;
    std::vector<AntennaParams> bs_antennas;
    std::vector<AntennaParams> users;
    ElementPatternParams element;
    ElementResponseTable table;
    DirectLinkModel direct_link = DirectLinkModel::Blocked;
    GammaComposition composition = GammaComposition::OffsetProduct;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    std::size_t element_count() const { return grid.element_count(); }

    /// Throws ConfigError on any violated invariant (no antennas, antenna
    /// on the surface plane, non-positive gain, ...).
    void validate() const;
};

enum class Direction { Downlink, Uplink };
const char* direction_name(Direction d);

enum class LinkKind { BsToElement, ElementToUser, Direct, Effective };

/// A complex channel coefficient with provenance.
struct ComplexChannel {
    std::complex<double> value;
    LinkKind kind = LinkKind::Effective;
    Direction direction = Direction::Downlink;
};

/// BS antenna k <-> element m:
///   sqrt(Gk * Fk(theta)) / (sqrt(4 pi) * d) * exp(-j 2 pi d / lambda)
/// with theta the elevation of antenna k's ray to element m.
ComplexChannel bs_to_element(const Scenario& scn, std::size_t k, std::size_t m,
                             Direction direction);

/// Element m <-> user u:
///   lambda * sqrt(Gu * Fu(theta)) / (4 pi * d) * exp(-j 2 pi d / lambda)
ComplexChannel element_to_user(const Scenario& scn, std::size_t m, std::size_t u,
                               Direction direction);

/// BS antenna k <-> user u without the surface. Blocked -> 0; FreeSpace ->
/// Friis-form line-of-sight with each pattern evaluated along the
/// BS-user sightline (zero beyond 90 degrees off boresight). The value is
/// identical for both directions by construction.
ComplexChannel direct_link(const Scenario& scn, std::size_t k, std::size_t u,
                           Direction direction);

/// Custom element coefficient model: (state, mode, theta_inc, theta_dep)
/// -> Gamma. Lets callers swap the two-angle composition behind the
/// effective channel.
using GammaFn = std::function<std::complex<double>(
    ElementState, InteractionMode, double theta_inc_deg, double theta_dep_deg)>;

/// End-to-end channel: direct link plus the per-element cascade
/// sum_m h_bs * g_m * h_user, with incident/departure roles assigned by
/// direction (downlink: BS ray is incident; uplink: user ray is incident).
ComplexChannel effective_channel(const Scenario& scn,
                                 const SurfaceConfiguration& config, std::size_t k,
                                 std::size_t u, Direction direction);

ComplexChannel effective_channel(const Scenario& scn,
                                 const SurfaceConfiguration& config, std::size_t k,
                                 std::size_t u, Direction direction,
                                 const GammaFn& gamma_fn);

/// Downlink vs uplink product of the two cascade hops through element m,
/// evaluated independently per direction.
struct CascadeReciprocityReport {
    std::complex<double> downlink_product;
    std::complex<double> uplink_product;
    double max_rel_err = 0.0;
};

CascadeReciprocityReport check_cascade_reciprocity(const Scenario& scn,
                                                   std::size_t k, std::size_t m,
                                                   std::size_t u);

struct PairReciprocity {
    std::size_t k = 0;
    std::size_t u = 0;
    std::complex<double> downlink;
    std::complex<double> uplink;
    double rel_err = 0.0;
};

struct ChannelReciprocityReport {
    std::vector<PairReciprocity> pairs; // sorted by (k, u)
    double max_rel_err = 0.0;
    double tolerance = 1e-10;
    bool pass = false;
};

/// Evaluates every (antenna, user) pair in both directions through the
/// separate per-direction code paths and compares.
ChannelReciprocityReport check_channel_reciprocity(const Scenario& scn,
                                                   const SurfaceConfiguration& config,
                                                   double tolerance = 1e-10);

ChannelReciprocityReport check_channel_reciprocity(const Scenario& scn,
                                                   const SurfaceConfiguration& config,
                                                   double tolerance,
                                                   const GammaFn& gamma_fn);

/// |a - b| / max(|a|, |b|); 0 when both vanish.
double relative_error(std::complex<double> a, std::complex<double> b);

} // namespace iosim
