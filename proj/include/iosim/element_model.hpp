#pragma once

#include "iosim/geometry.hpp"

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace iosim {

/// 1-bit element state (two PIN-diode configurations).
enum class ElementState { Off, On };

/// How the element couples transmitter and receiver: same side of the
/// surface -> Reflect, opposite sides -> Refract.
enum class InteractionMode { Reflect, Refract };

const char* state_name(ElementState s);
const char* mode_name(InteractionMode m);

/// One sampled response coefficient Gamma = beta * exp(j psi) at a given
/// incidence elevation.
struct ResponseSample {
    double theta_deg = 0.0;
    double psi_deg = 0.0;
    double beta = 1.0;
};

/// Interpolated (psi, beta) pair.
struct PhaseAmplitude {
    double psi_deg = 0.0;
    double beta = 1.0;
};

/// Per-(state, mode) sampled response coefficients versus incidence
/// elevation. The element structure is mirror-symmetric, so samples are
/// stored for non-negative elevations only and lookups fold the sign.
///
/// CSV format: header `state,mode,theta_deg,psi_deg,beta`, one sample per
/// row, sorted ascending in theta within each (state, mode) group.
class ElementResponseTable {
  public:
    /// Bundled default: two-state reflect/refract phase samples at
    /// 0/10/20 degrees elevation, unit amplitude.
    static ElementResponseTable builtin_default();

    static ElementResponseTable from_csv(std::string_view text,
                                         const std::string& origin = "<string>");
    static ElementResponseTable from_csv_file(const std::filesystem::path& file);

    void add_sample(ElementState state, InteractionMode mode, ResponseSample sample);

    /// Checks sortedness, duplicate angles, beta range and elevation
    /// coverage of [0, 20] degrees for every populated (state, mode).
    void validate() const;

    bool has(ElementState state, InteractionMode mode) const;
    const std::vector<ResponseSample>& samples(ElementState state,
                                               InteractionMode mode) const;

    /// Linear interpolation in |theta| between bracketing samples; values
    /// are held flat beyond the sampled range. Exact at sample angles.
    PhaseAmplitude interpolate(ElementState state, InteractionMode mode,
                               double theta_deg) const;

    std::string to_csv() const;

    bool operator==(const ElementResponseTable& other) const;

  private:
    static std::size_t slot(ElementState state, InteractionMode mode);
    std::vector<ResponseSample> entries_[4];
};

/// Gamma = beta * exp(j psi) at the given incidence elevation.
std::complex<double> lookup_gamma(const ElementResponseTable& table,
                                  ElementState state, InteractionMode mode,
                                  double theta_inc_deg);

/// How the single-angle sampled coefficients combine into the two-angle
/// response Gamma(theta_inc, theta_dep). Both rules are symmetric in the
/// two angles.
///   OffsetProduct: Gamma(i) * Gamma(r) / Gamma(0)  (matches the sampled
///                  sweep when either angle is 0)
///   Average:       beta = sqrt(beta_i * beta_r), psi = (psi_i + psi_r)/2
///                  (matches the sampled sweep on the diagonal)
enum class GammaComposition { OffsetProduct, Average };

PhaseAmplitude compose_response(const ElementResponseTable& table,
                                GammaComposition rule, ElementState state,
                                InteractionMode mode, double theta_inc_deg,
                                double theta_dep_deg);

std::complex<double> compose_gamma(const ElementResponseTable& table,
                                   GammaComposition rule, ElementState state,
                                   InteractionMode mode, double theta_inc_deg,
                                   double theta_dep_deg);

/// Element aperture and pattern parameters shared by all elements.
struct ElementPatternParams {
    double gain = 1.0;       // power gain G
    double area_m2 = 0.0;    // element surface area S
    double exponent_n = 1.0; // cos^n radiation taper exponent, n >= 0

    void validate() const;
};

/// cos^n(theta) pattern taper; 1 at normal incidence, 0 at grazing.
double radiation_taper(const ElementPatternParams& params, double theta_deg);

/// Full element response to a ray pair:
///   g = sqrt(G * F(theta_inc) * F(theta_dep) * S) * Gamma(theta_inc, theta_dep)
/// Symmetric under exchange of the two rays. Throws DomainError when the
/// ray sides are inconsistent with the interaction mode.
std::complex<double> element_gain(const ElementPatternParams& params,
                                  const ElementResponseTable& table,
                                  GammaComposition rule, ElementState state,
                                  InteractionMode mode, const SideAngle& inc,
                                  const SideAngle& dep);

/// Variant with a caller-supplied coefficient, for models that bypass the
/// table (custom composition rules, test probes).
std::complex<double> element_gain(const ElementPatternParams& params,
                                  std::complex<double> gamma,
                                  const SideAngle& inc, const SideAngle& dep);

/// Binary state vector for an M-element surface, row-major like the grid.
struct SurfaceConfiguration {
    std::vector<ElementState> states;

    std::size_t size() const { return states.size(); }

    /// '0'/'1' characters, row-major. Whitespace is ignored on parse.
    std::string to_bits() const;
    static SurfaceConfiguration from_bits(std::string_view bits);
};

} // namespace iosim
