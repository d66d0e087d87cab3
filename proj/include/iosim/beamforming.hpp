#pragma once

#include "iosim/channel.hpp"
#include "iosim/element_model.hpp"
#include "iosim/geometry.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace iosim {

/// Departure-direction sampling grid. Elevations run from theta_start to
/// theta_stop (clamped to 89.9 so the taper keeps grazing finite) in
/// steps of theta_step; azimuth takes the listed cut values. Directions
/// are enumerated azimuth-major, elevation-minor.
struct SweepGrid {
    double theta_start = 0.0;
    double theta_stop = 89.0;
    double theta_step = 1.0;
    std::vector<double> phi_values = {0.0, 180.0};

    /// Full two-dimensional sweep, azimuth 0..<360.
    static SweepGrid full(double theta_step = 2.0, double phi_step = 2.0);

    void validate() const;
    std::vector<double> thetas() const;
    std::size_t sample_count() const;
};

struct PatternSample {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    std::complex<double> field;
    double power_db = 0.0; // 20 log10 |field|, floored at -400 dB
};

struct PatternSweep {
    InteractionMode mode = InteractionMode::Reflect;
    SideAngle incident;
    Side sweep_side = Side::Reflection;
    SweepGrid grid;
    std::vector<PatternSample> samples; // grid order
};

/// Far-field complex cascade for one departure direction:
///   sum_m exp(j k u_inc . r_m) * g_m(inc -> dep) * exp(j k u_dep . r_m)
/// i.e. the exact channel with 1/d amplitudes dropped and per-element
/// path phases expanded about the array origin. The direct link is
/// excluded.
std::complex<double> far_field_at(const Scenario& scn,
                                  const SurfaceConfiguration& config,
                                  const SideAngle& incident, InteractionMode mode,
                                  const SphericalAngle& departure);

/// Sweeps far_field_at over the grid on the side implied by mode.
PatternSweep far_field_pattern(const Scenario& scn,
                               const SurfaceConfiguration& config,
                               const SideAngle& incident, InteractionMode mode,
                               const SweepGrid& grid);

struct BeamReport {
    SphericalAngle main_beam;
    double peak_power_db = 0.0;
    std::optional<double> pointing_error_deg;
    std::optional<double> gain_loss_db;
};

/// Grid argmax of the sweep power. Ties resolve to the smallest
/// elevation, then the smallest azimuth.
BeamReport main_beam(const PatternSweep& sweep);

/// Element phase model assumed when choosing states.
///   IdealPhase: each state contributes its normal-incidence coefficient
///               regardless of geometry.
///   AngleAware: each state contributes the two-angle composed
///               coefficient at the actual incident and target
///               elevations.
enum class PhaseModel { IdealPhase, AngleAware };

const char* phase_model_name(PhaseModel m);

/// Field at the steering target under the design-time element model,
/// tapers and aperture scale omitted (they do not depend on the state
/// choice): sum_m gamma_model(s_m) * exp(j k (u_inc + u_tgt) . r_m).
std::complex<double> design_field_at(const Scenario& scn,
                                     const SurfaceConfiguration& config,
                                     const SideAngle& incident,
                                     const SideAngle& target, PhaseModel model);

/// Chooses the per-element state that phase-conjugates the incident +
/// target steering profile chi_m = -(2 pi / lambda)(u_inc + u_tgt) . r_m.
/// Each element independently picks the state closest (circularly) to
/// chi_m measured against a common phase reference; the free reference is
/// scanned over its finitely many distinct alignments so the returned
/// configuration attains the global 2^M maximum of |design field| at the
/// target. Deterministic: ties prefer OFF, candidate references are
/// scanned in sorted order.
SurfaceConfiguration configure_surface(const Scenario& scn, const SideAngle& incident,
                                       const SideAngle& target, PhaseModel model);

struct BeamReciprocityOptions {
    std::optional<SideAngle> target;               // steering target override
    std::optional<SurfaceConfiguration> config;    // configuration override
    PhaseModel model = PhaseModel::AngleAware;
};

struct BeamReciprocityReport {
    SideAngle incident0;
    std::optional<SideAngle> steer_target; // absent for caller-supplied configs
    SurfaceConfiguration config;
    BeamReport beam1; // main beam under incident0
    BeamReport beam2; // main beam when re-illuminated from beam1
    double deviation_deg = 0.0; // angular distance beam2 vs incident0
    bool reciprocal = false;    // deviation within one grid step
};

/// The round-trip experiment: configure once, find the main beam, then
/// illuminate from that beam with the same configuration and check
/// whether the new main beam returns to the original incidence.
BeamReciprocityReport beam_reciprocity_experiment(const Scenario& scn,
                                                  const SideAngle& incident0,
                                                  InteractionMode mode,
                                                  const SweepGrid& grid,
                                                  const BeamReciprocityOptions& opts = {});

struct ModelComparisonEntry {
    PhaseModel model = PhaseModel::AngleAware;
    SurfaceConfiguration config;
    BeamReport beam;                 // evaluated under the physical model
    double pointing_error_deg = 0.0; // main beam vs target
    double power_at_target_db = 0.0;
};

struct ModelComparisonReport {
    SideAngle incident;
    SideAngle target;
    ModelComparisonEntry ideal;
    ModelComparisonEntry angle_aware;
    /// Power the ideal-model design gives up at the target, relative to
    /// the angle-aware design (positive = ideal is worse).
    double gain_loss_db = 0.0;
};

/// Designs the surface under both phase models and evaluates both
/// configurations under the physical (angle-dependent) response.
ModelComparisonReport compare_beamforming_models(const Scenario& scn,
                                                 const SideAngle& incident,
                                                 const SideAngle& target,
                                                 const SweepGrid& grid);

} // namespace iosim
