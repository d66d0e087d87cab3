#include "iosim/beamforming.hpp"

#include "iosim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iosim {

namespace {

constexpr double kDbFloor = -400.0;
constexpr double kTwoPi = 2.0 * kPi;

double power_db_of(std::complex<double> field) {
    const double a = std::abs(field);
    if (a <= 0.0) return kDbFloor;
    return std::max(20.0 * std::log10(a), kDbFloor);
}

void check_config_size(const Scenario& scn, const SurfaceConfiguration& config) {
    if (config.size() != scn.element_count()) {
        throw DomainError("configuration holds " + std::to_string(config.size()) +
                          " states but the surface has " +
                          std::to_string(scn.element_count()) + " elements");
    }
}

Side sweep_side_for(const SideAngle& incident, InteractionMode mode) {
    return mode == InteractionMode::Reflect ? incident.side : opposite(incident.side);
}

} // namespace

SweepGrid SweepGrid::full(double theta_step, double phi_step) {
    SweepGrid g;
    g.theta_step = theta_step;
    g.phi_values.clear();
    if (!(phi_step > 0.0)) {
        throw ConfigError("sweep azimuth step must be positive");
    }
    for (double phi = 0.0; phi < 360.0 - 1e-9; phi += phi_step) {
        g.phi_values.push_back(phi);
    }
    return g;
}

void SweepGrid::validate() const {
    if (!(theta_step > 0.0)) throw ConfigError("sweep elevation step must be positive");
    if (theta_start < 0.0 || theta_stop < theta_start) {
        throw ConfigError("sweep elevation range must satisfy 0 <= start <= stop");
    }
    if (phi_values.empty()) throw ConfigError("sweep needs at least one azimuth cut");
}

std::vector<double> SweepGrid::thetas() const {
    validate();
    const double stop = std::min(theta_stop, 89.9);
    std::vector<double> out;
    if (theta_start > stop) {
        return out;
    }
    const auto n = static_cast<std::size_t>((stop - theta_start) / theta_step + 1e-9);
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = theta_start + static_cast<double>(i) * theta_step;
        if (t > 89.9) break;
        out.push_back(t);
    }
    return out;
}

std::size_t SweepGrid::sample_count() const { return thetas().size() * phi_values.size(); }

std::complex<double> far_field_at(const Scenario& scn,
                                  const SurfaceConfiguration& config,
                                  const SideAngle& incident, InteractionMode mode,
                                  const SphericalAngle& departure) {
    check_config_size(scn, config);
    const SideAngle dep{departure, sweep_side_for(incident, mode)};
    const double k = kTwoPi / scn.wavelength();
    const Vec3 ui = unit_direction(incident);
    const Vec3 ud = unit_direction(dep);
    // The composed coefficient only depends on the element state here, so
    // precompute it once per state instead of per element.
    std::complex<double> coeff[2];
    for (const auto state : {ElementState::Off, ElementState::On}) {
        const std::complex<double> gamma =
            compose_gamma(scn.table, scn.composition, state, mode,
                          incident.angle.elevation_deg, dep.angle.elevation_deg);
        coeff[state == ElementState::On ? 1 : 0] =
            element_gain(scn.element, gamma, incident, dep);
    }
    std::complex<double> field{0.0, 0.0};
    for (std::size_t m = 0; m < config.size(); ++m) {
        const Vec3 r = element_position(scn.grid, m);
        const std::complex<double> a = std::polar(1.0, k * ui.dot(r));
        const std::complex<double> b = std::polar(1.0, k * ud.dot(r));
        field += a * coeff[config.states[m] == ElementState::On ? 1 : 0] * b;
    }
    return field;
}

PatternSweep far_field_pattern(const Scenario& scn, const SurfaceConfiguration& config,
                               const SideAngle& incident, InteractionMode mode,
                               const SweepGrid& grid) {
    check_config_size(scn, config);
    PatternSweep sweep;
    sweep.mode = mode;
    sweep.incident = incident;
    sweep.sweep_side = sweep_side_for(incident, mode);
    sweep.grid = grid;
    const auto thetas = grid.thetas();
    sweep.samples.resize(thetas.size() * grid.phi_values.size());
    std::size_t idx = 0;
    for (const double phi : grid.phi_values) {
        for (const double theta : thetas) {
            PatternSample& s = sweep.samples[idx++];
            s.theta_deg = theta;
            s.phi_deg = phi;
            s.field = far_field_at(scn, config, incident, mode,
                                   SphericalAngle{theta, phi});
            s.power_db = power_db_of(s.field);
        }
    }
    return sweep;
}

BeamReport main_beam(const PatternSweep& sweep) {
    if (sweep.samples.empty()) {
        throw DomainError("cannot extract a main beam from an empty sweep");
    }
    const PatternSample* best = &sweep.samples.front();
    for (const auto& s : sweep.samples) {
        if (s.power_db > best->power_db ||
            (s.power_db == best->power_db &&
             (s.theta_deg < best->theta_deg ||
              (s.theta_deg == best->theta_deg && s.phi_deg < best->phi_deg)))) {
            best = &s;
        }
    }
    BeamReport report;
    report.main_beam = SphericalAngle{best->theta_deg, best->phi_deg};
    report.peak_power_db = best->power_db;
    return report;
}

const char* phase_model_name(PhaseModel m) {
    return m == PhaseModel::IdealPhase ? "ideal" : "angle-aware";
}

namespace {

/// Per-state element coefficient assumed by the design model. Common
/// positive scale factors (tapers, aperture) are left out.
std::complex<double> model_gamma(const Scenario& scn, PhaseModel model,
                                 ElementState state, InteractionMode mode,
                                 double theta_inc_deg, double theta_tgt_deg) {
    if (model == PhaseModel::IdealPhase) {
        const PhaseAmplitude pa = scn.table.interpolate(state, mode, 0.0);
        return std::polar(pa.beta, deg2rad(pa.psi_deg));
    }
    return compose_gamma(scn.table, scn.composition, state, mode, theta_inc_deg,
                         theta_tgt_deg);
}

} // namespace

std::complex<double> design_field_at(const Scenario& scn,
                                     const SurfaceConfiguration& config,
                                     const SideAngle& incident,
                                     const SideAngle& target, PhaseModel model) {
    check_config_size(scn, config);
    const InteractionMode mode = incident.side == target.side
                                     ? InteractionMode::Reflect
                                     : InteractionMode::Refract;
    const double k = kTwoPi / scn.wavelength();
    const Vec3 steer = unit_direction(incident) + unit_direction(target);
    std::complex<double> gamma[2];
    for (const auto state : {ElementState::Off, ElementState::On}) {
        gamma[state == ElementState::On ? 1 : 0] =
            model_gamma(scn, model, state, mode, incident.angle.elevation_deg,
                        target.angle.elevation_deg);
    }
    std::complex<double> field{0.0, 0.0};
    for (std::size_t m = 0; m < config.size(); ++m) {
        const Vec3 r = element_position(scn.grid, m);
        field += gamma[config.states[m] == ElementState::On ? 1 : 0] *
                 std::polar(1.0, k * steer.dot(r));
    }
    return field;
}

SurfaceConfiguration configure_surface(const Scenario& scn, const SideAngle& incident,
                                       const SideAngle& target, PhaseModel model) {
    make_spherical_angle(incident.angle.elevation_deg, incident.angle.azimuth_deg);
    make_spherical_angle(target.angle.elevation_deg, target.angle.azimuth_deg);
    const InteractionMode mode = incident.side == target.side
                                     ? InteractionMode::Reflect
                                     : InteractionMode::Refract;
    const std::size_t m_count = scn.element_count();
    const double k = kTwoPi / scn.wavelength();
    const Vec3 steer = unit_direction(incident) + unit_direction(target);

    std::complex<double> gamma[2];
    for (const auto state : {ElementState::Off, ElementState::On}) {
        gamma[state == ElementState::On ? 1 : 0] =
            model_gamma(scn, model, state, mode, incident.angle.elevation_deg,
                        target.angle.elevation_deg);
    }

    // Per-element candidate phasors at the target. Choosing state s adds
    // P_m(s) = gamma_s * exp(-j chi_m) to the design field, where
    // chi_m = -k (u_inc + u_tgt) . r_m is the desired conjugation phase.
    std::vector<std::complex<double>> p_off(m_count);
    std::vector<std::complex<double>> p_on(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        const Vec3 r = element_position(scn.grid, m);
        const std::complex<double> w = std::polar(1.0, k * steer.dot(r));
        p_off[m] = gamma[0] * w;
        p_on[m] = gamma[1] * w;
    }

    // The best state vector aligns each element with the (unknown) phase
    // of the optimal total field: s_m = argmax_s Re(P_m(s) e^{-j alpha}).
    // As alpha sweeps the circle the per-element choice flips only where
    // Re((P_on - P_off) e^{-j alpha}) changes sign, so scanning every
    // boundary and every interval between boundaries visits the optimum.
    std::vector<double> candidates;
    candidates.reserve(2 * m_count + 1);
    candidates.push_back(0.0);
    for (std::size_t m = 0; m < m_count; ++m) {
        const std::complex<double> d = p_on[m] - p_off[m];
        if (std::abs(d) == 0.0) continue; // states indistinguishable here
        const double base = std::arg(d);
        for (const double off : {kPi / 2.0, -kPi / 2.0}) {
            double a = std::fmod(base + off, kTwoPi);
            if (a < 0.0) a += kTwoPi;
            candidates.push_back(a);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<double> alphas = candidates;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double a = candidates[i];
        const double b =
            i + 1 < candidates.size() ? candidates[i + 1] : candidates.front() + kTwoPi;
        alphas.push_back((a + b) / 2.0); // interior of each interval
    }
    std::sort(alphas.begin(), alphas.end());

    SurfaceConfiguration best;
    best.states.assign(m_count, ElementState::Off);
    double best_score = -1.0;
    SurfaceConfiguration trial;
    trial.states.resize(m_count);
    for (const double alpha : alphas) {
        const std::complex<double> ref = std::polar(1.0, -alpha);
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t m = 0; m < m_count; ++m) {
            const bool on = (p_on[m] * ref).real() > (p_off[m] * ref).real();
            trial.states[m] = on ? ElementState::On : ElementState::Off;
            sum += on ? p_on[m] : p_off[m];
        }
        const double score = std::abs(sum);
        if (score > best_score) {
            best_score = score;
            best = trial;
        }
    }
    return best;
}

BeamReciprocityReport beam_reciprocity_experiment(const Scenario& scn,
                                                  const SideAngle& incident0,
                                                  InteractionMode mode,
                                                  const SweepGrid& grid,
                                                  const BeamReciprocityOptions& opts) {
    const Side out_side = sweep_side_for(incident0, mode);

    BeamReciprocityReport report;
    report.incident0 = incident0;

    PatternSweep sweep1;
    if (opts.config) {
        report.config = *opts.config;
        report.steer_target = opts.target; // informational only
        sweep1 = far_field_pattern(scn, report.config, incident0, mode, grid);
    } else if (opts.target) {
        report.steer_target = *opts.target;
        report.config = configure_surface(scn, incident0, *opts.target, opts.model);
        sweep1 = far_field_pattern(scn, report.config, incident0, mode, grid);
    } else {
        // Default steering target: the grid direction whose configuration
        // yields the strongest swept peak for this incidence.
        bool first = true;
        double best_peak = 0.0;
        for (const double phi : grid.phi_values) {
            for (const double theta : grid.thetas()) {
                const SideAngle tgt{SphericalAngle{theta, phi}, out_side};
                const SurfaceConfiguration cfg =
                    configure_surface(scn, incident0, tgt, opts.model);
                const PatternSweep sw = far_field_pattern(scn, cfg, incident0, mode, grid);
                const double peak = main_beam(sw).peak_power_db;
                if (first || peak > best_peak) {
                    first = false;
                    best_peak = peak;
                    report.steer_target = tgt;
                    report.config = cfg;
                    sweep1 = sw;
                }
            }
        }
    }

    report.beam1 = main_beam(sweep1);

    // Same configuration, illuminated from the observed main beam.
    const SideAngle incident1{report.beam1.main_beam, out_side};
    const PatternSweep sweep2 =
        far_field_pattern(scn, report.config, incident1, mode, grid);
    report.beam2 = main_beam(sweep2);

    const SideAngle back{report.beam2.main_beam, incident0.side};
    report.deviation_deg = angular_distance_deg(back, incident0);
    report.reciprocal = report.deviation_deg <= grid.theta_step + 1e-9;
    return report;
}

ModelComparisonReport compare_beamforming_models(const Scenario& scn,
                                                 const SideAngle& incident,
                                                 const SideAngle& target,
                                                 const SweepGrid& grid) {
    const InteractionMode mode = incident.side == target.side
                                     ? InteractionMode::Reflect
                                     : InteractionMode::Refract;
    ModelComparisonReport report;
    report.incident = incident;
    report.target = target;

    const auto evaluate = [&](PhaseModel model) {
        ModelComparisonEntry entry;
        entry.model = model;
        entry.config = configure_surface(scn, incident, target, model);
        const PatternSweep sweep =
            far_field_pattern(scn, entry.config, incident, mode, grid);
        entry.beam = main_beam(sweep);
        entry.pointing_error_deg = angular_distance_deg(
            SideAngle{entry.beam.main_beam, target.side}, target);
        entry.power_at_target_db = power_db_of(
            far_field_at(scn, entry.config, incident, mode, target.angle));
        entry.beam.pointing_error_deg = entry.pointing_error_deg;
        return entry;
    };

    report.ideal = evaluate(PhaseModel::IdealPhase);
    report.angle_aware = evaluate(PhaseModel::AngleAware);
    report.gain_loss_db =
        report.angle_aware.power_at_target_db - report.ideal.power_at_target_db;
    report.ideal.beam.gain_loss_db = report.gain_loss_db;
    report.angle_aware.beam.gain_loss_db = 0.0;
    return report;
}

} // namespace iosim
