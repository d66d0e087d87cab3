#include "iosim/channel.hpp"

#include "iosim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace iosim {

double antenna_pattern(double /*gain*/, double pattern_exponent, double theta_deg) {
    if (std::fabs(theta_deg) > 90.0) {
        throw DomainError("antenna pattern requires |theta| <= 90 degrees, got " +
                          std::to_string(theta_deg));
    }
    return cos_power(theta_deg, pattern_exponent);
}

void Scenario::validate() const {
    if (!(frequency_hz > 0.0)) {
        throw ConfigError("frequency_hz required and must be positive");
    }
    grid.validate();
    element.validate();
    table.validate();
    if (bs_antennas.empty()) throw ConfigError("scenario needs at least one antenna");
    if (users.empty()) throw ConfigError("scenario needs at least one user");
    const auto check_endpoint = [](const AntennaParams& a, const std::string& role,
                                   std::size_t idx) {
        const std::string who =
            role + " " + std::to_string(idx) + (a.label.empty() ? "" : " ('" + a.label + "')");
        if (a.position.z == 0.0) {
            throw ConfigError(who + " lies on the surface plane (z = 0)");
        }
        if (!(a.gain > 0.0)) throw ConfigError(who + ": gain must be positive");
        if (!(a.pattern_exponent >= 0.0)) {
            throw ConfigError(who + ": pattern exponent must be >= 0");
        }
        if (!std::isfinite(a.position.x) || !std::isfinite(a.position.y) ||
            !std::isfinite(a.position.z)) {
            throw ConfigError(who + ": position must be finite");
        }
    };
    for (std::size_t i = 0; i < bs_antennas.size(); ++i) {
        check_endpoint(bs_antennas[i], "antenna", i);
    }
    for (std::size_t i = 0; i < users.size(); ++i) {
        check_endpoint(users[i], "user", i);
    }
}

const char* direction_name(Direction d) {
    return d == Direction::Downlink ? "D" : "U";
}

namespace {

constexpr double kFourPi = 4.0 * kPi;

const AntennaParams& bs_at(const Scenario& scn, std::size_t k) {
    if (k >= scn.bs_antennas.size()) {
        throw DomainError("antenna index " + std::to_string(k) + " out of range");
    }
    return scn.bs_antennas[k];
}

const AntennaParams& user_at(const Scenario& scn, std::size_t u) {
    if (u >= scn.users.size()) {
        throw DomainError("user index " + std::to_string(u) + " out of range");
    }
    return scn.users[u];
}

std::complex<double> path_phase(double dist, double lambda) {
    return std::polar(1.0, -2.0 * kPi * dist / lambda);
}

std::complex<double> bs_link_value(const Scenario& scn, const AntennaParams& bs,
                                   std::size_t m) {
    const SideAngle ray = angles_to(scn.grid, m, bs.position);
    const double d = distance(bs.position, element_position(scn.grid, m));
    const double f = antenna_pattern(bs.gain, bs.pattern_exponent,
                                     ray.angle.elevation_deg);
    return std::sqrt(bs.gain * f) / (std::sqrt(kFourPi) * d) *
           path_phase(d, scn.wavelength());
}

std::complex<double> user_link_value(const Scenario& scn, const AntennaParams& user,
                                     std::size_t m) {
    const SideAngle ray = angles_to(scn.grid, m, user.position);
    const double d = distance(user.position, element_position(scn.grid, m));
    const double f = antenna_pattern(user.gain, user.pattern_exponent,
                                     ray.angle.elevation_deg);
    return scn.wavelength() * std::sqrt(user.gain * f) / (kFourPi * d) *
           path_phase(d, scn.wavelength());
}

GammaFn table_gamma_fn(const Scenario& scn) {
    return [&scn](ElementState state, InteractionMode mode, double ti, double td) {
        return compose_gamma(scn.table, scn.composition, state, mode, ti, td);
    };
}

} // namespace

ComplexChannel bs_to_element(const Scenario& scn, std::size_t k, std::size_t m,
                             Direction direction) {
    return {bs_link_value(scn, bs_at(scn, k), m), LinkKind::BsToElement, direction};
}

ComplexChannel element_to_user(const Scenario& scn, std::size_t m, std::size_t u,
                               Direction direction) {
    return {user_link_value(scn, user_at(scn, u), m), LinkKind::ElementToUser,
            direction};
}

ComplexChannel direct_link(const Scenario& scn, std::size_t k, std::size_t u,
                           Direction direction) {
    const AntennaParams& bs = bs_at(scn, k);
    const AntennaParams& user = user_at(scn, u);
    if (scn.direct_link == DirectLinkModel::Blocked) {
        return {{0.0, 0.0}, LinkKind::Direct, direction};
    }
    const Vec3 line = user.position - bs.position;
    const double d = line.norm();
    if (d == 0.0) {
        throw DomainError("antenna and user are co-located; direct link undefined");
    }
    // Each antenna faces the surface, boresight -sign(z) * z_hat. A
    // directive pattern (q > 0) contributes nothing more than 90 degrees
    // off boresight; an isotropic one (q = 0) radiates everywhere.
    const auto pattern_along = [&](const AntennaParams& a, const Vec3& toward) {
        if (a.pattern_exponent == 0.0) return 1.0;
        const double zsign = a.position.z > 0.0 ? -1.0 : 1.0;
        const double c = zsign * toward.z / d;
        if (c < 0.0) return 0.0;
        return cos_power(rad2deg(std::acos(std::min(c, 1.0))), a.pattern_exponent);
    };
    const double fk = pattern_along(bs, line);
    const double fu = pattern_along(user, line * -1.0);
    if (fk == 0.0 || fu == 0.0) {
        return {{0.0, 0.0}, LinkKind::Direct, direction};
    }
    const std::complex<double> value = scn.wavelength() *
                                       std::sqrt(bs.gain * fk * user.gain * fu) /
                                       (kFourPi * d) * path_phase(d, scn.wavelength());
    return {value, LinkKind::Direct, direction};
}

namespace {

std::complex<double> effective_value(const Scenario& scn,
                                     const SurfaceConfiguration& config,
                                     std::size_t k, std::size_t u,
                                     Direction direction, const GammaFn& gamma_fn) {
    const AntennaParams& bs = bs_at(scn, k);
    const AntennaParams& user = user_at(scn, u);
    const std::size_t m_count = scn.element_count();
    if (config.size() != m_count) {
        throw DomainError("configuration holds " + std::to_string(config.size()) +
                          " states but the surface has " + std::to_string(m_count) +
                          " elements");
    }
    std::complex<double> h = direct_link(scn, k, u, direction).value;
    for (std::size_t m = 0; m < m_count; ++m) {
        const SideAngle bs_ray = angles_to(scn.grid, m, bs.position);
        const SideAngle user_ray = angles_to(scn.grid, m, user.position);
        const InteractionMode mode = bs_ray.side == user_ray.side
                                         ? InteractionMode::Reflect
                                         : InteractionMode::Refract;
        const std::complex<double> h_bs = bs_link_value(scn, bs, m);
        const std::complex<double> h_user = user_link_value(scn, user, m);
        if (direction == Direction::Downlink) {
            // BS transmits: its ray is the incident one.
            const std::complex<double> g =
                element_gain(scn.element,
                             gamma_fn(config.states[m], mode,
                                      bs_ray.angle.elevation_deg,
                                      user_ray.angle.elevation_deg),
                             bs_ray, user_ray);
            h += h_bs * g * h_user;
        } else {
            // User transmits: roles swap, the user ray is incident.
            const std::complex<double> g =
                element_gain(scn.element,
                             gamma_fn(config.states[m], mode,
                                      user_ray.angle.elevation_deg,
                                      bs_ray.angle.elevation_deg),
                             user_ray, bs_ray);
            h += h_user * g * h_bs;
        }
    }
    return h;
}

} // namespace

ComplexChannel effective_channel(const Scenario& scn,
                                 const SurfaceConfiguration& config, std::size_t k,
                                 std::size_t u, Direction direction) {
    return {effective_value(scn, config, k, u, direction, table_gamma_fn(scn)),
            LinkKind::Effective, direction};
}

ComplexChannel effective_channel(const Scenario& scn,
                                 const SurfaceConfiguration& config, std::size_t k,
                                 std::size_t u, Direction direction,
                                 const GammaFn& gamma_fn) {
    return {effective_value(scn, config, k, u, direction, gamma_fn),
            LinkKind::Effective, direction};
}

double relative_error(std::complex<double> a, std::complex<double> b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    if (denom == 0.0) return 0.0;
    return std::abs(a - b) / denom;
}

CascadeReciprocityReport check_cascade_reciprocity(const Scenario& scn,
                                                   std::size_t k, std::size_t m,
                                                   std::size_t u) {
    const std::complex<double> down =
        bs_to_element(scn, k, m, Direction::Downlink).value *
        element_to_user(scn, m, u, Direction::Downlink).value;
    const std::complex<double> up =
        element_to_user(scn, m, u, Direction::Uplink).value *
        bs_to_element(scn, k, m, Direction::Uplink).value;
    return {down, up, relative_error(down, up)};
}

namespace {

ChannelReciprocityReport reciprocity_impl(const Scenario& scn,
                                          const SurfaceConfiguration& config,
                                          double tolerance, const GammaFn& gamma_fn) {
    ChannelReciprocityReport report;
    report.tolerance = tolerance;
    for (std::size_t k = 0; k < scn.bs_antennas.size(); ++k) {
        for (std::size_t u = 0; u < scn.users.size(); ++u) {
            PairReciprocity pr;
            pr.k = k;
            pr.u = u;
            pr.downlink =
                effective_value(scn, config, k, u, Direction::Downlink, gamma_fn);
            pr.uplink =
                effective_value(scn, config, k, u, Direction::Uplink, gamma_fn);
            pr.rel_err = relative_error(pr.downlink, pr.uplink);
            report.max_rel_err = std::max(report.max_rel_err, pr.rel_err);
            report.pairs.push_back(pr);
        }
    }
    report.pass = report.max_rel_err <= tolerance;
    return report;
}

} // namespace

ChannelReciprocityReport check_channel_reciprocity(const Scenario& scn,
                                                   const SurfaceConfiguration& config,
                                                   double tolerance) {
    return reciprocity_impl(scn, config, tolerance, table_gamma_fn(scn));
}

ChannelReciprocityReport check_channel_reciprocity(const Scenario& scn,
                                                   const SurfaceConfiguration& config,
                                                   double tolerance,
                                                   const GammaFn& gamma_fn) {
    return reciprocity_impl(scn, config, tolerance, gamma_fn);
}

} // namespace iosim
