#include "iosim/geometry.hpp"

#include "iosim/errors.hpp"

#include <cmath>
#include <string>

namespace iosim {

double cos_deg(double theta_deg) {
    if (theta_deg == 90.0 || theta_deg == -90.0) {
        return 0.0;
    }
    if (theta_deg == 0.0) {
        return 1.0;
    }
    return std::cos(deg2rad(theta_deg));
}

double cos_power(double theta_deg, double exponent) {
    if (exponent == 0.0) {
        return 1.0; // isotropic
    }
    const double c = cos_deg(theta_deg);
    if (exponent == 1.0) {
        return c;
    }
    return std::pow(c, exponent);
}

double normalize_azimuth_deg(double azimuth_deg) {
    double a = std::fmod(azimuth_deg, 360.0);
    if (a < 0.0) {
        a += 360.0;
    }
    if (a == 360.0) {
        a = 0.0;
    }
    return a;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

Side opposite(Side s) {
    return s == Side::Reflection ? Side::Refraction : Side::Reflection;
}

const char* side_name(Side s) {
    return s == Side::Reflection ? "reflect" : "refract";
}

SphericalAngle make_spherical_angle(double elevation_deg, double azimuth_deg) {
    if (!(elevation_deg >= 0.0 && elevation_deg < 90.0)) {
        throw DomainError("elevation must lie in [0, 90) degrees, got " +
                          std::to_string(elevation_deg));
    }
    return SphericalAngle{elevation_deg, normalize_azimuth_deg(azimuth_deg)};
}

Vec3 unit_direction(const SideAngle& dir) {
    const double st = std::sin(deg2rad(dir.angle.elevation_deg));
    const double ct = cos_deg(dir.angle.elevation_deg);
    const double cp = std::cos(deg2rad(dir.angle.azimuth_deg));
    const double sp = std::sin(deg2rad(dir.angle.azimuth_deg));
    const double zs = dir.side == Side::Reflection ? 1.0 : -1.0;
    return Vec3{st * cp, st * sp, zs * ct};
}

SideAngle direction_of(const Vec3& p) {
    if (p.z == 0.0) {
        throw DomainError("point lies on the surface plane (z = 0); "
                          "direction is undefined");
    }
    const double r = p.norm();
    const double elevation = rad2deg(std::acos(std::fabs(p.z) / r));
    const double azimuth = normalize_azimuth_deg(rad2deg(std::atan2(p.y, p.x)));
    const Side side = p.z > 0.0 ? Side::Reflection : Side::Refraction;
    return SideAngle{SphericalAngle{elevation, azimuth}, side};
}

double angular_distance_deg(const SideAngle& a, const SideAngle& b) {
    const Vec3 ua = unit_direction(a);
    const Vec3 ub = unit_direction(b);
    double c = ua.dot(ub);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return rad2deg(std::acos(c));
}

void IosGrid::validate() const {
    if (rows < 1 || cols < 1) {
        throw ConfigError("surface grid needs at least one row and one column");
    }
    if (!(dx > 0.0) || !(dy > 0.0)) {
        throw ConfigError("element pitch dx/dy must be positive");
    }
}

Vec3 element_position(const IosGrid& grid, std::size_t m) {
    const std::size_t count = grid.element_count();
    if (m >= count) {
        throw DomainError("element index " + std::to_string(m) +
                          " out of range for " + std::to_string(count) +
                          "-element grid");
    }
    const std::size_t row = m / grid.cols;
    const std::size_t col = m % grid.cols;
    const double x =
        (static_cast<double>(col) - (static_cast<double>(grid.cols) - 1.0) / 2.0) * grid.dx;
    const double y =
        ((static_cast<double>(grid.rows) - 1.0) / 2.0 - static_cast<double>(row)) * grid.dy;
    return Vec3{x, y, 0.0};
}

SideAngle angles_to(const IosGrid& grid, std::size_t m, const Vec3& p) {
    if (p.z == 0.0) {
        throw DomainError("point lies on the surface plane (z = 0); "
                          "incidence geometry is degenerate");
    }
    const Vec3 v = p - element_position(grid, m);
    // v.z == p.z since elements sit at z = 0, so elevation < 90 is
    // guaranteed whenever p is off the plane.
    const double r = v.norm();
    const double elevation = rad2deg(std::acos(std::fabs(v.z) / r));
    const double azimuth = normalize_azimuth_deg(rad2deg(std::atan2(v.y, v.x)));
    const Side side = p.z > 0.0 ? Side::Reflection : Side::Refraction;
    return SideAngle{SphericalAngle{elevation, azimuth}, side};
}

} // namespace iosim
