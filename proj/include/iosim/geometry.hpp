#pragma once

#include <cstddef>
#include <string>

namespace iosim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// cos of an angle given in degrees; exact 0 at +-90 so that taper
/// functions vanish identically at grazing.
double cos_deg(double theta_deg);

/// cos^n taper, with n == 0 meaning isotropic (1 everywhere).
double cos_power(double theta_deg, double exponent);

/// Map any azimuth to [0, 360).
double normalize_azimuth_deg(double azimuth_deg);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

double distance(const Vec3& a, const Vec3& b);

/// Half-space relative to the surface plane z = 0. A transmitter and a
/// receiver on the same side interact through reflection, on opposite
/// sides through refraction.
enum class Side { Reflection, Refraction };

Side opposite(Side s);
const char* side_name(Side s);

/// Elevation measured from the surface normal on the relevant side,
/// azimuth measured in the x-y plane from +x. Elevation is kept strictly
/// below 90 degrees; grazing placements are rejected where they arise.
struct SphericalAngle {
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;
};

/// Validating constructor for user-facing inputs (CLI flags, configs).
SphericalAngle make_spherical_angle(double elevation_deg, double azimuth_deg);

/// A direction plus the half-space it lives in.
struct SideAngle {
    SphericalAngle angle;
    Side side = Side::Reflection;
};

/// Unit vector from the surface origin toward the far-field point at the
/// given direction: (sin t cos p, sin t sin p, +-cos t), + on the
/// reflection side.
Vec3 unit_direction(const SideAngle& dir);

/// Direction of a point as seen from the origin, with its side tag.
/// Errors if the point lies on the surface plane.
SideAngle direction_of(const Vec3& p);

/// Angle in degrees between two directions (great-circle distance).
double angular_distance_deg(const SideAngle& a, const SideAngle& b);

/// Rectangular element grid on the z = 0 plane, centered on the origin,
/// normal along +z. Elements are indexed row-major from the (-x, +y)
/// corner: row 0 is the +y edge, column 0 the -x edge.
struct IosGrid {
    std::size_t rows = 1;
    std::size_t cols = 1;
    double dx = 0.0; // element pitch along x, meters
    double dy = 0.0; // element pitch along y, meters

    std::size_t element_count() const { return rows * cols; }
    double element_area() const { return dx * dy; }
    void validate() const;
};

/// Center of element m. Throws DomainError on an out-of-range index.
Vec3 element_position(const IosGrid& grid, std::size_t m);

/// Elevation/azimuth of point p as seen from element m, plus p's side.
/// Throws DomainError if p lies on the surface plane.
SideAngle angles_to(const IosGrid& grid, std::size_t m, const Vec3& p);

} // namespace iosim
