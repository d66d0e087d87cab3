#include "iosim/channel.hpp"

#include "iosim/errors.hpp"
#include "iosim/scenario_io.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace iosim;
using cplx = std::complex<double>;

namespace {

Scenario small_scenario() {
    Scenario scn;
    scn.frequency_hz = 3.6e9;
    scn.grid = IosGrid{1, 1, 0.0416, 0.0416};
    scn.element = ElementPatternParams{1.0, scn.grid.element_area(), 1.0};
    scn.table = ElementResponseTable::builtin_default();
    scn.bs_antennas.push_back({{0.0, 0.0, 1.0}, 1.0, 0.0, "bs"});
    scn.users.push_back({{0.0, 0.0, -1.0}, 1.0, 0.0, "user"});
    scn.validate();
    return scn;
}

// ---------------------------------------------------------------------
// Independent oracle for the effective channel. Everything below is
// recomputed from raw positions with its own arithmetic: element
// placement, angles, table interpolation, link formulas.
// ---------------------------------------------------------------------

constexpr double kOraclePi = 3.14159265358979323846;

double oracle_interp_psi(ElementState s, InteractionMode mo, double theta) {
    const double grid_theta[3] = {0.0, 10.0, 20.0};
    double psi[3];
    if (mo == InteractionMode::Reflect) {
        if (s == ElementState::On) {
            psi[0] = -146.0; psi[1] = -135.0; psi[2] = -105.0;
        } else {
            psi[0] = -20.0; psi[1] = -12.0; psi[2] = 11.0;
        }
    } else {
        if (s == ElementState::On) {
            psi[0] = 122.0; psi[1] = 133.0; psi[2] = 162.0;
        } else {
            psi[0] = -62.0; psi[1] = -53.0; psi[2] = -32.0;
        }
    }
    double t = theta < 0.0 ? -theta : theta;
    if (t >= 20.0) return psi[2];
    const int lo = t < 10.0 ? 0 : 1;
    const double w = (t - grid_theta[lo]) / 10.0;
    return psi[lo] * (1.0 - w) + psi[lo + 1] * w;
}

cplx oracle_effective(const Scenario& scn, const SurfaceConfiguration& cfg,
                      std::size_t k, std::size_t u, Direction dir) {
    const double lambda = 299792458.0 / scn.frequency_hz;
    const Vec3 bs = scn.bs_antennas[k].position;
    const Vec3 us = scn.users[u].position;
    cplx total{0.0, 0.0};
    for (std::size_t m = 0; m < scn.element_count(); ++m) {
        const std::size_t row = m / scn.grid.cols;
        const std::size_t col = m % scn.grid.cols;
        const double ex = (double(col) - (double(scn.grid.cols) - 1.0) / 2.0) * scn.grid.dx;
        const double ey = ((double(scn.grid.rows) - 1.0) / 2.0 - double(row)) * scn.grid.dy;

        const double dk = std::sqrt((bs.x - ex) * (bs.x - ex) +
                                    (bs.y - ey) * (bs.y - ey) + bs.z * bs.z);
        const double du = std::sqrt((us.x - ex) * (us.x - ex) +
                                    (us.y - ey) * (us.y - ey) + us.z * us.z);
        const double theta_k = std::acos(std::fabs(bs.z) / dk) * 180.0 / kOraclePi;
        const double theta_u = std::acos(std::fabs(us.z) / du) * 180.0 / kOraclePi;

        const double fk = std::pow(std::cos(theta_k * kOraclePi / 180.0),
                                   scn.bs_antennas[k].pattern_exponent);
        const double fu = std::pow(std::cos(theta_u * kOraclePi / 180.0),
                                   scn.users[u].pattern_exponent);
        const cplx h_bs = std::sqrt(scn.bs_antennas[k].gain * fk) /
                          (std::sqrt(4.0 * kOraclePi) * dk) *
                          std::exp(cplx(0.0, -2.0 * kOraclePi * dk / lambda));
        const cplx h_us = lambda * std::sqrt(scn.users[u].gain * fu) /
                          (4.0 * kOraclePi * du) *
                          std::exp(cplx(0.0, -2.0 * kOraclePi * du / lambda));

        const InteractionMode mo = (bs.z > 0.0) == (us.z > 0.0)
                                       ? InteractionMode::Reflect
                                       : InteractionMode::Refract;
        const double ti = dir == Direction::Downlink ? theta_k : theta_u;
        const double td = dir == Direction::Downlink ? theta_u : theta_k;
        const double psi = oracle_interp_psi(cfg.states[m], mo, ti) +
                           oracle_interp_psi(cfg.states[m], mo, td) -
                           oracle_interp_psi(cfg.states[m], mo, 0.0);
        const double fi = std::pow(std::cos(ti * kOraclePi / 180.0), scn.element.exponent_n);
        const double fd = std::pow(std::cos(td * kOraclePi / 180.0), scn.element.exponent_n);
        const cplx g = std::sqrt(scn.element.gain * fi * fd * scn.element.area_m2) *
                       std::exp(cplx(0.0, psi * kOraclePi / 180.0));
        total += h_bs * g * h_us;
    }
    return total; // direct link assumed blocked by the caller
}

} // namespace

TEST_CASE("antenna_pattern examples") {
    CHECK(antenna_pattern(1.0, 0.0, 33.0) == 1.0);
    CHECK(antenna_pattern(1.0, 2.0, 60.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(antenna_pattern(1.0, 1.0, 90.0) == 0.0);
    CHECK_THROWS_AS(antenna_pattern(1.0, 1.0, 91.0), DomainError);
}

TEST_CASE("bs_to_element magnitude and phase anchors") {
    Scenario scn = small_scenario();
    // lambda exactly 1 m makes the path phase wrap cleanly.
    scn.frequency_hz = kSpeedOfLight;
    const double lambda = scn.wavelength();
    CHECK(lambda == 1.0);

    scn.bs_antennas[0].position = {0.0, 0.0, 1.0}; // d = 1 m = lambda
    cplx h = bs_to_element(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::abs(h) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(h) == doctest::Approx(0.28209).epsilon(1e-4));
    CHECK(std::arg(h) == doctest::Approx(0.0).epsilon(1e-12)); // e^{-j 2 pi}

    scn.bs_antennas[0].position = {0.0, 0.0, 0.5}; // d = lambda / 2
    h = bs_to_element(scn, 0, 0, Direction::Uplink).value;
    CHECK(h.real() / std::abs(h) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::fabs(h.imag()) / std::abs(h) < 1e-12);
}

TEST_CASE("element_to_user magnitude at 3.6 GHz") {
    Scenario scn = small_scenario();
    const double lambda = kSpeedOfLight / 3.6e9; // oracle for the expected value
    scn.users[0].position = {0.0, 0.0, -1.0};
    const cplx h = element_to_user(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::abs(h) == doctest::Approx(lambda / (4.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(h) == doctest::Approx(6.628e-3).epsilon(1e-3));

    // 1/d law: doubling the distance halves the magnitude.
    scn.users[0].position = {0.0, 0.0, -2.0};
    const cplx h2 = element_to_user(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::abs(h2) == doctest::Approx(std::abs(h) / 2.0).epsilon(1e-12));

    // Full-wavelength path: real positive phase factor.
    scn.frequency_hz = kSpeedOfLight / 0.5; // lambda = 0.5
    scn.users[0].position = {0.0, 0.0, -1.0}; // d = 2 lambda
    const cplx h3 = element_to_user(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::arg(h3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bs_to_element 1/d scaling") {
    Scenario scn = small_scenario();
    scn.bs_antennas[0].position = {0.4, -0.2, 0.9};
    const double a1 = std::abs(bs_to_element(scn, 0, 0, Direction::Downlink).value);
    scn.bs_antennas[0].position = {0.8, -0.4, 1.8};
    const double a2 = std::abs(bs_to_element(scn, 0, 0, Direction::Downlink).value);
    CHECK(a2 == doctest::Approx(a1 / 2.0).epsilon(1e-12));
}

TEST_CASE("path phase is invariant under whole-wavelength translation") {
    Scenario scn = small_scenario();
    const double lambda = scn.wavelength();
    const double d0 = 0.83;
    scn.bs_antennas[0].position = {0.0, 0.0, d0};
    const cplx h1 = bs_to_element(scn, 0, 0, Direction::Downlink).value;
    scn.bs_antennas[0].position = {0.0, 0.0, d0 + 5.0 * lambda};
    const cplx h2 = bs_to_element(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::arg(h1) == doctest::Approx(std::arg(h2)).epsilon(1e-9));
}

TEST_CASE("direct link: blocked, free-space value, direction-free") {
    Scenario scn = small_scenario();
    scn.direct_link = DirectLinkModel::Blocked;
    CHECK(direct_link(scn, 0, 0, Direction::Downlink).value == cplx{0.0, 0.0});

    scn.direct_link = DirectLinkModel::FreeSpace;
    scn.frequency_hz = kSpeedOfLight; // lambda = 1
    scn.bs_antennas[0].position = {0.0, 0.0, 1.0};
    scn.users[0].position = {0.0, 0.0, 2.0}; // d = lambda, same side
    const cplx h = direct_link(scn, 0, 0, Direction::Downlink).value;
    CHECK(std::abs(h) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));

    scn.users[0].position = {0.7, -0.4, -1.3};
    const cplx hd = direct_link(scn, 0, 0, Direction::Downlink).value;
    const cplx hu = direct_link(scn, 0, 0, Direction::Uplink).value;
    CHECK(hd.real() == hu.real());
    CHECK(hd.imag() == hu.imag());
}

TEST_CASE("effective_channel: single-element product") {
    Scenario scn = small_scenario();
    SurfaceConfiguration cfg;
    cfg.states = {ElementState::On};
    const cplx expected = oracle_effective(scn, cfg, 0, 0, Direction::Downlink);
    const cplx got = effective_channel(scn, cfg, 0, 0, Direction::Downlink).value;
    CHECK(relative_error(got, expected) < 1e-12);
}

TEST_CASE("effective_channel: 2x2 term-by-term oracle, both directions") {
    Scenario scn;
    scn.frequency_hz = 3.6e9;
    scn.grid = IosGrid{2, 2, 0.0416, 0.0416};
    scn.element = ElementPatternParams{1.2, scn.grid.element_area(), 1.0};
    scn.table = ElementResponseTable::builtin_default();
    scn.direct_link = DirectLinkModel::Blocked;
    scn.bs_antennas.push_back({{0.2, -0.3, 0.9}, 2.0, 1.0, ""});
    scn.users.push_back({{-0.4, 0.1, -0.7}, 1.5, 2.0, ""});
    scn.validate();
    const SurfaceConfiguration cfg = SurfaceConfiguration::from_bits("0110");
    for (const auto dir : {Direction::Downlink, Direction::Uplink}) {
        const cplx expected = oracle_effective(scn, cfg, 0, 0, dir);
        const cplx got = effective_channel(scn, cfg, 0, 0, dir).value;
        CHECK(relative_error(got, expected) < 1e-12);
    }
}

TEST_CASE("effective_channel: wrong configuration length") {
    Scenario scn = small_scenario();
    SurfaceConfiguration cfg = SurfaceConfiguration::from_bits("01");
    CHECK_THROWS_AS(effective_channel(scn, cfg, 0, 0, Direction::Downlink),
                    DomainError);
}

TEST_CASE("cascade reciprocity on randomized geometries") {
    std::mt19937_64 rng(2026);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const Scenario scn = random_scenario(rng);
        const std::size_t k = uniform_index(rng, scn.bs_antennas.size());
        const std::size_t u = uniform_index(rng, scn.users.size());
        const std::size_t m = uniform_index(rng, scn.element_count());
        const auto rep = check_cascade_reciprocity(scn, k, m, u);
        worst = std::max(worst, rep.max_rel_err);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("cascade reciprocity: mirror-symmetric geometry") {
    Scenario scn = small_scenario();
    scn.bs_antennas[0].position = {0.6, 0.0, 1.0};
    scn.users[0].position = {-0.6, 0.0, 1.0}; // mirrored in x, same side
    const auto rep = check_cascade_reciprocity(scn, 0, 0, 0);
    CHECK(rep.max_rel_err <= 1e-12);
    // Mirroring both endpoints preserves the product.
    Scenario mirrored = scn;
    mirrored.bs_antennas[0].position = {-0.6, 0.0, 1.0};
    mirrored.users[0].position = {0.6, 0.0, 1.0};
    const auto rep2 = check_cascade_reciprocity(mirrored, 0, 0, 0);
    CHECK(relative_error(rep.downlink_product, rep2.downlink_product) < 1e-12);
}

TEST_CASE("cascade reciprocity: degenerate endpoint is an error") {
    Scenario scn = small_scenario();
    scn.users[0].position = {0.3, 0.2, 0.0}; // invalid on purpose, skip validate()
    CHECK_THROWS_AS(check_cascade_reciprocity(scn, 0, 0, 0), DomainError);
}

TEST_CASE("channel reciprocity holds over random scenarios and configs") {
    std::mt19937_64 rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Scenario scn = random_scenario(rng);
        const SurfaceConfiguration cfg = random_configuration(rng, scn.element_count());
        const auto rep = check_channel_reciprocity(scn, cfg);
        CHECK(rep.pass);
        worst = std::max(worst, rep.max_rel_err);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("channel reciprocity holds for arbitrary response tables") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        Scenario scn = random_scenario(rng);
        ElementResponseTable t;
        for (const auto state : {ElementState::Off, ElementState::On}) {
            for (const auto mode :
                 {InteractionMode::Reflect, InteractionMode::Refract}) {
                for (const double theta : {0.0, 10.0, 20.0}) {
                    t.add_sample(state, mode,
                                 {theta, uniform_in(rng, -180.0, 180.0),
                                  uniform_in(rng, 0.05, 1.0)});
                }
            }
        }
        t.validate();
        scn.table = t;
        scn.composition = (trial % 2 == 0) ? GammaComposition::OffsetProduct
                                           : GammaComposition::Average;
        const SurfaceConfiguration cfg = random_configuration(rng, scn.element_count());
        const auto rep = check_channel_reciprocity(scn, cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("negative control: an asymmetric coefficient breaks reciprocity") {
    std::mt19937_64 rng(5);
    const Scenario scn = random_scenario(rng);
    const SurfaceConfiguration cfg = random_configuration(rng, scn.element_count());
    const GammaFn asymmetric = [](ElementState, InteractionMode, double ti, double td) {
        return std::polar(1.0, deg2rad(2.0 * ti - td));
    };
    const auto rep = check_channel_reciprocity(scn, cfg, 1e-10, asymmetric);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_rel_err > 1e-6);
}

TEST_CASE("linearity: dead elements leave exactly the direct link") {
    Scenario scn = small_scenario();
    scn.direct_link = DirectLinkModel::FreeSpace;
    scn.users[0].position = {0.5, 0.2, 0.8};
    ElementResponseTable dead;
    for (const auto state : {ElementState::Off, ElementState::On}) {
        for (const auto mode : {InteractionMode::Reflect, InteractionMode::Refract}) {
            dead.add_sample(state, mode, {0.0, 0.0, 0.0});
            dead.add_sample(state, mode, {20.0, 0.0, 0.0});
        }
    }
    dead.validate();
    scn.table = dead;
    SurfaceConfiguration cfg;
    cfg.states = {ElementState::On};
    const cplx h = effective_channel(scn, cfg, 0, 0, Direction::Downlink).value;
    const cplx d = direct_link(scn, 0, 0, Direction::Downlink).value;
    CHECK(h.real() == d.real());
    CHECK(h.imag() == d.imag());
}

TEST_CASE("single-path scenario: H equals the cascade product") {
    Scenario scn = small_scenario(); // blocked direct, M = 1, refract user
    SurfaceConfiguration cfg;
    cfg.states = {ElementState::Off};
    const auto rep = check_channel_reciprocity(scn, cfg);
    CHECK(rep.pass);
    const cplx product =
        bs_to_element(scn, 0, 0, Direction::Downlink).value *
        element_gain(scn.element, scn.table, scn.composition, ElementState::Off,
                     InteractionMode::Refract,
                     angles_to(scn.grid, 0, scn.bs_antennas[0].position),
                     angles_to(scn.grid, 0, scn.users[0].position)) *
        element_to_user(scn, 0, 0, Direction::Downlink).value;
    CHECK(relative_error(rep.pairs[0].downlink, product) < 1e-12);
}

TEST_CASE("scenario validation rejects bad inputs") {
    Scenario scn = small_scenario();
    scn.users[0].position.z = 0.0;
    CHECK_THROWS_AS(scn.validate(), ConfigError);
    scn = small_scenario();
    scn.bs_antennas[0].gain = 0.0;
    CHECK_THROWS_AS(scn.validate(), ConfigError);
    scn = small_scenario();
    scn.frequency_hz = 0.0;
    CHECK_THROWS_AS(scn.validate(), ConfigError);
    scn = small_scenario();
    scn.users.clear();
    CHECK_THROWS_AS(scn.validate(), ConfigError);
}
