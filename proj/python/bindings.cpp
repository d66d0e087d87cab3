#include "iosim/beamforming.hpp"
#include "iosim/channel.hpp"
#include "iosim/element_model.hpp"
#include "iosim/errors.hpp"
#include "iosim/experiments.hpp"
#include "iosim/geometry.hpp"
#include "iosim/scenario_io.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <random>
#include <sstream>

namespace py = pybind11;
using namespace iosim;

namespace {

std::string angle_repr(const SphericalAngle& a) {
    std::ostringstream out;
    out << "SphericalAngle(elevation_deg=" << a.elevation_deg
        << ", azimuth_deg=" << a.azimuth_deg << ")";
    return out.str();
}

} // namespace

PYBIND11_MODULE(_iosim, m) {
    m.doc() = "Omni-surface aided wireless link simulator: cascaded channels, "
              "1-bit surface beamforming, reciprocity checks";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::enum_<Side>(m, "Side")
        .value("REFLECTION", Side::Reflection)
        .value("REFRACTION", Side::Refraction);
    py::enum_<InteractionMode>(m, "InteractionMode")
        .value("REFLECT", InteractionMode::Reflect)
        .value("REFRACT", InteractionMode::Refract);
    py::enum_<ElementState>(m, "ElementState")
        .value("OFF", ElementState::Off)
        .value("ON", ElementState::On);
    py::enum_<Direction>(m, "Direction")
        .value("DOWNLINK", Direction::Downlink)
        .value("UPLINK", Direction::Uplink);
    py::enum_<PhaseModel>(m, "PhaseModel")
        .value("IDEAL_PHASE", PhaseModel::IdealPhase)
        .value("ANGLE_AWARE", PhaseModel::AngleAware);
    py::enum_<DirectLinkModel>(m, "DirectLinkModel")
        .value("BLOCKED", DirectLinkModel::Blocked)
        .value("FREE_SPACE", DirectLinkModel::FreeSpace);
    py::enum_<GammaComposition>(m, "GammaComposition")
        .value("OFFSET_PRODUCT", GammaComposition::OffsetProduct)
        .value("AVERAGE", GammaComposition::Average);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"),
             py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("norm", &Vec3::norm)
        .def("__repr__", [](const Vec3& v) {
            std::ostringstream out;
            out << "Vec3(" << v.x << ", " << v.y << ", " << v.z << ")";
            return out.str();
        });

    py::class_<SphericalAngle>(m, "SphericalAngle")
        .def(py::init([](double theta, double phi) {
                 return make_spherical_angle(theta, phi);
             }),
             py::arg("elevation_deg"), py::arg("azimuth_deg") = 0.0)
        .def_readonly("elevation_deg", &SphericalAngle::elevation_deg)
        .def_readonly("azimuth_deg", &SphericalAngle::azimuth_deg)
        .def("__repr__", &angle_repr);

    py::class_<SideAngle>(m, "SideAngle")
        .def(py::init([](double theta, double phi, Side side) {
                 return SideAngle{make_spherical_angle(theta, phi), side};
             }),
             py::arg("elevation_deg"), py::arg("azimuth_deg"), py::arg("side"))
        .def_readonly("angle", &SideAngle::angle)
        .def_readonly("side", &SideAngle::side)
        .def("__repr__", [](const SideAngle& a) {
            std::ostringstream out;
            out << "SideAngle(" << a.angle.elevation_deg << ", "
                << a.angle.azimuth_deg << ", " << side_name(a.side) << ")";
            return out.str();
        });

    py::class_<IosGrid>(m, "IosGrid")
        .def(py::init([](std::size_t rows, std::size_t cols, double dx, double dy) {
                 IosGrid g{rows, cols, dx, dy};
                 g.validate();
                 return g;
             }),
             py::arg("rows"), py::arg("cols"), py::arg("dx"), py::arg("dy"))
        .def_readonly("rows", &IosGrid::rows)
        .def_readonly("cols", &IosGrid::cols)
        .def_readonly("dx", &IosGrid::dx)
        .def_readonly("dy", &IosGrid::dy)
        .def_property_readonly("element_count", &IosGrid::element_count);

    m.def("element_position", &element_position, py::arg("grid"), py::arg("m"),
          "Center of element m (row-major from the (-x, +y) corner)");
    m.def("angles_to", &angles_to, py::arg("grid"), py::arg("m"), py::arg("point"),
          "Elevation/azimuth of a point as seen from element m, with side tag");
    m.def("distance", &distance, py::arg("a"), py::arg("b"));
    m.def("unit_direction", &unit_direction, py::arg("direction"));
    m.def("angular_distance_deg", &angular_distance_deg, py::arg("a"), py::arg("b"));

    py::class_<PhaseAmplitude>(m, "PhaseAmplitude")
        .def_readonly("psi_deg", &PhaseAmplitude::psi_deg)
        .def_readonly("beta", &PhaseAmplitude::beta);

    py::class_<ElementResponseTable>(m, "ElementResponseTable")
        .def_static("builtin_default", &ElementResponseTable::builtin_default)
        .def_static("from_csv", &ElementResponseTable::from_csv, py::arg("text"),
                    py::arg("origin") = "<string>")
        .def_static("from_csv_file", &ElementResponseTable::from_csv_file,
                    py::arg("file"))
        .def("interpolate", &ElementResponseTable::interpolate, py::arg("state"),
             py::arg("mode"), py::arg("theta_deg"))
        .def("to_csv", &ElementResponseTable::to_csv);

    m.def("lookup_gamma", &lookup_gamma, py::arg("table"), py::arg("state"),
          py::arg("mode"), py::arg("theta_inc_deg"),
          "Sampled coefficient beta * exp(j psi) at one incidence elevation");
    m.def("compose_gamma", &compose_gamma, py::arg("table"), py::arg("rule"),
          py::arg("state"), py::arg("mode"), py::arg("theta_inc_deg"),
          py::arg("theta_dep_deg"));

    py::class_<ElementPatternParams>(m, "ElementPatternParams")
        .def(py::init([](double gain, double area_m2, double exponent_n) {
                 ElementPatternParams p{gain, area_m2, exponent_n};
                 p.validate();
                 return p;
             }),
             py::arg("gain"), py::arg("area_m2"), py::arg("exponent_n"))
        .def_readonly("gain", &ElementPatternParams::gain)
        .def_readonly("area_m2", &ElementPatternParams::area_m2)
        .def_readonly("exponent_n", &ElementPatternParams::exponent_n);

    m.def("radiation_taper", &radiation_taper, py::arg("params"), py::arg("theta_deg"));
    m.def("antenna_pattern", &antenna_pattern, py::arg("gain"), py::arg("exponent"),
          py::arg("theta_deg"));
    m.def(
        "element_gain",
        [](const ElementPatternParams& p, const ElementResponseTable& t,
           GammaComposition rule, ElementState s, InteractionMode mo,
           const SideAngle& inc, const SideAngle& dep) {
            return element_gain(p, t, rule, s, mo, inc, dep);
        },
        py::arg("params"), py::arg("table"), py::arg("rule"), py::arg("state"),
        py::arg("mode"), py::arg("inc"), py::arg("dep"));

    py::class_<SurfaceConfiguration>(m, "SurfaceConfiguration")
        .def(py::init([](const std::string& bits) {
                 return SurfaceConfiguration::from_bits(bits);
             }),
             py::arg("bits"))
        .def_static("from_bits", &SurfaceConfiguration::from_bits, py::arg("bits"))
        .def("to_bits", &SurfaceConfiguration::to_bits)
        .def("__len__", &SurfaceConfiguration::size)
        .def("__repr__", [](const SurfaceConfiguration& c) {
            return "SurfaceConfiguration('" + c.to_bits() + "')";
        });

    py::class_<AntennaParams>(m, "AntennaParams")
        .def_readonly("position", &AntennaParams::position)
        .def_readonly("gain", &AntennaParams::gain)
        .def_readonly("pattern_exponent", &AntennaParams::pattern_exponent)
        .def_readonly("label", &AntennaParams::label);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("frequency_hz", &Scenario::frequency_hz)
        .def_readonly("grid", &Scenario::grid)
        .def_readonly("bs_antennas", &Scenario::bs_antennas)
        .def_readonly("users", &Scenario::users)
        .def_readonly("element", &Scenario::element)
        .def_readwrite("direct_link", &Scenario::direct_link)
        .def_readwrite("composition", &Scenario::composition)
        .def_property_readonly("wavelength", &Scenario::wavelength)
        .def_property_readonly("element_count", &Scenario::element_count)
        .def("hash", &scenario_hash)
        .def("to_cfg", [](const Scenario& s) { return write_scenario_cfg(s); })
        .def("__repr__", [](const Scenario& s) {
            std::ostringstream out;
            out << "Scenario(" << s.bs_antennas.size() << " antennas, "
                << s.users.size() << " users, " << s.element_count()
                << " elements, " << s.frequency_hz / 1e9 << " GHz)";
            return out.str();
        });

    m.def(
        "parse_scenario",
        [](const std::string& text) { return parse_scenario(text); },
        py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("file"));
    m.def(
        "random_scenario",
        [](std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return random_scenario(rng);
        },
        py::arg("seed"));
    m.def(
        "random_configuration",
        [](std::uint64_t seed, std::size_t count) {
            std::mt19937_64 rng(seed);
            return random_configuration(rng, count);
        },
        py::arg("seed"), py::arg("element_count"));

    m.def(
        "bs_to_element",
        [](const Scenario& s, std::size_t k, std::size_t mm, Direction d) {
            return bs_to_element(s, k, mm, d).value;
        },
        py::arg("scenario"), py::arg("k"), py::arg("m"), py::arg("direction"));
    m.def(
        "element_to_user",
        [](const Scenario& s, std::size_t mm, std::size_t u, Direction d) {
            return element_to_user(s, mm, u, d).value;
        },
        py::arg("scenario"), py::arg("m"), py::arg("u"), py::arg("direction"));
    m.def(
        "direct_link",
        [](const Scenario& s, std::size_t k, std::size_t u, Direction d) {
            return direct_link(s, k, u, d).value;
        },
        py::arg("scenario"), py::arg("k"), py::arg("u"), py::arg("direction"));
    m.def(
        "effective_channel",
        [](const Scenario& s, const SurfaceConfiguration& c, std::size_t k,
           std::size_t u, Direction d) { return effective_channel(s, c, k, u, d).value; },
        py::arg("scenario"), py::arg("config"), py::arg("k"), py::arg("u"),
        py::arg("direction"));

    py::class_<CascadeReciprocityReport>(m, "CascadeReciprocityReport")
        .def_readonly("downlink_product", &CascadeReciprocityReport::downlink_product)
        .def_readonly("uplink_product", &CascadeReciprocityReport::uplink_product)
        .def_readonly("max_rel_err", &CascadeReciprocityReport::max_rel_err);
    m.def("check_cascade_reciprocity", &check_cascade_reciprocity, py::arg("scenario"),
          py::arg("k"), py::arg("m"), py::arg("u"));

    py::class_<PairReciprocity>(m, "PairReciprocity")
        .def_readonly("k", &PairReciprocity::k)
        .def_readonly("u", &PairReciprocity::u)
        .def_readonly("downlink", &PairReciprocity::downlink)
        .def_readonly("uplink", &PairReciprocity::uplink)
        .def_readonly("rel_err", &PairReciprocity::rel_err);
    py::class_<ChannelReciprocityReport>(m, "ChannelReciprocityReport")
        .def_readonly("pairs", &ChannelReciprocityReport::pairs)
        .def_readonly("max_rel_err", &ChannelReciprocityReport::max_rel_err)
        .def_readonly("tolerance", &ChannelReciprocityReport::tolerance)
        .def_readonly("passed", &ChannelReciprocityReport::pass);
    m.def(
        "check_channel_reciprocity",
        [](const Scenario& s, const SurfaceConfiguration& c, double tol) {
            return check_channel_reciprocity(s, c, tol);
        },
        py::arg("scenario"), py::arg("config"), py::arg("tolerance") = 1e-10);

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init([](double theta_start, double theta_stop, double theta_step,
                         std::vector<double> phi_values) {
                 SweepGrid g{theta_start, theta_stop, theta_step,
                             std::move(phi_values)};
                 g.validate();
                 return g;
             }),
             py::arg("theta_start") = 0.0, py::arg("theta_stop") = 89.0,
             py::arg("theta_step") = 1.0,
             py::arg("phi_values") = std::vector<double>{0.0, 180.0})
        .def_static("full", &SweepGrid::full, py::arg("theta_step") = 2.0,
                    py::arg("phi_step") = 2.0)
        .def_readonly("theta_step", &SweepGrid::theta_step)
        .def("thetas", &SweepGrid::thetas)
        .def_readonly("phi_values", &SweepGrid::phi_values);

    py::class_<PatternSample>(m, "PatternSample")
        .def_readonly("theta_deg", &PatternSample::theta_deg)
        .def_readonly("phi_deg", &PatternSample::phi_deg)
        .def_readonly("field", &PatternSample::field)
        .def_readonly("power_db", &PatternSample::power_db);
    py::class_<PatternSweep>(m, "PatternSweep")
        .def_readonly("mode", &PatternSweep::mode)
        .def_readonly("incident", &PatternSweep::incident)
        .def_readonly("sweep_side", &PatternSweep::sweep_side)
        .def_readonly("samples", &PatternSweep::samples);
    m.def("far_field_at", &far_field_at, py::arg("scenario"), py::arg("config"),
          py::arg("incident"), py::arg("mode"), py::arg("departure"));
    m.def("far_field_pattern", &far_field_pattern, py::arg("scenario"),
          py::arg("config"), py::arg("incident"), py::arg("mode"), py::arg("grid"));

    py::class_<BeamReport>(m, "BeamReport")
        .def_readonly("main_beam", &BeamReport::main_beam)
        .def_readonly("peak_power_db", &BeamReport::peak_power_db)
        .def_readonly("pointing_error_deg", &BeamReport::pointing_error_deg)
        .def_readonly("gain_loss_db", &BeamReport::gain_loss_db);
    m.def("main_beam", &main_beam, py::arg("sweep"));

    m.def("configure_surface", &configure_surface, py::arg("scenario"),
          py::arg("incident"), py::arg("target"), py::arg("model"));
    m.def("design_field_at", &design_field_at, py::arg("scenario"), py::arg("config"),
          py::arg("incident"), py::arg("target"), py::arg("model"));

    py::class_<BeamReciprocityReport>(m, "BeamReciprocityReport")
        .def_readonly("incident0", &BeamReciprocityReport::incident0)
        .def_readonly("steer_target", &BeamReciprocityReport::steer_target)
        .def_readonly("config", &BeamReciprocityReport::config)
        .def_readonly("beam1", &BeamReciprocityReport::beam1)
        .def_readonly("beam2", &BeamReciprocityReport::beam2)
        .def_readonly("deviation_deg", &BeamReciprocityReport::deviation_deg)
        .def_readonly("reciprocal", &BeamReciprocityReport::reciprocal);
    m.def(
        "beam_reciprocity_experiment",
        [](const Scenario& s, const SideAngle& inc0, InteractionMode mode,
           const SweepGrid& grid, std::optional<SideAngle> target,
           std::optional<SurfaceConfiguration> config, PhaseModel model) {
            BeamReciprocityOptions opts;
            opts.target = std::move(target);
            opts.config = std::move(config);
            opts.model = model;
            return beam_reciprocity_experiment(s, inc0, mode, grid, opts);
        },
        py::arg("scenario"), py::arg("incident0"), py::arg("mode"), py::arg("grid"),
        py::arg("target") = std::nullopt, py::arg("config") = std::nullopt,
        py::arg("model") = PhaseModel::AngleAware);

    py::class_<ModelComparisonEntry>(m, "ModelComparisonEntry")
        .def_readonly("model", &ModelComparisonEntry::model)
        .def_readonly("config", &ModelComparisonEntry::config)
        .def_readonly("beam", &ModelComparisonEntry::beam)
        .def_readonly("pointing_error_deg", &ModelComparisonEntry::pointing_error_deg)
        .def_readonly("power_at_target_db", &ModelComparisonEntry::power_at_target_db);
    py::class_<ModelComparisonReport>(m, "ModelComparisonReport")
        .def_readonly("incident", &ModelComparisonReport::incident)
        .def_readonly("target", &ModelComparisonReport::target)
        .def_readonly("ideal", &ModelComparisonReport::ideal)
        .def_readonly("angle_aware", &ModelComparisonReport::angle_aware)
        .def_readonly("gain_loss_db", &ModelComparisonReport::gain_loss_db);
    m.def("compare_beamforming_models", &compare_beamforming_models,
          py::arg("scenario"), py::arg("incident"), py::arg("target"),
          py::arg("grid"));

    m.def("scenario_hash", &scenario_hash, py::arg("scenario"));

    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;
#ifdef IOSIM_VERSION
#define IOSIM_STR2(x) #x
#define IOSIM_STR(x) IOSIM_STR2(x)
    m.attr("__version__") = IOSIM_STR(IOSIM_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
