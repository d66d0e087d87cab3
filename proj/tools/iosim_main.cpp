// iosim CLI: batch experiment workbench for omni-surface aided links.
//
// Exit codes: 0 success, 2 configuration error, 3 physics/domain error,
// 4 I/O error. Every failure prints one machine-parsable line on stderr:
//   error[<code>]: <message>

#include "iosim/experiments.hpp"

#include "iosim/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace {

using namespace iosim;

struct AngleFlags {
    double theta = 0.0;
    double phi = 0.0;
    std::string side = "reflect";
    bool theta_set = false;
};

Side parse_side(const std::string& name) {
    if (name == "reflect" || name == "reflection") return Side::Reflection;
    if (name == "refract" || name == "refraction") return Side::Refraction;
    throw ConfigError("unknown side '" + name + "' (use reflect or refract)");
}

InteractionMode parse_mode(const std::string& name) {
    if (name == "reflect" || name == "reflection") return InteractionMode::Reflect;
    if (name == "refract" || name == "refraction") return InteractionMode::Refract;
    throw ConfigError("unknown mode '" + name + "' (use reflect or refract)");
}

PhaseModel parse_model(const std::string& name) {
    if (name == "ideal") return PhaseModel::IdealPhase;
    if (name == "angle-aware" || name == "angleaware") return PhaseModel::AngleAware;
    throw ConfigError("unknown model '" + name + "' (use ideal or angle-aware)");
}

SideAngle to_side_angle(const AngleFlags& f) {
    return SideAngle{make_spherical_angle(f.theta, f.phi), parse_side(f.side)};
}

void add_incident_flags(CLI::App* cmd, AngleFlags& f, bool required) {
    auto* t = cmd->add_option("--incident-theta", f.theta,
                              "Incident elevation from the surface normal, degrees");
    if (required) t->required();
    cmd->add_option("--incident-phi", f.phi, "Incident azimuth, degrees");
    cmd->add_option("--incident-side", f.side, "Incident side: reflect|refract")
        ->check(CLI::IsMember({"reflect", "refract"}));
}

void add_target_flags(CLI::App* cmd, AngleFlags& f, bool required) {
    auto* t = cmd->add_option("--target-theta", f.theta,
                              "Steering target elevation, degrees");
    if (required) t->required();
    else t->each([&f](const std::string&) { f.theta_set = true; });
    cmd->add_option("--target-phi", f.phi, "Steering target azimuth, degrees");
    cmd->add_option("--target-side", f.side, "Target side: reflect|refract")
        ->check(CLI::IsMember({"reflect", "refract"}));
}

void add_grid_flags(CLI::App* cmd, double& step, bool& full) {
    cmd->add_option("--grid-step", step, "Sweep elevation step, degrees")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--full-sweep", full,
                  "Sweep the full azimuth circle instead of the 0/180 cut");
}

SweepGrid make_grid(double step, bool full) {
    if (full) return SweepGrid::full(step, step);
    SweepGrid g;
    g.theta_step = step;
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Omni-surface aided wireless link workbench"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string scenario;
    std::string out_dir;
    std::string config_file;
    std::string table_file;
    std::string direct_link_flag;
    std::string model_name = "angle-aware";
    std::string mode_name_flag = "refract";
    AngleFlags incident;
    AngleFlags target;
    double grid_step = 1.0;
    bool full_sweep = false;

    const auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        if (needs_scenario) {
            cmd->add_option("--scenario", scenario, "Scenario config file")
                ->required()
                ->check(CLI::ExistingFile);
            cmd->add_option("--table", table_file,
                            "Response table CSV overriding the scenario's table")
                ->check(CLI::ExistingFile);
            cmd->add_option("--direct-link", direct_link_flag,
                            "Override the scenario's direct link model")
                ->check(CLI::IsMember({"blocked", "free_space"}));
        }
        cmd->add_option("--out", out_dir, "Output directory for artifacts")->required();
    };

    auto* pattern = app.add_subcommand("pattern", "Far-field sweep for one configuration");
    add_common(pattern, true);
    add_incident_flags(pattern, incident, true);
    pattern->add_option("--mode", mode_name_flag, "reflect|refract")
        ->check(CLI::IsMember({"reflect", "refract"}));
    add_target_flags(pattern, target, false);
    pattern->add_option("--config", config_file,
                        "Surface configuration file ('0'/'1' states); default all-on")
        ->check(CLI::ExistingFile);
    pattern->add_option("--model", model_name, "Design model when steering: ideal|angle-aware");
    add_grid_flags(pattern, grid_step, full_sweep);

    auto* beamform = app.add_subcommand("beamform", "Design a 1-bit configuration");
    add_common(beamform, true);
    add_incident_flags(beamform, incident, true);
    add_target_flags(beamform, target, true);
    beamform->add_option("--model", model_name, "ideal|angle-aware");
    add_grid_flags(beamform, grid_step, full_sweep);

    std::size_t random_count = 0;
    auto* recip_channel =
        app.add_subcommand("recip-channel", "Downlink vs uplink channel equality");
    recip_channel->add_option("--scenario", scenario, "Scenario config file")
        ->check(CLI::ExistingFile);
    recip_channel->add_option("--out", out_dir, "Output directory")->required();
    recip_channel->add_option("--random", random_count,
                              "Run a campaign over this many seeded random scenarios");
    recip_channel->add_option("--seed", spec.seed, "Campaign / configuration seed");
    recip_channel->add_option("--config", config_file, "Surface configuration file")
        ->check(CLI::ExistingFile);
    recip_channel->add_option("--table", table_file,
                              "Response table CSV overriding the scenario's table")
        ->check(CLI::ExistingFile);
    recip_channel->add_option("--direct-link", direct_link_flag,
                              "Override the scenario's direct link model")
        ->check(CLI::IsMember({"blocked", "free_space"}));
    recip_channel->add_option("--tolerance", spec.tolerance,
                              "Relative equality tolerance");

    auto* recip_beam = app.add_subcommand("recip-beam", "Round-trip main-beam experiment");
    add_common(recip_beam, true);
    add_incident_flags(recip_beam, incident, true);
    recip_beam->add_option("--mode", mode_name_flag, "reflect|refract")
        ->check(CLI::IsMember({"reflect", "refract"}));
    recip_beam->add_option("--model", model_name, "ideal|angle-aware");
    add_target_flags(recip_beam, target, false);
    recip_beam->add_option("--config", config_file, "Fixed configuration file")
        ->check(CLI::ExistingFile);
    add_grid_flags(recip_beam, grid_step, full_sweep);

    auto* compare = app.add_subcommand("compare-models",
                                       "Ideal vs angle-aware design under true physics");
    add_common(compare, true);
    add_incident_flags(compare, incident, true);
    add_target_flags(compare, target, true);
    add_grid_flags(compare, grid_step, full_sweep);

    auto* s21 = app.add_subcommand("s21-campaign",
                                   "Two-port forward/reverse transmission sweep");
    add_common(s21, true);
    s21->add_option("--range", spec.range_m, "Port-2 range from the surface, meters")
        ->check(CLI::PositiveNumber);
    s21->add_option("--tolerance", spec.tolerance, "Relative equality tolerance");

    auto* gen = app.add_subcommand("gen-random", "Emit seeded random scenario files");
    add_common(gen, false);
    gen->add_option("--seed", spec.seed, "Generator seed")->required();
    gen->add_option("--count", spec.count, "Number of scenarios")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        app.exit(e);
        std::fprintf(stderr, "error[config]: %s\n", e.what());
        return 2;
    }

    try {
        spec.scenario_path = scenario;
        spec.out_dir = out_dir;
        spec.grid = make_grid(grid_step, full_sweep);
        spec.model = parse_model(model_name);
        spec.mode = parse_mode(mode_name_flag);
        if (!config_file.empty()) spec.config_path = config_file;
        if (!table_file.empty()) spec.table_path = table_file;
        if (!direct_link_flag.empty()) {
            spec.direct_link = direct_link_flag == "blocked"
                                   ? DirectLinkModel::Blocked
                                   : DirectLinkModel::FreeSpace;
        }

        if (pattern->parsed()) {
            spec.kind = ExperimentKind::Pattern;
            spec.incident = to_side_angle(incident);
            if (target.theta_set) spec.target = to_side_angle(target);
        } else if (beamform->parsed()) {
            spec.kind = ExperimentKind::Beamform;
            spec.incident = to_side_angle(incident);
            spec.target = to_side_angle(target);
        } else if (recip_channel->parsed()) {
            spec.kind = ExperimentKind::ChannelReciprocity;
            spec.count = random_count;
            if (random_count == 0 && scenario.empty()) {
                throw ConfigError("recip-channel needs --scenario or --random N");
            }
        } else if (recip_beam->parsed()) {
            spec.kind = ExperimentKind::BeamReciprocity;
            spec.incident = to_side_angle(incident);
            if (target.theta_set) spec.target = to_side_angle(target);
        } else if (compare->parsed()) {
            spec.kind = ExperimentKind::ModelCompare;
            spec.incident = to_side_angle(incident);
            spec.target = to_side_angle(target);
        } else if (s21->parsed()) {
            spec.kind = ExperimentKind::S21Campaign;
        } else if (gen->parsed()) {
            spec.kind = ExperimentKind::GenRandom;
        }

        const auto artifacts = run_experiment(spec);
        for (const auto& p : artifacts) {
            std::printf("%s\n", p.string().c_str());
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error[config]: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error[domain]: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error[io]: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[domain]: %s\n", e.what());
        return 3;
    }
}
