#include "iosim/experiments.hpp"

#include "iosim/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace iosim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

std::string fmt_angle(double v) { return fmt("%.3f", v); }
std::string fmt_db(double v) { return fmt("%.6f", v); }
std::string fmt_field(double v) { return fmt("%.9e", v); }

double phase_deg(std::complex<double> v) { return rad2deg(std::arg(v)); }

/// Tracks files created by one experiment run so a failure can undo them.
class ArtifactSink {
  public:
    explicit ArtifactSink(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw IoError("cannot create output directory " + dir_.string() + ": " +
                          ec.message());
        }
    }

    fs::path path_for(const std::string& name) const { return dir_ / name; }

    void write_text(const std::string& name, const std::string& content) {
        const fs::path p = path_for(name);
        const bool existed = fs::exists(p);
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out || !(out << content)) {
            throw IoError("cannot write artifact " + p.string());
        }
        out.close();
        record(p, existed);
    }

    void append_jsonl(const std::string& name, const json& obj) {
        const fs::path p = path_for(name);
        const bool existed = fs::exists(p);
        std::ofstream out(p, std::ios::binary | std::ios::app);
        if (!out || !(out << obj.dump() << "\n")) {
            throw IoError("cannot append to experiment log " + p.string());
        }
        out.close();
        record(p, existed);
    }

    void record_external(const fs::path& p, bool existed) { record(p, existed); }

    void discard_created() {
        for (const auto& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    std::vector<fs::path> artifacts() const { return all_; }

  private:
    void record(const fs::path& p, bool existed) {
        all_.push_back(p);
        if (!existed) created_.push_back(p);
    }

    fs::path dir_;
    std::vector<fs::path> all_;
    std::vector<fs::path> created_;
};

/// Scenario load with flag-level overrides applied on top of the file.
Scenario scenario_for(const ExperimentSpec& spec) {
    Scenario scn = load_scenario(spec.scenario_path);
    if (spec.table_path) {
        scn.table = ElementResponseTable::from_csv_file(*spec.table_path);
    }
    if (spec.direct_link) {
        scn.direct_link = *spec.direct_link;
    }
    scn.validate();
    return scn;
}

SurfaceConfiguration load_configuration(const fs::path& file, std::size_t m_count) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open configuration file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    SurfaceConfiguration cfg = SurfaceConfiguration::from_bits(buf.str());
    if (cfg.size() != m_count) {
        throw ConfigError("configuration file " + file.string() + " holds " +
                          std::to_string(cfg.size()) + " states, expected " +
                          std::to_string(m_count));
    }
    return cfg;
}

json angle_json(const SideAngle& a) {
    return json{{"theta_deg", a.angle.elevation_deg},
                {"phi_deg", a.angle.azimuth_deg},
                {"side", side_name(a.side)}};
}

std::string reciprocity_csv(const ChannelReciprocityReport& report) {
    std::ostringstream out;
    out << "k,u,direction,re,im,abs,phase_deg\n";
    for (const auto& pr : report.pairs) {
        for (const auto dir : {Direction::Downlink, Direction::Uplink}) {
            const std::complex<double> v =
                dir == Direction::Downlink ? pr.downlink : pr.uplink;
            out << pr.k << "," << pr.u << "," << direction_name(dir) << ","
                << fmt_field(v.real()) << "," << fmt_field(v.imag()) << ","
                << fmt_field(std::abs(v)) << "," << fmt_db(phase_deg(v)) << "\n";
        }
    }
    out << "# max_rel_err=" << fmt_field(report.max_rel_err)
        << " tolerance=" << fmt_field(report.tolerance)
        << " verdict=" << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string verdict_text(bool pass, double max_rel_err) {
    return std::string(pass ? "PASS" : "FAIL") + " " + fmt_field(max_rel_err) + "\n";
}

SideAngle require_incident(const ExperimentSpec& spec) {
    if (!spec.incident) {
        throw ConfigError("this experiment requires an incident direction");
    }
    return *spec.incident;
}

SideAngle require_target(const ExperimentSpec& spec) {
    if (!spec.target) {
        throw ConfigError("this experiment requires a target direction");
    }
    return *spec.target;
}

std::vector<fs::path> run_pattern(const ExperimentSpec& spec, ArtifactSink& sink) {
    const Scenario scn = scenario_for(spec);
    const SideAngle incident = require_incident(spec);
    SurfaceConfiguration cfg;
    std::string config_source;
    if (spec.config_path) {
        cfg = load_configuration(*spec.config_path, scn.element_count());
        config_source = spec.config_path->string();
    } else if (spec.target) {
        cfg = configure_surface(scn, incident, *spec.target, spec.model);
        config_source = std::string("steered/") + phase_model_name(spec.model);
    } else {
        cfg.states.assign(scn.element_count(), ElementState::On);
        config_source = "uniform-on";
    }
    const PatternSweep sweep = far_field_pattern(scn, cfg, incident, spec.mode, spec.grid);

    const fs::path csv = sink.path_for("pattern.csv");
    const bool existed = fs::exists(csv);
    emit_polar_csv(sweep, csv,
                   {{"scenario", scenario_hash(scn)}, {"config", config_source}});
    sink.record_external(csv, existed);
    sink.write_text("config.txt", cfg.to_bits() + "\n");

    const BeamReport beam = main_beam(sweep);
    json rec{{"experiment", "pattern"},
             {"scenario", scenario_hash(scn)},
             {"incident", angle_json(incident)},
             {"mode", mode_name(spec.mode)},
             {"config", config_source},
             {"peak_power_db", beam.peak_power_db},
             {"main_beam_theta_deg", beam.main_beam.elevation_deg},
             {"main_beam_phi_deg", beam.main_beam.azimuth_deg}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_beamform(const ExperimentSpec& spec, ArtifactSink& sink) {
    const Scenario scn = scenario_for(spec);
    const SideAngle incident = require_incident(spec);
    const SideAngle target = require_target(spec);
    const InteractionMode mode = incident.side == target.side
                                     ? InteractionMode::Reflect
                                     : InteractionMode::Refract;
    const SurfaceConfiguration cfg = configure_surface(scn, incident, target, spec.model);
    const PatternSweep sweep = far_field_pattern(scn, cfg, incident, mode, spec.grid);
    BeamReport beam = main_beam(sweep);
    beam.pointing_error_deg =
        angular_distance_deg(SideAngle{beam.main_beam, target.side}, target);

    sink.write_text("config.txt", cfg.to_bits() + "\n");
    sink.write_text("beam_report.txt", beam_report_text(beam));
    const fs::path csv = sink.path_for("pattern.csv");
    const bool existed = fs::exists(csv);
    emit_polar_csv(sweep, csv,
                   {{"scenario", scenario_hash(scn)},
                    {"model", phase_model_name(spec.model)},
                    {"target_theta_deg", fmt_angle(target.angle.elevation_deg)},
                    {"target_phi_deg", fmt_angle(target.angle.azimuth_deg)},
                    {"target_side", side_name(target.side)}});
    sink.record_external(csv, existed);

    json rec{{"experiment", "beamform"},
             {"scenario", scenario_hash(scn)},
             {"incident", angle_json(incident)},
             {"target", angle_json(target)},
             {"model", phase_model_name(spec.model)},
             {"config", cfg.to_bits()},
             {"peak_power_db", beam.peak_power_db},
             {"main_beam_theta_deg", beam.main_beam.elevation_deg},
             {"main_beam_phi_deg", beam.main_beam.azimuth_deg},
             {"pointing_error_deg", *beam.pointing_error_deg}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_channel_reciprocity(const ExperimentSpec& spec,
                                              ArtifactSink& sink) {
    if (spec.count > 0) {
        // Property campaign over seeded random scenarios.
        std::mt19937_64 rng(spec.seed);
        std::ostringstream csv;
        csv << "index,scenario,antennas,users,elements,direct_link,max_rel_err,verdict\n";
        double worst = 0.0;
        bool all_pass = true;
        for (std::size_t i = 0; i < spec.count; ++i) {
            const Scenario scn = random_scenario(rng);
            const SurfaceConfiguration cfg =
                random_configuration(rng, scn.element_count());
            const ChannelReciprocityReport rep =
                check_channel_reciprocity(scn, cfg, spec.tolerance);
            worst = std::max(worst, rep.max_rel_err);
            all_pass = all_pass && rep.pass;
            csv << i << "," << scenario_hash(scn) << "," << scn.bs_antennas.size()
                << "," << scn.users.size() << "," << scn.element_count() << ","
                << (scn.direct_link == DirectLinkModel::Blocked ? "blocked"
                                                                : "free_space")
                << "," << fmt_field(rep.max_rel_err) << ","
                << (rep.pass ? "PASS" : "FAIL") << "\n";
        }
        csv << "# scenarios=" << spec.count << " seed=" << spec.seed
            << " max_rel_err=" << fmt_field(worst)
            << " verdict=" << (all_pass ? "PASS" : "FAIL") << "\n";
        sink.write_text("campaign.csv", csv.str());
        sink.write_text("verdict.txt", verdict_text(all_pass, worst));
        json rec{{"experiment", "recip-channel"},
                 {"scenarios", spec.count},
                 {"seed", spec.seed},
                 {"max_rel_err", worst},
                 {"verdict", all_pass ? "PASS" : "FAIL"}};
        sink.append_jsonl("experiments.jsonl", rec);
        return sink.artifacts();
    }

    const Scenario scn = scenario_for(spec);
    SurfaceConfiguration cfg;
    if (spec.config_path) {
        cfg = load_configuration(*spec.config_path, scn.element_count());
    } else {
        std::mt19937_64 rng(spec.seed);
        cfg = random_configuration(rng, scn.element_count());
    }
    const ChannelReciprocityReport rep =
        check_channel_reciprocity(scn, cfg, spec.tolerance);
    sink.write_text("reciprocity.csv", reciprocity_csv(rep));
    sink.write_text("verdict.txt", verdict_text(rep.pass, rep.max_rel_err));
    json rec{{"experiment", "recip-channel"},
             {"scenario", scenario_hash(scn)},
             {"config", cfg.to_bits()},
             {"max_rel_err", rep.max_rel_err},
             {"verdict", rep.pass ? "PASS" : "FAIL"}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_beam_reciprocity(const ExperimentSpec& spec,
                                           ArtifactSink& sink) {
    const Scenario scn = scenario_for(spec);
    const SideAngle incident = require_incident(spec);
    BeamReciprocityOptions opts;
    opts.model = spec.model;
    opts.target = spec.target;
    if (spec.config_path) {
        opts.config = load_configuration(*spec.config_path, scn.element_count());
    }
    const BeamReciprocityReport rep =
        beam_reciprocity_experiment(scn, incident, spec.mode, spec.grid, opts);

    std::ostringstream txt;
    txt << "theta0_deg = " << fmt_angle(rep.incident0.angle.elevation_deg) << "\n"
        << "phi0_deg = " << fmt_angle(rep.incident0.angle.azimuth_deg) << "\n"
        << "theta1_deg = " << fmt_angle(rep.beam1.main_beam.elevation_deg) << "\n"
        << "phi1_deg = " << fmt_angle(rep.beam1.main_beam.azimuth_deg) << "\n"
        << "theta2_deg = " << fmt_angle(rep.beam2.main_beam.elevation_deg) << "\n"
        << "phi2_deg = " << fmt_angle(rep.beam2.main_beam.azimuth_deg) << "\n";
    if (rep.steer_target) {
        txt << "steer_target_theta_deg = "
            << fmt_angle(rep.steer_target->angle.elevation_deg) << "\n"
            << "steer_target_phi_deg = "
            << fmt_angle(rep.steer_target->angle.azimuth_deg) << "\n";
    }
    txt << "deviation_deg = " << fmt_db(rep.deviation_deg) << "\n"
        << "grid_step_deg = " << fmt_angle(spec.grid.theta_step) << "\n"
        << "verdict = " << (rep.reciprocal ? "reciprocal" : "non-reciprocal") << "\n"
        << "config = " << rep.config.to_bits() << "\n";
    sink.write_text("beam_reciprocity.txt", txt.str());

    json rec{{"experiment", "recip-beam"},
             {"scenario", scenario_hash(scn)},
             {"mode", mode_name(spec.mode)},
             {"model", phase_model_name(spec.model)},
             {"theta0_deg", rep.incident0.angle.elevation_deg},
             {"theta1_deg", rep.beam1.main_beam.elevation_deg},
             {"theta2_deg", rep.beam2.main_beam.elevation_deg},
             {"phi0_deg", rep.incident0.angle.azimuth_deg},
             {"phi1_deg", rep.beam1.main_beam.azimuth_deg},
             {"phi2_deg", rep.beam2.main_beam.azimuth_deg},
             {"deviation_deg", rep.deviation_deg},
             {"verdict", rep.reciprocal ? "reciprocal" : "non-reciprocal"}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_model_compare(const ExperimentSpec& spec, ArtifactSink& sink) {
    const Scenario scn = scenario_for(spec);
    const SideAngle incident = require_incident(spec);
    const SideAngle target = require_target(spec);
    const ModelComparisonReport rep =
        compare_beamforming_models(scn, incident, target, spec.grid);

    std::ostringstream csv;
    csv << "model,beam_theta_deg,beam_phi_deg,peak_power_db,pointing_error_deg,"
           "power_at_target_db\n";
    for (const auto* e : {&rep.ideal, &rep.angle_aware}) {
        csv << phase_model_name(e->model) << ","
            << fmt_angle(e->beam.main_beam.elevation_deg) << ","
            << fmt_angle(e->beam.main_beam.azimuth_deg) << ","
            << fmt_db(e->beam.peak_power_db) << "," << fmt_db(e->pointing_error_deg)
            << "," << fmt_db(e->power_at_target_db) << "\n";
    }
    csv << "# gain_loss_db=" << fmt_db(rep.gain_loss_db) << "\n";
    sink.write_text("model_compare.csv", csv.str());

    json rec{{"experiment", "compare-models"},
             {"scenario", scenario_hash(scn)},
             {"incident", angle_json(incident)},
             {"target", angle_json(target)},
             {"ideal_pointing_error_deg", rep.ideal.pointing_error_deg},
             {"angle_aware_pointing_error_deg", rep.angle_aware.pointing_error_deg},
             {"gain_loss_db", rep.gain_loss_db}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_s21_campaign(const ExperimentSpec& spec, ArtifactSink& sink) {
    const Scenario base = scenario_for(spec);
    const SideAngle port1 = direction_of(base.bs_antennas.front().position);

    struct Placement {
        Side side;
        double elevation_deg;
    };
    const Placement placements[] = {{Side::Refraction, 30.0},
                                    {Side::Refraction, 45.0},
                                    {Side::Reflection, 30.0},
                                    {Side::Reflection, 45.0}};

    const auto placement_position = [&](const Placement& p) {
        const SideAngle dir{SphericalAngle{p.elevation_deg, 0.0}, p.side};
        return unit_direction(dir) * spec.range_m;
    };

    // Configuration c maximizes the field toward placement c.
    std::vector<SurfaceConfiguration> configs;
    for (const auto& p : placements) {
        const SideAngle tgt{SphericalAngle{p.elevation_deg, 0.0}, p.side};
        configs.push_back(configure_surface(base, port1, tgt, PhaseModel::AngleAware));
    }

    std::ostringstream csv;
    csv << "config,ant2_side,ant2_elev_deg,s21_abs,s21_phase_deg,s12_abs,"
           "s12_phase_deg,rel_err,equal\n";
    double worst = 0.0;
    bool all_equal = true;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        for (const auto& p : placements) {
            Scenario scn = base;
            scn.users[0].position = placement_position(p);
            scn.validate();
            // Port 1 -> port 2 is the uplink analogue (S21), the reverse
            // sweep is the downlink analogue (S12).
            const std::complex<double> s21 =
                effective_channel(scn, configs[c], 0, 0, Direction::Uplink).value;
            const std::complex<double> s12 =
                effective_channel(scn, configs[c], 0, 0, Direction::Downlink).value;
            const double rel = relative_error(s21, s12);
            const bool equal = rel <= spec.tolerance;
            worst = std::max(worst, rel);
            all_equal = all_equal && equal;
            csv << (c + 1) << "," << side_name(p.side) << ","
                << fmt_angle(p.elevation_deg) << "," << fmt_field(std::abs(s21)) << ","
                << fmt_db(phase_deg(s21)) << "," << fmt_field(std::abs(s12)) << ","
                << fmt_db(phase_deg(s12)) << "," << fmt_field(rel) << ","
                << (equal ? "true" : "false") << "\n";
        }
    }
    csv << "# range_m=" << fmt_angle(spec.range_m)
        << " tolerance=" << fmt_field(spec.tolerance)
        << " max_rel_err=" << fmt_field(worst)
        << " verdict=" << (all_equal ? "PASS" : "FAIL") << "\n";
    sink.write_text("s21_campaign.csv", csv.str());
    sink.write_text("verdict.txt", verdict_text(all_equal, worst));

    json rec{{"experiment", "s21-campaign"},
             {"scenario", scenario_hash(base)},
             {"range_m", spec.range_m},
             {"max_rel_err", worst},
             {"verdict", all_equal ? "PASS" : "FAIL"}};
    sink.append_jsonl("experiments.jsonl", rec);
    return sink.artifacts();
}

std::vector<fs::path> run_gen_random(const ExperimentSpec& spec, ArtifactSink& sink) {
    const std::size_t count = spec.count > 0 ? spec.count : 1;
    std::mt19937_64 rng(spec.seed);
    std::ostringstream manifest;
    manifest << "index,file,scenario\n";
    for (std::size_t i = 0; i < count; ++i) {
        const Scenario scn = random_scenario(rng);
        char name[64];
        std::snprintf(name, sizeof(name), "scenario_%03zu.cfg", i);
        std::ostringstream body;
        body << "# generated scenario " << i << " (seed " << spec.seed << ")\n"
             << write_scenario_cfg(scn);
        sink.write_text(name, body.str());
        manifest << i << "," << name << "," << scenario_hash(scn) << "\n";
    }
    manifest << "# seed=" << spec.seed << " count=" << count << "\n";
    sink.write_text("manifest.csv", manifest.str());
    return sink.artifacts();
}

} // namespace

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Pattern: return "pattern";
    case ExperimentKind::Beamform: return "beamform";
    case ExperimentKind::ChannelReciprocity: return "recip-channel";
    case ExperimentKind::BeamReciprocity: return "recip-beam";
    case ExperimentKind::ModelCompare: return "compare-models";
    case ExperimentKind::S21Campaign: return "s21-campaign";
    case ExperimentKind::GenRandom: return "gen-random";
    }
    return "unknown";
}

void emit_polar_csv(const PatternSweep& sweep, const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& metadata) {
    double peak_db = -1e300;
    for (const auto& s : sweep.samples) {
        peak_db = std::max(peak_db, s.power_db);
    }
    std::ostringstream out;
    for (const auto& [key, value] : metadata) {
        out << "# " << key << "=" << value << "\n";
    }
    out << "# incident_theta_deg=" << fmt_angle(sweep.incident.angle.elevation_deg)
        << " incident_phi_deg=" << fmt_angle(sweep.incident.angle.azimuth_deg)
        << " incident_side=" << side_name(sweep.incident.side)
        << " mode=" << mode_name(sweep.mode) << " sweep_side="
        << side_name(sweep.sweep_side) << " peak_db=" << fmt_db(peak_db) << "\n";
    out << "theta_deg,phi_deg,power_db,re,im\n";
    for (const auto& s : sweep.samples) {
        out << fmt_angle(s.theta_deg) << "," << fmt_angle(s.phi_deg) << ","
            << fmt_db(s.power_db - peak_db) << "," << fmt_field(s.field.real()) << ","
            << fmt_field(s.field.imag()) << "\n";
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << out.str())) {
        throw IoError("cannot write sweep CSV " + path.string());
    }
}

std::string beam_report_text(const BeamReport& report) {
    std::ostringstream out;
    out << "main_beam_theta_deg = " << fmt_angle(report.main_beam.elevation_deg) << "\n"
        << "main_beam_phi_deg = " << fmt_angle(report.main_beam.azimuth_deg) << "\n"
        << "peak_power_db = " << fmt_db(report.peak_power_db) << "\n";
    if (report.pointing_error_deg) {
        out << "pointing_error_deg = " << fmt_db(*report.pointing_error_deg) << "\n";
    }
    if (report.gain_loss_db) {
        out << "gain_loss_db = " << fmt_db(*report.gain_loss_db) << "\n";
    }
    return out.str();
}

std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec) {
    if (spec.out_dir.empty()) {
        throw ConfigError("experiment needs an output directory");
    }
    ArtifactSink sink(spec.out_dir);
    try {
        switch (spec.kind) {
        case ExperimentKind::Pattern: return run_pattern(spec, sink);
        case ExperimentKind::Beamform: return run_beamform(spec, sink);
        case ExperimentKind::ChannelReciprocity:
            return run_channel_reciprocity(spec, sink);
        case ExperimentKind::BeamReciprocity: return run_beam_reciprocity(spec, sink);
        case ExperimentKind::ModelCompare: return run_model_compare(spec, sink);
        case ExperimentKind::S21Campaign: return run_s21_campaign(spec, sink);
        case ExperimentKind::GenRandom: return run_gen_random(spec, sink);
        }
        throw ConfigError("unknown experiment kind");
    } catch (...) {
        sink.discard_created();
        throw;
    }
}

} // namespace iosim
