#pragma once

#include "iosim/beamforming.hpp"
#include "iosim/scenario_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace iosim {

enum class ExperimentKind {
    Pattern,            // far-field sweep CSV for one configuration
    Beamform,           // design a configuration and report its beam
    ChannelReciprocity, // downlink vs uplink effective channels
    BeamReciprocity,    // round-trip main-beam experiment
    ModelCompare,       // ideal vs angle-aware design under true physics
    S21Campaign,        // two-port forward/reverse transmission analogue
    GenRandom,          // emit random scenario files
};

const char* experiment_kind_name(ExperimentKind k);

/// One batch experiment. The CLI fills this from flags; defaults follow
/// the field initializers.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Pattern;
    std::filesystem::path scenario_path; // unused by GenRandom
    std::filesystem::path out_dir;
    SweepGrid grid;
    PhaseModel model = PhaseModel::AngleAware;
    std::optional<SideAngle> incident;
    std::optional<SideAngle> target;
    InteractionMode mode = InteractionMode::Reflect;
    std::optional<std::filesystem::path> config_path; // '0'/'1' state file
    std::optional<std::filesystem::path> table_path;  // overrides the scenario table
    std::optional<DirectLinkModel> direct_link;       // overrides the scenario value
    std::uint64_t seed = 1;
    std::size_t count = 0;    // random-scenario count where applicable
    double tolerance = 1e-10; // reciprocity equality threshold
    double range_m = 1.0;     // S21 campaign antenna range
};

/// Runs one experiment and writes its artifacts under spec.out_dir.
/// Returns the artifact paths. On failure every file created by this run
/// is removed before the error propagates.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

/// Writes a sweep as CSV with the power column normalized to a 0 dB
/// peak. Metadata pairs land in leading '#' comment lines together with
/// the sweep's incident direction and mode.
void emit_polar_csv(const PatternSweep& sweep, const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& metadata = {});

/// Flat `key = value` rendering of a beam report.
std::string beam_report_text(const BeamReport& report);

} // namespace iosim
