#pragma once

#include "iosim/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace iosim {

/// Parses the sectioned key-value scenario format:
///
///   [scenario]           frequency_hz, direct_link, composition
///   [ios]                rows, cols, dx, dy
///   [element]            gain, taper_exponent, area (optional)
///   [table]              file = <response table csv> (optional)
///   [antenna] / [user]   position = x y z, gain, pattern_exponent,
///                        label (optional); blocks repeat
///
/// Unknown keys and malformed lines fail with `origin:line:` anchored
/// messages. When no table is named, `table_override` (normally the
/// IOS_TABLE_PATH environment variable) and then the built-in default
/// table apply, in that order. Relative table paths resolve against the
/// scenario file's directory.
Scenario parse_scenario(std::string_view text, const std::string& origin = "<string>",
                        const std::optional<std::filesystem::path>& table_override = {});

/// Reads the file and applies the IOS_TABLE_PATH override automatically.
Scenario load_scenario(const std::filesystem::path& file);

/// Serializes a scenario back to the config format (full precision).
/// Scenarios carrying a non-default response table get it inlined into a
/// sibling file by the caller; this writer only records the file name
/// passed in `table_file`.
std::string write_scenario_cfg(const Scenario& scn,
                               const std::string& table_file = "");

/// Canonical full-precision dump used for hashing and determinism checks.
std::string canonical_scenario_text(const Scenario& scn);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string scenario_hash(const Scenario& scn);

/// Bounds for the seeded random-scenario generator. Positions are drawn
/// uniformly from the box with |z| < z_exclusion re-drawn, so endpoints
/// never sit near the surface plane.
struct RandomScenarioParams {
    double box_half_extent = 2.0;
    double z_exclusion = 0.05;
    std::size_t max_antennas = 4;
    std::size_t max_users = 4;
    std::size_t max_rows = 8;
    std::size_t max_cols = 8;
    double min_frequency_hz = 1.0e9;
    double max_frequency_hz = 6.0e9;
};

/// Deterministic across platforms: all draws derive from mt19937_64
/// output words, never from distribution objects.
Scenario random_scenario(std::mt19937_64& rng,
                         const RandomScenarioParams& params = {});

/// Random surface configuration of the scenario's element count.
SurfaceConfiguration random_configuration(std::mt19937_64& rng, std::size_t m_count);

/// Uniform double in [0, 1) from one generator word.
double uniform_unit(std::mt19937_64& rng);

/// Uniform double in [lo, hi).
double uniform_in(std::mt19937_64& rng, double lo, double hi);

/// Uniform integer in [0, n).
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

} // namespace iosim
