#include "iosim/scenario_io.hpp"

#include "iosim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace iosim {

namespace {

std::string trim(std::string_view sv) {
    std::size_t b = 0;
    std::size_t e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double to_number(const std::string& value, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() &&
               std::isspace(static_cast<unsigned char>(value[pos]))) {
            ++pos;
        }
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + value + "'");
    }
}

std::size_t to_count(const std::string& value, const std::string& where) {
    const double v = to_number(value, where);
    if (v < 1.0 || v != std::floor(v)) {
        throw ConfigError(where + ": expected a positive integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(v);
}

Vec3 to_position(const std::string& value, const std::string& where) {
    std::istringstream in(value);
    Vec3 p;
    if (!(in >> p.x >> p.y >> p.z)) {
        throw ConfigError(where + ": position needs three numbers 'x y z'");
    }
    std::string rest;
    if (in >> rest) {
        throw ConfigError(where + ": trailing characters after position");
    }
    return p;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario(std::string_view text, const std::string& origin,
                        const std::optional<std::filesystem::path>& table_override) {
    Scenario scn;
    scn.element.gain = 1.0;
    scn.element.exponent_n = 1.0;

    bool area_set = false;
    bool table_loaded = false;
    std::string section;
    AntennaParams* current_endpoint = nullptr;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string stripped = trim(line);
        const std::size_t comment = stripped.find_first_of("#;");
        if (comment != std::string::npos) {
            stripped = trim(stripped.substr(0, comment));
        }
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError(where + ": unterminated section header");
            }
            section = lower(trim(stripped.substr(1, stripped.size() - 2)));
            current_endpoint = nullptr;
            if (section == "antenna") {
                scn.bs_antennas.emplace_back();
                current_endpoint = &scn.bs_antennas.back();
            } else if (section == "user") {
                scn.users.emplace_back();
                current_endpoint = &scn.users.back();
            } else if (section != "scenario" && section != "ios" &&
                       section != "element" && section != "table") {
                throw ConfigError(where + ": unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = lower(trim(stripped.substr(0, eq)));
        const std::string value = trim(stripped.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(where + ": key '" + key + "' outside any section");
        }

        if (section == "scenario") {
            if (key == "frequency_hz") {
                scn.frequency_hz = to_number(value, where);
            } else if (key == "direct_link") {
                const std::string v = lower(value);
                if (v == "blocked") {
                    scn.direct_link = DirectLinkModel::Blocked;
                } else if (v == "free_space" || v == "freespace") {
                    scn.direct_link = DirectLinkModel::FreeSpace;
                } else {
                    throw ConfigError(where + ": direct_link must be 'blocked' or "
                                      "'free_space'");
                }
            } else if (key == "composition") {
                const std::string v = lower(value);
                if (v == "offset-product" || v == "offset_product") {
                    scn.composition = GammaComposition::OffsetProduct;
                } else if (v == "average") {
                    scn.composition = GammaComposition::Average;
                } else {
                    throw ConfigError(where + ": composition must be "
                                      "'offset-product' or 'average'");
                }
            } else {
                throw ConfigError(where + ": unknown [scenario] key '" + key + "'");
            }
        } else if (section == "ios") {
            if (key == "rows") {
                scn.grid.rows = to_count(value, where);
            } else if (key == "cols") {
                scn.grid.cols = to_count(value, where);
            } else if (key == "dx") {
                scn.grid.dx = to_number(value, where);
            } else if (key == "dy") {
                scn.grid.dy = to_number(value, where);
            } else {
                throw ConfigError(where + ": unknown [ios] key '" + key + "'");
            }
        } else if (section == "element") {
            if (key == "gain") {
                scn.element.gain = to_number(value, where);
            } else if (key == "taper_exponent") {
                scn.element.exponent_n = to_number(value, where);
            } else if (key == "area") {
                scn.element.area_m2 = to_number(value, where);
                area_set = true;
            } else {
                throw ConfigError(where + ": unknown [element] key '" + key + "'");
            }
        } else if (section == "table") {
            if (key == "file") {
                std::filesystem::path p(value);
                if (p.is_relative() && origin != "<string>") {
                    p = std::filesystem::path(origin).parent_path() / p;
                }
                scn.table = ElementResponseTable::from_csv_file(p);
                table_loaded = true;
            } else {
                throw ConfigError(where + ": unknown [table] key '" + key + "'");
            }
        } else { // antenna or user
            if (current_endpoint == nullptr) {
                throw ConfigError(where + ": internal section state error");
            }
            if (key == "position") {
                current_endpoint->position = to_position(value, where);
            } else if (key == "gain") {
                current_endpoint->gain = to_number(value, where);
            } else if (key == "pattern_exponent") {
                current_endpoint->pattern_exponent = to_number(value, where);
            } else if (key == "label") {
                current_endpoint->label = value;
            } else {
                throw ConfigError(where + ": unknown [" + section + "] key '" + key +
                                  "'");
            }
        }
    }

    if (!(scn.frequency_hz > 0.0)) {
        throw ConfigError(origin + ": frequency_hz required");
    }
    if (!table_loaded) {
        if (table_override && !table_override->empty()) {
            scn.table = ElementResponseTable::from_csv_file(*table_override);
        } else {
            scn.table = ElementResponseTable::builtin_default();
        }
    }
    if (!area_set) {
        scn.element.area_m2 = scn.grid.element_area();
    }
    scn.validate();
    return scn;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open scenario file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::optional<std::filesystem::path> override_path;
    if (const char* env = std::getenv("IOS_TABLE_PATH"); env != nullptr && *env != '\0') {
        override_path = std::filesystem::path(env);
    }
    return parse_scenario(buf.str(), file.string(), override_path);
}

std::string write_scenario_cfg(const Scenario& scn, const std::string& table_file) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "frequency_hz = " << fmt(scn.frequency_hz) << "\n";
    out << "direct_link = "
        << (scn.direct_link == DirectLinkModel::Blocked ? "blocked" : "free_space")
        << "\n";
    out << "composition = "
        << (scn.composition == GammaComposition::OffsetProduct ? "offset-product"
                                                               : "average")
        << "\n\n";
    out << "[ios]\n";
    out << "rows = " << scn.grid.rows << "\n";
    out << "cols = " << scn.grid.cols << "\n";
    out << "dx = " << fmt(scn.grid.dx) << "\n";
    out << "dy = " << fmt(scn.grid.dy) << "\n\n";
    out << "[element]\n";
    out << "gain = " << fmt(scn.element.gain) << "\n";
    out << "taper_exponent = " << fmt(scn.element.exponent_n) << "\n";
    out << "area = " << fmt(scn.element.area_m2) << "\n";
    if (!table_file.empty()) {
        out << "\n[table]\nfile = " << table_file << "\n";
    }
    for (const auto& a : scn.bs_antennas) {
        out << "\n[antenna]\n";
        if (!a.label.empty()) out << "label = " << a.label << "\n";
        out << "position = " << fmt(a.position.x) << " " << fmt(a.position.y) << " "
            << fmt(a.position.z) << "\n";
        out << "gain = " << fmt(a.gain) << "\n";
        out << "pattern_exponent = " << fmt(a.pattern_exponent) << "\n";
    }
    for (const auto& u : scn.users) {
        out << "\n[user]\n";
        if (!u.label.empty()) out << "label = " << u.label << "\n";
        out << "position = " << fmt(u.position.x) << " " << fmt(u.position.y) << " "
            << fmt(u.position.z) << "\n";
        out << "gain = " << fmt(u.gain) << "\n";
        out << "pattern_exponent = " << fmt(u.pattern_exponent) << "\n";
    }
    return out.str();
}

std::string canonical_scenario_text(const Scenario& scn) {
    std::ostringstream out;
    out << write_scenario_cfg(scn);
    out << "\n[response-table]\n" << scn.table.to_csv();
    return out.str();
}

std::string scenario_hash(const Scenario& scn) {
    const std::string text = canonical_scenario_text(scn);
    std::uint64_t h = 1469598103934665603ull; // FNV offset basis
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull; // FNV prime
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) {
        return 0;
    }
    return static_cast<std::uint64_t>(uniform_unit(rng) * static_cast<double>(n)) % n;
}

namespace {

Vec3 random_position(std::mt19937_64& rng, const RandomScenarioParams& p,
                     std::optional<Side> force_side) {
    Vec3 pos;
    pos.x = uniform_in(rng, -p.box_half_extent, p.box_half_extent);
    pos.y = uniform_in(rng, -p.box_half_extent, p.box_half_extent);
    const double mag = uniform_in(rng, p.z_exclusion, p.box_half_extent);
    bool above = uniform_index(rng, 2) == 0;
    if (force_side) {
        above = *force_side == Side::Reflection;
    }
    pos.z = above ? mag : -mag;
    return pos;
}

AntennaParams random_endpoint(std::mt19937_64& rng, const RandomScenarioParams& p,
                              std::optional<Side> force_side) {
    AntennaParams a;
    a.position = random_position(rng, p, force_side);
    a.gain = uniform_in(rng, 0.5, 4.0);
    a.pattern_exponent = static_cast<double>(uniform_index(rng, 3)); // 0, 1, 2
    return a;
}

} // namespace

Scenario random_scenario(std::mt19937_64& rng, const RandomScenarioParams& params) {
    Scenario scn;
    scn.frequency_hz = uniform_in(rng, params.min_frequency_hz, params.max_frequency_hz);
    scn.grid.rows = 1 + uniform_index(rng, params.max_rows);
    scn.grid.cols = 1 + uniform_index(rng, params.max_cols);
    scn.grid.dx = uniform_in(rng, 0.008, 0.06);
    scn.grid.dy = uniform_in(rng, 0.008, 0.06);
    scn.element.gain = uniform_in(rng, 0.5, 4.0);
    scn.element.area_m2 = scn.grid.element_area();
    scn.element.exponent_n = static_cast<double>(uniform_index(rng, 4)); // 0..3
    scn.table = ElementResponseTable::builtin_default();
    scn.direct_link = uniform_index(rng, 2) == 0 ? DirectLinkModel::Blocked
                                                 : DirectLinkModel::FreeSpace;

    const std::size_t n_ant = 1 + uniform_index(rng, params.max_antennas);
    for (std::size_t i = 0; i < n_ant; ++i) {
        scn.bs_antennas.push_back(random_endpoint(rng, params, std::nullopt));
    }
    // Users cover both sides whenever there are at least two, so reflect
    // and refract cascades are both exercised.
    const std::size_t n_usr = 1 + uniform_index(rng, params.max_users);
    for (std::size_t i = 0; i < n_usr; ++i) {
        std::optional<Side> force;
        if (i == 0 && n_usr >= 2) force = Side::Reflection;
        if (i == 1) force = Side::Refraction;
        scn.users.push_back(random_endpoint(rng, params, force));
    }
    scn.validate();
    return scn;
}

SurfaceConfiguration random_configuration(std::mt19937_64& rng, std::size_t m_count) {
    SurfaceConfiguration cfg;
    cfg.states.reserve(m_count);
    for (std::size_t i = 0; i < m_count; ++i) {
        cfg.states.push_back(uniform_index(rng, 2) == 0 ? ElementState::Off
                                                        : ElementState::On);
    }
    return cfg;
}

} // namespace iosim
