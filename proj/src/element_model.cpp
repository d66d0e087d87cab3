#include "iosim/element_model.hpp"

#include "iosim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
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

ElementState parse_state(const std::string& token, const std::string& where) {
    const std::string t = lower(trim(token));
    if (t == "on") return ElementState::On;
    if (t == "off") return ElementState::Off;
    throw ConfigError(where + ": unknown element state '" + token +
                      "' (expected ON or OFF)");
}

InteractionMode parse_mode(const std::string& token, const std::string& where) {
    const std::string t = lower(trim(token));
    if (t == "reflect" || t == "reflection") return InteractionMode::Reflect;
    if (t == "refract" || t == "refraction") return InteractionMode::Refract;
    throw ConfigError(where + ": unknown interaction mode '" + token +
                      "' (expected reflect or refract)");
}

double parse_number(const std::string& token, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(trim(token), &pos);
        if (pos != trim(token).size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + token + "'");
    }
}

} // namespace

const char* state_name(ElementState s) { return s == ElementState::On ? "ON" : "OFF"; }

const char* mode_name(InteractionMode m) {
    return m == InteractionMode::Reflect ? "reflect" : "refract";
}

std::size_t ElementResponseTable::slot(ElementState state, InteractionMode mode) {
    return (state == ElementState::On ? 1u : 0u) * 2u +
           (mode == InteractionMode::Refract ? 1u : 0u);
}

ElementResponseTable ElementResponseTable::builtin_default() {
    ElementResponseTable t;
    const auto fill = [&](ElementState s, InteractionMode m, double p0, double p10,
                          double p20) {
        t.add_sample(s, m, {0.0, p0, 1.0});
        t.add_sample(s, m, {10.0, p10, 1.0});
        t.add_sample(s, m, {20.0, p20, 1.0});
    };
    fill(ElementState::On, InteractionMode::Reflect, -146.0, -135.0, -105.0);
    fill(ElementState::Off, InteractionMode::Reflect, -20.0, -12.0, 11.0);
    fill(ElementState::On, InteractionMode::Refract, 122.0, 133.0, 162.0);
    fill(ElementState::Off, InteractionMode::Refract, -62.0, -53.0, -32.0);
    t.validate();
    return t;
}

void ElementResponseTable::add_sample(ElementState state, InteractionMode mode,
                                      ResponseSample sample) {
    entries_[slot(state, mode)].push_back(sample);
}

void ElementResponseTable::validate() const {
    bool any = false;
    for (const auto state : {ElementState::Off, ElementState::On}) {
        for (const auto mode : {InteractionMode::Reflect, InteractionMode::Refract}) {
            const auto& list = entries_[slot(state, mode)];
            if (list.empty()) continue;
            any = true;
            const std::string where = std::string("response table (") +
                                      state_name(state) + ", " + mode_name(mode) + ")";
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto& s = list[i];
                if (s.theta_deg < 0.0) {
                    throw ConfigError(where + ": negative elevation " +
                                      std::to_string(s.theta_deg) +
                                      "; samples are indexed by |theta|");
                }
                if (!(s.beta >= 0.0 && s.beta <= 1.0)) {
                    throw ConfigError(where + ": amplitude beta must lie in [0, 1]");
                }
                if (!std::isfinite(s.psi_deg)) {
                    throw ConfigError(where + ": non-finite phase");
                }
                if (i > 0 && !(list[i - 1].theta_deg < s.theta_deg)) {
                    throw ConfigError(where + ": elevations must be strictly " +
                                      "ascending (duplicate or unsorted row at theta=" +
                                      std::to_string(s.theta_deg) + ")");
                }
            }
            if (list.front().theta_deg != 0.0 || list.back().theta_deg < 20.0) {
                throw ConfigError(where + ": samples must cover [0, 20] degrees");
            }
        }
    }
    if (!any) {
        throw ConfigError("response table is empty");
    }
}

bool ElementResponseTable::has(ElementState state, InteractionMode mode) const {
    return !entries_[slot(state, mode)].empty();
}

const std::vector<ResponseSample>&
ElementResponseTable::samples(ElementState state, InteractionMode mode) const {
    const auto& list = entries_[slot(state, mode)];
    if (list.empty()) {
        throw ConfigError(std::string("response table has no entries for (") +
                          state_name(state) + ", " + mode_name(mode) + ")");
    }
    return list;
}

PhaseAmplitude ElementResponseTable::interpolate(ElementState state,
                                                 InteractionMode mode,
                                                 double theta_deg) const {
    const double t = std::fabs(theta_deg);
    if (t >= 90.0) {
        throw DomainError("response lookup requires |theta| < 90 degrees, got " +
                          std::to_string(theta_deg));
    }
    const auto& list = samples(state, mode);
    if (t <= list.front().theta_deg) {
        return {list.front().psi_deg, list.front().beta};
    }
    if (t >= list.back().theta_deg) {
        return {list.back().psi_deg, list.back().beta};
    }
    const auto hi = std::lower_bound(
        list.begin(), list.end(), t,
        [](const ResponseSample& s, double v) { return s.theta_deg < v; });
    if (hi->theta_deg == t) {
        return {hi->psi_deg, hi->beta}; // exact sample, no arithmetic
    }
    const auto lo = hi - 1;
    const double w = (t - lo->theta_deg) / (hi->theta_deg - lo->theta_deg);
    return {lo->psi_deg + w * (hi->psi_deg - lo->psi_deg),
            lo->beta + w * (hi->beta - lo->beta)};
}

ElementResponseTable ElementResponseTable::from_csv(std::string_view text,
                                                    const std::string& origin) {
    ElementResponseTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::vector<std::string> fields;
        std::stringstream ls(stripped);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!header_seen) {
            if (lower(stripped) != "state,mode,theta_deg,psi_deg,beta") {
                throw ConfigError(where + ": expected header "
                                  "'state,mode,theta_deg,psi_deg,beta'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 5) {
            throw ConfigError(where + ": expected 5 comma-separated fields, got " +
                              std::to_string(fields.size()));
        }
        const ElementState state = parse_state(fields[0], where);
        const InteractionMode mode = parse_mode(fields[1], where);
        ResponseSample s;
        s.theta_deg = parse_number(fields[2], where);
        s.psi_deg = parse_number(fields[3], where);
        s.beta = parse_number(fields[4], where);
        table.add_sample(state, mode, s);
    }
    if (!header_seen) {
        throw ConfigError(origin + ": response table is empty");
    }
    table.validate();
    return table;
}

ElementResponseTable
ElementResponseTable::from_csv_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw IoError("cannot open response table file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str(), file.string());
}

std::string ElementResponseTable::to_csv() const {
    std::ostringstream out;
    out << "state,mode,theta_deg,psi_deg,beta\n";
    char buf[128];
    for (const auto state : {ElementState::On, ElementState::Off}) {
        for (const auto mode : {InteractionMode::Reflect, InteractionMode::Refract}) {
            if (!has(state, mode)) continue;
            for (const auto& s : samples(state, mode)) {
                std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g\n",
                              state_name(state), mode_name(mode), s.theta_deg,
                              s.psi_deg, s.beta);
                out << buf;
            }
        }
    }
    return out.str();
}

bool ElementResponseTable::operator==(const ElementResponseTable& other) const {
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = entries_[i];
        const auto& b = other.entries_[i];
        if (a.size() != b.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j].theta_deg != b[j].theta_deg || a[j].psi_deg != b[j].psi_deg ||
                a[j].beta != b[j].beta) {
                return false;
            }
        }
    }
    return true;
}

std::complex<double> lookup_gamma(const ElementResponseTable& table,
                                  ElementState state, InteractionMode mode,
                                  double theta_inc_deg) {
    const PhaseAmplitude pa = table.interpolate(state, mode, theta_inc_deg);
    return std::polar(pa.beta, deg2rad(pa.psi_deg));
}

PhaseAmplitude compose_response(const ElementResponseTable& table,
                                GammaComposition rule, ElementState state,
                                InteractionMode mode, double theta_inc_deg,
                                double theta_dep_deg) {
    const PhaseAmplitude i = table.interpolate(state, mode, theta_inc_deg);
    const PhaseAmplitude r = table.interpolate(state, mode, theta_dep_deg);
    if (rule == GammaComposition::Average) {
        return {(i.psi_deg + r.psi_deg) / 2.0, std::sqrt(i.beta * r.beta)};
    }
    const PhaseAmplitude z = table.interpolate(state, mode, 0.0);
    // A dead normal-incidence sample (beta == 0) makes the ratio
    // meaningless; treat the element as fully absorbing instead of
    // dividing by zero.
    const double beta = z.beta > 0.0 ? i.beta * r.beta / z.beta : 0.0;
    return {i.psi_deg + r.psi_deg - z.psi_deg, beta};
}

std::complex<double> compose_gamma(const ElementResponseTable& table,
                                   GammaComposition rule, ElementState state,
                                   InteractionMode mode, double theta_inc_deg,
                                   double theta_dep_deg) {
    const PhaseAmplitude pa =
        compose_response(table, rule, state, mode, theta_inc_deg, theta_dep_deg);
    return std::polar(pa.beta, deg2rad(pa.psi_deg));
}

void ElementPatternParams::validate() const {
    if (!(gain > 0.0)) throw ConfigError("element gain must be positive");
    if (!(area_m2 > 0.0)) throw ConfigError("element area must be positive");
    if (!(exponent_n >= 0.0)) throw ConfigError("taper exponent must be >= 0");
}

double radiation_taper(const ElementPatternParams& params, double theta_deg) {
    if (std::fabs(theta_deg) > 90.0) {
        throw DomainError("taper requires |theta| <= 90 degrees, got " +
                          std::to_string(theta_deg));
    }
    return cos_power(theta_deg, params.exponent_n);
}

namespace {

void check_mode_sides(InteractionMode mode, const SideAngle& inc,
                      const SideAngle& dep) {
    const bool same = inc.side == dep.side;
    if (mode == InteractionMode::Reflect && !same) {
        throw DomainError("reflect mode requires both rays on the same side");
    }
    if (mode == InteractionMode::Refract && same) {
        throw DomainError("refract mode requires rays on opposite sides");
    }
}

} // namespace

std::complex<double> element_gain(const ElementPatternParams& params,
                                  std::complex<double> gamma, const SideAngle& inc,
                                  const SideAngle& dep) {
    const double fi = radiation_taper(params, inc.angle.elevation_deg);
    const double fr = radiation_taper(params, dep.angle.elevation_deg);
    return std::sqrt(params.gain * fi * fr * params.area_m2) * gamma;
}

std::complex<double> element_gain(const ElementPatternParams& params,
                                  const ElementResponseTable& table,
                                  GammaComposition rule, ElementState state,
                                  InteractionMode mode, const SideAngle& inc,
                                  const SideAngle& dep) {
    check_mode_sides(mode, inc, dep);
    const std::complex<double> gamma =
        compose_gamma(table, rule, state, mode, inc.angle.elevation_deg,
                      dep.angle.elevation_deg);
    return element_gain(params, gamma, inc, dep);
}

std::string SurfaceConfiguration::to_bits() const {
    std::string out;
    out.reserve(states.size());
    for (const auto s : states) {
        out.push_back(s == ElementState::On ? '1' : '0');
    }
    return out;
}

SurfaceConfiguration SurfaceConfiguration::from_bits(std::string_view bits) {
    SurfaceConfiguration cfg;
    for (const char c : bits) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '0') {
            cfg.states.push_back(ElementState::Off);
        } else if (c == '1') {
            cfg.states.push_back(ElementState::On);
        } else {
            throw ConfigError(std::string("invalid configuration bit '") + c +
                              "' (expected 0 or 1)");
        }
    }
    return cfg;
}

} // namespace iosim
