#pragma once

// Line-oriented model files:
//
//   # comment
//   premium = 2
//   sigma2 = 1
//   jump_family = exponential_negative
//   jump_beta = 1
//   jump_alpha = 1
//
// Families: none, exponential_negative, exponential_positive (jump_beta,
// jump_alpha) and tempered_pareto_negative (tp_scale, tp_alpha, tp_power,
// tp_cutoff). A second component uses the same keys prefixed with `pos_`;
// its family defaults to exponential_positive.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "levyruin/format.hpp"
#include "levyruin/levy_model.hpp"

namespace levyruin {

struct ConfigDiagnostic {
    int line = 0;  ///< 0 when the problem is not tied to one line
    std::string key;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::vector<ConfigDiagnostic> diagnostics)
        : std::runtime_error(render(source, diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<ConfigDiagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string render(const std::string& source, const std::vector<ConfigDiagnostic>& ds) {
        std::string out = source + ": " + std::to_string(ds.size()) + " error(s)";
        for (const auto& d : ds) {
            out += "\n  " + source;
            if (d.line > 0) out += ":" + std::to_string(d.line);
            out += ": ";
            if (!d.key.empty()) out += "'" + d.key + "': ";
            out += d.message;
        }
        return out;
    }

    std::vector<ConfigDiagnostic> diagnostics_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct ConfigEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

class ConfigReader {
public:
    std::map<std::string, ConfigEntry> entries;
    std::vector<ConfigDiagnostic> errors;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    const ConfigEntry* find(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    /// Required number; `check` returns an error message or empty.
    template <class Check>
    double number(const std::string& key, Check check) {
        const auto* e = find(key);
        if (!e) {
            errors.push_back({0, key, "missing required key"});
            return 0.0;
        }
        const auto v = parse_double(e->value);
        if (!v || !std::isfinite(*v)) {
            errors.push_back({e->line, key, "expected a finite number, got '" + e->value + "'"});
            return 0.0;
        }
        if (auto msg = check(*v); !msg.empty()) errors.push_back({e->line, key, msg + " (got " + e->value + ")"});
        return *v;
    }

    double positive(const std::string& key) {
        return number(key, [](double v) { return v > 0.0 ? std::string() : std::string("must be > 0"); });
    }
};

inline constexpr std::string_view family_names[] = {"none", "exponential_negative", "exponential_positive",
                                                    "tempered_pareto_negative"};

inline bool known_family(std::string_view f) {
    for (auto n : family_names)
        if (n == f) return true;
    return false;
}

inline std::vector<std::string> family_keys(std::string_view family, const std::string& prefix) {
    if (family == "exponential_negative" || family == "exponential_positive")
        return {prefix + "jump_beta", prefix + "jump_alpha"};
    if (family == "tempered_pareto_negative")
        return {prefix + "tp_scale", prefix + "tp_alpha", prefix + "tp_power", prefix + "tp_cutoff"};
    return {};
}

inline std::vector<std::string> all_parameter_keys(const std::string& prefix) {
    return {prefix + "jump_beta", prefix + "jump_alpha", prefix + "tp_scale",
            prefix + "tp_alpha",  prefix + "tp_power",   prefix + "tp_cutoff"};
}

// Reads one component; nullopt for family none or after an error.
inline std::optional<JumpComponent> read_component(ConfigReader& r, const std::string& prefix,
                                                   const std::string& family) {
    for (const auto& key : all_parameter_keys(prefix)) {
        bool relevant = false;
        for (const auto& k : family_keys(family, prefix)) relevant = relevant || k == key;
        if (!relevant && r.has(key)) {
            auto* e = r.find(key);
            r.errors.push_back({e->line, key, "not a parameter of jump family '" + family + "'"});
        }
    }
    const std::size_t before = r.errors.size();
    std::optional<JumpComponent> out;
    if (family == "exponential_negative" || family == "exponential_positive") {
        const double beta = r.positive(prefix + "jump_beta");
        const double alpha = r.positive(prefix + "jump_alpha");
        if (family == "exponential_negative")
            out = ExponentialNegative{beta, alpha};
        else
            out = ExponentialPositive{beta, alpha};
    } else if (family == "tempered_pareto_negative") {
        const double scale = r.positive(prefix + "tp_scale");
        const double alpha = r.positive(prefix + "tp_alpha");
        const double power = r.number(prefix + "tp_power",
                                      [](double v) { return v >= 2.0 ? std::string() : std::string("must be >= 2"); });
        const double cutoff = r.number(
            prefix + "tp_cutoff", [](double v) { return v >= 1.0 ? std::string() : std::string("must be >= 1"); });
        out = TemperedParetoNegative{scale, alpha, power, cutoff};
    }
    if (r.errors.size() != before) return std::nullopt;
    return out;
}

inline std::string family_of(const JumpComponent& c) {
    return std::visit(overloaded{
                          [](const ExponentialNegative&) { return std::string("exponential_negative"); },
                          [](const ExponentialPositive&) { return std::string("exponential_positive"); },
                          [](const TemperedParetoNegative&) { return std::string("tempered_pareto_negative"); },
                      },
                      c);
}

inline void write_component(std::ostream& os, const JumpComponent& c, const std::string& prefix) {
    os << prefix << "jump_family = " << family_of(c) << '\n';
    std::visit(overloaded{
                   [&](const ExponentialNegative& e) {
                       os << prefix << "jump_beta = " << format_double(e.beta) << '\n';
                       os << prefix << "jump_alpha = " << format_double(e.alpha) << '\n';
                   },
                   [&](const ExponentialPositive& e) {
                       os << prefix << "jump_beta = " << format_double(e.beta) << '\n';
                       os << prefix << "jump_alpha = " << format_double(e.alpha) << '\n';
                   },
                   [&](const TemperedParetoNegative& tp) {
                       os << prefix << "tp_scale = " << format_double(tp.scale) << '\n';
                       os << prefix << "tp_alpha = " << format_double(tp.alpha) << '\n';
                       os << prefix << "tp_power = " << format_double(tp.power) << '\n';
                       os << prefix << "tp_cutoff = " << format_double(tp.cutoff) << '\n';
                   },
               },
               c);
}

}  // namespace detail

/// Parses model text. Every problem found is reported in one ConfigError;
/// the returned triplet has passed validate().
inline LevyTriplet parse_config_text(std::string_view text, const std::string& source = "<config>") {
    detail::ConfigReader r;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            r.errors.push_back({line_no, "", "expected 'key = value', got '" + std::string(line) + "'"});
            continue;
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) {
            r.errors.push_back({line_no, "", "empty key"});
            continue;
        }
        if (value.empty()) {
            r.errors.push_back({line_no, key, "empty value"});
            continue;
        }
        if (auto it = r.entries.find(key); it != r.entries.end()) {
            r.errors.push_back({line_no, key, "duplicate key (first set on line " + std::to_string(it->second.line) + ")"});
            continue;
        }
        r.entries[key] = {value, line_no, false};
    }

    LevyTriplet t;
    t.premium = r.number("premium", [](double) { return std::string(); });
    t.sigma2 = r.number("sigma2", [](double v) { return v >= 0.0 ? std::string() : std::string("must be >= 0"); });

    std::vector<JumpComponent> comps;
    const auto family_entry = [&](const std::string& key, const char* fallback) -> std::optional<std::string> {
        const auto* e = r.find(key);
        if (!e) {
            if (fallback) return std::string(fallback);
            r.errors.push_back({0, key, "missing required key"});
            return std::nullopt;
        }
        if (!detail::known_family(e->value)) {
            r.errors.push_back({e->line, key,
                                "unknown jump family '" + e->value +
                                    "' (expected none, exponential_negative, exponential_positive or "
                                    "tempered_pareto_negative)"});
            return std::nullopt;
        }
        return e->value;
    };
    if (const auto f = family_entry("jump_family", nullptr)) {
        if (auto c = detail::read_component(r, "", *f)) comps.push_back(*c);
    }
    bool any_pos = false;
    for (const auto& [key, entry] : r.entries) any_pos = any_pos || key.rfind("pos_", 0) == 0;
    if (any_pos) {
        if (const auto f = family_entry("pos_jump_family", "exponential_positive")) {
            if (auto c = detail::read_component(r, "pos_", *f)) comps.push_back(*c);
        }
    }
    for (const auto& [key, entry] : r.entries)
        if (!entry.used) r.errors.push_back({entry.line, key, "unknown key"});

    if (r.errors.empty()) {
        t.jumps = JumpMeasure(std::move(comps));
        const auto report = validate(t);
        for (const auto& c : report.checks)
            if (!c.passed) r.errors.push_back({0, c.name, c.detail});
    }
    if (!r.errors.empty()) {
        std::stable_sort(r.errors.begin(), r.errors.end(),
                         [](const ConfigDiagnostic& a, const ConfigDiagnostic& b) {
                             return (a.line == 0 ? 1 << 30 : a.line) < (b.line == 0 ? 1 << 30 : b.line);
                         });
        throw ConfigError(source, std::move(r.errors));
    }
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline LevyTriplet parse_config(const std::string& path) { return parse_config_text(read_file(path), path); }

/// Canonical model text; parse_config_text(to_config(t)) == t. At most two
/// jump components are representable.
inline std::string to_config(const LevyTriplet& t) {
    const auto comps = t.jumps.components();
    if (comps.size() > 2) throw std::invalid_argument("to_config: at most two jump components");
    std::ostringstream os;
    os << "premium = " << format_double(t.premium) << '\n';
    os << "sigma2 = " << format_double(t.sigma2) << '\n';
    if (comps.empty()) {
        os << "jump_family = none\n";
        return os.str();
    }
    detail::write_component(os, comps[0], "");
    if (comps.size() == 2) detail::write_component(os, comps[1], "pos_");
    return os.str();
}

}  // namespace levyruin
