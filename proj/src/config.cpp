#include "homrot/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "homrot/errors.hpp"
#include "homrot/format.hpp"
#include "homrot/scenarios.hpp"

namespace homrot {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Value parsers throw std::invalid_argument; the caller adds the line number.
double parse_double(std::string_view v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <typename Int>
Int parse_integer(std::string_view v) {
    Int out{};
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos));
        out.push_back(parse_double(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string parse_string(std::string_view v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return std::string(v);
}

std::string format_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(xs[i]);
    }
    return out;
}

std::string_view to_string(DipSide s) { return s == DipSide::Negative ? "negative" : "positive"; }
DipSide parse_side(std::string_view v) {
    if (v == "negative") return DipSide::Negative;
    if (v == "positive") return DipSide::Positive;
    throw std::invalid_argument("expected negative or positive, got '" + std::string(v) + "'");
}

std::string_view to_string(Reduction r) {
    return r == Reduction::HalfDifference ? "half-difference" : "absolute-average";
}
Reduction parse_reduction(std::string_view v) {
    if (v == "half-difference") return Reduction::HalfDifference;
    if (v == "absolute-average") return Reduction::AbsoluteAverage;
    throw std::invalid_argument("expected half-difference or absolute-average, got '" +
                                std::string(v) + "'");
}

std::string_view to_string(AngleUnit a) { return a == AngleUnit::Degrees ? "deg" : "rad"; }
AngleUnit parse_angles(std::string_view v) {
    if (v == "deg") return AngleUnit::Degrees;
    if (v == "rad") return AngleUnit::Radians;
    throw std::invalid_argument("expected deg or rad, got '" + std::string(v) + "'");
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Member>
Field number(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_double(v); },
            [member](const ExperimentConfig& c) {
                return format_double(member(c));
            }};
}

template <typename Int, typename Member>
Field integer(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_integer<Int>(v); },
            [member](const ExperimentConfig& c) {
                return std::to_string(member(c));
            }};
}

template <typename Member>
Field boolean(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_bool(v); },
            [member](const ExperimentConfig& c) {
                return std::string(member(c) ? "true" : "false");
            }};
}

template <typename Member>
Field list(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_list(v); },
            [member](const ExperimentConfig& c) {
                return format_list(member(c));
            }};
}

template <typename Member, typename Parse>
Field enumeration(std::string section, std::string key, Member member, Parse parse) {
    return {std::move(section), std::move(key),
            [member, parse](ExperimentConfig& c, std::string_view v) { member(c) = parse(v); },
            [member](const ExperimentConfig& c) {
                return std::string(to_string(member(c)));
            }};
}

template <typename Member>
Field text(std::string section, std::string key, Member member) {
    return {std::move(section), std::move(key),
            [member](ExperimentConfig& c, std::string_view v) { member(c) = parse_string(v); },
            [member](const ExperimentConfig& c) {
                return "\"" + member(c) + "\"";
            }};
}

#define HOMROT_MEMBER(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = [] {
        std::vector<Field> f;
        f.push_back(text("experiment", "name", HOMROT_MEMBER(name)));
        f.push_back(integer<std::uint64_t>("experiment", "seed", HOMROT_MEMBER(seed)));
        f.push_back(enumeration("experiment", "convention", HOMROT_MEMBER(apparatus.convention),
                                [](std::string_view v) { return parse_convention(v); }));
        f.push_back(enumeration("experiment", "angle_unit", HOMROT_MEMBER(angles), parse_angles));
        f.push_back(text("experiment", "output_dir", HOMROT_MEMBER(output_dir)));

        f.push_back(number("geometry", "loop_diameter_m", HOMROT_MEMBER(apparatus.geometry.loop_diameter)));
        f.push_back(integer<int>("geometry", "turns", HOMROT_MEMBER(apparatus.geometry.turns)));
        f.push_back(number("geometry", "fiber_length_m", HOMROT_MEMBER(apparatus.geometry.fiber_length)));
        f.push_back(number("geometry", "phase_index", HOMROT_MEMBER(apparatus.geometry.phase_index)));
        f.push_back(number("geometry", "group_index", HOMROT_MEMBER(apparatus.geometry.group_index)));
        f.push_back(number("geometry", "free_space_path_m", HOMROT_MEMBER(apparatus.geometry.free_space_path)));

        f.push_back(number("source", "pair_rate_per_s", HOMROT_MEMBER(apparatus.source.pair_rate)));
        f.push_back(number("source", "transmission_a", HOMROT_MEMBER(apparatus.source.transmission_a)));
        f.push_back(number("source", "transmission_b", HOMROT_MEMBER(apparatus.source.transmission_b)));
        f.push_back(number("source", "center_wavelength_m", HOMROT_MEMBER(apparatus.source.center_wavelength)));
        f.push_back(number("source", "pump_wavelength_m", HOMROT_MEMBER(pump_wavelength)));
        f.push_back(number("source", "spectral_width_rad_per_s", HOMROT_MEMBER(apparatus.source.spectral_width)));
        f.push_back(number("source", "visibility", HOMROT_MEMBER(apparatus.source.visibility)));

        f.push_back(number("detector", "efficiency_a", HOMROT_MEMBER(apparatus.detector.efficiency_a)));
        f.push_back(number("detector", "efficiency_b", HOMROT_MEMBER(apparatus.detector.efficiency_b)));
        f.push_back(number("detector", "dark_rate_per_s", HOMROT_MEMBER(apparatus.detector.dark_rate)));
        f.push_back(number("detector", "coincidence_window_s", HOMROT_MEMBER(apparatus.detector.coincidence_window)));

        f.push_back(integer<int>("scan", "points", HOMROT_MEMBER(scan.points)));
        f.push_back(number("scan", "half_span_m", HOMROT_MEMBER(scan.half_span)));
        f.push_back(number("scan", "dwell_s", HOMROT_MEMBER(scan.dwell)));
        f.push_back(number("scan", "rotation_hz", HOMROT_MEMBER(scan.rotation)));

        f.push_back(list("rotation", "magnitudes_hz", HOMROT_MEMBER(rotation.magnitudes)));
        f.push_back(integer<int>("rotation", "runs_per_setting", HOMROT_MEMBER(rotation.runs_per_setting)));
        f.push_back(number("rotation", "dwell_s", HOMROT_MEMBER(rotation.dwell)));
        f.push_back(number("rotation", "even_coefficient_m_per_hz2", HOMROT_MEMBER(rotation.even_coefficient)));
        f.push_back(number("rotation", "drift_m_per_sqrt_s", HOMROT_MEMBER(rotation.drift)));
        f.push_back(enumeration("rotation", "steepest_side", HOMROT_MEMBER(rotation.steepest_side), parse_side));
        f.push_back(enumeration("rotation", "reduction", HOMROT_MEMBER(rotation.reduction), parse_reduction));
        f.push_back(boolean("rotation", "sagnac_enabled", HOMROT_MEMBER(rotation.sagnac_enabled)));
        f.push_back(boolean("rotation", "noiseless", HOMROT_MEMBER(rotation.noiseless)));

        f.push_back(number("classical", "wavelength_m", HOMROT_MEMBER(classical.wavelength)));
        f.push_back(number("classical", "phase_noise_rad", HOMROT_MEMBER(classical.phase_noise)));
        f.push_back(number("classical", "even_coefficient_rad_per_hz2", HOMROT_MEMBER(classical.even_coefficient)));
        f.push_back(list("classical", "magnitudes_hz", HOMROT_MEMBER(classical.magnitudes)));
        f.push_back(integer<int>("classical", "runs_per_setting", HOMROT_MEMBER(classical.runs_per_setting)));
        f.push_back(enumeration("classical", "reduction", HOMROT_MEMBER(classical.reduction), parse_reduction));
        f.push_back(boolean("classical", "noiseless", HOMROT_MEMBER(classical.noiseless)));

        f.push_back(number("satellite", "angular_momentum_kg_m2_per_s", HOMROT_MEMBER(satellite.angular_momentum)));
        f.push_back(number("satellite", "orbital_radius_m", HOMROT_MEMBER(satellite.orbital_radius)));
        f.push_back(number("satellite", "gravitational_constant_m3_per_kg_s2", HOMROT_MEMBER(satellite.gravitational_constant)));
        f.push_back(integer<int>("satellite", "revolutions", HOMROT_MEMBER(satellite.revolutions)));
        return f;
    }();
    return fields;
}

#undef HOMROT_MEMBER

}  // namespace

std::string_view to_string(RateConvention c) {
    return c == RateConvention::PaperF ? "paper-f" : "physical-hz";
}

RateConvention parse_convention(std::string_view text) {
    if (text == "paper-f") return RateConvention::PaperF;
    if (text == "physical-hz") return RateConvention::PhysicalHz;
    throw std::invalid_argument("expected paper-f or physical-hz, got '" + std::string(text) + "'");
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
    ExperimentConfig cfg = lab_preset();
    const auto& fields = schema();
    std::set<std::string> sections;
    for (const auto& f : fields) sections.insert(f.section);

    auto fail = [&](int line, const std::string& msg) -> ConfigError {
        std::ostringstream out;
        out << origin << ":" << line << ": " << msg;
        return ConfigError(out.str(), line);
    };

    std::string section;
    std::set<std::pair<std::string, std::string>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw fail(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!sections.count(section)) throw fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) throw fail(line_no, "key '" + key + "' outside of a section");
        const Field* field = nullptr;
        for (const auto& f : fields) {
            if (f.section == section && f.key == key) field = &f;
        }
        if (!field) throw fail(line_no, "unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert({section, key}).second) {
            throw fail(line_no, "duplicate key '" + key + "' in [" + section + "]");
        }
        try {
            field->set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw fail(line_no, key + ": " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(origin) + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string serialize_config(const ExperimentConfig& config) {
    std::string out;
    std::string section;
    for (const auto& f : schema()) {
        if (f.section != section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += f.key + " = " + f.get(config) + "\n";
    }
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    // Where the files go does not change what is in them.
    ExperimentConfig key = config;
    key.output_dir = ".";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(key)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace homrot
