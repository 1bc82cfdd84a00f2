#include "axionsplit/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "axionsplit/embedded_presets.hpp"
#include "axionsplit/errors.hpp"

namespace axionsplit::scenario {

namespace pt = boost::property_tree;

sensitivity::GrowthFit AnalysisSection::fit() const {
    if (fit_kind == sensitivity::FitKind::linear) {
        return sensitivity::GrowthFit::linear(fit_slope, fit_intercept);
    }
    return sensitivity::GrowthFit::power(fit_coefficient, fit_exponent);
}

profile::HistogramSpec AnalysisSection::histogram_spec() const {
    return profile::HistogramSpec::uniform(hist_lo_m, hist_hi_m, bin_width_m);
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& text) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

struct Binding {
    std::string key;  // section.name
    std::function<void(Scenario&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
};

template <typename Member>
Binding number(std::string key, Member member) {
    return {key,
            [member, key](Scenario& s, const std::string& v) { member(s) = parse_double(key, v); },
            [member](const Scenario& s) {
                return format_double(member(const_cast<Scenario&>(s)));
            }};
}

template <typename Member>
Binding flag(std::string key, Member member) {
    return {key, [member, key](Scenario& s, const std::string& v) { member(s) = parse_bool(key, v); },
            [member](const Scenario& s) {
                return std::string(member(const_cast<Scenario&>(s)) ? "true" : "false");
            }};
}

#define AXS_FIELD(expr) [](Scenario& s) -> auto& { return expr; }

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        std::vector<Binding> b;
        b.push_back({"scenario.name", [](Scenario& s, const std::string& v) { s.name = v; },
                     [](const Scenario& s) { return s.name; }});

        b.push_back({"cavity.kind",
                     [](Scenario& s, const std::string& v) {
                         s.cavity.kind = cavity::cavity_kind_from_string(v);
                     },
                     [](const Scenario& s) { return std::string(cavity::to_string(s.cavity.kind)); }});
        b.push_back(number("cavity.length_m", AXS_FIELD(s.cavity.cavity_length)));
        b.push_back(number("cavity.gap_m", AXS_FIELD(s.cavity.gap)));
        b.push_back(number("cavity.detector_distance_m", AXS_FIELD(s.cavity.detector_distance)));
        b.push_back(flag("cavity.detector_lens", AXS_FIELD(s.cavity.detector_lens)));
        b.push_back(number("cavity.lens_offset_m", AXS_FIELD(s.cavity.lens_offset)));
        b.push_back(number("cavity.detector_lens_focal_m", AXS_FIELD(s.cavity.detector_lens_focal)));
        b.push_back({"cavity.mirror1",
                     [](Scenario& s, const std::string& v) { s.cavity.mirror1 = cavity::mirror_from_string(v); },
                     [](const Scenario& s) { return cavity::to_string(s.cavity.mirror1); }});
        b.push_back({"cavity.mirror2",
                     [](Scenario& s, const std::string& v) { s.cavity.mirror2 = cavity::mirror_from_string(v); },
                     [](const Scenario& s) { return cavity::to_string(s.cavity.mirror2); }});
        b.push_back({"cavity.n_traversals",
                     [](Scenario& s, const std::string& v) {
                         const auto n = parse_int("cavity.n_traversals", v);
                         if (n < 1 || n > 1'000'000) throw ConfigError("cavity.n_traversals out of range");
                         s.cavity.n_traversals = static_cast<int>(n);
                     },
                     [](const Scenario& s) { return std::to_string(s.cavity.n_traversals); }});
        b.push_back(number("cavity.theta_split_rad", AXS_FIELD(s.cavity.theta_split)));
        b.push_back({"cavity.extraction_mirror",
                     [](Scenario& s, const std::string& v) {
                         s.cavity.extraction_mirror = cavity::extraction_mirror_from_string(v);
                     },
                     [](const Scenario& s) {
                         return std::string(cavity::to_string(s.cavity.extraction_mirror));
                     }});
        b.push_back(flag("cavity.split_on_backward", AXS_FIELD(s.cavity.split_on_backward)));
        b.push_back(number("cavity.coalesce_tol_position_m", AXS_FIELD(s.cavity.coalesce_tol_position)));
        b.push_back(number("cavity.coalesce_tol_angle_rad", AXS_FIELD(s.cavity.coalesce_tol_angle)));
        b.push_back(number("cavity.initial_position_m", AXS_FIELD(s.cavity.initial_ray.position)));
        b.push_back(number("cavity.initial_angle_rad", AXS_FIELD(s.cavity.initial_ray.angle)));
        b.push_back({"cavity.max_beams",
                     [](Scenario& s, const std::string& v) {
                         const auto n = parse_int("cavity.max_beams", v);
                         if (n < 2) throw ConfigError("cavity.max_beams must be >= 2");
                         s.cavity.max_beams = static_cast<std::size_t>(n);
                     },
                     [](const Scenario& s) { return std::to_string(s.cavity.max_beams); }});

        b.push_back(number("laser.wavelength_nm", AXS_FIELD(s.laser.wavelength_nm)));
        b.push_back(number("laser.power_w", AXS_FIELD(s.laser.power_w)));
        b.push_back(number("laser.amplitude_photons_per_s", AXS_FIELD(s.laser.amplitude_photons_per_s)));
        b.push_back(number("laser.waist_m", AXS_FIELD(s.laser.waist_m)));

        b.push_back(number("magnet.gradient_t_per_m", AXS_FIELD(s.magnet.gradient_t_per_m)));
        b.push_back(number("magnet.field_length_m", AXS_FIELD(s.magnet.field_length_m)));
        b.push_back(flag("magnet.modulated", AXS_FIELD(s.magnet.modulated)));

        b.push_back(number("axion.g_a_gev", AXS_FIELD(s.axion.g_a_gev)));
        b.push_back(number("axion.g_ref_gev", AXS_FIELD(s.axion.g_ref_gev)));
        b.push_back(number("axion.m_a_ev", AXS_FIELD(s.axion.m_a_ev)));
        b.push_back(number("axion.omega_ev", AXS_FIELD(s.axion.omega_ev)));
        b.push_back(number("axion.b_field_t", AXS_FIELD(s.axion.b_field_t)));

        b.push_back(number("analysis.hist_lo_m", AXS_FIELD(s.analysis.hist_lo_m)));
        b.push_back(number("analysis.hist_hi_m", AXS_FIELD(s.analysis.hist_hi_m)));
        b.push_back(number("analysis.bin_width_m", AXS_FIELD(s.analysis.bin_width_m)));
        b.push_back(number("analysis.central_pixel_half_width_m",
                           AXS_FIELD(s.analysis.central_pixel_half_width_m)));
        b.push_back(number("analysis.sideband_pixel_center_m",
                           AXS_FIELD(s.analysis.sideband_pixel_center_m)));
        b.push_back(number("analysis.integration_time_s", AXS_FIELD(s.analysis.integration_time_s)));
        b.push_back({"analysis.fit_kind",
                     [](Scenario& s, const std::string& v) {
                         s.analysis.fit_kind = sensitivity::fit_kind_from_string(v);
                     },
                     [](const Scenario& s) { return std::string(sensitivity::to_string(s.analysis.fit_kind)); }});
        b.push_back(number("analysis.fit_slope", AXS_FIELD(s.analysis.fit_slope)));
        b.push_back(number("analysis.fit_intercept", AXS_FIELD(s.analysis.fit_intercept)));
        b.push_back(number("analysis.fit_coefficient", AXS_FIELD(s.analysis.fit_coefficient)));
        b.push_back(number("analysis.fit_exponent", AXS_FIELD(s.analysis.fit_exponent)));
        b.push_back(number("analysis.extraction_count", AXS_FIELD(s.analysis.extraction_count)));
        return b;
    }();
    return table;
}

#undef AXS_FIELD

const Binding& find_binding(const std::string& key) {
    for (const auto& b : bindings()) {
        if (b.key == key) return b;
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

void validate(Scenario& s) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(positive(s.laser.wavelength_nm), "laser.wavelength_nm must be positive");
    require(positive(s.laser.power_w), "laser.power_w must be positive");
    require(positive(s.laser.amplitude_photons_per_s), "laser.amplitude_photons_per_s must be positive");
    require(positive(s.laser.waist_m), "laser.waist_m must be positive");
    require(positive(s.magnet.gradient_t_per_m), "magnet.gradient_t_per_m must be positive");
    require(positive(s.magnet.field_length_m), "magnet.field_length_m must be positive");
    require(s.axion.g_a_gev >= 0.0, "axion.g_a_gev must be >= 0");
    require(positive(s.axion.g_ref_gev), "axion.g_ref_gev must be positive");
    require(s.axion.m_a_ev >= 0.0, "axion.m_a_ev must be >= 0");
    require(positive(s.axion.omega_ev), "axion.omega_ev must be positive");
    require(s.axion.b_field_t >= 0.0, "axion.b_field_t must be >= 0");
    require(s.analysis.hist_hi_m > s.analysis.hist_lo_m, "analysis histogram needs lo < hi");
    require(positive(s.analysis.bin_width_m), "analysis.bin_width_m must be positive");
    require(positive(s.analysis.central_pixel_half_width_m),
            "analysis.central_pixel_half_width_m must be positive");
    require(positive(s.analysis.sideband_pixel_center_m),
            "analysis.sideband_pixel_center_m must be positive");
    require(positive(s.analysis.integration_time_s), "analysis.integration_time_s must be positive");
    require(s.analysis.extraction_count >= 1.0, "analysis.extraction_count must be >= 1");

    s.cavity.field_length = s.magnet.field_length_m;
    s.cavity.validate();
}

}  // namespace

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override must look like section.key=value, got '" + std::string(text) + "'");
    }
    return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

Scenario load(std::istream& in, const std::vector<Override>& overrides) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("cannot parse configuration: ") + e.what());
    }
    Scenario s;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError("key '" + section + "' must live inside a [section]");
        }
        for (const auto& [key, value] : body) {
            find_binding(section + "." + key).set(s, value.data());
        }
    }
    for (const auto& o : overrides) find_binding(o.key).set(s, o.value);
    validate(s);
    return s;
}

Scenario load_file(const std::string& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
    return load(in, overrides);
}

void save(std::ostream& out, const Scenario& scenario) {
    std::string current;
    for (const auto& b : bindings()) {
        const auto dot = b.key.find('.');
        const auto section = b.key.substr(0, dot);
        if (section != current) {
            if (!current.empty()) out << '\n';
            out << '[' << section << "]\n";
            current = section;
        }
        out << b.key.substr(dot + 1) << " = " << b.get(scenario) << '\n';
    }
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : detail::kEmbeddedPresets) names.emplace_back(name);
    return names;
}

std::string_view preset_text(std::string_view name) {
    for (const auto& [preset, text] : detail::kEmbeddedPresets) {
        if (preset == name) return text;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scenario load_preset(std::string_view name, const std::vector<Override>& overrides) {
    std::istringstream in{std::string(preset_text(name))};
    return load(in, overrides);
}

}  // namespace axionsplit::scenario
