#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "axionsplit/commands.hpp"
#include "axionsplit/errors.hpp"
#include "axionsplit/scenario.hpp"

namespace {

using namespace axionsplit;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

struct Globals {
    std::string config;
    std::string preset;
    std::string out = ".";
    std::vector<std::string> overrides;
};

scenario::Scenario load_scenario(const Globals& g) {
    std::vector<scenario::Override> overrides;
    for (const auto& o : g.overrides) overrides.push_back(scenario::parse_override(o));
    if (!g.config.empty() && !g.preset.empty()) throw ConfigError("use either --config or --preset, not both");
    if (!g.config.empty()) return scenario::load_file(g.config, overrides);
    return scenario::load_preset(g.preset.empty() ? "table1.confocal" : g.preset, overrides);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ray-optics simulation of axion-induced photon splitting in a multipass cavity"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Scenario file");
    app.add_option("--preset", g.preset, "Embedded preset (default table1.confocal)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--override", g.overrides, "section.key=value, repeatable")->take_all();

    auto* simulate = app.add_subcommand("simulate", "Run the cavity and write difference and growth CSVs");

    auto* analyze = app.add_subcommand("analyze", "Fit a growth series and write report.json");
    commands::AnalyzeOptions analyze_opts;
    std::string series, fit_kind;
    double n_target = 0.0, integration_time = 0.0, g_ref = 0.0;
    analyze->add_option("--series", series, "Growth-series CSV (defaults to the scenario's stored fit)");
    analyze->add_option("--column", analyze_opts.column, "Signal column of the series")->capture_default_str();
    analyze->add_option("--fit", fit_kind, "linear or power");
    auto* n_opt = analyze->add_option("--n-target", n_target, "Extraction count to extrapolate to");
    auto* t_opt = analyze->add_option("--integration-time", integration_time, "Integration time in s");
    auto* g_opt = analyze->add_option("--g-ref", g_ref, "Coupling of the simulated signal, GeV^-1");

    auto* profile = app.add_subcommand("profile", "Write the small-shift deficit curve");
    commands::ProfileOptions profile_opts;
    profile->add_option("--alpha", profile_opts.alpha, "Half-beam displacement, m")->capture_default_str();
    profile->add_option("--epsilon", profile_opts.epsilon, "Half-beam broadening, m")->capture_default_str();
    profile->add_option("--waist", profile_opts.waist, "r, m")->capture_default_str();
    profile->add_option("--amplitude", profile_opts.amplitude, "A, photons/s")->capture_default_str();
    profile->add_option("--x-min", profile_opts.x_min, "m")->capture_default_str();
    profile->add_option("--x-max", profile_opts.x_max, "m")->capture_default_str();
    profile->add_option("--points", profile_opts.points)->capture_default_str();

    auto* mass = app.add_subcommand("mass-scan", "Suppression and effective g_min versus axion mass");
    commands::MassScanOptions mass_opts;
    mass->add_option("--m-min", mass_opts.m_min_ev, "eV")->capture_default_str();
    mass->add_option("--m-max", mass_opts.m_max_ev, "eV")->capture_default_str();
    mass->add_option("--steps", mass_opts.steps)->capture_default_str();
    mass->add_option("--threshold", mass_opts.threshold, "Suppression defining the mass reach")
        ->capture_default_str();

    auto* pascal = app.add_subcommand("pascal", "Bifurcation versus Pascal-triangle spread");
    int n_passes = 10000;
    double pass_length = 1.0;
    pascal->add_option("--passes", n_passes)->capture_default_str();
    pascal->add_option("--pass-length", pass_length, "m")->capture_default_str();

    auto* presets = app.add_subcommand("presets", "List or show embedded presets");
    presets->require_subcommand(1);
    auto* presets_list = presets->add_subcommand("list");
    auto* presets_show = presets->add_subcommand("show");
    std::string show_name;
    presets_show->add_option("name", show_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*presets_list) {
            for (const auto& name : scenario::preset_names()) std::cout << name << "\n";
            return 0;
        }
        if (*presets_show) {
            std::cout << scenario::preset_text(show_name);
            return 0;
        }
        if (*pascal) return commands::cmd_pascal(n_passes, pass_length, g.out, std::cerr);
        if (*profile) return commands::cmd_profile(profile_opts, g.out, std::cerr);

        const auto sc = load_scenario(g);
        if (*simulate) return commands::cmd_simulate(sc, g.out, std::cerr);
        if (*mass) return commands::cmd_mass_scan(sc, mass_opts, g.out, std::cerr);
        if (*analyze) {
            if (!series.empty()) analyze_opts.series_csv = series;
            if (!fit_kind.empty()) analyze_opts.fit_kind = sensitivity::fit_kind_from_string(fit_kind);
            if (*n_opt) analyze_opts.n_target = n_target;
            if (*t_opt) analyze_opts.integration_time_s = integration_time;
            if (*g_opt) analyze_opts.g_ref_gev = g_ref;
            return commands::cmd_analyze(sc, analyze_opts, g.out, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const GuardViolation& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
