#include "axionsplit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "axionsplit/axion_physics.hpp"
#include "axionsplit/cavity.hpp"
#include "axionsplit/errors.hpp"
#include "axionsplit/pascal_oracle.hpp"

namespace axionsplit::commands {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / name);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
    return out;
}

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool has_stored_fit(const scenario::AnalysisSection& a) {
    if (a.fit_kind == sensitivity::FitKind::linear) return a.fit_slope != 0.0 || a.fit_intercept != 0.0;
    return a.fit_coefficient > 0.0;
}

}  // namespace

SimulationResult simulate(const scenario::Scenario& scenario) {
    auto on_config = scenario.cavity;
    auto off_config = scenario.cavity;
    off_config.theta_split = 0.0;
    const auto on = cavity::run(on_config);
    const auto off = cavity::run(off_config);

    const auto prof = scenario.profile();
    const auto spec = scenario.analysis.histogram_spec();
    const double hw = scenario.analysis.central_pixel_half_width_m;
    const double sc = scenario.analysis.sideband_pixel_center_m;
    const profile::HistogramSpec central_pixel{{0.0, hw}};
    const profile::HistogramSpec sideband_pixel{{sc - hw, sc + hw}};
    const auto regions = profile::signal_histogram_spec(prof.waist);

    SimulationResult result;
    for (std::size_t i = 0; i < on.snapshots.size(); ++i) {
        const auto& a = on.snapshots[i].at_detector;
        const auto& b = off.snapshots[i].at_detector;
        ExtractionResult e;
        e.traversal = on.snapshots[i].traversal;
        e.beams = a.size();
        e.difference = profile::loss_histogram(a, b, prof, spec);
        e.row.n_extraction = static_cast<int>(i + 1);
        e.row.traversal = e.traversal;
        const auto center = profile::loss_histogram(a, b, prof, central_pixel);
        e.row.central_pixel_loss = profile::region_integral(center, 0.0, hw);
        const double sideband_loss = profile::loss_histogram(a, b, prof, sideband_pixel).counts[0];
        e.row.sideband_pixel_gain = sideband_loss == 0.0 ? 0.0 : -sideband_loss;
        e.row.center_minus_sidebands =
            profile::center_minus_sidebands(profile::loss_histogram(a, b, prof, regions), prof.waist);
        result.extractions.push_back(std::move(e));
    }
    return result;
}

int cmd_simulate(const scenario::Scenario& scenario, const fs::path& out_dir, std::ostream& log) {
    const auto sim = simulate(scenario);
    std::vector<report::GrowthRow> rows;
    for (const auto& e : sim.extractions) {
        char name[40];
        std::snprintf(name, sizeof name, "difference_t%03d.csv", e.traversal);
        auto out = open_output(out_dir, name);
        profile::write_histogram_csv(out, e.difference);
        rows.push_back(e.row);
    }
    auto out = open_output(out_dir, "growth_series.csv");
    report::write_growth_csv(out, rows);
    log << scenario.name << ": " << sim.extractions.size() << " extractions over "
        << scenario.cavity.n_traversals << " traversals";
    if (!sim.extractions.empty()) log << ", final ensemble " << sim.extractions.back().beams << " beams";
    log << "\n";
    return 0;
}

AnalysisOutcome analyze(const scenario::Scenario& scenario, const AnalyzeOptions& options) {
    const auto& a = scenario.analysis;
    const auto kind = options.fit_kind.value_or(a.fit_kind);
    AnalysisOutcome outcome;
    sensitivity::GrowthFit fit;
    if (options.series_csv) {
        std::ifstream in(*options.series_csv);
        if (!in) throw ConfigError("cannot open series '" + options.series_csv->string() + "'");
        const auto series = report::read_series_csv(in, options.column);
        if (series.size() < 3) throw ConfigError("series needs at least 3 rows to fit");
        if (kind == sensitivity::FitKind::linear) {
            fit = sensitivity::fit_linear(series);
        } else {
            fit = sensitivity::fit_power(series);
        }
        bool positive = true;
        for (const auto& p : series.points()) positive = positive && p.n > 0.0 && p.signal > 0.0;
        if (positive) outcome.classification = sensitivity::classify_growth(series);
    } else {
        if (!has_stored_fit(a)) {
            throw ConfigError("scenario '" + scenario.name + "' has no stored fit; pass a series CSV");
        }
        fit = a.fit();
        if (options.fit_kind && *options.fit_kind != a.fit_kind) {
            throw ConfigError("the stored fit is " + std::string(sensitivity::to_string(a.fit_kind)));
        }
    }
    const sensitivity::NoiseBudget budget{scenario.laser.amplitude_photons_per_s,
                                          options.integration_time_s.value_or(a.integration_time_s)};
    outcome.report = sensitivity::scenario_report(scenario.name, fit,
                                                  options.n_target.value_or(a.extraction_count), budget,
                                                  options.g_ref_gev.value_or(scenario.axion.g_ref_gev));
    return outcome;
}

int cmd_analyze(const scenario::Scenario& scenario, const AnalyzeOptions& options, const fs::path& out_dir,
                std::ostream& log) {
    const auto outcome = analyze(scenario, options);
    auto out = open_output(out_dir, "report.json");
    report::ReportContext context{scenario.magnet.modulated,
                                  outcome.classification ? &*outcome.classification : nullptr};
    report::write_report_json(out, outcome.report, context);
    const auto& r = outcome.report;
    log << r.scenario << ": " << format(r.extrapolated_photons) << " photons at n = " << r.n_target
        << ", g_min(1 s) = " << r.g_min_1s << " GeV^-1, g_min(" << r.integration_time_s
        << " s) = " << r.g_min_integrated << " GeV^-1\n";
    return 0;
}

std::vector<profile::DeficitPoint> profile_curve(const ProfileOptions& o) {
    if (o.points < 2 || !(o.x_max > o.x_min)) throw ConfigError("profile range needs x_min < x_max and >= 2 points");
    if (o.alpha < 0.0 || o.epsilon < 0.0) throw ConfigError("alpha and epsilon must be >= 0");
    const profile::GaussianProfile prof{o.amplitude, o.waist, 0.0};
    prof.validate();
    std::vector<profile::DeficitPoint> curve;
    curve.reserve(static_cast<std::size_t>(o.points));
    for (int i = 0; i < o.points; ++i) {
        const double x = o.x_min + (o.x_max - o.x_min) * i / (o.points - 1);
        const double d = o.epsilon == 0.0 ? profile::density_deficit(x, o.alpha, prof)
                                          : profile::deficit_with_broadening(x, o.alpha, o.epsilon, prof);
        curve.push_back({x, d});
    }
    return curve;
}

int cmd_profile(const ProfileOptions& options, const fs::path& out_dir, std::ostream& log) {
    const auto curve = profile_curve(options);
    auto out = open_output(out_dir, "profile.csv");
    profile::write_deficit_csv(out, curve);
    log << "profile: " << curve.size() << " points\n";
    return 0;
}

std::vector<MassScanRow> mass_scan(const scenario::Scenario& scenario, const MassScanOptions& o) {
    if (!(o.m_min_ev > 0.0) || !(o.m_max_ev > o.m_min_ev) || o.steps < 2) {
        throw ConfigError("mass range needs 0 < m_min < m_max and >= 2 steps");
    }
    double g_min = std::numeric_limits<double>::quiet_NaN();
    if (has_stored_fit(scenario.analysis)) g_min = analyze(scenario, {}).report.g_min_integrated;

    const auto& ax = scenario.axion;
    auto row = [&](double m) {
        const auto p = axion::make_mixing(ax.omega_ev, ax.g_a_gev, ax.b_field_t, m);
        const double s = axion::suppression_factor(p);
        const double g = s > 0.0 ? g_min / std::sqrt(s) : std::numeric_limits<double>::infinity();
        return MassScanRow{m, axion::mixing_angle(p), s, g};
    };
    std::vector<MassScanRow> rows{row(0.0)};
    const double step = std::log(o.m_max_ev / o.m_min_ev) / (o.steps - 1);
    for (int i = 0; i < o.steps; ++i) {
        rows.push_back(row(i + 1 == o.steps ? o.m_max_ev : o.m_min_ev * std::exp(step * i)));
    }
    return rows;
}

int cmd_mass_scan(const scenario::Scenario& scenario, const MassScanOptions& options, const fs::path& out_dir,
                  std::ostream& log) {
    const auto rows = mass_scan(scenario, options);
    auto out = open_output(out_dir, "mass_scan.csv");
    out << "m_a_ev,phi_rad,suppression,g_min_per_gev\n";
    for (const auto& r : rows) {
        out << format(r.mass_ev) << ',' << format(r.phi) << ',' << format(r.suppression) << ','
            << format(r.g_min_gev) << '\n';
    }
    const auto& ax = scenario.axion;
    const auto p = axion::make_mixing(ax.omega_ev, ax.g_a_gev, ax.b_field_t, 0.0);
    log << scenario.name << ": suppression stays >= " << options.threshold << " up to m_a = "
        << axion::max_measurable_mass(p, options.threshold) << " eV\n";
    return 0;
}

int cmd_pascal(int n_passes, double pass_length, const fs::path& out_dir, std::ostream& log) {
    if (n_passes < 3) throw ConfigError("pascal needs at least 3 passes");
    if (!(pass_length > 0.0) || !std::isfinite(pass_length)) throw ConfigError("pass length must be positive");
    const auto cmp = pascal::compare_growth(n_passes, pass_length);
    auto out = open_output(out_dir, "pascal_growth.csv");
    pascal::write_growth_csv(out, cmp);
    log << "bifurcation slope " << cmp.slope_bifurcation << " (" << cmp.class_bifurcation << "), pascal slope "
        << cmp.slope_pascal << " (" << cmp.class_pascal << "), fitted from n = " << cmp.fit_from << "\n";
    return 0;
}

}  // namespace axionsplit::commands
