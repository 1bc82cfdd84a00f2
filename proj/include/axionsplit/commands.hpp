#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "axionsplit/density_profile.hpp"
#include "axionsplit/report_io.hpp"
#include "axionsplit/scenario.hpp"
#include "axionsplit/sensitivity.hpp"

namespace axionsplit::commands {

struct ExtractionResult {
    int traversal = 0;
    std::size_t beams = 0;
    profile::DetectorHistogram difference;  // off - on over the analysis binning
    report::GrowthRow row;
};

struct SimulationResult {
    std::vector<ExtractionResult> extractions;
};

/// Runs the cavity with the scenario's theta_split and with theta_split = 0,
/// and differences the two detector pictures at every extraction.
SimulationResult simulate(const scenario::Scenario& scenario);

/// Writes difference_tNNN.csv (NNN = traversal) and growth_series.csv into `out_dir`.
int cmd_simulate(const scenario::Scenario& scenario, const std::filesystem::path& out_dir,
                 std::ostream& log);

struct AnalyzeOptions {
    std::optional<std::filesystem::path> series_csv;
    std::string column = "center_minus_sidebands_photons_per_s";
    std::optional<sensitivity::FitKind> fit_kind;
    std::optional<double> n_target;
    std::optional<double> integration_time_s;
    std::optional<double> g_ref_gev;
};

struct AnalysisOutcome {
    sensitivity::ScenarioReport report;
    std::optional<sensitivity::GrowthClassification> classification;
};

/// Fits the series (or takes the scenario's stored fit when no series is
/// given), extrapolates and runs the sensitivity chain.
AnalysisOutcome analyze(const scenario::Scenario& scenario, const AnalyzeOptions& options);

/// Writes report.json into `out_dir`.
int cmd_analyze(const scenario::Scenario& scenario, const AnalyzeOptions& options,
                const std::filesystem::path& out_dir, std::ostream& log);

struct ProfileOptions {
    double alpha = 0.0;
    double epsilon = 0.0;
    double waist = 7.5e-4;
    double amplitude = 5e18;
    double x_min = -3e-3;
    double x_max = 3e-3;
    int points = 601;
};

/// Small-shift deficit curve: the pure-displacement form when epsilon = 0,
/// the broadened form otherwise.
std::vector<profile::DeficitPoint> profile_curve(const ProfileOptions& options);

/// Writes profile.csv into `out_dir`.
int cmd_profile(const ProfileOptions& options, const std::filesystem::path& out_dir,
                std::ostream& log);

struct MassScanOptions {
    double m_min_ev = 1e-12;
    double m_max_ev = 1e-5;
    int steps = 71;  // log-spaced points from m_min to m_max, after an m = 0 row
    double threshold = 0.5;
};

struct MassScanRow {
    double mass_ev = 0.0;
    double phi = 0.0;
    double suppression = 0.0;
    double g_min_gev = 0.0;  // integrated g_min / sqrt(suppression); NaN without a fit
};

std::vector<MassScanRow> mass_scan(const scenario::Scenario& scenario, const MassScanOptions& options);

/// Writes mass_scan.csv into `out_dir`.
int cmd_mass_scan(const scenario::Scenario& scenario, const MassScanOptions& options,
                  const std::filesystem::path& out_dir, std::ostream& log);

/// Writes pascal_growth.csv into `out_dir`.
int cmd_pascal(int n_passes, double pass_length, const std::filesystem::path& out_dir,
               std::ostream& log);

}  // namespace axionsplit::commands
