#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "axionsplit/sensitivity.hpp"

namespace axionsplit::report {

/// Extra context carried into the JSON report next to the sensitivity chain.
struct ReportContext {
    bool modulated = true;
    const sensitivity::GrowthClassification* classification = nullptr;
};

/// JSON object with scenario, fit, extrapolated_photons, signal_fraction,
/// noise_fraction, g_min_1s, g_min_integrated, integration_time_s and a few
/// provenance fields. Non-finite values are written as null.
void write_report_json(std::ostream& out, const sensitivity::ScenarioReport& report,
                       const ReportContext& context = {});

/// One row of the simulated growth series.
struct GrowthRow {
    int n_extraction = 0;  // 1-based sample index
    int traversal = 0;     // traversal at which the sample was taken
    double central_pixel_loss = 0.0;
    double sideband_pixel_gain = 0.0;
    double center_minus_sidebands = 0.0;
};

inline constexpr const char* kGrowthHeader =
    "n_extraction,traversal,central_pixel_loss_photons_per_s,sideband_pixel_gain_photons_per_s,"
    "center_minus_sidebands_photons_per_s";

void write_growth_csv(std::ostream& out, const std::vector<GrowthRow>& rows);

/// Reads a numeric CSV with a header line and returns (n, column) pairs,
/// the first column being n. Throws ConfigError on malformed input, an
/// unknown column or an empty series.
sensitivity::GrowthSeries read_series_csv(std::istream& in, const std::string& column);

}  // namespace axionsplit::report
