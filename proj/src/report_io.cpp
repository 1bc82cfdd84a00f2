#include "axionsplit/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "axionsplit/errors.hpp"

namespace axionsplit::report {

namespace {

nlohmann::ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::ordered_json fit_json(const sensitivity::GrowthFit& fit) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(sensitivity::to_string(fit.kind));
    if (fit.kind == sensitivity::FitKind::linear) {
        j["slope"] = number(fit.slope);
        j["intercept"] = number(fit.intercept);
    } else {
        j["coefficient"] = number(fit.coefficient);
        j["exponent"] = number(fit.exponent);
    }
    j["r_squared"] = number(fit.r_squared);
    return j;
}

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    return fields;
}

double parse_field(const std::string& text, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
    }
    return v;
}

}  // namespace

void write_report_json(std::ostream& out, const sensitivity::ScenarioReport& report,
                       const ReportContext& context) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    j["fit"] = fit_json(report.fit);
    j["n_target"] = number(report.n_target);
    j["extrapolated_photons"] = number(report.extrapolated_photons);
    j["total_photons"] = number(report.total_photons);
    j["signal_fraction"] = number(report.signal_fraction);
    j["noise_fraction"] = number(report.noise_fraction);
    j["g_ref"] = number(report.g_ref);
    j["g_min_1s"] = number(report.g_min_1s);
    j["g_min_integrated"] = number(report.g_min_integrated);
    j["integration_time_s"] = number(report.integration_time_s);
    j["sensitive"] = report.sensitive;
    j["modulated"] = context.modulated;
    if (context.classification != nullptr) {
        const auto& c = *context.classification;
        j["classification"] = {{"linear", fit_json(c.linear)},
                               {"power", fit_json(c.power)},
                               {"separation_exponent", number(c.separation_exponent)},
                               {"shape", c.shape}};
    }
    out << j.dump(2) << '\n';
}

void write_growth_csv(std::ostream& out, const std::vector<GrowthRow>& rows) {
    out << kGrowthHeader << '\n';
    for (const auto& r : rows) {
        out << r.n_extraction << ',' << r.traversal << ',' << format(r.central_pixel_loss) << ','
            << format(r.sideband_pixel_gain) << ',' << format(r.center_minus_sidebands) << '\n';
    }
}

sensitivity::GrowthSeries read_series_csv(std::istream& in, const std::string& column) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) header = split_fields(line);
    }
    if (header.size() < 2) throw ConfigError("series CSV needs a header with at least two columns");

    std::size_t col = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] == column) col = i;
    }
    if (col == 0) throw ConfigError("series CSV has no column '" + column + "'");

    std::vector<sensitivity::SeriesPoint> points;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields");
        }
        points.push_back({parse_field(fields[0], line_no), parse_field(fields[col], line_no)});
    }
    if (points.empty()) throw ConfigError("series CSV contains no data rows");
    try {
        return sensitivity::GrowthSeries(std::move(points));
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid series: ") + e.what());
    }
}

}  // namespace axionsplit::report
