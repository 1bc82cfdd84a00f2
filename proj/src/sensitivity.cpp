#include "axionsplit/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "axionsplit/errors.hpp"
#include "axionsplit/numeric.hpp"

namespace axionsplit::sensitivity {

GrowthSeries::GrowthSeries(std::vector<SeriesPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].n) || !std::isfinite(points_[i].signal)) {
            throw InvalidArgument("growth series values must be finite");
        }
        if (i > 0 && !(points_[i].n > points_[i - 1].n)) {
            throw InvalidArgument("growth series n must be strictly increasing");
        }
    }
}

std::string_view to_string(FitKind kind) { return kind == FitKind::linear ? "linear" : "power"; }

FitKind fit_kind_from_string(std::string_view text) {
    if (text == "linear") return FitKind::linear;
    if (text == "power") return FitKind::power;
    throw ConfigError("fit kind must be 'linear' or 'power', got '" + std::string(text) + "'");
}

namespace {

struct LineFit {
    double slope;
    double intercept;
    double r_squared;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mean_x = numeric::compensated_sum(x) / n;
    const double mean_y = numeric::compensated_sum(y) / n;
    numeric::CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0)) throw InvalidArgument("degenerate series: all n are equal");
    const double slope = sxy.value() / sxx.value();
    const double intercept = mean_y - slope * mean_x;

    numeric::CompensatedSum ssr;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (slope * x[i] + intercept);
        ssr.add(e * e);
    }
    double r2 = 1.0;
    if (syy.value() > 0.0) r2 = std::clamp(1.0 - ssr.value() / syy.value(), 0.0, 1.0);
    return {slope, intercept, r2};
}

void require_points(const GrowthSeries& series) {
    if (series.size() < 3) throw InvalidArgument("fitting needs at least 3 points");
}

}  // namespace

GrowthFit fit_linear(const GrowthSeries& series) {
    require_points(series);
    std::vector<double> x, y;
    for (const auto& p : series.points()) {
        x.push_back(p.n);
        y.push_back(p.signal);
    }
    const auto line = least_squares(x, y);
    GrowthFit fit = GrowthFit::linear(line.slope, line.intercept);
    fit.r_squared = line.r_squared;
    return fit;
}

GrowthFit fit_power(const GrowthSeries& series) {
    require_points(series);
    std::vector<double> x, y;
    for (const auto& p : series.points()) {
        if (!(p.n > 0.0) || !(p.signal > 0.0)) {
            throw InvalidArgument("power fit needs positive n and signal values");
        }
        x.push_back(std::log(p.n));
        y.push_back(std::log(p.signal));
    }
    const auto line = least_squares(x, y);
    GrowthFit fit = GrowthFit::power(std::exp(line.intercept), line.slope);
    fit.r_squared = line.r_squared;
    return fit;
}

double extrapolate(const GrowthFit& fit, double n) {
    if (!(n >= 1.0)) throw InvalidArgument("extrapolation needs n >= 1");
    if (fit.kind == FitKind::linear) return fit.slope * n + fit.intercept;
    return fit.coefficient * std::pow(n, fit.exponent);
}

GrowthClassification classify_growth(const GrowthSeries& series) {
    GrowthClassification out;
    out.linear = fit_linear(series);
    out.power = fit_power(series);
    out.separation_exponent = 0.5 * out.power.exponent;
    const double e = out.separation_exponent;
    if (std::abs(e - 0.5) < 0.1) {
        out.shape = "sqrt(n)";
    } else if (std::abs(e - 1.0) < 0.1) {
        out.shape = "linear";
    } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "n^%.2f", e);
        out.shape = buf;
    }
    return out;
}

double shot_noise_fraction(const NoiseBudget& budget) {
    if (!(budget.photon_rate > 0.0) || !(budget.integration_time > 0.0)) {
        throw InvalidArgument("noise budget needs positive rate and integration time");
    }
    return 1.0 / std::sqrt(budget.photon_rate * budget.integration_time);
}

double min_coupling(double g_ref, double signal_fraction_at_ref, double noise_fraction) {
    if (!(g_ref > 0.0) || !(noise_fraction > 0.0) || !(signal_fraction_at_ref >= 0.0)) {
        throw InvalidArgument("min_coupling needs g_ref > 0, noise > 0, signal >= 0");
    }
    if (signal_fraction_at_ref == 0.0) return std::numeric_limits<double>::infinity();
    return g_ref * std::sqrt(noise_fraction / signal_fraction_at_ref);
}

ScenarioReport scenario_report(std::string scenario, const GrowthFit& fit, double n_target,
                               const NoiseBudget& budget, double g_ref) {
    ScenarioReport r;
    r.scenario = std::move(scenario);
    r.fit = fit;
    r.n_target = n_target;
    r.extrapolated_photons = extrapolate(fit, n_target);
    r.total_photons = budget.photon_rate;
    r.signal_fraction = std::abs(r.extrapolated_photons) / budget.photon_rate;
    r.noise_fraction = shot_noise_fraction({budget.photon_rate, 1.0});
    r.g_ref = g_ref;
    r.integration_time_s = budget.integration_time;
    r.g_min_1s = min_coupling(g_ref, r.signal_fraction, r.noise_fraction);
    r.g_min_integrated = min_coupling(g_ref, r.signal_fraction, shot_noise_fraction(budget));
    r.sensitive = std::isfinite(r.g_min_1s);
    return r;
}

}  // namespace axionsplit::sensitivity
