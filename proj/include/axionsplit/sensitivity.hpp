#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace axionsplit::sensitivity {

struct SeriesPoint {
    double n = 0.0;       // traversal count
    double signal = 0.0;  // photons
};

/// Signal vs traversal count; n strictly increasing.
class GrowthSeries {
public:
    GrowthSeries() = default;
    explicit GrowthSeries(std::vector<SeriesPoint> points);

    const std::vector<SeriesPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<SeriesPoint> points_;
};

enum class FitKind { linear, power };

std::string_view to_string(FitKind kind);
FitKind fit_kind_from_string(std::string_view text);

/// linear: signal = slope n + intercept.  power: signal = coefficient n^exponent.
struct GrowthFit {
    FitKind kind = FitKind::linear;
    double slope = 0.0;
    double intercept = 0.0;
    double coefficient = 0.0;
    double exponent = 0.0;
    double r_squared = 1.0;

    static GrowthFit linear(double slope, double intercept) {
        return {FitKind::linear, slope, intercept, 0.0, 0.0, 1.0};
    }
    static GrowthFit power(double coefficient, double exponent) {
        return {FitKind::power, 0.0, 0.0, coefficient, exponent, 1.0};
    }
};

/// Unweighted least squares in linear space. Needs >= 3 points with distinct n.
GrowthFit fit_linear(const GrowthSeries& series);

/// Least squares on (log n, log signal). Needs >= 3 points, n > 0 and signal > 0.
/// r_squared refers to the log-log regression.
GrowthFit fit_power(const GrowthSeries& series);

/// Signal predicted by `fit` at traversal count n >= 1.
double extrapolate(const GrowthFit& fit, double n);

/// Both fits, plus the implied growth of the beam separation f(n): the
/// signal goes as f(n)^2, so f(n) ~ n^(exponent/2).
struct GrowthClassification {
    GrowthFit linear;
    GrowthFit power;
    double separation_exponent = 0.0;
    std::string shape;  // "sqrt(n)", "linear", "n^1.5", ...
};
GrowthClassification classify_growth(const GrowthSeries& series);

/// Photon rate in the counted region and integration time.
struct NoiseBudget {
    double photon_rate = 5e18;    // photons/s
    double integration_time = 1;  // s
};

/// Fractional shot noise 1/sqrt(rate * t).
double shot_noise_fraction(const NoiseBudget& budget);

/// Coupling at which the signal equals the noise, given the signal fraction
/// seen at g_ref. The signal scales as g^2, so g_min = g_ref sqrt(noise/signal).
/// Returns +inf when signal_fraction_at_ref is zero.
double min_coupling(double g_ref, double signal_fraction_at_ref, double noise_fraction);

struct ScenarioReport {
    std::string scenario;
    GrowthFit fit;
    double n_target = 0.0;
    double extrapolated_photons = 0.0;
    double total_photons = 0.0;
    double signal_fraction = 0.0;
    double noise_fraction = 0.0;  // at 1 s
    double g_ref = 0.0;
    double g_min_1s = 0.0;
    double g_min_integrated = 0.0;
    double integration_time_s = 1.0;
    bool sensitive = true;  // false when the signal vanishes
};

/// Extrapolates `fit` to `n_target`, expresses it as a fraction of
/// budget.photon_rate (photons in 1 s over the whole beam) and converts it
/// into g_min at 1 s and at budget.integration_time.
ScenarioReport scenario_report(std::string scenario, const GrowthFit& fit, double n_target,
                               const NoiseBudget& budget, double g_ref);

}  // namespace axionsplit::sensitivity
