#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "axionsplit/cavity.hpp"

namespace axionsplit::profile {

/// Transverse photon density A exp(-((x - center) / r)^2 / 2).
struct GaussianProfile {
    double amplitude = 5e18;  // photons/s, peak density scale
    double waist = 7.5e-4;    // m
    double center = 0.0;      // m

    void validate() const;
};

/// Displacement (alpha) and broadening (epsilon) of the two split halves.
struct SplitProfileParams {
    double alpha = 0.0;
    double epsilon = 0.0;
};

/// Ratio alpha/r or epsilon/r above which the small-shift expansions are refused.
inline constexpr double kExpansionLimit = 0.1;

double gaussian_density(double x, const GaussianProfile& profile);

/// The two displaced, broadened half-beams, evaluated exactly.
/// Returns (shifted toward +alpha, shifted toward -alpha).
std::pair<double, double> split_pair_density(double x, const GaussianProfile& profile,
                                             const SplitProfileParams& params);

/// Small-shift deficit P - (P' + P'') without broadening:
///   A exp(-x^2/r^2) [1 - (1 - alpha^2/r^2) cosh(2 alpha x / r^2)].
/// Note this closed form is written for a profile exp(-(x/r)^2); for the
/// exp(-(x/r)^2/2) profile of gaussian_density use r -> sqrt(2) r.
/// At x = 0 it equals A alpha^2 / r^2. Throws GuardViolation if alpha/r >= 0.1.
double density_deficit(double x, double alpha, const GaussianProfile& profile);

/// Small-shift deficit with broadening:
///   A exp(-x^2/2r^2) [1 - ((r - eps)/r) exp(x^2 eps / r^3) exp(-alpha^2/r^2) cosh(x alpha / r^2)].
double deficit_with_broadening(double x, double alpha, double epsilon,
                               const GaussianProfile& profile);

/// Default triangle-area scale (5/6) 1e18 photons/s of the single-pass estimate.
inline constexpr double kTriangleAmplitude = 5.0 / 6.0 * 1e18;

/// Single-pass deficit estimate amplitude_scale * (theta_split d / r)^2.
double single_pass_estimate(double theta_split, double cavity_length, double waist,
                            double amplitude_scale = kTriangleAmplitude);

/// Bin edges; bins need not be uniform. A histogram whose first edge is
/// >= 0 is one-sided and its totals are doubled to cover both sides.
struct HistogramSpec {
    std::vector<double> edges;

    /// [lo, hi] in bins of `width`; the last bin absorbs rounding.
    static HistogramSpec uniform(double lo, double hi, double width);
    /// Default detector binning: 0.1 mm bins from 0 to 3 mm.
    static HistogramSpec detector_default() { return uniform(0.0, 3e-3, 1e-4); }

    std::size_t bin_count() const { return edges.empty() ? 0 : edges.size() - 1; }
    void validate() const;
};

/// Per-bin photon counts (integrals of the density over each bin).
struct DetectorHistogram {
    std::vector<double> edges;
    std::vector<double> counts;

    std::size_t bin_count() const { return counts.size(); }
    double bin_lo(std::size_t i) const { return edges[i]; }
    double bin_hi(std::size_t i) const { return edges[i + 1]; }
    bool one_sided() const { return !edges.empty() && edges.front() >= 0.0; }
};

/// Integral of gaussian_density over [lo, hi], via error functions.
double gaussian_integral(double lo, double hi, const GaussianProfile& profile);

/// Each beam is rendered as weight x the profile Gaussian centred on the
/// beam position; counts are exact bin integrals.
DetectorHistogram bin_ensemble(const cavity::BeamEnsemble& ensemble, const GaussianProfile& profile,
                               const HistogramSpec& spec);

/// Per-bin off - on (photon loss is positive). Throws on mismatched binning.
DetectorHistogram profile_difference(const DetectorHistogram& on, const DetectorHistogram& off);

/// Same quantity as profile_difference(bin_ensemble(on), bin_ensemble(off)),
/// computed without subtracting nearly equal bin totals. When all beams lie
/// well inside the waist the difference is expanded in the positional
/// moments of the two ensembles, which keeps it accurate for sub-picometre
/// beam separations; otherwise it falls back to direct subtraction.
DetectorHistogram loss_histogram(const cavity::BeamEnsemble& on, const cavity::BeamEnsemble& off,
                                 const GaussianProfile& profile, const HistogramSpec& spec);

/// Centre and sideband regions of the centre-minus-sidebands signal.
/// Centre: |x| < 0.5 w0. Sidebands: w0 < |x| < w0 + 1 mm + 3 w0.
struct SignalRegions {
    double center_half_width;
    double sideband_inner;
    double sideband_outer;

    static SignalRegions for_waist(double w0);
};

/// Edges {0, 0.5 w0, w0, w0 + 1 mm + 3 w0}: one-sided bins aligned with the signal regions.
HistogramSpec signal_histogram_spec(double w0);

/// Integral of the histogram over [lo, hi] (both sides if one-sided). Both
/// bounds must coincide with bin edges; throws InvalidArgument otherwise.
double region_integral(const DetectorHistogram& hist, double lo, double hi);

/// A - B with A the centre integral and B the sideband integral. Applied to
/// a loss histogram (off - on) this is the change of A - B under splitting,
/// counted positive: centre loss plus sideband gain.
double center_minus_sidebands(const DetectorHistogram& hist, double w0);

/// CSV with header bin_lo_m,bin_hi_m,photons_per_s.
void write_histogram_csv(std::ostream& out, const DetectorHistogram& hist);

struct DeficitPoint {
    double x;
    double deficit;
};
/// CSV with header x_m,deficit_photons_per_s.
void write_deficit_csv(std::ostream& out, std::span<const DeficitPoint> points);

}  // namespace axionsplit::profile
