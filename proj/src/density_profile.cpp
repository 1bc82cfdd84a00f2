#include "axionsplit/density_profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "axionsplit/errors.hpp"
#include "axionsplit/numeric.hpp"

namespace axionsplit::profile {

void GaussianProfile::validate() const {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw InvalidArgument("profile amplitude must be positive");
    }
    if (!(waist > 0.0) || !std::isfinite(waist)) throw InvalidArgument("waist must be positive");
    if (!std::isfinite(center)) throw InvalidArgument("profile center must be finite");
}

double gaussian_density(double x, const GaussianProfile& profile) {
    const double u = (x - profile.center) / profile.waist;
    return profile.amplitude * std::exp(-0.5 * u * u);
}

std::pair<double, double> split_pair_density(double x, const GaussianProfile& profile,
                                             const SplitProfileParams& params) {
    if (!(params.alpha >= 0.0) || !(params.epsilon >= 0.0)) {
        throw InvalidArgument("alpha and epsilon must be >= 0");
    }
    const double r = profile.waist;
    const double width = r + params.epsilon;
    const double scale = profile.amplitude * (r / width) * 0.5;
    const double s = x - profile.center;
    const double up = (s - params.alpha) / width;
    const double down = (s + params.alpha) / width;
    return {scale * std::exp(-0.5 * up * up), scale * std::exp(-0.5 * down * down)};
}

namespace {

void check_expansion(double ratio, const char* name) {
    if (!(ratio >= 0.0)) throw InvalidArgument(std::string(name) + " must be >= 0");
    if (ratio >= kExpansionLimit) {
        std::ostringstream msg;
        msg << name << "/r = " << ratio << " is outside the small-shift expansion (< "
            << kExpansionLimit << ")";
        throw GuardViolation(msg.str());
    }
}

// log(cosh z) without cancellation for small z.
double log_cosh(double z) {
    const double h = std::sinh(0.5 * z);
    return std::log1p(2.0 * h * h);
}

}  // namespace

double density_deficit(double x, double alpha, const GaussianProfile& profile) {
    profile.validate();
    const double r = profile.waist;
    check_expansion(alpha / r, "alpha");
    const double s = x - profile.center;
    const double a2 = (alpha / r) * (alpha / r);
    // 1 - (1 - a^2) cosh(z) = -expm1(log1p(-a^2) + log cosh z); z -> 0 at s = 0.
    const double z = 2.0 * alpha * s / (r * r);
    const double bracket = -std::expm1(std::log1p(-a2) + log_cosh(z));
    return profile.amplitude * std::exp(-(s * s) / (r * r)) * bracket;
}

double deficit_with_broadening(double x, double alpha, double epsilon,
                               const GaussianProfile& profile) {
    profile.validate();
    const double r = profile.waist;
    check_expansion(alpha / r, "alpha");
    check_expansion(epsilon / r, "epsilon");
    const double s = x - profile.center;
    const double u2 = (s * s) / (r * r);
    const double log_product = std::log1p(-epsilon / r) + u2 * epsilon / r -
                               (alpha / r) * (alpha / r) + log_cosh(s * alpha / (r * r));
    return profile.amplitude * std::exp(-0.5 * u2) * -std::expm1(log_product);
}

double single_pass_estimate(double theta_split, double cavity_length, double waist,
                            double amplitude_scale) {
    if (!(theta_split >= 0.0) || !(cavity_length > 0.0) || !(waist > 0.0) ||
        !(amplitude_scale > 0.0)) {
        throw InvalidArgument("single_pass_estimate needs theta >= 0 and positive d, r, scale");
    }
    const double shift = theta_split * cavity_length / waist;
    return amplitude_scale * shift * shift;
}

HistogramSpec HistogramSpec::uniform(double lo, double hi, double width) {
    if (!(hi > lo) || !(width > 0.0) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidArgument("histogram needs lo < hi and a positive bin width");
    }
    const auto n = std::max<long long>(1, std::llround((hi - lo) / width));
    HistogramSpec spec;
    spec.edges.resize(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i < n; ++i) spec.edges[static_cast<std::size_t>(i)] = lo + i * width;
    spec.edges.back() = hi;
    return spec;
}

void HistogramSpec::validate() const {
    if (edges.size() < 2) throw InvalidArgument("histogram needs at least one bin");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i]) || !std::isfinite(edges[i + 1])) {
            throw InvalidArgument("histogram edges must be finite and strictly increasing");
        }
    }
}

double gaussian_integral(double lo, double hi, const GaussianProfile& profile) {
    const double s = std::numbers::sqrt2 * profile.waist;
    const double u = (lo - profile.center) / s;
    const double v = (hi - profile.center) / s;
    double span;
    // erfc keeps relative precision in the tails.
    if (u >= 0.0) {
        span = std::erfc(u) - std::erfc(v);
    } else if (v <= 0.0) {
        span = std::erfc(-v) - std::erfc(-u);
    } else {
        span = std::erf(v) - std::erf(u);
    }
    return profile.amplitude * profile.waist * std::sqrt(std::numbers::pi / 2.0) * span;
}

DetectorHistogram bin_ensemble(const cavity::BeamEnsemble& ensemble, const GaussianProfile& profile,
                               const HistogramSpec& spec) {
    profile.validate();
    spec.validate();
    DetectorHistogram hist{spec.edges, std::vector<double>(spec.bin_count(), 0.0)};
    for (std::size_t i = 0; i < hist.bin_count(); ++i) {
        numeric::CompensatedSum acc;
        for (const auto& beam : ensemble.beams()) {
            GaussianProfile shifted = profile;
            shifted.center = beam.ray.position;
            acc.add(beam.weight * gaussian_integral(hist.bin_lo(i), hist.bin_hi(i), shifted));
        }
        hist.counts[i] = acc.value();
    }
    return hist;
}

DetectorHistogram profile_difference(const DetectorHistogram& on, const DetectorHistogram& off) {
    if (on.edges != off.edges || on.counts.size() != off.counts.size()) {
        throw InvalidArgument("profile_difference needs identical binning");
    }
    DetectorHistogram diff{off.edges, std::vector<double>(off.bin_count())};
    for (std::size_t i = 0; i < diff.bin_count(); ++i) diff.counts[i] = off.counts[i] - on.counts[i];
    return diff;
}

namespace {

constexpr int kMomentOrder = 24;
constexpr double kMomentReach = 0.05;  // max |x - c| / r for the expansion

struct Moments {
    double weight = 0.0;
    std::array<double, kMomentOrder + 1> mu{};  // mu[k] = sum w ((x - c)/r)^k
};

Moments moments_about(const cavity::BeamEnsemble& ensemble, double center, double waist) {
    std::array<numeric::CompensatedSum, kMomentOrder + 1> acc{};
    for (const auto& beam : ensemble.beams()) {
        const double u = (beam.ray.position - center) / waist;
        double power = beam.weight;
        for (int k = 0; k <= kMomentOrder; ++k) {
            acc[k].add(power);
            power *= u;
        }
    }
    Moments m;
    for (int k = 0; k <= kMomentOrder; ++k) m.mu[k] = acc[k].value();
    m.weight = m.mu[0];
    return m;
}

// h_m(u) = He_m(u) exp(-u^2/2) for m = 0..order-1.
std::array<double, kMomentOrder> hermite_functions(double u) {
    std::array<double, kMomentOrder> h{};
    const double g = std::exp(-0.5 * u * u);
    double prev = 1.0;
    double cur = u;
    h[0] = g;
    if (kMomentOrder > 1) h[1] = u * g;
    for (int m = 1; m + 1 < kMomentOrder; ++m) {
        const double next = u * cur - m * prev;
        prev = cur;
        cur = next;
        h[m + 1] = cur * g;
    }
    return h;
}

double max_deviation(const cavity::BeamEnsemble& ensemble, double center) {
    double dev = 0.0;
    for (const auto& b : ensemble.beams()) dev = std::max(dev, std::abs(b.ray.position - center));
    return dev;
}

}  // namespace

DetectorHistogram loss_histogram(const cavity::BeamEnsemble& on, const cavity::BeamEnsemble& off,
                                 const GaussianProfile& profile, const HistogramSpec& spec) {
    profile.validate();
    spec.validate();
    if (on.size() == 0 || off.size() == 0) throw InvalidArgument("ensembles must be non-empty");

    const double r = profile.waist;
    const double center = off.mean_position();
    if (std::max(max_deviation(on, center), max_deviation(off, center)) > kMomentReach * r) {
        return profile_difference(bin_ensemble(on, profile, spec), bin_ensemble(off, profile, spec));
    }

    const Moments m_on = moments_about(on, center, r);
    const Moments m_off = moments_about(off, center, r);
    std::array<double, kMomentOrder + 1> dmu{};
    for (int k = 0; k <= kMomentOrder; ++k) dmu[k] = m_off.mu[k] - m_on.mu[k];

    GaussianProfile centered = profile;
    centered.center = center;
    DetectorHistogram hist{spec.edges, std::vector<double>(spec.bin_count(), 0.0)};
    auto h_lo = hermite_functions((spec.edges.front() - center) / r);
    for (std::size_t i = 0; i < hist.bin_count(); ++i) {
        const auto h_hi = hermite_functions((spec.edges[i + 1] - center) / r);
        // sum_i w_i I(x_i) = W I(c) + sum_k (-1)^k mu_k/k! [g^(k-1)]_a^b, and
        // g^(m)(s) = A (-1)^m r^-m h_m(s/r); the signs combine to -A r.
        double series = 0.0;
        double factorial = 1.0;
        for (int k = 1; k <= kMomentOrder; ++k) {
            factorial *= k;
            if (dmu[k] == 0.0) continue;
            series += dmu[k] / factorial * (h_hi[k - 1] - h_lo[k - 1]);
        }
        double loss = series == 0.0 ? 0.0 : -profile.amplitude * r * series;
        if (dmu[0] != 0.0) {
            loss += dmu[0] * gaussian_integral(spec.edges[i], spec.edges[i + 1], centered);
        }
        hist.counts[i] = loss;
        h_lo = h_hi;
    }
    return hist;
}

SignalRegions SignalRegions::for_waist(double w0) {
    if (!(w0 > 0.0)) throw InvalidArgument("w0 must be positive");
    return {0.5 * w0, w0, w0 + 1e-3 + 3.0 * w0};
}

HistogramSpec signal_histogram_spec(double w0) {
    const auto regions = SignalRegions::for_waist(w0);
    return HistogramSpec{{0.0, regions.center_half_width, regions.sideband_inner,
                          regions.sideband_outer}};
}

namespace {

std::size_t edge_index(const DetectorHistogram& hist, double x) {
    const double tol = 1e-9 * std::max(std::abs(x), hist.edges.back() - hist.edges.front());
    for (std::size_t i = 0; i < hist.edges.size(); ++i) {
        if (std::abs(hist.edges[i] - x) <= tol) return i;
    }
    std::ostringstream msg;
    if (x < hist.edges.front() - tol || x > hist.edges.back() + tol) {
        msg << "histogram range [" << hist.edges.front() << ", " << hist.edges.back()
            << "] m does not cover " << x << " m";
    } else {
        msg << "region bound " << x << " m does not fall on a bin edge";
    }
    throw InvalidArgument(msg.str());
}

double sum_bins(const DetectorHistogram& hist, double lo, double hi) {
    const auto first = edge_index(hist, lo);
    const auto last = edge_index(hist, hi);
    numeric::CompensatedSum acc;
    for (std::size_t i = first; i < last; ++i) acc.add(hist.counts[i]);
    return acc.value();
}

}  // namespace

double region_integral(const DetectorHistogram& hist, double lo, double hi) {
    if (hist.bin_count() == 0) throw InvalidArgument("empty histogram");
    if (!(hi > lo)) throw InvalidArgument("region needs lo < hi");
    if (hist.one_sided()) {
        if (lo < 0.0) throw InvalidArgument("one-sided histogram cannot cover negative x");
        return 2.0 * sum_bins(hist, lo, hi);
    }
    return sum_bins(hist, lo, hi);
}

double center_minus_sidebands(const DetectorHistogram& hist, double w0) {
    const auto regions = SignalRegions::for_waist(w0);
    if (hist.one_sided()) {
        const double center = region_integral(hist, 0.0, regions.center_half_width);
        const double sidebands =
            region_integral(hist, regions.sideband_inner, regions.sideband_outer);
        return center - sidebands;
    }
    const double center =
        region_integral(hist, -regions.center_half_width, regions.center_half_width);
    const double sidebands =
        region_integral(hist, -regions.sideband_outer, -regions.sideband_inner) +
        region_integral(hist, regions.sideband_inner, regions.sideband_outer);
    return center - sidebands;
}

namespace {

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_histogram_csv(std::ostream& out, const DetectorHistogram& hist) {
    out << "bin_lo_m,bin_hi_m,photons_per_s\n";
    for (std::size_t i = 0; i < hist.bin_count(); ++i) {
        put(out, hist.bin_lo(i));
        out << ',';
        put(out, hist.bin_hi(i));
        out << ',';
        put(out, hist.counts[i]);
        out << '\n';
    }
}

void write_deficit_csv(std::ostream& out, std::span<const DeficitPoint> points) {
    out << "x_m,deficit_photons_per_s\n";
    for (const auto& p : points) {
        put(out, p.x);
        out << ',';
        put(out, p.deficit);
        out << '\n';
    }
}

}  // namespace axionsplit::profile
