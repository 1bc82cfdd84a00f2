#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "axionsplit/cavity.hpp"
#include "axionsplit/density_profile.hpp"
#include "axionsplit/errors.hpp"

using namespace axionsplit;
using namespace axionsplit::profile;

namespace {

const GaussianProfile kBeam{5e18, 7.5e-4, 0.0};

template <typename F>
double simpson(F f, double lo, double hi, int n = 20000) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Exact difference for the exp(-(x/r)^2) profile the small-shift form is written for.
double exact_deficit(double x, double alpha, double a, double r) {
    auto g = [&](double c) { return a * std::exp(-((x - c) / r) * ((x - c) / r)); };
    return g(0.0) - 0.5 * g(alpha) - 0.5 * g(-alpha);
}

cavity::BeamEnsemble pair(double alpha) {
    return cavity::BeamEnsemble({{{alpha, 0.0}, 0.5, 1, 1.0}, {{-alpha, 0.0}, 0.5, 1, -1.0}}, 0.0, 0.0);
}

cavity::BeamEnsemble axial() { return cavity::BeamEnsemble::single({}, 0.0, 0.0); }

}  // namespace

TEST_CASE("gaussian density") {
    CHECK(gaussian_density(0.0, kBeam) == 5e18);
    CHECK(gaussian_density(2.0 * 7.5e-4, kBeam) / 5e18 == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(gaussian_density(7.5e-4, kBeam) == doctest::Approx(3.0326532985631671e18).epsilon(1e-14));

    const double total = simpson([](double x) { return gaussian_density(x, kBeam); }, -6 * 7.5e-4, 6 * 7.5e-4);
    CHECK(total == doctest::Approx(5e18 * 7.5e-4 * std::sqrt(2 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("split pair density") {
    auto [p, m] = split_pair_density(3e-4, kBeam, {});
    CHECK(p == 0.5 * gaussian_density(3e-4, kBeam));
    CHECK(m == p);

    const SplitProfileParams shifted{1e-5, 0.0};
    const double total = simpson(
        [&](double x) {
            auto [a, b] = split_pair_density(x, kBeam, shifted);
            return a + b;
        },
        -8 * 7.5e-4, 8 * 7.5e-4);
    CHECK(total == doctest::Approx(5e18 * 7.5e-4 * std::sqrt(2 * std::numbers::pi)).epsilon(1e-9));

    // Peak of the + half at +alpha.
    const double h = 1e-9;
    const double at = split_pair_density(1e-5, kBeam, shifted).first;
    CHECK(at > split_pair_density(1e-5 + h, kBeam, shifted).first);
    CHECK(at > split_pair_density(1e-5 - h, kBeam, shifted).first);
}

TEST_CASE("density deficit") {
    const double alpha = 5.6e-9;
    CHECK(density_deficit(0.0, alpha, kBeam) ==
          doctest::Approx(5e18 * alpha * alpha / (7.5e-4 * 7.5e-4)).epsilon(1e-14));
    CHECK(density_deficit(1e-12, alpha, kBeam) == doctest::Approx(density_deficit(0.0, alpha, kBeam)).epsilon(1e-12));
    for (double x : {-1e-3, 0.0, 4e-4, 2e-3}) CHECK(density_deficit(x, 0.0, kBeam) == 0.0);

    // Loss inside the waist, gain outside; root near r / sqrt(2) for small alpha.
    const double r = 7.5e-4;
    CHECK(density_deficit(0.6 * r, 1e-6, kBeam) > 0.0);
    CHECK(density_deficit(0.8 * r, 1e-6, kBeam) < 0.0);
    CHECK(density_deficit(2.0 * r, 1e-6, kBeam) < 0.0);

    CHECK_THROWS_AS(density_deficit(0.0, 0.1 * r, kBeam), GuardViolation);
}

TEST_CASE("small-shift deficit against exact Gaussian difference") {
    const double r = 7.5e-4, a = 5e18;
    for (double ratio : {1e-4, 1e-3, 1e-2}) {
        const double alpha = ratio * r;
        const double peak = a * ratio * ratio;
        for (int i = 0; i <= 300; ++i) {
            const double x = 3.0 * r * i / 300.0;
            const double exact = exact_deficit(x, alpha, a, r);
            const double approx = density_deficit(x, alpha, kBeam);
            CHECK(std::abs(approx - exact) <= 0.01 * peak);
            if (std::abs(exact) > 0.05 * peak) CHECK(std::abs(approx - exact) <= 0.01 * std::abs(exact));
        }
    }
}

TEST_CASE("deficit with broadening") {
    for (double x : {-1e-3, 0.0, 4e-4}) CHECK(deficit_with_broadening(x, 0.0, 0.0, kBeam) == 0.0);

    // No broadening: agrees with the pure-displacement form at the centre.
    const double alpha = 7.5e-6;
    CHECK(deficit_with_broadening(0.0, alpha, 0.0, kBeam) ==
          doctest::Approx(density_deficit(0.0, alpha, kBeam)).epsilon(1e-4));

    // Pure broadening: the centre loses photons, the tails gain, and the
    // curve tracks the exact broadened-Gaussian difference to first order.
    const double eps = 7.5e-6;
    CHECK(deficit_with_broadening(0.0, 0.0, eps, kBeam) > 0.0);
    CHECK(deficit_with_broadening(3 * 7.5e-4, 0.0, eps, kBeam) < 0.0);
    for (double x : {0.0, 3e-4, 6e-4, 1.2e-3, 2e-3}) {
        auto [p, m] = split_pair_density(x, kBeam, {0.0, eps});
        const double exact = gaussian_density(x, kBeam) - p - m;
        CHECK(deficit_with_broadening(x, 0.0, eps, kBeam) ==
              doctest::Approx(exact).epsilon(0.03).scale(5e18 * eps / 7.5e-4));
    }
    CHECK_THROWS_AS(deficit_with_broadening(0.0, 0.0, 1e-4, kBeam), GuardViolation);
}

TEST_CASE("single pass estimate") {
    const double est = single_pass_estimate(4e-10, 14.0, 7.5e-4);
    CHECK(est == doctest::Approx(5.0 / 6.0 * 1e18 * std::pow(4e-10 * 14.0 / 7.5e-4, 2)).epsilon(1e-14));
    CHECK(est == doctest::Approx(4.6459e7).epsilon(1e-4));
    CHECK(single_pass_estimate(2e-14, 14.0, 7.5e-4) == doctest::Approx(0.11615).epsilon(1e-4));
    CHECK(single_pass_estimate(0.0, 14.0, 7.5e-4) == 0.0);
}

TEST_CASE("binning") {
    const auto spec = HistogramSpec::detector_default();
    CHECK(spec.bin_count() == 30);
    CHECK(spec.edges.back() == 3e-3);

    const auto h = bin_ensemble(axial(), kBeam, spec);
    for (std::size_t i = 0; i < h.bin_count(); ++i) {
        const double ref = simpson([](double x) { return gaussian_density(x, kBeam); }, h.bin_lo(i), h.bin_hi(i), 200);
        CHECK(h.counts[i] == doctest::Approx(ref).epsilon(1e-10));
    }

    // Normalisation is independent of where the beams sit.
    const auto wide = HistogramSpec::uniform(-0.05, 0.05, 1e-3);
    double a = 0.0, b = 0.0;
    for (double c : bin_ensemble(axial(), kBeam, wide).counts) a += c;
    for (double c : bin_ensemble(pair(2e-4), kBeam, wide).counts) b += c;
    CHECK(b == doctest::Approx(a).epsilon(1e-13));
}

TEST_CASE("binned pair difference follows the small-shift form") {
    // exp(-x^2/2r^2) profile: the small-shift form applies with r -> sqrt(2) r.
    const double r = 7.5e-4, alpha = 0.01 * r;
    const GaussianProfile wide_r{kBeam.amplitude, std::numbers::sqrt2 * r, 0.0};
    const auto spec = HistogramSpec::detector_default();
    const auto diff = profile_difference(bin_ensemble(pair(alpha), kBeam, spec), bin_ensemble(axial(), kBeam, spec));
    double peak = 0.0;
    for (double c : diff.counts) peak = std::max(peak, std::abs(c));
    for (std::size_t i = 0; i < diff.bin_count(); ++i) {
        const double form =
            simpson([&](double x) { return density_deficit(x, alpha, wide_r); }, diff.bin_lo(i), diff.bin_hi(i), 200);
        CHECK(std::abs(diff.counts[i] - form) <= 1e-3 * peak);
    }
}

TEST_CASE("profile difference") {
    const auto spec = HistogramSpec::detector_default();
    const auto on = bin_ensemble(pair(1e-5), kBeam, spec);
    for (double c : profile_difference(on, on).counts) CHECK(c == 0.0);
    CHECK_THROWS_AS(profile_difference(on, bin_ensemble(axial(), kBeam, HistogramSpec::uniform(0, 3e-3, 2e-4))),
                    InvalidArgument);
}

TEST_CASE("loss histogram at sub-picometre separations") {
    // Second-order oracle: loss over [lo, hi] = alpha^2/2 [x g(x) / r^2] from lo to hi.
    const double r = 7.5e-4;
    const auto spec = HistogramSpec::detector_default();
    for (double alpha : {1e-12, 1e-10, 5.6e-9}) {
        const auto loss = loss_histogram(pair(alpha), axial(), kBeam, spec);
        for (std::size_t i = 0; i < loss.bin_count(); ++i) {
            auto term = [&](double x) { return x * gaussian_density(x, kBeam) / (r * r); };
            const double oracle = 0.5 * alpha * alpha * (term(loss.bin_hi(i)) - term(loss.bin_lo(i)));
            CHECK(loss.counts[i] == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("loss histogram agrees with direct subtraction when that is accurate") {
    const auto spec = HistogramSpec::detector_default();
    for (double alpha : {1e-6, 1e-5, 3e-5}) {
        const auto direct =
            profile_difference(bin_ensemble(pair(alpha), kBeam, spec), bin_ensemble(axial(), kBeam, spec));
        const auto loss = loss_histogram(pair(alpha), axial(), kBeam, spec);
        double peak = 0.0;
        for (double c : direct.counts) peak = std::max(peak, std::abs(c));
        for (std::size_t i = 0; i < spec.bin_count(); ++i) {
            CHECK(std::abs(loss.counts[i] - direct.counts[i]) <= 1e-6 * peak);
        }
    }
    // Outside the expansion range the direct route is used.
    const auto far = loss_histogram(pair(1e-4), axial(), kBeam, spec);
    const auto direct =
        profile_difference(bin_ensemble(pair(1e-4), kBeam, spec), bin_ensemble(axial(), kBeam, spec));
    CHECK(far.counts == direct.counts);
}

TEST_CASE("redistribution, not absorption") {
    const double alpha = 1e-6;
    double shifted = 0.0, residual = 0.0;
    for (double hi : {3e-3, 6e-3, 1.2e-2}) {
        const auto loss = loss_histogram(pair(alpha), axial(), kBeam, HistogramSpec::uniform(0.0, hi, 1e-4));
        shifted = 0.0;
        residual = 0.0;
        for (double c : loss.counts) {
            shifted += std::abs(c);
            residual += c;
        }
    }
    CHECK(std::abs(residual) < 1e-3 * shifted);
}

TEST_CASE("signal regions") {
    const auto reg = SignalRegions::for_waist(7.5e-4);
    CHECK(reg.center_half_width == 3.75e-4);
    CHECK(reg.sideband_inner == 7.5e-4);
    CHECK(reg.sideband_outer == doctest::Approx(4e-3).epsilon(1e-15));

    // Moving delta photons from the centre to the sidebands changes A - B by -2 delta.
    const auto spec = signal_histogram_spec(7.5e-4);
    DetectorHistogram profile{spec.edges, {1e15, 4e14, 2e14}};
    const double before = center_minus_sidebands(profile, 7.5e-4);
    const double delta = 3e9;
    profile.counts[0] -= delta / 2;  // one-sided: each side carries half
    profile.counts[2] += delta / 2;
    CHECK(center_minus_sidebands(profile, 7.5e-4) - before == doctest::Approx(-2.0 * delta).epsilon(1e-6));

    // Unsplit reference: no change.
    const auto none = loss_histogram(axial(), axial(), kBeam, spec);
    CHECK(center_minus_sidebands(none, 7.5e-4) == 0.0);

    CHECK_THROWS_AS(region_integral(none, 0.0, 5e-4), InvalidArgument);
    CHECK(region_integral(none, 0.0, 4e-3) == 0.0);
}

TEST_CASE("csv output") {
    std::ostringstream out;
    write_histogram_csv(out, DetectorHistogram{{0.0, 1e-4}, {0.1}});
    CHECK(out.str() == "bin_lo_m,bin_hi_m,photons_per_s\n0,0.0001,0.10000000000000001\n");
    std::ostringstream d;
    const DeficitPoint p[] = {{0.0, 2.5}};
    write_deficit_csv(d, p);
    CHECK(d.str() == "x_m,deficit_photons_per_s\n0,2.5\n");
}
