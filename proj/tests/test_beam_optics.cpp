#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "axionsplit/beam_optics.hpp"
#include "axionsplit/errors.hpp"

using namespace axionsplit;
using namespace axionsplit::optics;

namespace {

// Plain 2x2 product written out by hand.
TransferMatrix oracle_product(const TransferMatrix& l, const TransferMatrix& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

bool close(double a, double b, double rel, double abs = 0.0) {
    return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("propagation matrix") {
    CHECK(propagation_matrix(0.0) == TransferMatrix::identity());
    CHECK(propagation_matrix(14.0) == TransferMatrix{1.0, 14.0, 0.0, 1.0});
    const auto out = propagation_matrix(2.0).apply({0.0, 1e-3});
    CHECK(out.position == doctest::Approx(2e-3).epsilon(1e-15));
    CHECK(out.angle == 1e-3);
    CHECK_THROWS_AS(propagation_matrix(-1.0), InvalidArgument);
}

TEST_CASE("focusing matrix") {
    auto out = focusing_matrix(12.5).apply({1e-3, 0.0});
    CHECK(out.position == 1e-3);
    CHECK(out.angle == doctest::Approx(-8e-5).epsilon(1e-14));
    CHECK(focusing_matrix(INFINITY) == TransferMatrix::identity());
    out = focusing_matrix(-5.5).apply({1e-3, 0.0});
    CHECK(out.angle == doctest::Approx(1.818181818e-4).epsilon(1e-9));
    CHECK_THROWS_AS(focusing_matrix(0.0), InvalidArgument);
}

TEST_CASE("compose") {
    const std::vector<TransferMatrix> ids{TransferMatrix::identity(), TransferMatrix::identity()};
    CHECK(compose(ids) == TransferMatrix::identity());

    const std::vector<TransferMatrix> gaps{propagation_matrix(2), propagation_matrix(10), propagation_matrix(2)};
    CHECK(compose(gaps) == propagation_matrix(14));

    // Pure-propagation parts of one traversal plus the relay to the detector.
    const std::vector<TransferMatrix> relay{propagation_matrix(2), propagation_matrix(10), propagation_matrix(2),
                                            propagation_matrix(2)};
    CHECK(compose(relay) == propagation_matrix(16));

    // Application order: first element acts first.
    const auto f = focusing_matrix(3.0);
    const auto p = propagation_matrix(5.0);
    const std::vector<TransferMatrix> fp{f, p};
    const auto m = compose(fp);
    const auto expected = oracle_product(p, f);
    CHECK(m.a == expected.a);
    CHECK(m.b == expected.b);
    CHECK(m.c == expected.c);
    CHECK(m.d == expected.d);

    CHECK_THROWS_AS(compose(std::span<const TransferMatrix>{}), InvalidArgument);
}

TEST_CASE("determinant preserved under composition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(0.0, 3.0);
    std::uniform_real_distribution<double> foc(2.0, 30.0);
    std::bernoulli_distribution sign(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TransferMatrix> chain;
        for (int k = 0; k < 4; ++k) {
            chain.push_back(propagation_matrix(len(rng)));
            chain.push_back(focusing_matrix(sign(rng) ? foc(rng) : -foc(rng)));
        }
        CHECK(compose(chain).determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }

    // 500 round trips of the confocal cavity.
    std::vector<TransferMatrix> trips;
    for (int k = 0; k < 500; ++k) {
        trips.push_back(propagation_matrix(14.0));
        trips.push_back(focusing_matrix(12.5));
    }
    CHECK(compose(trips).determinant() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("split") {
    auto [p, m] = split({0.0, 0.0}, 4e-10);
    CHECK(p == RayState{0.0, 4e-10});
    CHECK(m == RayState{0.0, -4e-10});

    const RayState r{1e-3, 2e-6};
    auto [a, b] = split(r, 0.0);
    CHECK(a == r);
    CHECK(b == r);

    auto [c, d] = split(r, 1e-9);
    CHECK(c == RayState{1e-3, 2e-6 + 1e-9});
    CHECK(d == RayState{1e-3, 2e-6 - 1e-9});

    CHECK_THROWS_AS(split(r, -1e-9), InvalidArgument);
    CHECK_THROWS_AS(split({0.0, 0.0999999}, 1e-3), GuardViolation);
}

TEST_CASE("split symmetry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-1e-2, 1e-2), ang(-1e-3, 1e-3), th(0.0, 1e-6);
    for (int i = 0; i < 1000; ++i) {
        const RayState r{pos(rng), ang(rng)};
        const double t = th(rng);
        auto [a, b] = split(r, t);
        CHECK(a.position == r.position);
        CHECK(b.position == r.position);
        // (x + t) + (x - t) is exact to one rounding of each term.
        CHECK(close(a.angle + b.angle, 2.0 * r.angle, 4e-16, 4e-22));
    }
}

TEST_CASE("angular enhance") {
    CHECK(angular_enhance({0.0, 4e-10}, 4e-10, BranchSign::plus) == RayState{0.0, 8e-10});
    const RayState r{3e-4, -2e-7};
    CHECK(angular_enhance(r, 0.0, BranchSign::plus) == r);
    CHECK(angular_enhance(r, 0.0, BranchSign::minus) == r);

    // Axial ray through the 10 m field region.
    for (auto s : {BranchSign::plus, BranchSign::minus}) {
        auto [p, m] = split({0.0, 0.0}, 4e-10);
        const auto branch = s == BranchSign::plus ? p : m;
        const auto out = angular_enhance(propagation_matrix(10.0).apply(branch), 4e-10, s);
        CHECK(out.angle == doctest::Approx(sign_value(s) * 8e-10).epsilon(1e-15));
    }
}

TEST_CASE("single traversal matches the closed form") {
    // R1 = R0 + th0 (d + e) +- ts (d + 2e), th1 = th0 +- 2 ts with symmetric gaps.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-1e-3, 1e-3), ang(-1e-6, 1e-6), th(1e-12, 1e-8);
    const double gap = 2.0, field = 10.0, d = 14.0, e = 2.0;
    for (int i = 0; i < 500; ++i) {
        const RayState r0{pos(rng), ang(rng)};
        const double ts = th(rng);
        auto [p, m] = split(propagation_matrix(gap).apply(r0), ts);
        for (auto s : {BranchSign::plus, BranchSign::minus}) {
            auto ray = propagation_matrix(field).apply(s == BranchSign::plus ? p : m);
            ray = angular_enhance(ray, ts, s);
            ray = propagation_matrix(gap + e).apply(ray);
            const double sv = sign_value(s);
            const double r1 = r0.position + r0.angle * (d + e) + sv * ts * (d + 2.0 * e);
            const double t1 = r0.angle + sv * 2.0 * ts;
            const double scale = std::abs(r0.position) + std::abs(r0.angle) * (d + e) + ts * (d + 2.0 * e);
            CHECK(std::abs(ray.position - r1) <= 1e-12 * scale);
            CHECK(std::abs(ray.angle - t1) <= 1e-12 * (std::abs(r0.angle) + 2.0 * ts));
        }
    }
}

TEST_CASE("paraxial guard") {
    CHECK_THROWS_AS(check_paraxial({0.0, 0.1}), GuardViolation);
    CHECK_THROWS_AS(check_paraxial({NAN, 0.0}), GuardViolation);
    CHECK_NOTHROW(check_paraxial({1.0, 0.0999}));
    CHECK_THROWS_AS(propagation_matrix(1.0).apply({0.0, -0.2}), GuardViolation);
    CHECK_THROWS_AS(angular_enhance({0.0, 0.09}, 0.02, BranchSign::plus), GuardViolation);
}
