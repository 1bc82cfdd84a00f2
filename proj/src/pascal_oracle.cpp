#include "axionsplit/pascal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "axionsplit/errors.hpp"
#include "axionsplit/numeric.hpp"
#include "axionsplit/sensitivity.hpp"

namespace axionsplit::pascal {

LatticeEnsemble LatticeEnsemble::initial(double pass_length) {
    if (!(pass_length > 0.0) || !std::isfinite(pass_length)) {
        throw InvalidArgument("pass length must be positive");
    }
    return {{LatticeBeam{0, 0, 1.0}}, pass_length};
}

namespace {

template <typename F>
double weighted(const LatticeEnsemble& e, F&& f) {
    numeric::CompensatedSum acc;
    for (const auto& b : e.beams) acc.add(b.weight * f(b));
    return acc.value();
}

LatticeEnsemble merge_degenerate(LatticeEnsemble e) {
    auto key_less = [](const LatticeBeam& l, const LatticeBeam& r) {
        return l.momentum != r.momentum ? l.momentum < r.momentum : l.offset < r.offset;
    };
    std::sort(e.beams.begin(), e.beams.end(), key_less);
    std::vector<LatticeBeam> merged;
    merged.reserve(e.beams.size());
    for (const auto& b : e.beams) {
        if (!merged.empty() && merged.back().momentum == b.momentum &&
            merged.back().offset == b.offset) {
            merged.back().weight += b.weight;
        } else {
            merged.push_back(b);
        }
    }
    e.beams = std::move(merged);
    return e;
}

template <typename Children>
LatticeEnsemble step(const LatticeEnsemble& ensemble, Merge merge, Children&& children) {
    LatticeEnsemble out{{}, ensemble.pass_length};
    out.beams.reserve(2 * ensemble.beams.size());
    for (const auto& b : ensemble.beams) {
        const auto [up, down] = children(b.momentum);
        for (auto m : {up, down}) out.beams.push_back({m, b.offset + m, 0.5 * b.weight});
    }
    return merge == Merge::degenerate ? merge_degenerate(std::move(out)) : out;
}

}  // namespace

double LatticeEnsemble::total_weight() const {
    return weighted(*this, [](const LatticeBeam&) { return 1.0; });
}

double LatticeEnsemble::mean_momentum() const {
    return weighted(*this, [](const LatticeBeam& b) { return static_cast<double>(b.momentum); });
}

double LatticeEnsemble::mean_position() const {
    return weighted(*this, [this](const LatticeBeam& b) { return position(b); });
}

double LatticeEnsemble::rms_position() const {
    return std::sqrt(weighted(*this, [this](const LatticeBeam& b) {
        const double x = position(b);
        return x * x;
    }));
}

std::map<std::int64_t, double> LatticeEnsemble::momentum_spectrum() const {
    std::map<std::int64_t, double> spectrum;
    for (const auto& b : beams) spectrum[b.momentum] += b.weight;
    return spectrum;
}

LatticeEnsemble step_bifurcation(const LatticeEnsemble& ensemble, Merge merge) {
    return step(ensemble, merge, [](std::int64_t m) { return std::pair{m + 1, m - 1}; });
}

LatticeEnsemble step_pascal(const LatticeEnsemble& ensemble, Merge merge) {
    return step(ensemble, merge,
                [](std::int64_t) { return std::pair<std::int64_t, std::int64_t>{+1, -1}; });
}

// m' = m +- 1, x' = x + m'; the +-1 kick is independent of (x, m).
SpreadMoments SpreadMoments::bifurcation_step() const {
    SpreadMoments next;
    next.momentum2 = momentum2 + 1.0;
    next.cross = cross + next.momentum2;
    next.position2 = position2 + 2.0 * cross + next.momentum2;
    return next;
}

// m' = +-1, x' = x + m'.
SpreadMoments SpreadMoments::pascal_step() const {
    SpreadMoments next;
    next.momentum2 = 1.0;
    next.cross = 1.0;
    next.position2 = position2 + 1.0;
    return next;
}

namespace {

std::string classify(double slope) {
    if (std::abs(slope - 1.0) <= 0.05) return "linear";
    if (std::abs(slope - 0.5) <= 0.05) return "sqrt";
    char buf[32];
    std::snprintf(buf, sizeof buf, "power %.3f", slope);
    return buf;
}

}  // namespace

GrowthComparison compare_growth(int n_passes, double pass_length) {
    if (n_passes < 1) throw InvalidArgument("n_passes must be >= 1");
    if (!(pass_length > 0.0)) throw InvalidArgument("pass length must be positive");

    GrowthComparison out;
    out.rows.reserve(static_cast<std::size_t>(n_passes));
    SpreadMoments bif, pas;
    for (int n = 1; n <= n_passes; ++n) {
        bif = bif.bifurcation_step();
        pas = pas.pascal_step();
        out.rows.push_back({n, n * pass_length, std::sqrt(bif.position2) * pass_length,
                            std::sqrt(pas.position2) * pass_length});
    }

    out.fit_from = n_passes >= 1000 ? 100 : 1;
    std::vector<sensitivity::SeriesPoint> bif_pts, pas_pts;
    for (const auto& row : out.rows) {
        if (row.n_pass < out.fit_from) continue;
        bif_pts.push_back({row.distance, row.spread_bifurcation});
        pas_pts.push_back({row.distance, row.spread_pascal});
    }
    if (bif_pts.size() >= 3) {
        out.slope_bifurcation = sensitivity::fit_power(sensitivity::GrowthSeries(bif_pts)).exponent;
        out.slope_pascal = sensitivity::fit_power(sensitivity::GrowthSeries(pas_pts)).exponent;
        out.class_bifurcation = classify(out.slope_bifurcation);
        out.class_pascal = classify(out.slope_pascal);
    }
    return out;
}

void write_growth_csv(std::ostream& out, const GrowthComparison& comparison) {
    out << "n_pass,distance_m,spread_bifurcation,spread_pascal\n";
    char buf[128];
    for (const auto& r : comparison.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.n_pass, r.distance,
                      r.spread_bifurcation, r.spread_pascal);
        out << buf;
    }
}

}  // namespace axionsplit::pascal
