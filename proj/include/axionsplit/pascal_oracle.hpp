#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace axionsplit::pascal {

/// Toy planar-planar cavity with the field filling the whole length. A pass
/// is: split at the field (momentum +-1 kick), then transit of one
/// pass_length. Angles are in units of one splitting quantum, so a beam of
/// momentum m moves m * pass_length per pass.
struct LatticeBeam {
    std::int64_t momentum = 0;  // units of P_y
    std::int64_t offset = 0;    // position in units of pass_length
    double weight = 1.0;

    friend bool operator==(const LatticeBeam&, const LatticeBeam&) = default;
};

struct LatticeEnsemble {
    std::vector<LatticeBeam> beams;
    double pass_length = 1.0;  // m

    static LatticeEnsemble initial(double pass_length = 1.0);

    double position(const LatticeBeam& beam) const {
        return static_cast<double>(beam.offset) * pass_length;
    }
    double total_weight() const;
    double mean_momentum() const;
    double mean_position() const;
    double rms_position() const;
    /// Total weight per momentum value.
    std::map<std::int64_t, double> momentum_spectrum() const;
};

enum class Merge { degenerate, none };

/// Momentum is conserved at the mirrors: children carry m + 1 and m - 1.
LatticeEnsemble step_bifurcation(const LatticeEnsemble& ensemble, Merge merge = Merge::degenerate);

/// Pascal-triangle bookkeeping: momentum resets to 0 at each reflection, so
/// the children always carry +1 and -1.
LatticeEnsemble step_pascal(const LatticeEnsemble& ensemble, Merge merge = Merge::degenerate);

/// Exact second moments of the position/momentum distribution, propagated
/// pass by pass without enumerating beams (lattice units).
struct SpreadMoments {
    double momentum2 = 0.0;  // E[m^2]
    double cross = 0.0;      // E[x m]
    double position2 = 0.0;  // E[x^2]

    SpreadMoments bifurcation_step() const;
    SpreadMoments pascal_step() const;
};

struct GrowthRow {
    int n_pass = 0;
    double distance = 0.0;
    double spread_bifurcation = 0.0;
    double spread_pascal = 0.0;
};

struct GrowthComparison {
    std::vector<GrowthRow> rows;
    double slope_bifurcation = 0.0;  // log-log slope of spread vs distance
    double slope_pascal = 0.0;
    int fit_from = 1;  // first n_pass of the slope fit
    std::string class_bifurcation;
    std::string class_pascal;
};

/// RMS position spread of both models for n = 1..n_passes. The slopes are
/// fitted over n >= 100 when n_passes >= 1000, otherwise over all rows.
GrowthComparison compare_growth(int n_passes, double pass_length = 1.0);

/// CSV with header n_pass,distance_m,spread_bifurcation,spread_pascal.
void write_growth_csv(std::ostream& out, const GrowthComparison& comparison);

}  // namespace axionsplit::pascal
