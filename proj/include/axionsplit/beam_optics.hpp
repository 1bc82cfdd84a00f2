#pragma once

#include <span>
#include <utility>

namespace axionsplit::optics {

/// Largest |angle| (rad) accepted before the paraxial treatment is refused.
inline constexpr double kParaxialLimit = 0.1;

/// Chief ray: transverse offset from the optical axis (m) and paraxial slope (rad).
struct RayState {
    double position = 0.0;
    double angle = 0.0;

    friend bool operator==(const RayState&, const RayState&) = default;
};

/// Throws GuardViolation unless both fields are finite and |angle| < kParaxialLimit.
const RayState& check_paraxial(const RayState& ray);

/// 2x2 ray transfer matrix acting on (position, angle).
struct TransferMatrix {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    static constexpr TransferMatrix identity() { return {}; }

    double determinant() const { return a * d - b * c; }

    RayState apply(const RayState& ray) const;

    friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;
};

/// Matrix product `lhs * rhs`: `rhs` acts on the ray first.
TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs);

/// Free-space propagation over `distance` >= 0.
TransferMatrix propagation_matrix(double distance);

/// Thin lens / curved mirror of focal length `focal` (negative = defocusing).
/// An infinite focal length gives the identity.
TransferMatrix focusing_matrix(double focal);

/// Product of `matrices` listed in application order: the first entry acts
/// on the ray first, so the result is M[n-1] * ... * M[1] * M[0].
TransferMatrix compose(std::span<const TransferMatrix> matrices);

enum class BranchSign : int { plus = +1, minus = -1 };

inline constexpr double sign_value(BranchSign s) { return static_cast<double>(static_cast<int>(s)); }

/// One ray in, two rays out of the same point with angles offset by
/// +theta_split and -theta_split. The plus branch is returned first.
///
/// This is not a linear map, so it is deliberately not a TransferMatrix.
std::pair<RayState, RayState> split(const RayState& ray, double theta_split);

/// Second kick applied where a split branch leaves the field: the branch
/// angle moves by another `branch` * theta_split, so that a complete field
/// passage offsets the branch by +-2 theta_split.
RayState angular_enhance(const RayState& ray, double theta_split, BranchSign branch);

}  // namespace axionsplit::optics
