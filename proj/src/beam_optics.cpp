#include "axionsplit/beam_optics.hpp"

#include <cmath>
#include <sstream>

#include "axionsplit/errors.hpp"

namespace axionsplit::optics {

const RayState& check_paraxial(const RayState& ray) {
    if (!std::isfinite(ray.position) || !std::isfinite(ray.angle)) {
        throw GuardViolation("ray state is not finite");
    }
    if (std::abs(ray.angle) >= kParaxialLimit) {
        std::ostringstream msg;
        msg << "ray angle " << ray.angle << " rad exceeds the paraxial limit of " << kParaxialLimit
            << " rad";
        throw GuardViolation(msg.str());
    }
    return ray;
}

RayState TransferMatrix::apply(const RayState& ray) const {
    RayState out{a * ray.position + b * ray.angle, c * ray.position + d * ray.angle};
    return check_paraxial(out);
}

TransferMatrix operator*(const TransferMatrix& lhs, const TransferMatrix& rhs) {
    return {lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
            lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

TransferMatrix propagation_matrix(double distance) {
    if (!(distance >= 0.0) || !std::isfinite(distance)) {
        throw InvalidArgument("propagation distance must be finite and >= 0");
    }
    return {1.0, distance, 0.0, 1.0};
}

TransferMatrix focusing_matrix(double focal) {
    if (focal == 0.0 || std::isnan(focal)) {
        throw InvalidArgument("focal length must be non-zero");
    }
    if (std::isinf(focal)) return TransferMatrix::identity();
    return {1.0, 0.0, -1.0 / focal, 1.0};
}

TransferMatrix compose(std::span<const TransferMatrix> matrices) {
    if (matrices.empty()) throw InvalidArgument("compose needs at least one matrix");
    TransferMatrix total = matrices.front();
    for (auto it = matrices.begin() + 1; it != matrices.end(); ++it) total = *it * total;
    return total;
}

std::pair<RayState, RayState> split(const RayState& ray, double theta_split) {
    if (!(theta_split >= 0.0)) throw InvalidArgument("theta_split must be >= 0");
    check_paraxial(ray);
    if (theta_split == 0.0) return {ray, ray};
    RayState plus{ray.position, ray.angle + theta_split};
    RayState minus{ray.position, ray.angle - theta_split};
    return {check_paraxial(plus), check_paraxial(minus)};
}

RayState angular_enhance(const RayState& ray, double theta_split, BranchSign branch) {
    if (theta_split == 0.0) return check_paraxial(ray);
    return check_paraxial({ray.position, ray.angle + sign_value(branch) * theta_split});
}

}  // namespace axionsplit::optics
