#include "mcgehee/state.hpp"

#include "mcgehee/errors.hpp"

namespace mcgehee {

Eigen::VectorXd PhaseState::pack() const {
    Eigen::VectorXd z(x.size() + v.size());
    z << x, v;
    return z;
}

PhaseState PhaseState::unpack(const Eigen::VectorXd& z, int n) {
    if (z.size() != 2 * n) {
        throw InputError("phase vector must have length 2n");
    }
    return PhaseState{z.head(n), z.tail(n)};
}

Eigen::VectorXd PhaseVelocity::pack() const {
    Eigen::VectorXd z(dx.size() + dv.size());
    z << dx, dv;
    return z;
}

Eigen::VectorXd McGeheeState::pack() const {
    Eigen::VectorXd z(1 + q.size() + y.size());
    z << r, q, y;
    return z;
}

McGeheeState McGeheeState::unpack(const Eigen::VectorXd& z, int n) {
    if (z.size() != 2 * n + 1) {
        throw InputError("McGehee vector must have length 2n + 1");
    }
    return McGeheeState{z[0], z.segment(1, n), z.tail(n)};
}

Eigen::VectorXd BlownVelocity::pack() const {
    Eigen::VectorXd z(1 + dq.size() + dy.size());
    z << dr, dq, dy;
    return z;
}

}  // namespace mcgehee
