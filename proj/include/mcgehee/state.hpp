#pragma once

#include <Eigen/Dense>

namespace mcgehee {

/// A point (x, v) of the tangent bundle of the configuration ball.
struct PhaseState {
    Eigen::VectorXd x;
    Eigen::VectorXd v;

    Eigen::VectorXd pack() const;
    static PhaseState unpack(const Eigen::VectorXd& z, int n);
};

struct PhaseVelocity {
    Eigen::VectorXd dx;
    Eigen::VectorXd dv;

    Eigen::VectorXd pack() const;
};

/// McGehee coordinates (r, q, y): x = r q, v = r^{l/2} y, |q| = 1.
/// r may be negative on the extended manifold.
struct McGeheeState {
    double r = 0.0;
    Eigen::VectorXd q;
    Eigen::VectorXd y;

    int dim() const { return static_cast<int>(q.size()); }
    /// Radial velocity <q, y>.
    double nu() const { return q.dot(y); }
    /// Tangential part y - nu q.
    Eigen::VectorXd y_tangent() const { return y - nu() * q; }

    /// Layout [r, q_1..q_n, y_1..y_n].
    Eigen::VectorXd pack() const;
    static McGeheeState unpack(const Eigen::VectorXd& z, int n);
};

struct BlownVelocity {
    double dr = 0.0;
    Eigen::VectorXd dq;
    Eigen::VectorXd dy;

    Eigen::VectorXd pack() const;
    double norm() const { return pack().norm(); }
};

}  // namespace mcgehee
