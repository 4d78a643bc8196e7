#pragma once

#include <cmath>
#include <random>

#include "mcgehee/blowup.hpp"
#include "mcgehee/system.hpp"

namespace testsys {

using mcgehee::Germ;
using mcgehee::LagrangianSystem;
using mcgehee::MagneticPotential;
using mcgehee::MetricField;

inline Germ poly(int n, int trunc, std::vector<std::pair<mcgehee::Exponent, double>> terms) {
    return Germ::from_terms(n, trunc, terms);
}

// U = cos x - 1 truncated at degree `trunc` (even), so U_2 = -x^2/2.
inline LagrangianSystem pendulum(int trunc = 8, double r_E = 1.5) {
    Germ U(1, trunc);
    double fact = 1.0;
    for (int k = 1; 2 * k <= trunc; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        U.add_term({2 * k}, (k % 2 ? -1.0 : 1.0) / fact);
    }
    return LagrangianSystem::newtonian(U, r_E);
}

inline LagrangianSystem plane(double a, double b, double r_E = 1.0) {
    Germ U(2, 2);
    U.add_term({2, 0}, a);
    U.add_term({0, 2}, b);
    return LagrangianSystem::newtonian(U, r_E);
}

// x2^2 - x1^4
inline LagrangianSystem quartic_saddle(double r_E = 1.0) {
    return LagrangianSystem::newtonian(poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}}), r_E);
}

// x2^2 + x1^3
inline LagrangianSystem cubic_undecided(double r_E = 1.0) {
    return LagrangianSystem::newtonian(poly(2, 3, {{{0, 2}, 1.0}, {{3, 0}, 1.0}}), r_E);
}

// x2^2 - x1^4 with A = (0, x1^2): d = 2, Delta = 1, mu = 2.
inline LagrangianSystem quartic_saddle_magnetic(double r_E = 1.0) {
    MagneticPotential A = MagneticPotential::zero(2, 4);
    A.A[1] = poly(2, 4, {{{2, 0}, 1.0}});
    return LagrangianSystem::create(poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}}), MetricField::euclidean(2, 4), A,
                                    r_E);
}

// l = 3 with a metric and a magnetic term, Delta = 3 - 3/2 = 1.5.
inline LagrangianSystem cubic_full(double r_E = 1.0) {
    const int T = 5;
    const Germ U = poly(2, T, {{{3, 0}, -1.0}, {{1, 2}, 0.5}, {{0, 3}, 0.3}, {{4, 0}, 0.2}, {{2, 2}, -0.1}});
    MetricField g = MetricField::euclidean(2, T);
    g.g[0][0] = poly(2, T, {{{0, 0}, 1.0}, {{1, 0}, 0.3}, {{0, 2}, 0.2}});
    g.g[0][1] = g.g[1][0] = poly(2, T, {{{1, 1}, 0.1}});
    g.g[1][1] = poly(2, T, {{{0, 0}, 1.0}, {{0, 1}, -0.2}});
    MagneticPotential A = MagneticPotential::zero(2, T);
    A.A[0] = poly(2, T, {{{1, 2}, 0.4}});
    A.A[1] = poly(2, T, {{{3, 0}, -0.3}, {{0, 3}, 0.1}});
    return LagrangianSystem::create(U, g, A, r_E);
}

// l = 2 with a metric and a magnetic term, Delta = 3 - 1 = 2.
inline LagrangianSystem quadratic_full(double r_E = 1.0) {
    const int T = 4;
    const Germ U = poly(2, T, {{{2, 0}, -1.0}, {{0, 2}, 0.5}, {{2, 1}, 0.3}, {{0, 4}, -0.2}});
    MetricField g = MetricField::euclidean(2, T);
    g.g[0][0] = poly(2, T, {{{0, 0}, 1.0}, {{0, 1}, 0.2}});
    g.g[0][1] = g.g[1][0] = poly(2, T, {{{1, 0}, -0.1}});
    g.g[1][1] = poly(2, T, {{{0, 0}, 1.0}, {{2, 0}, 0.3}});
    MagneticPotential A = MagneticPotential::zero(2, T);
    A.A[0] = poly(2, T, {{{1, 2}, 0.5}});
    A.A[1] = poly(2, T, {{{3, 0}, 0.2}});
    return LagrangianSystem::create(U, g, A, r_E);
}

// Three dimensions, l = 2, metric and magnetism.
inline LagrangianSystem spatial_full(double r_E = 1.0) {
    const int T = 4;
    const Germ U = poly(3, T, {{{2, 0, 0}, -1.0}, {{0, 2, 0}, 0.5}, {{0, 0, 2}, 0.8}, {{1, 1, 1}, 0.3}});
    MetricField g = MetricField::euclidean(3, T);
    g.g[0][0] = poly(3, T, {{{0, 0, 0}, 1.0}, {{0, 0, 1}, 0.2}});
    g.g[1][2] = g.g[2][1] = poly(3, T, {{{1, 0, 0}, 0.1}});
    MagneticPotential A = MagneticPotential::zero(3, T);
    A.A[0] = poly(3, T, {{{0, 2, 1}, 0.3}});
    A.A[2] = poly(3, T, {{{1, 2, 0}, -0.2}});
    return LagrangianSystem::create(U, g, A, r_E);
}

// Riemann normal coordinates of a constant curvature K metric to second order,
// g_ij = delta_ij - (K/3)(delta_ij |x|^2 - x_i x_j), with U = -x1^2 + x2^2 + x1^5.
inline LagrangianSystem normal_coordinates(double K = 0.6, double r_E = 1.0) {
    const int T = 5;
    const Germ U = poly(2, T, {{{2, 0}, -1.0}, {{0, 2}, 1.0}, {{5, 0}, 1.0}});
    MetricField g = MetricField::euclidean(2, T);
    const double c = K / 3.0;
    // delta_11 |x|^2 - x1 x1 = x2^2, delta_22 |x|^2 - x2 x2 = x1^2, off-diagonal -(-x1 x2)
    g.g[0][0] = poly(2, T, {{{0, 0}, 1.0}, {{0, 2}, -c}});
    g.g[1][1] = poly(2, T, {{{0, 0}, 1.0}, {{2, 0}, -c}});
    g.g[0][1] = g.g[1][0] = poly(2, T, {{{1, 1}, c}});
    return LagrangianSystem::create(U, g, MagneticPotential::zero(2, T), r_E);
}

inline Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = normal(rng);
    }
    return v.normalized();
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) {
        v[i++] = x;
    }
    return v;
}

}  // namespace testsys
