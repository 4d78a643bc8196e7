#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/germ.hpp"
#include "mcgehee/state.hpp"

namespace mcgehee {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Metric coefficients g_ab(x) as a symmetric matrix of germs.
struct MetricField {
    std::vector<std::vector<Germ>> g;

    static MetricField euclidean(int dim, int truncation);
    int dim() const { return static_cast<int>(g.size()); }
    bool is_euclidean() const;
};

/// One-form coefficients A_i(x) of the magnetic potential.
struct MagneticPotential {
    std::vector<Germ> A;

    static MagneticPotential zero(int dim, int truncation);
    int dim() const { return static_cast<int>(A.size()); }
    bool is_zero() const;
    /// F_ij = d_i A_j - d_j A_i as germs.
    std::vector<std::vector<Germ>> field_strength() const;
};

/// Jet bookkeeping for the potential, metric and magnetic form at the origin.
/// Unbounded degrees (Euclidean metric, zero magnetism, homogeneous potential)
/// are represented by empty optionals and an infinite Delta.
struct JetData {
    int l = 0;
    HomogeneousPoly U_l;
    std::optional<int> l2;
    std::optional<HomogeneousPoly> U_l2;
    std::optional<int> d;
    double Delta = kInfinity;
    std::optional<int> m;
    std::vector<std::vector<HomogeneousPoly>> g_m;  ///< g^(m)_ij, empty when m is unbounded
    std::optional<int> mu;                          ///< min{l2 - l, m}
    bool weak_magnetism = true;                     ///< Delta >= 1
    bool weak_magnetism_ii = false;                 ///< Delta > mu (false when mu is unbounded)
};

struct ValidationReport {
    std::vector<std::string> failures;
    std::optional<JetData> jets;
    bool ok() const { return failures.empty(); }
};

/// Checks every standing assumption on (U, g, mu, r_E) and computes the jet data.
ValidationReport validate(const Germ& potential, const MetricField& metric,
                          const MagneticPotential& magnetic, double domain_radius);

/// Lower-index-symmetric Christoffel symbols, Gamma(k, i, j) = Gamma^k_{ij}.
class Christoffel {
public:
    explicit Christoffel(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}
    int dim() const { return n_; }
    double& operator()(int k, int i, int j) { return data_[(k * n_ + i) * n_ + j]; }
    double operator()(int k, int i, int j) const { return data_[(k * n_ + i) * n_ + j]; }
    /// Gamma^k_{ij} u^i w^j
    Eigen::VectorXd contract(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const;

private:
    int n_;
    std::vector<double> data_;
};

/// Electromagnetic Lagrangian L = g(v,v)/2 + A(x)v - U(x) on the ball of radius r_E.
/// Immutable after construction.
class LagrangianSystem {
public:
    /// Validates and throws ValidationError naming the first failed condition.
    static LagrangianSystem create(Germ potential, MetricField metric, MagneticPotential magnetic,
                                   double domain_radius);
    static LagrangianSystem newtonian(Germ potential, double domain_radius);

    int dim() const { return n_; }
    double domain_radius() const { return r_E_; }
    const Germ& potential() const { return U_; }
    const MetricField& metric() const { return metric_; }
    const MagneticPotential& magnetic() const { return magnetic_; }
    const JetData& jets() const { return jets_; }
    bool euclidean() const { return euclidean_; }
    bool magnetic_free() const { return magnetic_free_; }

    /// Throws DomainError when |x| >= r_E.
    void check_domain(const Eigen::VectorXd& x) const;

    double potential_at(const Eigen::VectorXd& x) const { return U_.evaluate(x); }
    Eigen::VectorXd potential_gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd metric_at(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd field_strength_at(const Eigen::VectorXd& x) const;
    /// Germs of the metric derivatives, dmetric()[c][a][b] = d_c g_ab.
    const std::vector<std::vector<std::vector<Germ>>>& metric_derivatives() const { return dg_; }
    const std::vector<Germ>& potential_gradient_germs() const { return dU_; }
    const std::vector<std::vector<Germ>>& field_strength_germs() const { return F_; }

private:
    LagrangianSystem() = default;

    int n_ = 0;
    double r_E_ = 0.0;
    Germ U_;
    MetricField metric_;
    MagneticPotential magnetic_;
    JetData jets_;
    bool euclidean_ = true;
    bool magnetic_free_ = true;
    std::vector<Germ> dU_;
    std::vector<std::vector<std::vector<Germ>>> dg_;
    std::vector<std::vector<Germ>> F_;
};

/// Gamma^k_ij(x) = 1/2 g^{ka} (d_i g_aj + d_j g_ai - d_a g_ij). Throws NumericError on a
/// singular metric and DomainError outside the ball.
Christoffel christoffel(const LagrangianSystem& sys, const Eigen::VectorXd& x);
/// Same without the domain check; used by the blown-up field on the extended manifold.
Christoffel christoffel_unchecked(const LagrangianSystem& sys, const Eigen::VectorXd& x);

/// Inverse metric at x via a dense solve; NumericError when singular.
Eigen::MatrixXd inverse_metric(const LagrangianSystem& sys, const Eigen::VectorXd& x);

/// x' = v, v'^k = -g^{ka} d_a U - Gamma^k_ij v^i v^j + g^{ka} F_ab v^b.
PhaseVelocity original_field(const LagrangianSystem& sys, const PhaseState& s);

/// H(x, v) = g_x(v, v)/2 + U(x).
double energy(const LagrangianSystem& sys, const PhaseState& s);

}  // namespace mcgehee
