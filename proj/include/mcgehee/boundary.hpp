#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/blowup.hpp"
#include "mcgehee/germ.hpp"
#include "mcgehee/integrate.hpp"

namespace mcgehee {

struct CriticalSearchOptions {
    int seeds_per_dim_sq = 32;  ///< seed count is seeds_per_dim_sq * n^2
    std::uint64_t seed = 20240601;
    double merge_radius = 1e-6;
    double grad_tol = 1e-10;
    int max_newton_iterations = 200;
    double degeneracy_tol = 1e-8;  ///< |lambda^| < tol * |Hess U_l(q)| marks a degenerate point
    double zero_value_tol = 1e-8;  ///< |f(q)| < tol marks a zero critical value
    double cluster_radius = 0.25;  ///< angular radius used to detect continua of critical points
};

/// Critical point q of f = U_l restricted to the unit sphere.
struct SphereCriticalPoint {
    Eigen::VectorXd q;
    double f_value = 0.0;
    double lagrange = 0.0;          ///< l U_l(q), the multiplier in grad U_l(q) = lagrange q
    std::vector<double> hess_eigs;  ///< spectrum of Hess_q f, ascending
    int morse_index = 0;
    bool degenerate = false;
    bool zero_critical_value = false;
};

struct CriticalPointSearch {
    std::vector<SphereCriticalPoint> points;
    bool continuum_warning = false;
    std::vector<std::string> warnings;
    int seeds_used = 0;
    int seeds_converged = 0;
};

/// Orthonormal basis of the orthogonal complement of a unit vector, as columns.
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& q);

/// Multi-start projected Newton for grad U_l(q) - l U_l(q) q = 0 on the unit sphere.
/// n = 1 enumerates S^0 = {-1, +1}. Completeness is best effort.
CriticalPointSearch find_sphere_critical_points(const HomogeneousPoly& U_l,
                                                const CriticalSearchOptions& opts = {});

/// Spectrum of Hess_q f = (Hess U_l(q) - l U_l(q) id) restricted to the tangent space,
/// ascending. Throws ContractViolation when q is not critical to `tol`.
std::vector<double> sphere_hessian(const HomogeneousPoly& U_l, const Eigen::VectorXd& q,
                                   double tol = 1e-8);
/// Same using an explicit orthonormal tangent basis (columns).
std::vector<double> sphere_hessian(const HomogeneousPoly& U_l, const Eigen::VectorXd& q,
                                   const Eigen::MatrixXd& basis, double tol = 1e-8);

/// Classification of a fixed point inside the critical boundary, read from the
/// eigenvalues of its 2(n-1) tangential directions.
enum class BoundaryClass { Source, Sink, Saddle, Trivial, NonHyperbolic };
std::string to_string(BoundaryClass c);

struct BoundaryFixedPoint {
    Eigen::VectorXd q;
    double f_value = 0.0;
    double nu_star = 0.0;
    std::vector<double> sphere_hess_eigs;
    // filled by linearize_fixed_point
    bool linearized = false;
    std::vector<std::complex<double>> flow_eigs;     ///< closed form, 2n values
    std::vector<std::complex<double>> numeric_eigs;  ///< finite-difference Jacobian spectrum
    double eigen_cross_error = 0.0;                  ///< NaN when the check is skipped
    bool jordan_degenerate = false;
    int stable_dim = 0;
    int unstable_dim = 0;
    BoundaryClass boundary_class = BoundaryClass::NonHyperbolic;
    double field_residual = 0.0;

    McGeheeState state() const;
};

/// All fixed points (0, q, nu q) of the blown field with H~ = 0, for critical q with
/// f(q) <= 0, sorted by (f, nu, q lexicographic). Each is checked to satisfy
/// |blown_field| <= 1e-10 (recorded in field_residual).
std::vector<BoundaryFixedPoint> fixed_points(const BlownSystem& bs, const CriticalPointSearch& search,
                                             double zero_value_tol = 1e-8);

/// Closed-form spectrum {nu*, -l nu*} together with
/// k = -nu*(l/2+1)/2 +- sqrt(nu*^2 (l/2+1)^2 - 4 lambda^)/2 per tangent eigenvalue,
/// cross-validated against a central-difference Jacobian on the extended manifold.
/// Throws NotHyperbolicError when nu* = 0.
BoundaryFixedPoint linearize_fixed_point(const BlownSystem& bs, const BoundaryFixedPoint& fp);

/// Jacobian of the blown field at a boundary fixed point in the chart
/// (r, s, y) with q = normalize(q* + B s), B = tangent_basis(q*). Size 2n x 2n.
Eigen::MatrixXd boundary_jacobian(const BlownSystem& bs, const BoundaryFixedPoint& fp, double step = 1e-6);
/// Maps chart coordinates (r, s, y) around fp to a McGehee state.
McGeheeState chart_to_state(const BoundaryFixedPoint& fp, const Eigen::VectorXd& w);
/// Eigenvector of eigenvalue nu* with unit radial component, in chart coordinates.
Eigen::VectorXd radial_eigenvector(const BlownSystem& bs, const BoundaryFixedPoint& fp);

/// Y(tau) = A tanh(l A tau / 2), A = sqrt(-2 f).
double heteroclinic_profile(int l, double f_value, double tau);

/// Integrates the boundary system from (0, q*, 0) over [-tau_max, tau_max]
/// (cfg.t_max). Requires f(q*) < 0.
Trajectory heteroclinic_orbit(const BlownSystem& bs, const SphereCriticalPoint& cp,
                              const IntegratorConfig& cfg);

struct HypothesisCheck {
    bool morse = false;
    bool zero_regular = false;
};

HypothesisCheck hypothesis_check(const CriticalPointSearch& search);

/// Critical-point search, fixed points and their linearizations in one pass.
struct FixedPointCatalog {
    CriticalPointSearch search;
    std::vector<BoundaryFixedPoint> points;
    std::vector<std::string> notes;
};

FixedPointCatalog build_catalog(const BlownSystem& bs, const CriticalSearchOptions& opts = {});

}  // namespace mcgehee
