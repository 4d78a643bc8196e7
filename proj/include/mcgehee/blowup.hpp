#pragma once

#include <Eigen/Dense>

#include "mcgehee/state.hpp"
#include "mcgehee/system.hpp"
#include "mcgehee/trajectory.hpp"

namespace mcgehee {

/// Correction terms of the blown-up field and energy at a McGehee state:
/// field_correction is F_X, magnetic_correction is the bold F_X and
/// energy_correction is F_H.
struct Corrections {
    Eigen::VectorXd field_correction;
    Eigen::VectorXd magnetic_correction;
    double energy_correction = 0.0;
};

/// The McGehee blowup of a LagrangianSystem at the origin. All the r-divided
/// remainders are assembled from degree-graded evaluations of the germs, so
/// nothing is ever divided by r and every formula holds for r <= 0 as well
/// (the extended manifold).
class BlownSystem {
public:
    /// Throws PreconditionError when Delta < 0 (the magnetic term is singular at r = 0).
    explicit BlownSystem(LagrangianSystem sys);

    const LagrangianSystem& system() const { return sys_; }
    int dim() const { return sys_.dim(); }
    int l() const { return sys_.jets().l; }
    double Delta() const { return sys_.jets().Delta; }
    const HomogeneousPoly& U_l() const { return sys_.jets().U_l; }

    /// V_{>l}(r, q): grad U(r q) = r^{l-1} grad U_l(q) + r^l V(r, q).
    Eigen::VectorXd gradient_tail(double r, const Eigen::VectorXd& q) const;
    /// u_{>l}(r, q): U(r q) = r^l U_l(q) + r^{l+1} u(r, q).
    double potential_tail(double r, const Eigen::VectorXd& q) const;
    /// h_ab(r, q): g_ab(r q) = delta_ab + r h_ab(r, q).
    Eigen::MatrixXd metric_tail(double r, const Eigen::VectorXd& q) const;
    /// h^{ka}(r, q): g^{ka}(r q) = delta^{ka} + r h^{ka}(r, q).
    Eigen::MatrixXd inverse_metric_tail(double r, const Eigen::VectorXd& q) const;
    /// F_{ab,>=d}(r, q): F_ab(r q) = r^{d-1} F_{ab,>=d}(r, q). Zero when mu = 0.
    Eigen::MatrixXd field_strength_tail(double r, const Eigen::VectorXd& q) const;

    /// r^Delta with |r|^Delta for non-integer Delta; 0 without magnetism.
    double magnetic_factor(double r) const;

    Corrections corrections(const McGeheeState& z) const;

private:
    void check_radius(double r) const;

    LagrangianSystem sys_;
};

/// (x, v) -> (r, q, y). Throws BlowupPointError at x = 0.
McGeheeState to_mcgehee(const LagrangianSystem& sys, const PhaseState& s);
/// (r, q, y) -> (r q, r^{l/2} y); requires r >= 0. The boundary maps to (0, 0).
PhaseState from_mcgehee(const LagrangianSystem& sys, const McGeheeState& z);

/// r' = nu r, q' = y - nu q,
/// y' = -grad U_l(q) - (l/2) nu y + r F_X + r^Delta (bold F_X).
BlownVelocity blown_field(const BlownSystem& bs, const McGeheeState& z);

/// |y|^2/2 + U_l(q) + r F_H.
double rescaled_energy(const BlownSystem& bs, const McGeheeState& z);

/// d(nu)/dtau along the blown flow.
double nu_derivative(const BlownSystem& bs, const McGeheeState& z);

/// max over samples of |dH~/dtau + l nu H~|, the derivative taken by a central
/// difference along the recorded flow direction. Throws ContractViolation if
/// any sample leaves r = 0 by more than 1e-12.
double boundary_energy_ode_residual(const BlownSystem& bs, const Trajectory& boundary);

}  // namespace mcgehee
