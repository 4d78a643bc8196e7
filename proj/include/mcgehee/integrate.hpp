#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/blowup.hpp"
#include "mcgehee/errors.hpp"
#include "mcgehee/system.hpp"
#include "mcgehee/trajectory.hpp"

namespace mcgehee {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.05;
    double initial_step = 0.0;  ///< 0 picks one from the initial derivative
    double min_step = 1e-14;
    double t_max = 50.0;        ///< length of the time span, always positive
    bool backward = false;      ///< integrate towards -t_max; samples are still stored in increasing time
    double exit_radius = 0.0;   ///< 0 means the domain radius r_E
    bool detect_fixed_points = true;
    double fixed_point_tol = 1e-10;
    int fixed_point_steps = 3;
    long max_steps = 10'000'000;

    /// Throws InputError unless rtol, atol lie in (0, 1e-2] and the spans are positive.
    void validate() const;
};

/// Thrown when the step size underflows; carries the partial trajectory.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, Trajectory partial)
        : Error(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

/// Autonomous ODE z' = rhs(z) with optional projection after accepted steps and
/// stop conditions: integration halts at the first sign change of a stop function
/// from negative to >= 0, located by bisection on the step's Hermite interpolant.
struct OdeProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> rhs;
    std::function<bool(Eigen::VectorXd&)> project;  ///< returns true if it changed the state
    struct Stop {
        std::function<double(const Eigen::VectorXd&)> fn;
        Termination reason;
    };
    std::vector<Stop> stops;
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> derivatives;
    Termination termination = Termination::TimeOut;
};

/// Embedded Dormand-Prince 5(4) pair with PI step-size control. A DomainError
/// raised by the right-hand side rejects the step and shrinks it.
OdeSolution solve_ode(const OdeProblem& problem, const Eigen::VectorXd& z0,
                      const IntegratorConfig& cfg);

Trajectory integrate_original(const LagrangianSystem& sys, const PhaseState& s0,
                              const IntegratorConfig& cfg);

Trajectory integrate_blown(const BlownSystem& bs, const McGeheeState& z0, const IntegratorConfig& cfg);

struct TimePair {
    double t = 0.0;
    double tau = 0.0;
};

/// Original time along an interior blown trajectory from dt = r^{1-l/2} dtau,
/// starting at t = 0 on the first sample. Uses the endpoint-corrected trapezoid
/// rule, with d/dtau r^{1-l/2} = (1 - l/2) nu r^{1-l/2} taken from the samples.
std::vector<TimePair> reparametrize_time(const BlownSystem& bs, const Trajectory& blown);

/// Maps an interior blown trajectory to phase space, with times from reparametrize_time
/// shifted by t0.
Trajectory blown_to_original(const BlownSystem& bs, const Trajectory& blown, double t0 = 0.0);

/// First time |x(t)| >= r_B; empty on time-out. Requires H(s0) < 0 and |x0| < r_B < r_E.
std::optional<double> escape_time(const LagrangianSystem& sys, const PhaseState& s0, double r_B,
                                  const IntegratorConfig& cfg);

/// Integrates s0 in both frames over [0, t_window] and returns the largest phase-space
/// distance between the original orbit and the reparametrized blown orbit mapped back by pi.
double flow_equivalence_discrepancy(const BlownSystem& bs, const PhaseState& s0, double t_window,
                                    const IntegratorConfig& cfg);

}  // namespace mcgehee
