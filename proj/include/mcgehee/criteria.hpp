#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mcgehee/blowup.hpp"
#include "mcgehee/boundary.hpp"
#include "mcgehee/integrate.hpp"

namespace mcgehee {

enum class Verdict { TotallyUnstable, Undecided };
std::string to_string(Verdict v);

struct GenericResult {
    Verdict verdict = Verdict::Undecided;
    std::string reason;  ///< empty when totally unstable
};

/// Totally unstable when f is Morse with zero as a regular value.
/// Throws HypothesisError when Delta < 1.
GenericResult generic_criterion(const BlownSystem& bs, const CriticalPointSearch& search);

/// C(q) = -[l2-l1 = mu] (l2-l1) U_l2(q) + [m = mu] m U_l1(q) sum_ij g^(m)_ij(q) q^i q^j.
/// Throws PreconditionError when mu is unbounded (homogeneous U and Euclidean metric).
double criterion_function(const BlownSystem& bs, const Eigen::VectorXd& q);

struct NongenericResult {
    Verdict verdict = Verdict::Undecided;
    std::vector<std::pair<Eigen::VectorXd, double>> C_values;  ///< over critical q with f(q) <= 0
    std::vector<Eigen::VectorXd> offending;                    ///< points where C(q) <= tol
    std::string reason;
};

/// Totally unstable when C(q) > c_tol on every found critical q with f(q) <= zero_tol.
/// Throws HypothesisError unless Delta > mu.
NongenericResult nongeneric_criterion(const BlownSystem& bs, const CriticalPointSearch& search,
                                      double zero_tol = 1e-8, double c_tol = 1e-10);

struct CriterionReport {
    int l = 0;
    std::optional<int> l2;
    std::optional<int> d;
    double Delta = kInfinity;
    std::optional<int> m;
    std::optional<int> mu;
    HypothesisCheck hypotheses;
    bool strict_minimum = false;  ///< f > 0 on the sphere: empty critical and subcritical boundary

    bool generic_applicable = false;
    std::optional<GenericResult> generic;
    std::string generic_error;

    bool nongeneric_applicable = false;
    std::optional<NongenericResult> nongeneric;
    std::string nongeneric_error;

    std::vector<std::string> notes;

    /// "totally-unstable", "undecided", "hypothesis-error" or "stable-strict-minimum".
    std::string overall() const;
};

CriterionReport analyze(const BlownSystem& bs, const CriticalPointSearch& search);

struct EscapeSweep {
    double r_B = 0.0;
    double r0 = 0.0;
    std::vector<PhaseState> starts;
    std::vector<std::optional<double>> times;
    int escaped() const;
};

/// `count` random subcritical starts with |x0| = r_B/10, each run through escape_time.
/// Throws PreconditionError when no subcritical direction is found at that radius.
EscapeSweep escape_sweep(const LagrangianSystem& sys, double r_B, int count, std::uint64_t seed,
                         const IntegratorConfig& cfg);

struct AsymptoticOrbit {
    Trajectory blown;     ///< interior orbit ordered in forward time, ending at the seed
    Trajectory original;  ///< the same orbit in phase space
    McGeheeState seed;
    double max_abs_energy = 0.0;          ///< max |H| along the original orbit
    double max_abs_rescaled_energy = 0.0; ///< max |H~| along the blown orbit
    double angular_error = 0.0;           ///< |x/|x| - q*| at the sample closest to p
    double reconvergence_ratio = 0.0;     ///< distance to fp after a short forward run over the seed distance
};

/// Interior orbit converging to fp (nu* < 0, forward) or emanating from it (nu* > 0).
/// Seeds at fp + eps * radial eigenvector and integrates away from fp until r >= r_max.
AsymptoticOrbit asymptotic_orbit(const BlownSystem& bs, const BoundaryFixedPoint& fp, double r_max,
                                 const IntegratorConfig& cfg, double eps = 1e-6);

struct BoomerangReport {
    std::vector<int> ns;
    std::vector<double> distances;  ///< Hausdorff distance to the reference cloud, McGehee coordinates
    double reversal_error = 0.0;    ///< backward orbit vs reflected forward orbit
    bool monotone = false;          ///< non-increasing up to 10% slack
};

/// Orbits of (1/n, q*, 0) against asymptotic orbit, heteroclinic orbit and reversed
/// asymptotic orbit. Requires a magnetic-free system and a local minimum q* of f with f < 0.
BoomerangReport boomerang_demo(const BlownSystem& bs, const SphereCriticalPoint& cp, const std::vector<int>& ns,
                               double r_cut, const IntegratorConfig& cfg, double cloud_spacing = 0.01);

}  // namespace mcgehee
