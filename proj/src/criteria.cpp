#include "mcgehee/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mcgehee/errors.hpp"
#include "mcgehee/setdyn.hpp"

namespace mcgehee {

std::string to_string(Verdict v) {
    return v == Verdict::TotallyUnstable ? "totally-unstable" : "undecided";
}

GenericResult generic_criterion(const BlownSystem& bs, const CriticalPointSearch& search) {
    const JetData& jets = bs.system().jets();
    if (!jets.weak_magnetism) {
        std::ostringstream msg;
        msg << "weak magnetism fails: Delta = " << jets.Delta << " < 1";
        throw HypothesisError(msg.str());
    }
    const HypothesisCheck h = hypothesis_check(search);
    GenericResult out;
    if (h.morse && h.zero_regular) {
        out.verdict = Verdict::TotallyUnstable;
        return out;
    }
    if (!h.morse) {
        out.reason = search.continuum_warning ? "f has a continuum of critical points" : "f is not a Morse function";
    }
    if (!h.zero_regular) {
        out.reason += out.reason.empty() ? "" : "; ";
        out.reason += "zero is a critical value of f";
    }
    return out;
}

double criterion_function(const BlownSystem& bs, const Eigen::VectorXd& q) {
    const JetData& jets = bs.system().jets();
    if (!jets.mu) {
        throw PreconditionError("criterion function inapplicable: U is homogeneous and the metric is Euclidean");
    }
    const int mu = *jets.mu;
    double C = 0.0;
    if (jets.l2 && *jets.l2 - jets.l == mu) {
        C -= (*jets.l2 - jets.l) * jets.U_l2->evaluate(q);
    }
    if (jets.m && *jets.m == mu) {
        const int n = bs.dim();
        double contraction = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                contraction += jets.g_m[i][j].evaluate(q) * q[i] * q[j];
            }
        }
        C += *jets.m * jets.U_l.evaluate(q) * contraction;
    }
    return C;
}

NongenericResult nongeneric_criterion(const BlownSystem& bs, const CriticalPointSearch& search, double zero_tol,
                                      double c_tol) {
    const JetData& jets = bs.system().jets();
    if (!jets.mu) {
        throw PreconditionError("criterion function inapplicable: U is homogeneous and the metric is Euclidean");
    }
    if (!jets.weak_magnetism_ii) {
        std::ostringstream msg;
        msg << "magnetism hypothesis Delta > mu fails: Delta = " << jets.Delta << ", mu = " << *jets.mu;
        throw HypothesisError(msg.str());
    }
    NongenericResult out;
    for (const SphereCriticalPoint& cp : search.points) {
        if (cp.f_value > zero_tol) {
            continue;
        }
        const double C = criterion_function(bs, cp.q);
        out.C_values.emplace_back(cp.q, C);
        if (!(C > c_tol)) {
            out.offending.push_back(cp.q);
        }
    }
    if (out.offending.empty()) {
        out.verdict = Verdict::TotallyUnstable;
    } else {
        std::ostringstream msg;
        msg << "C(q) <= 0 at " << out.offending.size() << " critical point(s) with f(q) <= 0";
        out.reason = msg.str();
    }
    return out;
}

std::string CriterionReport::overall() const {
    if (strict_minimum) {
        return "stable-strict-minimum";
    }
    const bool generic_hit = generic && generic->verdict == Verdict::TotallyUnstable;
    const bool nongeneric_hit = nongeneric && nongeneric->verdict == Verdict::TotallyUnstable;
    if (generic_hit || nongeneric_hit) {
        return "totally-unstable";
    }
    if (!generic_error.empty() || !nongeneric_error.empty()) {
        return "hypothesis-error";
    }
    return "undecided";
}

CriterionReport analyze(const BlownSystem& bs, const CriticalPointSearch& search) {
    const JetData& jets = bs.system().jets();
    CriterionReport rep;
    rep.l = jets.l;
    rep.l2 = jets.l2;
    rep.d = jets.d;
    rep.Delta = jets.Delta;
    rep.m = jets.m;
    rep.mu = jets.mu;
    rep.hypotheses = hypothesis_check(search);
    rep.notes = search.warnings;
    rep.strict_minimum = !search.points.empty() &&
                         std::all_of(search.points.begin(), search.points.end(),
                                     [](const SphereCriticalPoint& p) { return p.f_value > 0.0 && !p.zero_critical_value; });
    if (rep.strict_minimum) {
        rep.notes.push_back("stable: strict minimum at jet level (empty critical and subcritical boundary)");
        return rep;
    }

    rep.generic_applicable = jets.weak_magnetism;
    try {
        rep.generic = generic_criterion(bs, search);
    } catch (const HypothesisError& e) {
        rep.generic_error = e.what();
    }

    rep.nongeneric_applicable = jets.mu.has_value() && jets.weak_magnetism_ii;
    if (!jets.mu) {
        rep.notes.push_back("non-generic criterion inapplicable: U is homogeneous and the metric is Euclidean");
    } else {
        try {
            rep.nongeneric = nongeneric_criterion(bs, search);
        } catch (const HypothesisError& e) {
            rep.nongeneric_error = e.what();
        }
    }
    rep.notes.push_back("criteria are evaluated on the critical points found by a multi-start search; completeness is not certified");
    return rep;
}

int EscapeSweep::escaped() const {
    return static_cast<int>(std::count_if(times.begin(), times.end(), [](const auto& t) { return t.has_value(); }));
}

EscapeSweep escape_sweep(const LagrangianSystem& sys, double r_B, int count, std::uint64_t seed,
                         const IntegratorConfig& cfg) {
    const int n = sys.dim();
    EscapeSweep sweep;
    sweep.r_B = r_B;
    sweep.r0 = r_B / 10.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> fraction(0.0, 0.9);
    const long max_tries = 200000;
    long tries = 0;
    while (static_cast<int>(sweep.starts.size()) < count) {
        if (++tries > max_tries) {
            throw PreconditionError("no subcritical start found at |x| = r_B/10");
        }
        Eigen::VectorXd x(n), u(n);
        for (int i = 0; i < n; ++i) {
            x[i] = normal(rng);
            u[i] = normal(rng);
        }
        if (x.norm() < 1e-12 || u.norm() < 1e-12) {
            continue;
        }
        x *= sweep.r0 / x.norm();
        const double U = sys.potential_at(x);
        if (!(U < 0.0)) {
            continue;
        }
        // kinetic energy g(v, v)/2 = theta (-U) with theta < 1 keeps H < 0
        const double guu = u.dot(sys.metric_at(x) * u);
        const double speed = std::sqrt(2.0 * fraction(rng) * -U / guu);
        sweep.starts.push_back(PhaseState{x, speed * u});
    }
    for (const PhaseState& s : sweep.starts) {
        sweep.times.push_back(escape_time(sys, s, r_B, cfg));
    }
    return sweep;
}

AsymptoticOrbit asymptotic_orbit(const BlownSystem& bs, const BoundaryFixedPoint& fp, double r_max,
                                 const IntegratorConfig& cfg, double eps) {
    if (fp.nu_star == 0.0) {
        throw NotHyperbolicError("asymptotic orbit needs nu* != 0");
    }
    const int n = bs.dim();
    const double qs_residual = blown_field(bs, fp.state()).norm();
    if (qs_residual > 1e-10) {
        throw ContractViolation("asymptotic orbit: fp is not a fixed point of the blown field");
    }
    const Eigen::VectorXd v = radial_eigenvector(bs, fp);
    Eigen::VectorXd w = eps * v;
    w.tail(n) += fp.nu_star * fp.q;
    AsymptoticOrbit out;
    out.seed = chart_to_state(fp, w);

    // nu* < 0 makes the radial direction stable: the orbit reaches fp forward in time,
    // so it is traced backward from the seed; nu* > 0 is the mirror case.
    const bool converging = fp.nu_star < 0.0;
    IntegratorConfig away = cfg;
    away.backward = converging;
    away.exit_radius = r_max;
    away.detect_fixed_points = false;
    out.blown = integrate_blown(bs, out.seed, away);

    const double seed_dist = (out.seed.pack() - fp.state().pack()).norm();
    IntegratorConfig toward = cfg;
    toward.backward = !converging;
    toward.t_max = std::log(10.0) / std::abs(fp.nu_star);
    toward.detect_fixed_points = false;
    const Trajectory back = integrate_blown(bs, out.seed, toward);
    const Eigen::VectorXd& end = converging ? back.back().state : back.front().state;
    out.reconvergence_ratio = (end - fp.state().pack()).norm() / seed_dist;

    out.original = blown_to_original(bs, out.blown);
    for (const Sample& s : out.original.samples) {
        out.max_abs_energy = std::max(out.max_abs_energy, std::abs(s.energy));
    }
    for (const Sample& s : out.blown.samples) {
        out.max_abs_rescaled_energy = std::max(out.max_abs_rescaled_energy, std::abs(s.energy));
    }
    const PhaseState near = converging ? out.original.phase_state(out.original.size() - 1) : out.original.phase_state(0);
    out.angular_error = (near.x.normalized() - fp.q).norm();
    return out;
}

namespace {

Eigen::VectorXd reflect_velocity(const Eigen::VectorXd& z, int n) {
    Eigen::VectorXd out = z;
    out.tail(n) = -out.tail(n);
    return out;
}

}  // namespace

BoomerangReport boomerang_demo(const BlownSystem& bs, const SphereCriticalPoint& cp, const std::vector<int>& ns,
                               double r_cut, const IntegratorConfig& cfg, double cloud_spacing) {
    if (!bs.system().magnetic_free()) {
        throw PreconditionError("boomerang demonstration needs a purely mechanical system (no magnetic term)");
    }
    if (!(cp.f_value < 0.0) ||
        std::any_of(cp.hess_eigs.begin(), cp.hess_eigs.end(), [](double lam) { return !(lam > 0.0); })) {
        throw PreconditionError("boomerang demonstration needs a non-degenerate local minimum q* of f with f(q*) < 0");
    }
    const int n = bs.dim();

    BoundaryFixedPoint fp;
    fp.q = cp.q;
    fp.f_value = cp.f_value;
    fp.nu_star = -std::sqrt(-2.0 * cp.f_value);
    fp.sphere_hess_eigs = cp.hess_eigs;
    const AsymptoticOrbit gamma = asymptotic_orbit(bs, fp, r_cut, cfg);

    IntegratorConfig het_cfg = cfg;
    het_cfg.detect_fixed_points = false;
    het_cfg.t_max = 10.0 / (bs.l() * std::sqrt(-2.0 * cp.f_value) / 2.0);
    const Trajectory het = heteroclinic_orbit(bs, cp, het_cfg);

    PointCloud reference = cloud_from_trajectory(gamma.blown, cloud_spacing);
    reference.append(cloud_from_trajectory(het, cloud_spacing));
    reference.append(cloud_from_trajectory(gamma.blown, cloud_spacing,
                                           [n](const Eigen::VectorXd& z) { return reflect_velocity(z, n); }));

    BoomerangReport rep;
    rep.ns = ns;
    IntegratorConfig run = cfg;
    run.exit_radius = r_cut;
    run.detect_fixed_points = false;
    for (int k : ns) {
        if (k <= 0) {
            throw InputError("boomerang indices must be positive");
        }
        const McGeheeState z0{1.0 / k, cp.q, Eigen::VectorXd::Zero(n)};
        run.backward = false;
        const Trajectory fwd = integrate_blown(bs, z0, run);
        run.backward = true;
        const Trajectory bwd = integrate_blown(bs, z0, run);
        PointCloud orbit = cloud_from_trajectory(fwd, cloud_spacing);
        orbit.append(cloud_from_trajectory(bwd, cloud_spacing));
        rep.distances.push_back(hausdorff_distance(orbit, reference));

        const double span = std::min(fwd.back().time, -bwd.front().time);
        for (double t = 0.0; t <= span; t += cloud_spacing) {
            const Eigen::VectorXd a = bwd.state_at(-t);
            const Eigen::VectorXd b = reflect_velocity(fwd.state_at(t), n);
            rep.reversal_error = std::max(rep.reversal_error, (a - b).norm());
        }
    }
    rep.monotone = true;
    for (size_t i = 1; i < rep.distances.size(); ++i) {
        if (rep.distances[i] > 1.1 * rep.distances[i - 1]) {
            rep.monotone = false;
        }
    }
    return rep;
}

}  // namespace mcgehee
