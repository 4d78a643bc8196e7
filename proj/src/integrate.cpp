#include "mcgehee/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace mcgehee {

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0 && rtol <= 1e-2) || !(atol > 0.0 && atol <= 1e-2)) {
        throw InputError("rtol and atol must lie in (0, 1e-2]");
    }
    if (!(max_step > 0.0) || !(t_max > 0.0) || !(min_step > 0.0)) {
        throw InputError("max_step, min_step and t_max must be positive");
    }
    if (initial_step < 0.0 || exit_radius < 0.0) {
        throw InputError("initial_step and exit_radius must be non-negative");
    }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMaxShrink = 0.2;
constexpr double kMaxGrow = 10.0;

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  double atol, double rtol) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        sum += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

OdeSolution solve_ode(const OdeProblem& problem, const Eigen::VectorXd& z0, const IntegratorConfig& cfg) {
    cfg.validate();
    const double dir = cfg.backward ? -1.0 : 1.0;
    const double t_end = dir * cfg.t_max;

    OdeSolution sol;
    Eigen::VectorXd y = z0;
    if (problem.project) {
        problem.project(y);
    }
    Eigen::VectorXd k1 = problem.rhs(y);
    double t = 0.0;
    sol.times.push_back(t);
    sol.states.push_back(y);
    sol.derivatives.push_back(k1);

    std::vector<double> stop_values;
    for (const auto& s : problem.stops) {
        stop_values.push_back(s.fn(y));
    }

    double h = cfg.initial_step;
    if (h == 0.0) {
        const double yn = std::max(y.norm(), 1e-3);
        const double fn = k1.norm();
        h = fn > 1e-12 ? std::min(0.01 * yn / fn, 1e-2) : 1e-2;
    }
    h = std::min(h, cfg.max_step);

    double facold = 1e-4;
    int quiet_steps = 0;
    bool last_rejected = false;
    Eigen::VectorXd k2, k3, k4, k5, k6, k7, ynew, err;

    for (long step = 0; step < cfg.max_steps; ++step) {
        if (std::abs(t_end - t) <= 1e-14 * std::max(1.0, std::abs(t_end))) {
            sol.termination = Termination::TimeOut;
            return sol;
        }
        const double remaining = std::abs(t_end - t);
        h = std::min(h, remaining);
        if (h < cfg.min_step && h < remaining) {
            sol.termination = Termination::StepUnderflow;
            return sol;
        }
        const double hs = dir * h;
        try {
            k2 = problem.rhs(y + hs * (a21 * k1));
            k3 = problem.rhs(y + hs * (a31 * k1 + a32 * k2));
            k4 = problem.rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
            k5 = problem.rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            k6 = problem.rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            ynew = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            k7 = problem.rhs(ynew);
        } catch (const DomainError&) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, ynew, cfg.atol, cfg.rtol);
        if (!std::isfinite(en)) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        const double fac11 = std::pow(std::max(en, 1e-300), kExpo);
        if (en > 1.0) {
            h /= std::min(1.0 / kMaxShrink, fac11 / kSafety);
            last_rejected = true;
            continue;
        }

        // accepted
        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMaxShrink);
        double hnew = h / fac;
        if (last_rejected) {
            hnew = std::min(hnew, h);
        }
        facold = std::max(en, 1e-4);
        last_rejected = false;

        const double tnew = t + hs;
        if (problem.project && problem.project(ynew)) {
            k7 = problem.rhs(ynew);
        }

        // stop conditions
        bool stopped = false;
        for (size_t i = 0; i < problem.stops.size(); ++i) {
            const double gnew = problem.stops[i].fn(ynew);
            if (stop_values[i] < 0.0 && gnew >= 0.0) {
                double lo = 0.0;
                double hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (problem.stops[i].fn(hermite_value(y, k1, ynew, k7, hs, mid)) >= 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Eigen::VectorXd yev = hermite_value(y, k1, ynew, k7, hs, hi);
                Eigen::VectorXd dev = hermite_derivative(y, k1, ynew, k7, hs, hi);
                if (hi * h > 0.0) {
                    sol.times.push_back(t + hi * hs);
                    sol.states.push_back(std::move(yev));
                    sol.derivatives.push_back(std::move(dev));
                }
                sol.termination = problem.stops[i].reason;
                stopped = true;
                break;
            }
            stop_values[i] = gnew;
        }
        if (stopped) {
            return sol;
        }

        t = tnew;
        y = ynew;
        k1 = k7;
        sol.times.push_back(t);
        sol.states.push_back(y);
        sol.derivatives.push_back(k1);

        if (cfg.detect_fixed_points) {
            quiet_steps = k1.norm() < cfg.fixed_point_tol ? quiet_steps + 1 : 0;
            if (quiet_steps >= cfg.fixed_point_steps) {
                sol.termination = Termination::FixedPoint;
                return sol;
            }
        }
        h = std::min(hnew, cfg.max_step);
    }
    sol.termination = Termination::TimeOut;
    return sol;
}

namespace {

// The field raises DomainError at |x| >= r_E, so the exit sphere sits just inside the
// ball to let a step land beyond it.
double exit_radius(double domain_radius, const IntegratorConfig& cfg) {
    const double wall = domain_radius * (1.0 - 1e-6);
    return cfg.exit_radius > 0.0 ? std::min(cfg.exit_radius, wall) : wall;
}

Trajectory assemble(Frame frame, int n, OdeSolution sol, bool backward,
                    const std::function<void(Sample&)>& annotate) {
    Trajectory traj;
    traj.frame = frame;
    traj.dim = n;
    traj.termination = sol.termination;
    traj.samples.reserve(sol.times.size());
    for (size_t i = 0; i < sol.times.size(); ++i) {
        Sample s;
        s.time = sol.times[i];
        s.state = std::move(sol.states[i]);
        s.derivative = std::move(sol.derivatives[i]);
        annotate(s);
        traj.samples.push_back(std::move(s));
    }
    if (backward) {
        std::reverse(traj.samples.begin(), traj.samples.end());
    }
    return traj;
}

double phase_nu(const LagrangianSystem& sys, const PhaseState& s) {
    if (s.x.norm() == 0.0) {
        return 0.0;
    }
    return to_mcgehee(sys, s).nu();
}

}  // namespace

Trajectory integrate_original(const LagrangianSystem& sys, const PhaseState& s0, const IntegratorConfig& cfg) {
    sys.check_domain(s0.x);
    const int n = sys.dim();
    const double R = exit_radius(sys.domain_radius(), cfg);
    OdeProblem problem;
    problem.rhs = [&sys, n](const Eigen::VectorXd& z) {
        return original_field(sys, PhaseState::unpack(z, n)).pack();
    };
    problem.stops.push_back({[n, R](const Eigen::VectorXd& z) { return z.head(n).norm() - R; },
                             Termination::DomainExit});
    auto annotate = [&sys, n](Sample& s) {
        const PhaseState ps = PhaseState::unpack(s.state, n);
        s.energy = energy(sys, ps);
        s.nu = phase_nu(sys, ps);
    };
    OdeSolution sol = solve_ode(problem, s0.pack(), cfg);
    const bool underflow = sol.termination == Termination::StepUnderflow;
    Trajectory traj = assemble(Frame::Original, n, std::move(sol), cfg.backward, annotate);
    if (underflow) {
        throw IntegrationError("step size underflow in the original flow", std::move(traj));
    }
    return traj;
}

Trajectory integrate_blown(const BlownSystem& bs, const McGeheeState& z0, const IntegratorConfig& cfg) {
    const int n = bs.dim();
    if (z0.q.size() != n || z0.y.size() != n) {
        throw InputError("McGehee state dimension does not match system dimension");
    }
    if (!(std::abs(z0.r) < bs.system().domain_radius())) {
        throw DomainError("|r0| >= r_E");
    }
    const double R = exit_radius(bs.system().domain_radius(), cfg);
    OdeProblem problem;
    problem.rhs = [&bs, n](const Eigen::VectorXd& z) {
        return blown_field(bs, McGeheeState::unpack(z, n)).pack();
    };
    problem.project = [n](Eigen::VectorXd& z) {
        const double norm = z.segment(1, n).norm();
        if (std::abs(norm - 1.0) > 1e-10) {
            z.segment(1, n) /= norm;
            return true;
        }
        return false;
    };
    problem.stops.push_back({[R](const Eigen::VectorXd& z) { return std::abs(z[0]) - R; },
                             Termination::DomainExit});
    auto annotate = [&bs, n](Sample& s) {
        const McGeheeState z = McGeheeState::unpack(s.state, n);
        s.energy = rescaled_energy(bs, z);
        s.nu = z.nu();
    };
    OdeSolution sol = solve_ode(problem, z0.pack(), cfg);
    const bool underflow = sol.termination == Termination::StepUnderflow;
    Trajectory traj = assemble(Frame::Blown, n, std::move(sol), cfg.backward, annotate);
    if (underflow) {
        throw IntegrationError("step size underflow in the McGehee flow", std::move(traj));
    }
    return traj;
}

std::vector<TimePair> reparametrize_time(const BlownSystem& bs, const Trajectory& blown) {
    if (blown.frame != Frame::Blown) {
        throw PreconditionError("reparametrize_time needs a blown-frame trajectory");
    }
    const double a = 1.0 - 0.5 * bs.l();
    std::vector<TimePair> out;
    out.reserve(blown.size());
    double t = 0.0;
    double g_prev = 0.0;
    double dg_prev = 0.0;
    for (size_t i = 0; i < blown.size(); ++i) {
        const Sample& s = blown.samples[i];
        const double r = s.state[0];
        if (!(r > 0.0)) {
            throw ContractViolation("reparametrize_time needs r > 0 on every sample");
        }
        const double g = std::pow(r, a);
        const double dg = a * s.nu * g;
        if (i > 0) {
            const double h = s.time - blown.samples[i - 1].time;
            t += 0.5 * h * (g_prev + g) + h * h / 12.0 * (dg_prev - dg);
        }
        out.push_back(TimePair{t, s.time});
        g_prev = g;
        dg_prev = dg;
    }
    return out;
}

Trajectory blown_to_original(const BlownSystem& bs, const Trajectory& blown, double t0) {
    const auto times = reparametrize_time(bs, blown);
    const LagrangianSystem& sys = bs.system();
    const int n = sys.dim();
    const double l = bs.l();
    Trajectory out;
    out.frame = Frame::Original;
    out.dim = n;
    out.termination = blown.termination;
    for (size_t i = 0; i < blown.size(); ++i) {
        const Sample& b = blown.samples[i];
        const McGeheeState z = McGeheeState::unpack(b.state, n);
        Sample s;
        s.time = t0 + times[i].t;
        const PhaseState ps = from_mcgehee(sys, z);
        s.state = ps.pack();
        // d/dt = r^{l/2 - 1} d/dtau
        const McGeheeState dz = McGeheeState::unpack(b.derivative, n);
        const double scale = std::pow(z.r, 0.5 * l - 1.0);
        Eigen::VectorXd dx = dz.r * z.q + z.r * dz.q;
        Eigen::VectorXd dv = std::pow(z.r, 0.5 * l) * (0.5 * l * dz.r / z.r * z.y + dz.y);
        s.derivative = PhaseVelocity{scale * dx, scale * dv}.pack();
        s.energy = energy(sys, ps);
        s.nu = z.nu();
        if (!out.samples.empty() && !(s.time > out.samples.back().time)) {
            continue;
        }
        out.samples.push_back(std::move(s));
    }
    return out;
}

std::optional<double> escape_time(const LagrangianSystem& sys, const PhaseState& s0, double r_B,
                                  const IntegratorConfig& cfg) {
    if (!(energy(sys, s0) < 0.0)) {
        throw PreconditionError("escape_time requires a subcritical start, H(s0) < 0");
    }
    if (!(s0.x.norm() < r_B && r_B < sys.domain_radius())) {
        throw PreconditionError("escape_time requires |x0| < r_B < r_E");
    }
    IntegratorConfig c = cfg;
    c.exit_radius = r_B;
    c.backward = false;
    const Trajectory traj = integrate_original(sys, s0, c);
    if (traj.termination == Termination::DomainExit) {
        return traj.back().time;
    }
    return std::nullopt;
}

double flow_equivalence_discrepancy(const BlownSystem& bs, const PhaseState& s0, double t_window,
                                    const IntegratorConfig& cfg) {
    const LagrangianSystem& sys = bs.system();
    IntegratorConfig c = cfg;
    c.backward = false;
    c.detect_fixed_points = false;
    c.t_max = t_window;
    const Trajectory orig = integrate_original(sys, s0, c);
    const double t_end = orig.back().time;

    const McGeheeState z0 = to_mcgehee(sys, s0);
    double tau_span = t_window;
    Trajectory blown;
    std::vector<TimePair> times;
    for (int attempt = 0; attempt < 40; ++attempt) {
        c.t_max = tau_span;
        blown = integrate_blown(bs, z0, c);
        times = reparametrize_time(bs, blown);
        if (times.back().t >= t_end || blown.termination != Termination::TimeOut) {
            break;
        }
        tau_span *= 2.0;
    }

    const int n = sys.dim();
    double worst = 0.0;
    for (size_t i = 0; i < blown.size(); ++i) {
        if (times[i].t > t_end) {
            break;
        }
        const PhaseState mapped = from_mcgehee(sys, McGeheeState::unpack(blown.samples[i].state, n));
        const Eigen::VectorXd reference = orig.state_at(times[i].t);
        worst = std::max(worst, (mapped.pack() - reference).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

}  // namespace mcgehee
