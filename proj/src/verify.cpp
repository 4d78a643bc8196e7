#include "mcgehee/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "mcgehee/blowup.hpp"
#include "mcgehee/errors.hpp"

namespace mcgehee {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd random_unit(int n, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    do {
        for (int i = 0; i < n; ++i) {
            v[i] = normal(rng);
        }
    } while (v.norm() < 1e-8);
    return v.normalized();
}

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::optional<PhaseState> random_subcritical(const LagrangianSystem& sys, double rmin, double rmax, Rng& rng) {
    const int n = sys.dim();
    for (int tries = 0; tries < 20000; ++tries) {
        const Eigen::VectorXd x = uniform(rng, rmin, rmax) * random_unit(n, rng);
        const double U = sys.potential_at(x);
        if (U < 0.0) {
            const Eigen::VectorXd u = random_unit(n, rng);
            const double speed = std::sqrt(2.0 * uniform(rng, 0.0, 0.9) * -U / u.dot(sys.metric_at(x) * u));
            return PhaseState{x, speed * u};
        }
    }
    return std::nullopt;
}

std::optional<McGeheeState> random_boundary_subcritical(const BlownSystem& bs, Rng& rng) {
    const int n = bs.dim();
    for (int tries = 0; tries < 20000; ++tries) {
        const Eigen::VectorXd q = random_unit(n, rng);
        const double f = bs.U_l().evaluate(q);
        if (f < 0.0) {
            const double radius = std::sqrt(-2.0 * f) * uniform(rng, 0.0, 1.0);
            return McGeheeState{0.0, q, radius * random_unit(n, rng)};
        }
    }
    return std::nullopt;
}

CheckResult run_check(const std::string& name, double tol, const std::function<double(std::string&)>& body) {
    CheckResult r;
    r.name = name;
    r.tolerance = tol;
    try {
        r.value = body(r.detail);
        r.passed = r.value <= tol;
    } catch (const std::exception& e) {
        r.passed = false;
        r.value = std::nan("");
        r.detail = std::string("error: ") + e.what();
    }
    return r;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const LagrangianSystem& sys, const VerifyOptions& opts) {
    const int n = sys.dim();
    const double r_E = sys.domain_radius();
    Rng rng(opts.seed);
    std::vector<CheckResult> out;

    out.push_back(run_check("euler-identity", 1e-12, [&](std::string&) {
        double worst = 0.0;
        for (int deg : sys.potential().degrees()) {
            const HomogeneousPoly P(sys.potential().homogeneous_part(deg), deg);
            for (int k = 0; k < opts.samples; ++k) {
                const Eigen::VectorXd x = uniform(rng, 0.0, 1.0) * random_unit(n, rng);
                const double p = P.evaluate(x);
                worst = std::max(worst, std::abs(P.gradient_at(x).dot(x) - deg * p) / (1.0 + std::abs(p)));
            }
        }
        return worst;
    }));

    out.push_back(run_check("radial-reassembly", 1e-12, [&](std::string&) {
        const RadialSplit split = radial_split(sys.potential());
        double scale = 0.0;
        for (const auto& [alpha, c] : sys.potential().terms()) {
            scale += std::abs(c);
        }
        double worst = 0.0;
        const double rb = std::min(1.0, r_E);
        for (int k = 0; k < opts.samples; ++k) {
            const double r = uniform(rng, -rb, rb);
            const Eigen::VectorXd q = random_unit(n, rng);
            worst = std::max(worst, std::abs(sys.potential_at(r * q) - split.reassemble(r, q)) / scale);
        }
        return worst;
    }));

    const BlownSystem bs(sys);

    out.push_back(run_check("energy-conservation", 1e-8, [&](std::string& detail) {
        auto s0 = random_subcritical(sys, 0.1 * r_E, 0.5 * r_E, rng);
        if (!s0) {
            detail = "no subcritical start found; used a low-speed start";
            s0 = PhaseState{0.3 * r_E * random_unit(n, rng), 0.01 * random_unit(n, rng)};
        }
        IntegratorConfig cfg = opts.integrator;
        cfg.t_max = 10.0;
        cfg.detect_fixed_points = false;
        const Trajectory traj = integrate_original(sys, *s0, cfg);
        const double H0 = traj.front().energy;
        double worst = 0.0;
        for (const Sample& s : traj.samples) {
            worst = std::max(worst, std::abs(s.energy - H0) / (1.0 + std::abs(H0)));
        }
        return worst;
    }));

    out.push_back(run_check("boundary-energy-residual", 1e-6, [&](std::string& detail) {
        auto z0 = random_boundary_subcritical(bs, rng);
        if (!z0) {
            detail = "no subcritical boundary state; used a small-velocity boundary state";
            z0 = McGeheeState{0.0, random_unit(n, rng), 0.1 * random_unit(n, rng)};
        }
        // H~ grows like exp(-l int nu) off the subcritical region, so the fallback run is short.
        IntegratorConfig cfg = opts.integrator;
        cfg.t_max = detail.empty() ? 5.0 : 2.0;
        cfg.detect_fixed_points = false;
        return boundary_energy_ode_residual(bs, integrate_blown(bs, *z0, cfg));
    }));

    out.push_back(run_check("nu-derivative", 1e-6, [&](std::string&) {
        double worst = 0.0;
        for (int k = 0; k < opts.samples; ++k) {
            const McGeheeState z{uniform(rng, 0.05, 0.5) * r_E, random_unit(n, rng), random_unit(n, rng)};
            const Eigen::VectorXd dz = blown_field(bs, z).pack();
            const double h = 1e-5;
            const McGeheeState zp = McGeheeState::unpack(z.pack() + h * dz, n);
            const McGeheeState zm = McGeheeState::unpack(z.pack() - h * dz, n);
            const double fd = (zp.nu() - zm.nu()) / (2.0 * h);
            const double xi = nu_derivative(bs, z);
            worst = std::max(worst, std::abs(fd - xi) / (1.0 + std::abs(xi)));
        }
        return worst;
    }));

    out.push_back(run_check("nu-monotone-boundary", 1e-9, [&](std::string& detail) {
        double worst = 0.0;
        int runs = 0;
        IntegratorConfig cfg = opts.integrator;
        cfg.t_max = 10.0;
        for (int k = 0; k < 10; ++k) {
            const auto z0 = random_boundary_subcritical(bs, rng);
            if (!z0) {
                detail = "no subcritical boundary states";
                return 0.0;
            }
            const Trajectory traj = integrate_blown(bs, *z0, cfg);
            ++runs;
            for (size_t i = 1; i < traj.size(); ++i) {
                worst = std::max(worst, traj.samples[i - 1].nu - traj.samples[i].nu);
            }
        }
        detail = std::to_string(runs) + " boundary runs";
        return worst;
    }));

    out.push_back(run_check("flow-equivalence", 1e-6, [&](std::string& detail) {
        auto s0 = random_subcritical(sys, 0.1 * r_E, 0.4 * r_E, rng);
        if (!s0) {
            detail = "no subcritical start found; used a low-speed start";
            s0 = PhaseState{0.3 * r_E * random_unit(n, rng), 0.01 * random_unit(n, rng)};
        }
        return flow_equivalence_discrepancy(bs, *s0, 1.0, opts.integrator);
    }));

    out.push_back(run_check("eigenvalue-cross-check", 1e-5, [&](std::string& detail) {
        const FixedPointCatalog cat = build_catalog(bs, opts.search);
        double worst = 0.0;
        int checked = 0;
        for (const auto& fp : cat.points) {
            if (fp.linearized && !std::isnan(fp.eigen_cross_error)) {
                worst = std::max(worst, fp.eigen_cross_error);
                ++checked;
            }
        }
        detail = std::to_string(checked) + " of " + std::to_string(cat.points.size()) + " fixed points cross-checked";
        return worst;
    }));

    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::string format_results(const std::vector<CheckResult>& results) {
    std::ostringstream o;
    for (const auto& r : results) {
        o << (r.passed ? "PASS " : "FAIL ") << r.name << "  value=" << r.value << "  tol=" << r.tolerance;
        if (!r.detail.empty()) {
            o << "  (" << r.detail << ")";
        }
        o << "\n";
    }
    o << (all_passed(results) ? "all checks passed\n" : "some checks failed\n");
    return o.str();
}

}  // namespace mcgehee
