#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcgehee/boundary.hpp"
#include "mcgehee/config.hpp"
#include "mcgehee/criteria.hpp"
#include "mcgehee/report.hpp"
#include "mcgehee/verify.hpp"

using namespace mcgehee;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    // integrate overrides
    std::string frame;
    std::vector<double> state;
    std::optional<double> t_max;
    bool backward = false;
};

RunConfig load(const Options& o) {
    RunConfig cfg = load_config(o.config);
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.search.seed = *o.seed;
    }
    return cfg;
}

std::string out_path(const Options& o, const std::string& name) {
    std::filesystem::create_directories(o.out);
    return (std::filesystem::path(o.out) / name).string();
}

double escape_radius(const RunConfig& cfg) { return cfg.escape.r_B > 0.0 ? cfg.escape.r_B : 0.5 * cfg.domain_radius; }

int cmd_analyze(const Options& o) {
    const RunConfig cfg = load(o);
    const BlownSystem bs(cfg.make_system());
    const CriticalPointSearch search = find_sphere_critical_points(bs.U_l(), cfg.search);
    const CriterionReport rep = analyze(bs, search);
    std::optional<EscapeSweep> sweep;
    if (rep.overall() == "totally-unstable") {
        sweep = escape_sweep(bs.system(), escape_radius(cfg), cfg.escape.count, cfg.seed, cfg.integrator);
    }
    write_file_atomic(out_path(o, "analyze.txt"), analysis_text(bs.system(), rep, sweep));
    write_file_atomic(out_path(o, "analyze.json"), analysis_json(bs.system(), rep, sweep));
    std::cout << "verdict: " << rep.overall() << "\n";
    return kExitOk;
}

int cmd_fixed_points(const Options& o) {
    const RunConfig cfg = load(o);
    const BlownSystem bs(cfg.make_system());
    const FixedPointCatalog cat = build_catalog(bs, cfg.search);
    write_file_atomic(out_path(o, "fixed_points.txt"), catalog_text(cat));
    std::cout << cat.points.size() << " fixed points\n";
    return kExitOk;
}

int cmd_integrate(const Options& o) {
    RunConfig cfg = load(o);
    const BlownSystem bs(cfg.make_system());
    const int n = bs.dim();
    Frame frame = cfg.integrate.frame;
    if (!o.frame.empty()) {
        frame = o.frame == "blown" ? Frame::Blown : Frame::Original;
    }
    std::vector<double> state = o.state.empty() ? cfg.integrate.state : o.state;
    if (o.t_max) {
        cfg.integrator.t_max = *o.t_max;
    }
    if (o.backward) {
        cfg.integrator.backward = true;
    }
    Trajectory traj;
    if (frame == Frame::Original) {
        if (static_cast<int>(state.size()) != 2 * n) {
            throw ConfigError("integrate.state must hold 2n numbers (x, v) for the original frame");
        }
        const Eigen::Map<const Eigen::VectorXd> z(state.data(), 2 * n);
        traj = integrate_original(bs.system(), PhaseState::unpack(z, n), cfg.integrator);
    } else {
        if (static_cast<int>(state.size()) != 2 * n + 1) {
            throw ConfigError("integrate.state must hold 2n+1 numbers (r, q, y) for the blown frame");
        }
        const Eigen::Map<const Eigen::VectorXd> z(state.data(), 2 * n + 1);
        McGeheeState z0 = McGeheeState::unpack(z, n);
        z0.q.normalize();
        traj = integrate_blown(bs, z0, cfg.integrator);
    }
    write_file_atomic(out_path(o, "trajectory.csv"), trajectory_csv(traj));
    std::cout << traj.size() << " samples, termination: " << to_string(traj.termination) << "\n";
    return kExitOk;
}

int cmd_escape(const Options& o) {
    const RunConfig cfg = load(o);
    const LagrangianSystem sys = cfg.make_system();
    const int n = sys.dim();
    const double r_B = escape_radius(cfg);
    if (cfg.escape.state) {
        if (static_cast<int>(cfg.escape.state->size()) != 2 * n) {
            throw ConfigError("escape.state must hold 2n numbers (x, v)");
        }
        const Eigen::Map<const Eigen::VectorXd> z(cfg.escape.state->data(), 2 * n);
        const PhaseState s0 = PhaseState::unpack(z, n);
        const auto t = escape_time(sys, s0, r_B, cfg.integrator);
        IntegratorConfig ic = cfg.integrator;
        ic.exit_radius = r_B;
        write_file_atomic(out_path(o, "escape.csv"), trajectory_csv(integrate_original(sys, s0, ic)));
        std::ostringstream txt;
        txt << "r_B: " << r_B << "\nescape time: " << (t ? std::to_string(*t) : std::string("none")) << "\n";
        write_file_atomic(out_path(o, "escape.txt"), txt.str());
        std::cout << txt.str();
        return kExitOk;
    }
    const EscapeSweep sweep = escape_sweep(sys, r_B, cfg.escape.count, cfg.seed, cfg.integrator);
    std::ostringstream txt;
    txt << std::setprecision(12);
    txt << "r_B: " << sweep.r_B << "\nr0: " << sweep.r0 << "\nescaped: " << sweep.escaped() << " of "
        << sweep.times.size() << "\n";
    for (size_t i = 0; i < sweep.times.size(); ++i) {
        txt << "start " << i << ": ";
        if (sweep.times[i]) {
            txt << *sweep.times[i] << "\n";
        } else {
            txt << "no escape\n";
        }
    }
    write_file_atomic(out_path(o, "escape.txt"), txt.str());
    std::cout << "escaped " << sweep.escaped() << " of " << sweep.times.size() << "\n";
    return kExitOk;
}

int cmd_boomerang(const Options& o) {
    const RunConfig cfg = load(o);
    const BlownSystem bs(cfg.make_system());
    const CriticalPointSearch search = find_sphere_critical_points(bs.U_l(), cfg.search);
    const SphereCriticalPoint* cp = nullptr;
    if (cfg.boomerang.critical_point) {
        const int i = *cfg.boomerang.critical_point;
        if (i < 0 || i >= static_cast<int>(search.points.size())) {
            throw ConfigError("boomerang.critical_point index out of range");
        }
        cp = &search.points[i];
    } else {
        for (const auto& p : search.points) {
            if (p.f_value < 0.0 && std::all_of(p.hess_eigs.begin(), p.hess_eigs.end(), [](double v) { return v > 0.0; })) {
                cp = &p;
                break;
            }
        }
        if (!cp) {
            throw PreconditionError("no local minimum of f with negative value");
        }
    }
    const BoomerangReport rep =
        boomerang_demo(bs, *cp, cfg.boomerang.ns, cfg.boomerang.r_cut, cfg.integrator, cfg.boomerang.spacing);
    std::ostringstream txt;
    txt << std::setprecision(10);
    txt << "n,hausdorff_distance\n";
    for (size_t i = 0; i < rep.ns.size(); ++i) {
        txt << rep.ns[i] << "," << rep.distances[i] << "\n";
    }
    txt << "monotone (10% slack): " << (rep.monotone ? "yes" : "no") << "\n";
    txt << "time-reversal error: " << rep.reversal_error << "\n";
    write_file_atomic(out_path(o, "boomerang.txt"), txt.str());
    std::cout << txt.str();
    return kExitOk;
}

int cmd_verify(const Options& o) {
    const RunConfig cfg = load(o);
    VerifyOptions vo;
    vo.seed = cfg.seed;
    vo.integrator = cfg.integrator;
    vo.search = cfg.search;
    const auto results = run_verify_suite(cfg.make_system(), vo);
    const std::string txt = format_results(results);
    write_file_atomic(out_path(o, "verify.txt"), txt);
    std::cout << txt;
    return all_passed(results) ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"McGehee blowup of electromagnetic Lagrangian systems at an equilibrium"};
    app.require_subcommand(1);
    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output directory");
        sub->add_option("--seed", opts.seed, "override the config seed");
    };
    auto* analyze_cmd = app.add_subcommand("analyze", "jets, hypotheses and instability verdicts");
    auto* fixed_cmd = app.add_subcommand("fixed-points", "critical-boundary fixed-point catalog");
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate one orbit to CSV");
    auto* escape_cmd = app.add_subcommand("escape", "escape time or random escape sweep");
    auto* boomerang_cmd = app.add_subcommand("boomerang", "boomerang convergence experiment");
    auto* verify_cmd = app.add_subcommand("verify", "invariant suites");
    for (auto* sub : {analyze_cmd, fixed_cmd, integrate_cmd, escape_cmd, boomerang_cmd, verify_cmd}) {
        add_common(sub);
    }
    integrate_cmd->add_option("--frame", opts.frame, "original or blown")->check(CLI::IsMember({"original", "blown"}));
    integrate_cmd->add_option("--state", opts.state, "initial state, (x, v) or (r, q, y)")->delimiter(',');
    integrate_cmd->add_option("--t-max", opts.t_max, "time span");
    integrate_cmd->add_flag("--backward", opts.backward, "integrate backward in time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(opts);
        if (*fixed_cmd) return cmd_fixed_points(opts);
        if (*integrate_cmd) return cmd_integrate(opts);
        if (*escape_cmd) return cmd_escape(opts);
        if (*boomerang_cmd) return cmd_boomerang(opts);
        if (*verify_cmd) return cmd_verify(opts);
    } catch (const InputError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
