#include "mcgehee/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mcgehee/errors.hpp"

namespace mcgehee {

namespace {

std::string num(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string vec(const Eigen::VectorXd& v) {
    std::string s = "(";
    for (int i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + num(v[i]);
    }
    return s + ")";
}

std::string opt_degree(const std::optional<int>& d) { return d ? std::to_string(*d) : "inf"; }

nlohmann::json opt_json(const std::optional<int>& d) {
    return d ? nlohmann::json(*d) : nlohmann::json(nullptr);
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string analysis_text(const LagrangianSystem& sys, const CriterionReport& rep,
                          const std::optional<EscapeSweep>& sweep) {
    std::ostringstream o;
    o << "system\n";
    o << "  dimension: " << sys.dim() << "\n";
    o << "  domain radius: " << num(sys.domain_radius()) << "\n";
    o << "  potential: " << sys.potential().to_string() << "\n";
    o << "jets\n";
    o << "  l: " << rep.l << "\n";
    o << "  U_l: " << sys.jets().U_l.germ().to_string() << "\n";
    o << "  l2: " << opt_degree(rep.l2) << "\n";
    o << "  d: " << opt_degree(rep.d) << "\n";
    o << "  Delta: " << num(rep.Delta) << "\n";
    o << "  m: " << opt_degree(rep.m) << "\n";
    o << "  mu: " << opt_degree(rep.mu) << "\n";
    o << "hypotheses\n";
    o << "  weak magnetism (Delta >= 1): " << (sys.jets().weak_magnetism ? "yes" : "no") << "\n";
    o << "  weak magnetism II (Delta > mu): " << (sys.jets().weak_magnetism_ii ? "yes" : "no") << "\n";
    o << "  f Morse: " << (rep.hypotheses.morse ? "yes" : "no") << "\n";
    o << "  zero regular value of f: " << (rep.hypotheses.zero_regular ? "yes" : "no") << "\n";
    o << "criteria\n";
    if (rep.strict_minimum) {
        o << "  skipped: f > 0 on the sphere\n";
    } else {
        if (rep.generic) {
            o << "  generic: " << to_string(rep.generic->verdict);
            if (!rep.generic->reason.empty()) {
                o << " (" << rep.generic->reason << ")";
            }
            o << "\n";
        } else {
            o << "  generic: hypothesis error (" << rep.generic_error << ")\n";
        }
        if (rep.nongeneric) {
            o << "  non-generic: " << to_string(rep.nongeneric->verdict);
            if (!rep.nongeneric->reason.empty()) {
                o << " (" << rep.nongeneric->reason << ")";
            }
            o << "\n";
            for (const auto& [q, C] : rep.nongeneric->C_values) {
                o << "    C" << vec(q) << " = " << num(C) << "\n";
            }
        } else if (!rep.nongeneric_error.empty()) {
            o << "  non-generic: hypothesis error (" << rep.nongeneric_error << ")\n";
        } else {
            o << "  non-generic: inapplicable\n";
        }
    }
    o << "verdict: " << rep.overall() << "\n";
    if (sweep) {
        o << "escape sweep\n";
        o << "  r_B: " << num(sweep->r_B) << ", r0: " << num(sweep->r0) << "\n";
        o << "  escaped: " << sweep->escaped() << " of " << sweep->times.size() << "\n";
        for (size_t i = 0; i < sweep->times.size(); ++i) {
            o << "    start " << i << ": " << (sweep->times[i] ? num(*sweep->times[i]) : std::string("no escape"))
              << "\n";
        }
    }
    if (!rep.notes.empty()) {
        o << "notes\n";
        for (const auto& n : rep.notes) {
            o << "  " << n << "\n";
        }
    }
    return o.str();
}

std::string analysis_json(const LagrangianSystem& sys, const CriterionReport& rep,
                          const std::optional<EscapeSweep>& sweep) {
    nlohmann::ordered_json j;
    j["dimension"] = sys.dim();
    j["jets"] = {{"l", rep.l},
                 {"l2", opt_json(rep.l2)},
                 {"d", opt_json(rep.d)},
                 {"Delta", std::isinf(rep.Delta) ? nlohmann::json(nullptr) : nlohmann::json(rep.Delta)},
                 {"m", opt_json(rep.m)},
                 {"mu", opt_json(rep.mu)}};
    j["hypotheses"] = {{"weak_magnetism", sys.jets().weak_magnetism},
                       {"weak_magnetism_ii", sys.jets().weak_magnetism_ii},
                       {"morse", rep.hypotheses.morse},
                       {"zero_regular", rep.hypotheses.zero_regular}};
    j["strict_minimum"] = rep.strict_minimum;
    if (rep.generic) {
        j["generic"] = {{"verdict", to_string(rep.generic->verdict)}, {"reason", rep.generic->reason}};
    } else {
        j["generic"] = {{"verdict", rep.strict_minimum ? "skipped" : "hypothesis-error"}, {"reason", rep.generic_error}};
    }
    if (rep.nongeneric) {
        nlohmann::ordered_json cv = nlohmann::ordered_json::array();
        for (const auto& [q, C] : rep.nongeneric->C_values) {
            cv.push_back({{"q", to_std(q)}, {"C", C}});
        }
        j["nongeneric"] = {{"verdict", to_string(rep.nongeneric->verdict)},
                           {"reason", rep.nongeneric->reason},
                           {"C_values", cv}};
    } else {
        const std::string v = !rep.nongeneric_error.empty() ? "hypothesis-error"
                              : rep.strict_minimum          ? "skipped"
                                                            : "inapplicable";
        j["nongeneric"] = {{"verdict", v}, {"reason", rep.nongeneric_error}};
    }
    j["verdict"] = rep.overall();
    if (sweep) {
        nlohmann::ordered_json times = nlohmann::ordered_json::array();
        for (const auto& t : sweep->times) {
            times.push_back(t ? nlohmann::ordered_json(*t) : nlohmann::ordered_json(nullptr));
        }
        j["escape_sweep"] = {{"r_B", sweep->r_B}, {"r0", sweep->r0}, {"escaped", sweep->escaped()}, {"times", times}};
    }
    j["notes"] = rep.notes;
    return j.dump(2) + "\n";
}

std::string catalog_text(const FixedPointCatalog& cat) {
    std::ostringstream o;
    o << "critical points of f: " << cat.search.points.size() << "\n";
    o << "fixed points: " << cat.points.size() << "\n";
    if (cat.search.continuum_warning) {
        o << "warning: continuum of critical points\n";
    }
    for (const auto& n : cat.notes) {
        o << "note: " << n << "\n";
    }
    for (size_t i = 0; i < cat.points.size(); ++i) {
        const auto& fp = cat.points[i];
        o << "\n[" << i << "]\n";
        o << "  q: " << vec(fp.q) << "\n";
        o << "  f: " << num(fp.f_value) << "\n";
        o << "  nu: " << num(fp.nu_star) << "\n";
        o << "  sphere hessian:";
        for (double lam : fp.sphere_hess_eigs) {
            o << " " << num(lam);
        }
        o << "\n";
        if (fp.linearized) {
            o << "  eigenvalues:";
            for (const auto& k : fp.flow_eigs) {
                o << " (" << num(k.real()) << ", " << num(k.imag()) << ")";
            }
            o << "\n";
            o << "  stable/unstable: " << fp.stable_dim << "/" << fp.unstable_dim << "\n";
            o << "  class: " << to_string(fp.boundary_class) << "\n";
            o << "  jordan: " << (fp.jordan_degenerate ? "yes" : "no") << "\n";
            o << "  eigen cross-check error: "
              << (std::isnan(fp.eigen_cross_error) ? std::string("skipped") : num(fp.eigen_cross_error)) << "\n";
        } else {
            o << "  class: non-hyperbolic (nu = 0)\n";
        }
    }
    return o.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const int n = traj.dim;
    const bool blown = traj.frame == Frame::Blown;
    out << "time," << (blown ? "r" : "norm_x");
    for (int i = 1; i <= n; ++i) {
        out << (blown ? ",q" : ",x") << i;
    }
    for (int i = 1; i <= n; ++i) {
        out << (blown ? ",y" : ",v") << i;
    }
    out << ",energy,nu\n";
    out << std::setprecision(17);
    for (const Sample& s : traj.samples) {
        out << s.time << ",";
        if (blown) {
            out << s.state[0];
            for (int i = 1; i <= 2 * n; ++i) {
                out << "," << s.state[i];
            }
        } else {
            out << s.state.head(n).norm();
            for (int i = 0; i < 2 * n; ++i) {
                out << "," << s.state[i];
            }
        }
        out << "," << s.energy << "," << s.nu << "\n";
    }
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream o;
    write_trajectory_csv(o, traj);
    return o.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InputError("cannot write '" + tmp + "'");
        }
        out << content;
        if (!out.flush()) {
            throw InputError("write failed for '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw InputError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

}  // namespace mcgehee
