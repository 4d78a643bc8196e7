#include "mcgehee/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "mcgehee/errors.hpp"

namespace mcgehee {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi (3 - sqrt 5)

std::vector<Eigen::VectorXd> sphere_seeds(int n, int count, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> seeds;
    seeds.reserve(count);
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            const double theta = 2.0 * M_PI * (k + 0.25) / count;
            Eigen::VectorXd q(2);
            q << std::cos(theta), std::sin(theta);
            seeds.push_back(q);
        }
    } else if (n == 3) {
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - (2.0 * k + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = k * kGoldenAngle;
            Eigen::VectorXd q(3);
            q << rho * std::cos(phi), rho * std::sin(phi), z;
            seeds.push_back(q);
        }
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        while (static_cast<int>(seeds.size()) < count) {
            Eigen::VectorXd q(n);
            for (int i = 0; i < n; ++i) {
                q[i] = normal(rng);
            }
            const double norm = q.norm();
            if (norm > 1e-8) {
                seeds.push_back(q / norm);
            }
        }
    }
    return seeds;
}

Eigen::VectorXd sphere_gradient(const HomogeneousPoly& U_l, const Eigen::VectorXd& q) {
    const Eigen::VectorXd g = U_l.gradient_at(q);
    return g - g.dot(q) * q;
}

double coefficient_scale(const HomogeneousPoly& U_l) {
    double s = 0.0;
    for (const auto& [alpha, c] : U_l.germ().terms()) {
        s = std::max(s, std::abs(c));
    }
    return std::max(s, 1.0);
}

struct NewtonResult {
    Eigen::VectorXd q;
    bool converged = false;
};

NewtonResult sphere_newton(const HomogeneousPoly& U_l, Eigen::VectorXd q, const CriticalSearchOptions& opts,
                           double scale) {
    const int n = U_l.dim();
    for (int it = 0; it < opts.max_newton_iterations; ++it) {
        const Eigen::VectorXd g = U_l.gradient_at(q);
        const double lambda = g.dot(q);
        const Eigen::VectorXd grad = g - lambda * q;
        if (grad.norm() <= 1e-15 * scale) {
            return {q, true};
        }
        const Eigen::MatrixXd B = tangent_basis(q);
        const Eigen::MatrixXd Hr =
            B.transpose() * (U_l.hessian_at(q) - lambda * Eigen::MatrixXd::Identity(n, n)) * B;
        const Eigen::VectorXd gr = B.transpose() * g;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hr);
        const Eigen::VectorXd proj = es.eigenvectors().transpose() * gr;
        Eigen::VectorXd coef = Eigen::VectorXd::Zero(proj.size());
        const double cutoff = 1e-13 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), scale);
        for (int i = 0; i < proj.size(); ++i) {
            if (std::abs(es.eigenvalues()[i]) > cutoff) {
                coef[i] = -proj[i] / es.eigenvalues()[i];
            }
        }
        Eigen::VectorXd step = B * (es.eigenvectors() * coef);
        const double len = step.norm();
        if (len > 0.5) {
            step *= 0.5 / len;
        }
        q = (q + step).normalized();
        if (len < 1e-14) {
            break;
        }
    }
    const bool ok = sphere_gradient(U_l, q).norm() <= opts.grad_tol * scale;
    return {q, ok};
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            return a[i] < b[i];
        }
    }
    return false;
}

// Connected components of `points` under |a - b| < radius; returns the largest size.
int largest_cluster(const std::vector<Eigen::VectorXd>& points, double radius) {
    const int m = static_cast<int>(points.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) {
            i = parent[i] = parent[parent[i]];
        }
        return i;
    };
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if ((points[i] - points[j]).norm() < radius) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<int> size(m, 0);
    int best = 0;
    for (int i = 0; i < m; ++i) {
        best = std::max(best, ++size[find(i)]);
    }
    return best;
}

SphereCriticalPoint describe_point(const HomogeneousPoly& U_l, const Eigen::VectorXd& q,
                                   const CriticalSearchOptions& opts) {
    SphereCriticalPoint cp;
    cp.q = q;
    for (int i = 0; i < cp.q.size(); ++i) {
        if (std::abs(cp.q[i]) < 1e-15) {
            cp.q[i] = 0.0;
        }
    }
    cp.q.normalize();
    cp.f_value = U_l.evaluate(cp.q);
    cp.lagrange = U_l.degree() * cp.f_value;
    cp.zero_critical_value = std::abs(cp.f_value) < opts.zero_value_tol;
    if (cp.q.size() > 1) {
        cp.hess_eigs = sphere_hessian(U_l, cp.q, std::max(1e-8, opts.grad_tol * coefficient_scale(U_l)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(U_l.hessian_at(cp.q), Eigen::EigenvaluesOnly);
        const double hess_norm = es.eigenvalues().cwiseAbs().maxCoeff();
        for (double lam : cp.hess_eigs) {
            if (lam < 0.0) {
                ++cp.morse_index;
            }
            if (std::abs(lam) < opts.degeneracy_tol * hess_norm || hess_norm == 0.0) {
                cp.degenerate = true;
            }
        }
    }
    return cp;
}

// Chart map around a boundary fixed point: w = (r, s, y) with q = normalize(q* + B s).
McGeheeState chart_state(const Eigen::VectorXd& qstar, const Eigen::MatrixXd& B, const Eigen::VectorXd& w) {
    const int n = static_cast<int>(qstar.size());
    McGeheeState z;
    z.r = w[0];
    z.q = (qstar + B * w.segment(1, n - 1)).normalized();
    z.y = w.tail(n);
    return z;
}

Eigen::VectorXd chart_field(const BlownSystem& bs, const Eigen::VectorXd& qstar, const Eigen::MatrixXd& B,
                            const Eigen::VectorXd& w) {
    const int n = static_cast<int>(qstar.size());
    const McGeheeState z = chart_state(qstar, B, w);
    const BlownVelocity dz = blown_field(bs, z);
    // s = B^T q / <q, q*>
    const double c = z.q.dot(qstar);
    const double dc = dz.dq.dot(qstar);
    Eigen::VectorXd out(2 * n);
    out[0] = dz.dr;
    out.segment(1, n - 1) = (B.transpose() * dz.dq * c - B.transpose() * z.q * dc) / (c * c);
    out.tail(n) = dz.dy;
    return out;
}

}  // namespace

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& q) {
    const int n = static_cast<int>(q.size());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return Q.rightCols(n - 1);
}

CriticalPointSearch find_sphere_critical_points(const HomogeneousPoly& U_l, const CriticalSearchOptions& opts) {
    const int n = U_l.dim();
    if (n < 1 || U_l.is_zero()) {
        throw InputError("critical-point search needs n >= 1 and a non-zero U_l");
    }
    CriticalPointSearch out;
    if (n == 1) {
        for (double s : {-1.0, 1.0}) {
            Eigen::VectorXd q(1);
            q << s;
            out.points.push_back(describe_point(U_l, q, opts));
        }
        out.seeds_used = out.seeds_converged = 2;
        return out;
    }

    const double scale = coefficient_scale(U_l);
    const int count = std::max(1, opts.seeds_per_dim_sq * n * n);
    std::vector<Eigen::VectorXd> found;
    for (const Eigen::VectorXd& seed : sphere_seeds(n, count, opts.seed)) {
        ++out.seeds_used;
        const NewtonResult res = sphere_newton(U_l, seed, opts, scale);
        if (!res.converged) {
            continue;
        }
        ++out.seeds_converged;
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Eigen::VectorXd& p) {
            return (p - res.q).norm() < opts.merge_radius;
        });
        if (!duplicate) {
            found.push_back(res.q);
        }
    }
    if (out.seeds_converged < out.seeds_used) {
        std::ostringstream msg;
        msg << (out.seeds_used - out.seeds_converged) << " of " << out.seeds_used
            << " Newton starts did not converge";
        out.warnings.push_back(msg.str());
    }

    for (const Eigen::VectorXd& q : found) {
        out.points.push_back(describe_point(U_l, q, opts));
    }
    std::sort(out.points.begin(), out.points.end(), [](const SphereCriticalPoint& a, const SphereCriticalPoint& b) {
        if (a.f_value != b.f_value) {
            return a.f_value < b.f_value;
        }
        return lex_less(a.q, b.q);
    });

    std::vector<Eigen::VectorXd> degenerate;
    for (const auto& cp : out.points) {
        if (cp.degenerate) {
            degenerate.push_back(cp.q);
        }
    }
    if (largest_cluster(degenerate, opts.cluster_radius) >= 3) {
        out.continuum_warning = true;
        out.warnings.push_back("degenerate critical points cluster: f appears to have a continuum of critical points");
    }
    return out;
}

std::vector<double> sphere_hessian(const HomogeneousPoly& U_l, const Eigen::VectorXd& q, double tol) {
    return sphere_hessian(U_l, q, tangent_basis(q), tol);
}

std::vector<double> sphere_hessian(const HomogeneousPoly& U_l, const Eigen::VectorXd& q,
                                   const Eigen::MatrixXd& basis, double tol) {
    const int n = static_cast<int>(q.size());
    if (n != U_l.dim() || basis.rows() != n || basis.cols() != n - 1) {
        throw InputError("sphere_hessian: dimension mismatch");
    }
    if (sphere_gradient(U_l, q).norm() > tol) {
        throw ContractViolation("sphere_hessian: q is not a critical point of U_l on the sphere");
    }
    if (n == 1) {
        return {};
    }
    const double lagrange = U_l.degree() * U_l.evaluate(q);
    Eigen::MatrixXd H = basis.transpose() * U_l.hessian_at(q) * basis;
    H -= lagrange * Eigen::MatrixXd::Identity(n - 1, n - 1);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    std::vector<double> eigs(es.eigenvalues().data(), es.eigenvalues().data() + n - 1);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

std::string to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::Source: return "source";
        case BoundaryClass::Sink: return "sink";
        case BoundaryClass::Saddle: return "saddle";
        case BoundaryClass::Trivial: return "trivial";
        case BoundaryClass::NonHyperbolic: return "non-hyperbolic";
    }
    return "unknown";
}

McGeheeState BoundaryFixedPoint::state() const { return McGeheeState{0.0, q, nu_star * q}; }

std::vector<BoundaryFixedPoint> fixed_points(const BlownSystem& bs, const CriticalPointSearch& search,
                                             double zero_value_tol) {
    std::vector<BoundaryFixedPoint> out;
    for (const SphereCriticalPoint& cp : search.points) {
        if (cp.f_value > zero_value_tol) {
            continue;
        }
        std::vector<double> nus;
        if (cp.f_value < -zero_value_tol) {
            const double a = std::sqrt(-2.0 * cp.f_value);
            nus = {-a, a};
        } else {
            nus = {0.0};
        }
        for (double nu : nus) {
            BoundaryFixedPoint fp;
            fp.q = cp.q;
            fp.f_value = cp.f_value;
            fp.nu_star = nu;
            fp.sphere_hess_eigs = cp.hess_eigs;
            fp.field_residual = blown_field(bs, fp.state()).norm();
            if (fp.field_residual > 1e-10) {
                std::ostringstream msg;
                msg << "boundary fixed point candidate has field residual " << fp.field_residual;
                throw ContractViolation(msg.str());
            }
            out.push_back(std::move(fp));
        }
    }
    std::sort(out.begin(), out.end(), [](const BoundaryFixedPoint& a, const BoundaryFixedPoint& b) {
        if (a.f_value != b.f_value) {
            return a.f_value < b.f_value;
        }
        if (a.nu_star != b.nu_star) {
            return a.nu_star < b.nu_star;
        }
        return lex_less(a.q, b.q);
    });
    return out;
}

McGeheeState chart_to_state(const BoundaryFixedPoint& fp, const Eigen::VectorXd& w) {
    return chart_state(fp.q, tangent_basis(fp.q), w);
}

Eigen::MatrixXd boundary_jacobian(const BlownSystem& bs, const BoundaryFixedPoint& fp, double step) {
    const int n = static_cast<int>(fp.q.size());
    const Eigen::MatrixXd B = tangent_basis(fp.q);
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(2 * n);
    w0.tail(n) = fp.nu_star * fp.q;
    Eigen::MatrixXd J(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        Eigen::VectorXd wp = w0, wm = w0;
        wp[j] += step;
        wm[j] -= step;
        J.col(j) = (chart_field(bs, fp.q, B, wp) - chart_field(bs, fp.q, B, wm)) / (2.0 * step);
    }
    return J;
}

Eigen::VectorXd radial_eigenvector(const BlownSystem& bs, const BoundaryFixedPoint& fp) {
    const int n = static_cast<int>(fp.q.size());
    const Eigen::MatrixXd J = boundary_jacobian(bs, fp);
    // r' = nu r, so the first row of J is (nu*, 0, ..., 0); fix v_r = 1 and solve the rest.
    const int m = 2 * n - 1;
    const Eigen::MatrixXd A = J.bottomRightCorner(m, m) - fp.nu_star * Eigen::MatrixXd::Identity(m, m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
        throw NotHyperbolicError("nu* is a multiple eigenvalue: the radial eigenvector is not unique");
    }
    Eigen::VectorXd v(2 * n);
    v[0] = 1.0;
    v.tail(m) = lu.solve(-J.bottomLeftCorner(m, 1));
    return v;
}

BoundaryFixedPoint linearize_fixed_point(const BlownSystem& bs, const BoundaryFixedPoint& fp_in) {
    if (fp_in.nu_star == 0.0) {
        throw NotHyperbolicError("nu* = 0: zero is a critical value of f and the fixed point is not hyperbolic");
    }
    BoundaryFixedPoint fp = fp_in;
    const double nu = fp.nu_star;
    const double l = bs.l();
    const double c = nu * (0.5 * l + 1.0);
    fp.flow_eigs = {nu, -l * nu};
    fp.jordan_degenerate = false;
    std::vector<std::complex<double>> tangent;
    for (double lam : fp.sphere_hess_eigs) {
        const double disc = c * c - 4.0 * lam;
        if (std::abs(disc) <= 1e-9) {
            fp.jordan_degenerate = true;
        }
        const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
        tangent.push_back(-0.5 * c + 0.5 * root);
        tangent.push_back(-0.5 * c - 0.5 * root);
    }
    fp.flow_eigs.insert(fp.flow_eigs.end(), tangent.begin(), tangent.end());

    fp.stable_dim = fp.unstable_dim = 0;
    for (const auto& k : fp.flow_eigs) {
        if (k.real() < 0.0) {
            ++fp.stable_dim;
        } else if (k.real() > 0.0) {
            ++fp.unstable_dim;
        }
    }
    if (tangent.empty()) {
        fp.boundary_class = BoundaryClass::Trivial;
    } else {
        int pos = 0, neg = 0;
        for (const auto& k : tangent) {
            pos += k.real() > 0.0;
            neg += k.real() < 0.0;
        }
        const int total = static_cast<int>(tangent.size());
        if (pos + neg < total) {
            fp.boundary_class = BoundaryClass::NonHyperbolic;
        } else if (pos == total) {
            fp.boundary_class = BoundaryClass::Source;
        } else if (neg == total) {
            fp.boundary_class = BoundaryClass::Sink;
        } else {
            fp.boundary_class = BoundaryClass::Saddle;
        }
    }

    const Eigen::MatrixXd J = boundary_jacobian(bs, fp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
    fp.numeric_eigs.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    if (fp.jordan_degenerate) {
        // A defective eigenvalue splits by O(sqrt(step)) under finite differences.
        fp.eigen_cross_error = std::numeric_limits<double>::quiet_NaN();
    } else {
        std::vector<bool> used(fp.numeric_eigs.size(), false);
        double worst = 0.0;
        for (const auto& k : fp.flow_eigs) {
            size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < fp.numeric_eigs.size(); ++i) {
                const double d = std::abs(fp.numeric_eigs[i] - k);
                if (!used[i] && d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            used[best] = true;
            worst = std::max(worst, best_d / std::max(std::abs(k), 1e-12));
        }
        fp.eigen_cross_error = worst;
    }
    fp.linearized = true;
    return fp;
}

double heteroclinic_profile(int l, double f_value, double tau) {
    if (!(f_value < 0.0)) {
        throw PreconditionError("heteroclinic profile needs f(q*) < 0");
    }
    const double A = std::sqrt(-2.0 * f_value);
    return A * std::tanh(0.5 * l * A * tau);
}

Trajectory heteroclinic_orbit(const BlownSystem& bs, const SphereCriticalPoint& cp, const IntegratorConfig& cfg) {
    if (!(cp.f_value < 0.0)) {
        throw PreconditionError("heteroclinic orbit needs f(q*) < 0");
    }
    const int n = bs.dim();
    const McGeheeState z0{0.0, cp.q, Eigen::VectorXd::Zero(n)};
    IntegratorConfig fwd = cfg;
    fwd.backward = false;
    IntegratorConfig bwd = cfg;
    bwd.backward = true;
    const Trajectory ahead = integrate_blown(bs, z0, fwd);
    const Trajectory behind = integrate_blown(bs, z0, bwd);
    Trajectory out;
    out.frame = Frame::Blown;
    out.dim = n;
    out.samples = behind.samples;
    out.samples.insert(out.samples.end(), ahead.samples.begin() + 1, ahead.samples.end());
    out.termination = ahead.termination;
    return out;
}

HypothesisCheck hypothesis_check(const CriticalPointSearch& search) {
    HypothesisCheck h;
    h.morse = !search.continuum_warning &&
              std::none_of(search.points.begin(), search.points.end(),
                           [](const SphereCriticalPoint& p) { return p.degenerate; });
    h.zero_regular = std::none_of(search.points.begin(), search.points.end(),
                                  [](const SphereCriticalPoint& p) { return p.zero_critical_value; });
    return h;
}

FixedPointCatalog build_catalog(const BlownSystem& bs, const CriticalSearchOptions& opts) {
    FixedPointCatalog cat;
    cat.search = find_sphere_critical_points(bs.U_l(), opts);
    cat.notes = cat.search.warnings;
    for (BoundaryFixedPoint& fp : fixed_points(bs, cat.search, opts.zero_value_tol)) {
        if (fp.nu_star != 0.0) {
            cat.points.push_back(linearize_fixed_point(bs, fp));
        } else {
            cat.points.push_back(std::move(fp));
        }
    }
    if (cat.points.empty()) {
        cat.notes.push_back("empty critical boundary: f > 0 on the whole sphere");
    }
    if (std::any_of(cat.points.begin(), cat.points.end(), [](const BoundaryFixedPoint& p) { return p.nu_star == 0.0; })) {
        cat.notes.push_back("zero critical value: nu* = 0 points are not hyperbolic");
    }
    return cat;
}

}  // namespace mcgehee
