#include "mcgehee/system.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mcgehee/errors.hpp"

namespace mcgehee {

MetricField MetricField::euclidean(int dim, int truncation) {
    MetricField m;
    m.g.assign(dim, std::vector<Germ>(dim, Germ(dim, truncation)));
    for (int a = 0; a < dim; ++a) {
        m.g[a][a] = Germ::constant(dim, truncation, 1.0);
    }
    return m;
}

bool MetricField::is_euclidean() const {
    for (int a = 0; a < dim(); ++a) {
        for (int b = 0; b < dim(); ++b) {
            const auto& terms = g[a][b].terms();
            if (a != b) {
                if (!terms.empty()) {
                    return false;
                }
            } else if (terms.size() != 1 || terms.begin()->second != 1.0 ||
                       std::any_of(terms.begin()->first.begin(), terms.begin()->first.end(),
                                   [](int e) { return e != 0; })) {
                return false;
            }
        }
    }
    return true;
}

MagneticPotential MagneticPotential::zero(int dim, int truncation) {
    return MagneticPotential{std::vector<Germ>(dim, Germ(dim, truncation))};
}

bool MagneticPotential::is_zero() const {
    return std::all_of(A.begin(), A.end(), [](const Germ& a) { return a.is_zero(); });
}

std::vector<std::vector<Germ>> MagneticPotential::field_strength() const {
    const int n = dim();
    std::vector<std::vector<Germ>> F(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            F[i].push_back(A[j].derivative(i) - A[i].derivative(j));
        }
    }
    return F;
}

Eigen::VectorXd Christoffel::contract(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < n_; ++k) {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                s += (*this)(k, i, j) * u[i] * w[j];
            }
        }
        out[k] = s;
    }
    return out;
}

namespace {

bool has_degree(const Germ& g, int degree) {
    for (const auto& [alpha, c] : g.terms()) {
        int deg = 0;
        for (int e : alpha) {
            deg += e;
        }
        if (deg == degree) {
            return true;
        }
    }
    return false;
}

Eigen::MatrixXd metric_matrix(const MetricField& metric, const Eigen::VectorXd& x) {
    const int n = metric.dim();
    Eigen::MatrixXd G(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            G(a, b) = metric.g[a][b].evaluate(x);
        }
    }
    return G;
}

}  // namespace

ValidationReport validate(const Germ& potential, const MetricField& metric,
                          const MagneticPotential& magnetic, double domain_radius) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };
    const int n = potential.dim();

    if (n < 1) {
        fail("dimension must be positive");
        return report;
    }
    if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
        fail("domain radius r_E must be a positive finite number");
    }
    if (metric.dim() != n || std::any_of(metric.g.begin(), metric.g.end(), [&](const auto& row) {
            return static_cast<int>(row.size()) != n ||
                   std::any_of(row.begin(), row.end(), [&](const Germ& e) { return e.dim() != n; });
        })) {
        fail("metric must be an n x n matrix of germs in dimension " + std::to_string(n));
        return report;
    }
    if (magnetic.dim() != n || std::any_of(magnetic.A.begin(), magnetic.A.end(),
                                           [&](const Germ& a) { return a.dim() != n; })) {
        fail("magnetic potential must have n = " + std::to_string(n) + " components");
        return report;
    }
    if (potential.is_zero()) {
        fail("potential germ is identically zero");
        return report;
    }
    if (has_degree(potential, 0)) {
        fail("potential not zero at p");
    }
    if (has_degree(potential, 1)) {
        fail("p is not a critical point of the potential");
    }

    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (!(metric.g[a][b] == metric.g[b][a])) {
                fail("metric not symmetric at (" + std::to_string(a + 1) + "," +
                     std::to_string(b + 1) + ")");
            }
        }
    }
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
    if ((metric_matrix(metric, origin) - Eigen::MatrixXd::Identity(n, n)).norm() != 0.0) {
        fail("metric at p is not the identity (g_ab(0) must equal delta_ab)");
    }
    if (report.ok() && std::isfinite(domain_radius) && domain_radius > 0.0) {
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int k = 0; k < 64; ++k) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) {
                x[i] = normal(rng);
            }
            x *= 0.99 * domain_radius * std::pow(unif(rng), 1.0 / n) / x.norm();
            Eigen::LLT<Eigen::MatrixXd> llt(metric_matrix(metric, x));
            if (llt.info() != Eigen::Success) {
                fail("metric not positive definite inside the domain ball");
                break;
            }
        }
    }
    if (!report.ok()) {
        return report;
    }

    JetData jets;
    Jet first = first_nonzero_jet(potential);
    jets.l = first.degree;
    jets.U_l = first.poly;
    if (auto second = second_nonzero_jet(potential)) {
        jets.l2 = second->degree;
        jets.U_l2 = second->poly;
    }

    std::optional<int> d;
    for (const Germ& a : magnetic.A) {
        if (auto da = a.min_degree(kJetTolerance)) {
            d = d ? std::min(*d, *da) : *da;
        }
    }
    jets.d = d;
    jets.Delta = d ? *d - jets.l / 2.0 : kInfinity;

    std::optional<int> m;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            Germ corr = metric.g[a][b];
            if (a == b) {
                corr = corr - Germ::constant(n, corr.truncation(), 1.0);
            }
            if (auto dm = corr.min_degree(kJetTolerance)) {
                m = m ? std::min(*m, *dm) : *dm;
            }
        }
    }
    jets.m = m;
    if (m) {
        jets.g_m.resize(n);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                jets.g_m[a].emplace_back(metric.g[a][b].homogeneous_part(*m), *m);
            }
        }
    }

    std::optional<int> mu;
    if (jets.l2) {
        mu = *jets.l2 - jets.l;
    }
    if (m) {
        mu = mu ? std::min(*mu, *m) : *m;
    }
    jets.mu = mu;
    jets.weak_magnetism = jets.Delta >= 1.0;
    jets.weak_magnetism_ii = mu.has_value() && jets.Delta > *mu;
    report.jets = std::move(jets);
    return report;
}

LagrangianSystem LagrangianSystem::create(Germ potential, MetricField metric,
                                          MagneticPotential magnetic, double domain_radius) {
    ValidationReport report = validate(potential, metric, magnetic, domain_radius);
    if (!report.ok()) {
        throw ValidationError(report.failures.front());
    }
    LagrangianSystem sys;
    sys.n_ = potential.dim();
    sys.r_E_ = domain_radius;
    sys.U_ = std::move(potential);
    sys.metric_ = std::move(metric);
    sys.magnetic_ = std::move(magnetic);
    sys.jets_ = std::move(*report.jets);
    sys.euclidean_ = sys.metric_.is_euclidean();
    sys.magnetic_free_ = sys.magnetic_.is_zero();
    sys.dU_ = sys.U_.gradient();
    const int n = sys.n_;
    sys.dg_.assign(n, std::vector<std::vector<Germ>>(n));
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                sys.dg_[c][a].push_back(sys.metric_.g[a][b].derivative(c));
            }
        }
    }
    sys.F_ = sys.magnetic_.field_strength();
    return sys;
}

LagrangianSystem LagrangianSystem::newtonian(Germ potential, double domain_radius) {
    const int n = potential.dim();
    const int t = potential.truncation();
    return create(std::move(potential), MetricField::euclidean(n, t), MagneticPotential::zero(n, t),
                  domain_radius);
}

void LagrangianSystem::check_domain(const Eigen::VectorXd& x) const {
    if (x.size() != n_) {
        throw InputError("state dimension does not match system dimension");
    }
    if (!(x.norm() < r_E_)) {
        throw DomainError("point outside the domain ball (|x| >= r_E)");
    }
}

Eigen::VectorXd LagrangianSystem::potential_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(n_);
    for (int i = 0; i < n_; ++i) {
        g[i] = dU_[i].evaluate(x);
    }
    return g;
}

Eigen::MatrixXd LagrangianSystem::metric_at(const Eigen::VectorXd& x) const {
    if (euclidean_) {
        return Eigen::MatrixXd::Identity(n_, n_);
    }
    return metric_matrix(metric_, x);
}

Eigen::MatrixXd LagrangianSystem::field_strength_at(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n_, n_);
    if (magnetic_free_) {
        return F;
    }
    for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b) {
            F(a, b) = F_[a][b].evaluate(x);
        }
    }
    return F;
}

Eigen::MatrixXd inverse_metric(const LagrangianSystem& sys, const Eigen::VectorXd& x) {
    const int n = sys.dim();
    if (sys.euclidean()) {
        return Eigen::MatrixXd::Identity(n, n);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.metric_at(x));
    if (!(std::abs(lu.determinant()) > 1e-300)) {
        throw NumericError("metric is singular");
    }
    return lu.solve(Eigen::MatrixXd::Identity(n, n));
}

Christoffel christoffel_unchecked(const LagrangianSystem& sys, const Eigen::VectorXd& x) {
    const int n = sys.dim();
    Christoffel gamma(n);
    if (sys.euclidean()) {
        return gamma;
    }
    const auto& dg = sys.metric_derivatives();
    // first-kind symbols: lower(a, i, j) = 1/2 (d_i g_aj + d_j g_ai - d_a g_ij)
    std::vector<double> dgx(static_cast<size_t>(n) * n * n);
    auto at = [n](int c, int a, int b) { return (c * n + a) * n + b; };
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                dgx[at(c, a, b)] = dg[c][a][b].evaluate(x);
            }
        }
    }
    const Eigen::MatrixXd ginv = inverse_metric(sys, x);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            Eigen::VectorXd lower(n);
            for (int a = 0; a < n; ++a) {
                lower[a] = 0.5 * (dgx[at(i, a, j)] + dgx[at(j, a, i)] - dgx[at(a, i, j)]);
            }
            const Eigen::VectorXd upper = ginv * lower;
            for (int k = 0; k < n; ++k) {
                gamma(k, i, j) = upper[k];
                gamma(k, j, i) = upper[k];
            }
        }
    }
    return gamma;
}

Christoffel christoffel(const LagrangianSystem& sys, const Eigen::VectorXd& x) {
    sys.check_domain(x);
    return christoffel_unchecked(sys, x);
}

PhaseVelocity original_field(const LagrangianSystem& sys, const PhaseState& s) {
    sys.check_domain(s.x);
    if (s.v.size() != sys.dim()) {
        throw InputError("velocity dimension does not match system dimension");
    }
    Eigen::VectorXd force = -sys.potential_gradient(s.x);
    if (!sys.magnetic_free()) {
        force += sys.field_strength_at(s.x) * s.v;
    }
    Eigen::VectorXd accel = sys.euclidean() ? force : Eigen::VectorXd(inverse_metric(sys, s.x) * force);
    if (!sys.euclidean()) {
        accel -= christoffel_unchecked(sys, s.x).contract(s.v, s.v);
    }
    return PhaseVelocity{s.v, accel};
}

double energy(const LagrangianSystem& sys, const PhaseState& s) {
    return 0.5 * s.v.dot(sys.metric_at(s.x) * s.v) + sys.potential_at(s.x);
}

}  // namespace mcgehee
