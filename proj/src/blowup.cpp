#include "mcgehee/blowup.hpp"

#include <cmath>

#include "mcgehee/errors.hpp"

namespace mcgehee {

namespace {

// sum_{k >= base} r^{k - base} values[k]
double graded_tail(const std::vector<double>& values, int base, double r) {
    double acc = 0.0;
    for (int k = static_cast<int>(values.size()) - 1; k >= base; --k) {
        acc = acc * r + values[k];
    }
    return acc;
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

// Everything the field and the energy need at one (r, q).
struct RadialPieces {
    Eigen::VectorXd grad_Ul;     // grad U_l(q)
    Eigen::VectorXd grad_tail;   // V_{>l}(r, q)
    Eigen::MatrixXd h_lower;     // h_ab(r, q)
    Eigen::MatrixXd g_inv;       // g^{ka}(r q)
    Eigen::MatrixXd h_upper;     // h^{ka}(r, q)
};

RadialPieces radial_pieces(const LagrangianSystem& sys, double r, const Eigen::VectorXd& q) {
    const int n = sys.dim();
    const int l = sys.jets().l;
    RadialPieces p;
    p.grad_Ul.resize(n);
    p.grad_tail.resize(n);
    const auto& dU = sys.potential_gradient_germs();
    for (int a = 0; a < n; ++a) {
        const auto vals = dU[a].evaluate_graded(q);
        p.grad_Ul[a] = (l - 1 < static_cast<int>(vals.size())) ? vals[l - 1] : 0.0;
        p.grad_tail[a] = graded_tail(vals, l, r);
    }
    p.h_lower = Eigen::MatrixXd::Zero(n, n);
    if (sys.euclidean()) {
        p.g_inv = Eigen::MatrixXd::Identity(n, n);
        p.h_upper = Eigen::MatrixXd::Zero(n, n);
        return p;
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            p.h_lower(a, b) = graded_tail(sys.metric().g[a][b].evaluate_graded(q), 1, r);
        }
    }
    const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n) + r * p.h_lower;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
    if (!(std::abs(lu.determinant()) > 1e-300)) {
        throw NumericError("metric is singular");
    }
    p.g_inv = lu.solve(Eigen::MatrixXd::Identity(n, n));
    // (I + r h)^{-1} - I = -r h (I + r h)^{-1}
    p.h_upper = -p.h_lower * p.g_inv;
    return p;
}

}  // namespace

BlownSystem::BlownSystem(LagrangianSystem sys) : sys_(std::move(sys)) {
    if (sys_.jets().Delta < 0.0) {
        throw PreconditionError("Delta = d - l/2 < 0: the magnetic term of the blown-up field is singular at r = 0");
    }
}

void BlownSystem::check_radius(double r) const {
    if (!(std::abs(r) < sys_.domain_radius())) {
        throw DomainError("|r| >= r_E");
    }
}

Eigen::VectorXd BlownSystem::gradient_tail(double r, const Eigen::VectorXd& q) const {
    return radial_pieces(sys_, r, q).grad_tail;
}

double BlownSystem::potential_tail(double r, const Eigen::VectorXd& q) const {
    return graded_tail(sys_.potential().evaluate_graded(q), l() + 1, r);
}

Eigen::MatrixXd BlownSystem::metric_tail(double r, const Eigen::VectorXd& q) const {
    return radial_pieces(sys_, r, q).h_lower;
}

Eigen::MatrixXd BlownSystem::inverse_metric_tail(double r, const Eigen::VectorXd& q) const {
    return radial_pieces(sys_, r, q).h_upper;
}

Eigen::MatrixXd BlownSystem::field_strength_tail(double r, const Eigen::VectorXd& q) const {
    const int n = dim();
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    if (sys_.magnetic_free()) {
        return F;
    }
    const int base = *sys_.jets().d - 1;
    const auto& germs = sys_.field_strength_germs();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            F(a, b) = graded_tail(germs[a][b].evaluate_graded(q), std::max(base, 0), r);
        }
    }
    if (base < 0) {
        // d = 0: a constant one-form part carries no field; F_ab(rq) = r^{-1} F_geq.
        F *= r;
    }
    return F;
}

double BlownSystem::magnetic_factor(double r) const {
    if (sys_.magnetic_free() || !std::isfinite(Delta())) {
        return 0.0;
    }
    if (is_integer(Delta())) {
        return std::pow(r, Delta());
    }
    return std::pow(std::abs(r), Delta());
}

Corrections BlownSystem::corrections(const McGeheeState& z) const {
    check_radius(z.r);
    const RadialPieces p = radial_pieces(sys_, z.r, z.q);
    Corrections c;
    c.field_correction = -p.g_inv * p.grad_tail - p.h_upper * p.grad_Ul;
    if (!sys_.euclidean()) {
        c.field_correction -= christoffel_unchecked(sys_, z.r * z.q).contract(z.y, z.y);
    }
    if (sys_.magnetic_free()) {
        c.magnetic_correction = Eigen::VectorXd::Zero(dim());
    } else {
        c.magnetic_correction = p.g_inv * (field_strength_tail(z.r, z.q) * z.y);
    }
    c.energy_correction = potential_tail(z.r, z.q) + 0.5 * z.y.dot(p.h_lower * z.y);
    return c;
}

McGeheeState to_mcgehee(const LagrangianSystem& sys, const PhaseState& s) {
    if (s.x.size() != sys.dim() || s.v.size() != sys.dim()) {
        throw InputError("phase state dimension does not match system dimension");
    }
    const double r = s.x.norm();
    if (r == 0.0) {
        throw BlowupPointError();
    }
    const double scale = std::pow(r, 0.5 * sys.jets().l);
    return McGeheeState{r, s.x / r, s.v / scale};
}

PhaseState from_mcgehee(const LagrangianSystem& sys, const McGeheeState& z) {
    if (z.r < 0.0) {
        throw PreconditionError("from_mcgehee requires r >= 0");
    }
    if (z.r == 0.0) {
        return PhaseState{Eigen::VectorXd::Zero(sys.dim()), Eigen::VectorXd::Zero(sys.dim())};
    }
    return PhaseState{z.r * z.q, std::pow(z.r, 0.5 * sys.jets().l) * z.y};
}

BlownVelocity blown_field(const BlownSystem& bs, const McGeheeState& z) {
    const double nu = z.nu();
    const Corrections c = bs.corrections(z);
    const Eigen::VectorXd grad_Ul = bs.U_l().gradient_at(z.q);
    BlownVelocity out;
    out.dr = nu * z.r;
    out.dq = z.y - nu * z.q;
    out.dy = -grad_Ul - 0.5 * bs.l() * nu * z.y + z.r * c.field_correction;
    const double mf = bs.magnetic_factor(z.r);
    if (mf != 0.0) {
        out.dy += mf * c.magnetic_correction;
    }
    return out;
}

double rescaled_energy(const BlownSystem& bs, const McGeheeState& z) {
    const double base = 0.5 * z.y.squaredNorm() + bs.U_l().evaluate(z.q);
    if (z.r == 0.0) {
        return base;
    }
    return base + z.r * bs.corrections(z).energy_correction;
}

double nu_derivative(const BlownSystem& bs, const McGeheeState& z) {
    const double l = bs.l();
    const double nu = z.nu();
    const Corrections c = bs.corrections(z);
    const double h_tilde = 0.5 * z.y.squaredNorm() + bs.U_l().evaluate(z.q) + z.r * c.energy_correction;
    double xi = (1.0 + l / 2.0) * (z.y.squaredNorm() - nu * nu) - l * h_tilde +
                z.r * (z.q.dot(c.field_correction) + l * c.energy_correction);
    const double mf = bs.magnetic_factor(z.r);
    if (mf != 0.0) {
        xi += mf * z.q.dot(c.magnetic_correction);
    }
    return xi;
}

double boundary_energy_ode_residual(const BlownSystem& bs, const Trajectory& boundary) {
    if (boundary.frame != Frame::Blown) {
        throw PreconditionError("boundary residual needs a blown-frame trajectory");
    }
    const int n = boundary.dim;
    double worst = 0.0;
    for (const Sample& s : boundary.samples) {
        const McGeheeState z = McGeheeState::unpack(s.state, n);
        if (std::abs(z.r) > 1e-12) {
            throw ContractViolation("trajectory leaves the boundary r = 0");
        }
        const Eigen::VectorXd dz = blown_field(bs, z).pack();
        const double h = 1e-6 / std::max(1.0, dz.norm());
        const double hp = rescaled_energy(bs, McGeheeState::unpack(s.state + h * dz, n));
        const double hm = rescaled_energy(bs, McGeheeState::unpack(s.state - h * dz, n));
        const double derivative = (hp - hm) / (2.0 * h);
        const double residual = std::abs(derivative + bs.l() * z.nu() * rescaled_energy(bs, z));
        worst = std::max(worst, residual);
    }
    return worst;
}

}  // namespace mcgehee
