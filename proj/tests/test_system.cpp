#include <doctest.h>

#include "mcgehee/errors.hpp"
#include "mcgehee/integrate.hpp"
#include "mcgehee/system.hpp"
#include "systems.hpp"

using namespace mcgehee;
using testsys::poly;
using testsys::vec;

namespace {

std::string first_failure(const Germ& U, const MetricField& g, const MagneticPotential& A, double r_E) {
    const ValidationReport rep = validate(U, g, A, r_E);
    return rep.ok() ? std::string() : rep.failures.front();
}

}  // namespace

TEST_CASE("validate: jet bookkeeping") {
    const LagrangianSystem sys = testsys::quartic_saddle();
    const JetData& j = sys.jets();
    CHECK(j.l == 2);
    CHECK(j.l2 == 4);
    CHECK_FALSE(j.d);
    CHECK(std::isinf(j.Delta));
    CHECK_FALSE(j.m);
    CHECK(j.mu == 2);
    CHECK(j.weak_magnetism);
    CHECK(j.weak_magnetism_ii);

    MagneticPotential A = MagneticPotential::zero(2, 4);
    A.A[0] = poly(2, 4, {{{2, 1}, 1.0}});
    const LagrangianSystem mag =
        LagrangianSystem::create(sys.potential(), MetricField::euclidean(2, 4), A, 1.0);
    CHECK(mag.jets().d == 3);
    CHECK(mag.jets().Delta == 2.0);
    CHECK(mag.jets().weak_magnetism);

    const LagrangianSystem weak = testsys::quartic_saddle_magnetic();
    CHECK(weak.jets().Delta == 1.0);
    CHECK(weak.jets().weak_magnetism);
    CHECK_FALSE(weak.jets().weak_magnetism_ii);

    const LagrangianSystem rnc = testsys::normal_coordinates();
    CHECK(rnc.jets().m == 2);
    CHECK(rnc.jets().l2 == 5);
    CHECK(rnc.jets().mu == 2);
}

TEST_CASE("validate: failures name the condition") {
    const auto E = MetricField::euclidean(2, 4);
    const auto Z = MagneticPotential::zero(2, 4);
    CHECK(first_failure(poly(2, 4, {{{0, 0}, 1.0}, {{2, 0}, 1.0}}), E, Z, 1.0) == "potential not zero at p");
    CHECK(first_failure(poly(2, 4, {{{1, 0}, 1.0}, {{2, 0}, 1.0}}), E, Z, 1.0) ==
          "p is not a critical point of the potential");
    CHECK(first_failure(Germ(2, 4), E, Z, 1.0) == "potential germ is identically zero");
    CHECK(first_failure(poly(2, 4, {{{2, 0}, 1.0}}), E, Z, 0.0).find("domain radius") != std::string::npos);

    MetricField asym = E;
    asym.g[0][1] = poly(2, 4, {{{1, 0}, 0.1}});
    CHECK(first_failure(poly(2, 4, {{{2, 0}, 1.0}}), asym, Z, 1.0) == "metric not symmetric at (1,2)");

    MetricField shifted = E;
    shifted.g[0][0] = poly(2, 4, {{{0, 0}, 2.0}});
    CHECK(first_failure(poly(2, 4, {{{2, 0}, 1.0}}), shifted, Z, 1.0).find("identity") != std::string::npos);

    MetricField indefinite = E;
    indefinite.g[0][0] = poly(2, 4, {{{0, 0}, 1.0}, {{2, 0}, -4.0}});
    CHECK(first_failure(poly(2, 4, {{{2, 0}, 1.0}}), indefinite, Z, 1.0).find("positive definite") !=
          std::string::npos);

    CHECK_THROWS_AS(LagrangianSystem::create(poly(2, 4, {{{0, 0}, 1.0}}), E, Z, 1.0), ValidationError);
}

TEST_CASE("christoffel: conformal metric at the origin") {
    MetricField g = MetricField::euclidean(2, 2);
    g.g[0][0] = g.g[1][1] = poly(2, 2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}});
    const LagrangianSystem sys =
        LagrangianSystem::create(poly(2, 2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}), g, MagneticPotential::zero(2, 2), 0.5);
    const Christoffel G = christoffel(sys, vec({0.0, 0.0}));
    CHECK(G(0, 0, 0) == doctest::Approx(0.5));
    CHECK(G(0, 1, 1) == doctest::Approx(-0.5));
    CHECK(G(1, 0, 1) == doctest::Approx(0.5));
    CHECK(G(1, 1, 0) == doctest::Approx(0.5));
    CHECK(G(0, 0, 1) == doctest::Approx(0.0));
    CHECK(G(1, 0, 0) == doctest::Approx(0.0));
    CHECK(G(1, 1, 1) == doctest::Approx(0.0));

    const Christoffel flat = christoffel(testsys::quartic_saddle(), vec({0.3, -0.2}));
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(flat(k, i, j) == 0.0);

    std::mt19937_64 rng(21);
    const LagrangianSystem full = testsys::spatial_full();
    for (int t = 0; t < 20; ++t) {
        const Christoffel C = christoffel(full, 0.7 * testsys::random_unit(3, rng));
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK(C(k, i, j) == C(k, j, i));
    }
    CHECK_THROWS_AS(christoffel(full, vec({1.0, 0.0, 0.0})), DomainError);
}

TEST_CASE("original field and energy: hand values") {
    const LagrangianSystem sys = testsys::quartic_saddle(2.0);
    const PhaseVelocity f = original_field(sys, PhaseState{vec({1.0, 0.0}), vec({0.0, 0.0})});
    CHECK(f.dx.norm() == 0.0);
    CHECK(f.dv[0] == doctest::Approx(4.0));
    CHECK(f.dv[1] == doctest::Approx(0.0));

    const PhaseVelocity zero = original_field(testsys::cubic_full(), PhaseState{vec({0.0, 0.0}), vec({0.0, 0.0})});
    CHECK(zero.pack().norm() == 0.0);

    CHECK(energy(sys, PhaseState{vec({1.0, 0.0}), vec({0.0, 1.0})}) == doctest::Approx(-0.5));
    CHECK(energy(testsys::cubic_full(), PhaseState{vec({0.0, 0.0}), vec({0.0, 0.0})}) == 0.0);
    CHECK_THROWS_AS(original_field(sys, PhaseState{vec({2.0, 0.0}), vec({0.0, 0.0})}), DomainError);
}

TEST_CASE("original field solves the Euler-Lagrange equation") {
    // d/dt dL/dv - dL/dx = 0 checked by finite differences of L = g(v,v)/2 + A v - U.
    const LagrangianSystem sys = testsys::cubic_full();
    const int n = 2;
    auto L = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
        double Av = 0.0;
        for (int i = 0; i < n; ++i) Av += sys.magnetic().A[i].evaluate(x) * v[i];
        return 0.5 * v.dot(sys.metric_at(x) * v) + Av - sys.potential_at(x);
    };
    std::mt19937_64 rng(22);
    const double h = 1e-4;
    for (int t = 0; t < 10; ++t) {
        const Eigen::VectorXd x = 0.5 * testsys::random_unit(n, rng);
        const Eigen::VectorXd v = testsys::random_unit(n, rng);
        const PhaseVelocity f = original_field(sys, PhaseState{x, v});
        auto p = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& vv, int i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[i] = h;
            return (L(xx, vv + e) - L(xx, vv - e)) / (2 * h);
        };
        for (int i = 0; i < n; ++i) {
            const double dpdt = (p(x + h * v, v + h * f.dv, i) - p(x - h * v, v - h * f.dv, i)) / (2 * h);
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[i] = h;
            const double dLdx = (L(x + e, v) - L(x - e, v)) / (2 * h);
            CHECK(std::abs(dpdt - dLdx) <= 1e-6);
        }
    }
}

TEST_CASE("property: magnetic force does no work") {
    MagneticPotential A = MagneticPotential::zero(2, 3);
    A.A[1] = poly(2, 3, {{{2, 1}, 1.0}, {{1, 0}, 1.0}});
    A.A[0] = poly(2, 3, {{{0, 2}, -0.5}});
    // A zero potential fails validation, so no-work is checked pointwise as (F v) . v = 0.
    const LagrangianSystem sys =
        LagrangianSystem::create(poly(2, 3, {{{2, 0}, 1.0}}), MetricField::euclidean(2, 3), A, 2.0);
    const auto F = sys.field_strength_germs();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK((F[i][j] + F[j][i]).is_zero());

    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd x = 0.8 * testsys::random_unit(2, rng);
        const Eigen::VectorXd v = testsys::random_unit(2, rng);
        const Eigen::VectorXd force = sys.field_strength_at(x) * v;
        CHECK(std::abs(force.dot(v)) <= 1e-14);
    }

    // Full orbit with U = x1^2 and the magnetic field: H is conserved.
    IntegratorConfig cfg;
    cfg.t_max = 20.0;
    const Trajectory traj = integrate_original(sys, PhaseState{vec({0.3, 0.1}), vec({0.2, 0.5})}, cfg);
    double drift = 0.0;
    for (const Sample& s : traj.samples) drift = std::max(drift, std::abs(s.energy - traj.front().energy));
    CHECK(drift <= 1e-8);
}

TEST_CASE("property: energy conservation on metric and magnetic systems") {
    std::mt19937_64 rng(24);
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    for (const LagrangianSystem& sys :
         {testsys::cubic_full(), testsys::quadratic_full(), testsys::spatial_full(), testsys::normal_coordinates()}) {
        const int n = sys.dim();
        for (int t = 0; t < 5; ++t) {
            Eigen::VectorXd x;
            do {
                x = testsys::uniform(rng, 0.05, 0.3) * testsys::random_unit(n, rng);
            } while (sys.potential_at(x) >= 0.0);
            const Eigen::VectorXd u = testsys::random_unit(n, rng);
            const double speed = std::sqrt(-sys.potential_at(x) / u.dot(sys.metric_at(x) * u));
            const Trajectory traj = integrate_original(sys, PhaseState{x, speed * u}, cfg);
            const double H0 = traj.front().energy;
            CHECK(H0 < 0.0);
            double drift = 0.0;
            for (const Sample& s : traj.samples) drift = std::max(drift, std::abs(s.energy - H0));
            CHECK(drift <= 1e-8 * (1.0 + std::abs(H0)));
        }
    }
}
