#include <doctest.h>

#include <algorithm>

#include "mcgehee/criteria.hpp"
#include "mcgehee/errors.hpp"
#include "systems.hpp"

using namespace mcgehee;
using testsys::poly;
using testsys::vec;

namespace {

CriterionReport run(const LagrangianSystem& sys) {
    const BlownSystem bs(sys);
    return analyze(bs, find_sphere_critical_points(bs.U_l()));
}

// U_l with a constant magnetic field A = (0, x1): d = 1.
LagrangianSystem constant_field(const Germ& U) {
    MagneticPotential A = MagneticPotential::zero(2, U.truncation());
    A.A[1] = poly(2, U.truncation(), {{{1, 0}, 1.0}});
    return LagrangianSystem::create(U, MetricField::euclidean(2, U.truncation()), A, 1.0);
}

}  // namespace

TEST_CASE("generic criterion") {
    const BlownSystem pend(testsys::pendulum());
    const GenericResult g = generic_criterion(pend, find_sphere_critical_points(pend.U_l()));
    CHECK(g.verdict == Verdict::TotallyUnstable);
    CHECK(g.reason.empty());

    const BlownSystem saddle(testsys::quartic_saddle());
    const GenericResult s = generic_criterion(saddle, find_sphere_critical_points(saddle.U_l()));
    CHECK(s.verdict == Verdict::Undecided);
    CHECK(s.reason.find("zero is a critical value") != std::string::npos);

    const BlownSystem cont(testsys::plane(-1.0, -1.0));
    const GenericResult c = generic_criterion(cont, find_sphere_critical_points(cont.U_l()));
    CHECK(c.verdict == Verdict::Undecided);
    CHECK(c.reason.find("continuum") != std::string::npos);

    // l = 2, d = 1: Delta = 0 < 1.
    const BlownSystem strong(constant_field(poly(2, 2, {{{2, 0}, -1.0}, {{0, 2}, 1.0}})));
    CHECK(strong.Delta() == 0.0);
    CHECK_THROWS_AS(generic_criterion(strong, find_sphere_critical_points(strong.U_l())), HypothesisError);

    // l = 3, d = 1: Delta < 0 and the blown field is singular.
    CHECK_THROWS_AS(BlownSystem(constant_field(poly(2, 3, {{{3, 0}, -1.0}, {{1, 2}, 1.0}}))), PreconditionError);
}

TEST_CASE("criterion function: hand values") {
    const BlownSystem saddle(testsys::quartic_saddle());
    for (double s : {-1.0, 1.0}) CHECK(criterion_function(saddle, vec({s, 0.0})) == doctest::Approx(2.0));
    std::mt19937_64 rng(61);
    for (int t = 0; t < 10; ++t) {
        const Eigen::VectorXd q = testsys::random_unit(2, rng);
        CHECK(criterion_function(saddle, q) == doctest::Approx(2.0 * std::pow(q[0], 4)));
    }

    const BlownSystem cubic(testsys::cubic_undecided());
    CHECK(criterion_function(cubic, vec({1.0, 0.0})) == doctest::Approx(-1.0));

    // U_{l2} = |x|^4 is positive, so C < 0 on the critical locus.
    const BlownSystem bowl4(LagrangianSystem::newtonian(
        poly(2, 4, {{{2, 0}, -1.0}, {{0, 2}, 1.0}, {{4, 0}, 1.0}, {{2, 2}, 2.0}, {{0, 4}, 1.0}}), 1.0));
    const NongenericResult nb = nongeneric_criterion(bowl4, find_sphere_critical_points(bowl4.U_l()));
    CHECK(nb.verdict == Verdict::Undecided);
    for (const auto& [q, C] : nb.C_values) CHECK(C == doctest::Approx(-2.0));

    CHECK_THROWS_AS(criterion_function(BlownSystem(testsys::plane(-1.0, 1.0)), vec({1.0, 0.0})), PreconditionError);
}

TEST_CASE("criterion function vanishes for a curved normal-coordinate metric") {
    const BlownSystem bs(testsys::normal_coordinates());
    REQUIRE(bs.system().jets().mu == 2);
    REQUIRE(*bs.system().jets().l2 - bs.l() >= 3);
    std::mt19937_64 rng(62);
    for (int t = 0; t < 50; ++t) CHECK(std::abs(criterion_function(bs, testsys::random_unit(2, rng))) <= 1e-14);
    const NongenericResult r = nongeneric_criterion(bs, find_sphere_critical_points(bs.U_l()));
    CHECK(r.verdict == Verdict::Undecided);
    CHECK_FALSE(r.offending.empty());
}

TEST_CASE("non-generic criterion") {
    const BlownSystem saddle(testsys::quartic_saddle());
    const NongenericResult s = nongeneric_criterion(saddle, find_sphere_critical_points(saddle.U_l()));
    CHECK(s.verdict == Verdict::TotallyUnstable);
    REQUIRE(s.C_values.size() == 2);
    for (const auto& [q, C] : s.C_values) {
        CHECK(std::abs(std::abs(q[0]) - 1.0) <= 1e-12);
        CHECK(C == doctest::Approx(2.0));
    }

    const BlownSystem cubic(testsys::cubic_undecided());
    const NongenericResult c = nongeneric_criterion(cubic, find_sphere_critical_points(cubic.U_l()));
    CHECK(c.verdict == Verdict::Undecided);
    CHECK(c.offending.size() == 1);
    CHECK(c.reason.find("C(q) <= 0") != std::string::npos);

    const BlownSystem weak(testsys::quartic_saddle_magnetic());
    CHECK_THROWS_AS(nongeneric_criterion(weak, find_sphere_critical_points(weak.U_l())), HypothesisError);
}

TEST_CASE("analyze: verdict table") {
    CHECK(run(testsys::pendulum()).overall() == "totally-unstable");
    const CriterionReport saddle = run(testsys::quartic_saddle());
    CHECK(saddle.overall() == "totally-unstable");
    CHECK(saddle.generic->verdict == Verdict::Undecided);
    CHECK(saddle.nongeneric->verdict == Verdict::TotallyUnstable);
    CHECK(run(testsys::cubic_undecided()).overall() == "undecided");
    const CriterionReport weak = run(testsys::quartic_saddle_magnetic());
    CHECK(weak.overall() == "hypothesis-error");
    CHECK_FALSE(weak.nongeneric_error.empty());

    const CriterionReport bowl = run(testsys::plane(1.0, 2.0));
    CHECK(bowl.strict_minimum);
    CHECK(bowl.overall() == "stable-strict-minimum");
    CHECK_FALSE(bowl.generic);
    CHECK(run(testsys::plane(0.0, 1.0)).overall() == "undecided");
    CHECK(run(testsys::plane(-1.0, -1.0)).overall() == "undecided");

    const CriterionReport homog = run(testsys::plane(-1.0, 1.0));
    CHECK(homog.overall() == "totally-unstable");
    CHECK_FALSE(homog.mu);
    CHECK(std::any_of(homog.notes.begin(), homog.notes.end(),
                      [](const std::string& n) { return n.find("homogeneous") != std::string::npos; }));

    const CriterionReport strong = run(constant_field(poly(2, 2, {{{2, 0}, -1.0}, {{0, 2}, 1.0}})));
    CHECK(strong.overall() == "hypothesis-error");
}

TEST_CASE("escape sweeps agree with totally-unstable verdicts") {
    IntegratorConfig cfg;
    cfg.t_max = 200.0;
    for (const LagrangianSystem& sys : {testsys::pendulum(), testsys::quartic_saddle(), testsys::plane(-1.0, 1.0),
                                        testsys::spatial_full()}) {
        REQUIRE(run(sys).overall() == "totally-unstable");
        const EscapeSweep sw = escape_sweep(sys, 0.5, 10, 7, cfg);
        CHECK(sw.r0 == doctest::Approx(0.05));
        CHECK(sw.escaped() == 10);
        for (const PhaseState& s : sw.starts) {
            CHECK(s.x.norm() == doctest::Approx(0.05));
            CHECK(energy(sys, s) < 0.0);
        }
    }
    CHECK_THROWS_AS(escape_sweep(testsys::plane(1.0, 2.0), 0.5, 3, 7, cfg), PreconditionError);

    const EscapeSweep a = escape_sweep(testsys::quartic_saddle(), 0.5, 4, 99, cfg);
    const EscapeSweep b = escape_sweep(testsys::quartic_saddle(), 0.5, 4, 99, cfg);
    for (size_t i = 0; i < 4; ++i) CHECK(a.starts[i].pack() == b.starts[i].pack());
}

TEST_CASE("asymptotic orbits") {
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    const BlownSystem pend(testsys::pendulum());
    const FixedPointCatalog cat = build_catalog(pend);
    for (const BoundaryFixedPoint& fp : cat.points) {
        const AsymptoticOrbit orb = asymptotic_orbit(pend, fp, 1.0, cfg);
        CHECK(orb.max_abs_energy <= 1e-8);
        CHECK(orb.angular_error <= 1e-4);
        CHECK(orb.reconvergence_ratio < 0.2);
        CHECK(std::abs(orb.blown.samples.back().state[0]) >= 0.0);
        // The original-frame orbit is a piece of the separatrix.
        for (const Sample& s : orb.original.samples) CHECK(std::abs(s.energy) <= 1e-8);
    }

    const BlownSystem plane(testsys::plane(-1.0, 1.0));
    for (const BoundaryFixedPoint& fp : build_catalog(plane).points) {
        if (!(fp.q[0] > 0.5 && fp.nu_star < 0.0)) continue;
        const AsymptoticOrbit orb = asymptotic_orbit(plane, fp, 0.5, cfg);
        CHECK(orb.angular_error <= 1e-4);
        CHECK(orb.max_abs_energy <= 1e-6);
        const PhaseState last = orb.original.phase_state(orb.original.size() - 1);
        CHECK((last.x.normalized() - vec({1.0, 0.0})).norm() <= 1e-4);
        CHECK(last.x.norm() < 1e-4);
    }

    const BlownSystem zero(testsys::plane(0.0, 1.0));
    for (const BoundaryFixedPoint& fp : build_catalog(zero).points) {
        CHECK_THROWS_AS(asymptotic_orbit(zero, fp, 0.5, cfg), NotHyperbolicError);
    }
}

TEST_CASE("boomerang demonstration on the pendulum") {
    const BlownSystem pend(testsys::pendulum());
    const CriticalPointSearch s = find_sphere_critical_points(pend.U_l());
    IntegratorConfig cfg;
    cfg.t_max = 100.0;
    const BoomerangReport rep = boomerang_demo(pend, s.points.back(), {4, 8, 16, 32, 64, 128}, 1.0, cfg);
    REQUIRE(rep.distances.size() == 6);
    CHECK(rep.monotone);
    CHECK(rep.distances[3] <= 0.12);
    CHECK(rep.distances[5] <= 0.05);
    CHECK(rep.reversal_error <= 1e-10);
    // d_H n^{2/3} is roughly constant.
    for (size_t i = 0; i < rep.ns.size(); ++i) {
        CHECK(rep.distances[i] * std::pow(rep.ns[i], 2.0 / 3.0) == doctest::Approx(1.10).epsilon(0.05));
    }

    CHECK_THROWS_AS(boomerang_demo(pend, s.points.back(), {0}, 1.0, cfg), InputError);
    const BlownSystem mag(testsys::quadratic_full());
    const CriticalPointSearch sm = find_sphere_critical_points(mag.U_l());
    CHECK_THROWS_AS(boomerang_demo(mag, sm.points.front(), {4}, 0.5, cfg), PreconditionError);
    const BlownSystem saddle(testsys::plane(-1.0, 1.0));
    const CriticalPointSearch ss = find_sphere_critical_points(saddle.U_l());
    CHECK_THROWS_AS(boomerang_demo(saddle, ss.points.back(), {4}, 0.5, cfg), PreconditionError);
}
