#include <doctest.h>

#include <random>

#include "mcgehee/errors.hpp"
#include "mcgehee/germ.hpp"
#include "systems.hpp"

using namespace mcgehee;
using testsys::poly;
using testsys::vec;

namespace {

Germ random_germ(int n, int trunc, std::mt19937_64& rng) {
    Germ g(n, trunc);
    std::uniform_int_distribution<int> e(0, trunc);
    for (int k = 0; k < 3 * trunc; ++k) {
        Exponent alpha(n, 0);
        int left = e(rng);
        for (int i = 0; i < n && left > 0; ++i) {
            const int take = (i == n - 1) ? left : std::uniform_int_distribution<int>(0, left)(rng);
            alpha[i] = take;
            left -= take;
        }
        g.add_term(alpha, testsys::uniform(rng, -1.0, 1.0));
    }
    return g;
}

}  // namespace

TEST_CASE("evaluate: hand values") {
    const Germ g = poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}});
    CHECK(g.evaluate(vec({1.0, 0.0})) == doctest::Approx(-1.0));
    CHECK(Germ(3, 5).evaluate(vec({0.3, -2.0, 1.0})) == 0.0);
    const Germ cosine = testsys::pendulum(8).potential();
    CHECK(cosine.evaluate(vec({0.0})) == 0.0);
    CHECK_THROWS_AS(g.evaluate(vec({1.0, 2.0, 3.0})), InputError);
}

TEST_CASE("canonical form: zero coefficients are dropped and repeated exponents summed") {
    Germ g(2, 3);
    g.add_term({1, 1}, 2.0);
    g.add_term({1, 1}, -2.0);
    CHECK(g.is_zero());
    const Germ h = Germ::from_terms(2, 3, {{{2, 0}, 1.0}, {{2, 0}, 0.5}});
    CHECK(h.coefficient({2, 0}) == 1.5);
    CHECK_THROWS_AS(Germ::from_terms(2, 3, {{{4, 0}, 1.0}}), InputError);
    CHECK_THROWS_AS(Germ::from_terms(2, 3, {{{1, 0, 0}, 1.0}}), InputError);
    CHECK_THROWS_AS(Germ::from_terms(2, 3, {{{-1, 2}, 1.0}}), InputError);
}

TEST_CASE("gradient and hessian: hand values") {
    const Germ g = poly(2, 3, {{{3, 0}, 1.0}, {{1, 2}, 1.0}});
    const auto grad = g.gradient();
    CHECK(grad[0].evaluate(vec({0.6, 0.8})) == doctest::Approx(1.72).epsilon(1e-14));
    CHECK(grad[1].evaluate(vec({0.6, 0.8})) == doctest::Approx(0.96).epsilon(1e-14));
    CHECK(grad[0].truncation() == 2);

    const auto gc = Germ::constant(2, 3, 4.0).gradient();
    CHECK(gc[0].is_zero());
    CHECK(gc[1].is_zero());

    const auto H = poly(2, 2, {{{2, 0}, -1.0}, {{0, 2}, 1.0}}).hessian();
    CHECK(H[0][0].coefficient({0, 0}) == -2.0);
    CHECK(H[1][1].coefficient({0, 0}) == 2.0);
    CHECK(H[0][1].is_zero());
    CHECK(H[0][0].degrees().size() == 1);
}

TEST_CASE("jets: worked examples") {
    const Germ saddle = poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}});
    const Jet j1 = first_nonzero_jet(saddle);
    CHECK(j1.degree == 2);
    CHECK(j1.poly.germ().terms().size() == 1);
    CHECK(j1.poly.germ().coefficient({0, 2}) == 1.0);
    const auto j2 = second_nonzero_jet(saddle);
    REQUIRE(j2);
    CHECK(j2->degree == 4);
    CHECK(j2->poly.germ().coefficient({4, 0}) == -1.0);

    const Germ cosine6 = testsys::pendulum(6).potential();
    CHECK(first_nonzero_jet(cosine6).degree == 2);
    CHECK(first_nonzero_jet(cosine6).poly.germ().coefficient({2}) == doctest::Approx(-0.5));
    const auto c2 = second_nonzero_jet(cosine6);
    REQUIRE(c2);
    CHECK(c2->degree == 4);
    CHECK(c2->poly.germ().coefficient({4}) == doctest::Approx(1.0 / 24.0));

    CHECK(first_nonzero_jet(poly(2, 2, {{{1, 1}, 1.0}})).degree == 2);
    CHECK_FALSE(second_nonzero_jet(poly(2, 2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}})));
    CHECK_THROWS_AS(first_nonzero_jet(Germ(2, 4)), NoJetError);
    CHECK_THROWS_AS(radial_split(Germ(2, 4)), NoJetError);
}

TEST_CASE("radial split: worked examples") {
    const RadialSplit a = radial_split(poly(2, 3, {{{2, 0}, 1.0}, {{3, 0}, 1.0}}));
    CHECK(a.base_degree() == 2);
    REQUIRE(a.tail.size() == 1);
    CHECK(a.tail[0].germ().coefficient({3, 0}) == 1.0);
    CHECK(a.tail_value(0.7, vec({0.6, 0.8})) == doctest::Approx(0.216));

    const RadialSplit b = radial_split(poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}}));
    REQUIRE(b.tail.size() == 2);
    CHECK(b.tail[0].is_zero());
    CHECK(b.tail[1].germ().coefficient({4, 0}) == -1.0);

    const RadialSplit c = radial_split(poly(2, 2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}));
    CHECK(c.tail.empty());
}

TEST_CASE("property: Euler identity on random homogeneous polynomials") {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const int d = 2 + trial % 5;
        const HomogeneousPoly P(random_germ(n, d, rng).homogeneous_part(d), d);
        const Eigen::VectorXd x = testsys::uniform(rng, 0.1, 2.0) * testsys::random_unit(n, rng);
        const double p = P.evaluate(x);
        worst = std::max(worst, std::abs(P.gradient_at(x).dot(x) - d * p) / (1.0 + std::abs(p)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("property: radial reassembly on random germs, including r < 0") {
    std::mt19937_64 rng(12);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 3;
        const Germ g = random_germ(n, 6, rng);
        if (g.is_zero()) {
            continue;
        }
        double scale = 0.0;
        for (const auto& [alpha, c] : g.terms()) {
            scale += std::abs(c);
        }
        const RadialSplit s = radial_split(g);
        const double r = testsys::uniform(rng, -1.0, 1.0);
        const Eigen::VectorXd q = testsys::random_unit(n, rng);
        worst = std::max(worst, std::abs(g.evaluate(r * q) - s.reassemble(r, q)) / scale);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("property: gradient and hessian against central differences") {
    std::mt19937_64 rng(13);
    const double h = 1e-5;
    double worst_g = 0.0, worst_h = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 2;
        const Germ g = random_germ(n, 5, rng);
        const HomogeneousPoly P(g.homogeneous_part(4), 4);
        const Eigen::VectorXd x = 0.8 * testsys::random_unit(n, rng);
        const auto grad = g.gradient();
        const auto hess = g.hessian();
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e[i] = h;
            const double fd = (g.evaluate(x + e) - g.evaluate(x - e)) / (2 * h);
            const double an = grad[i].evaluate(x);
            worst_g = std::max(worst_g, std::abs(fd - an) / (1.0 + std::abs(an)));
            for (int j = 0; j < n; ++j) {
                const double fdh = (grad[j].evaluate(x + e) - grad[j].evaluate(x - e)) / (2 * h);
                const double anh = hess[i][j].evaluate(x);
                worst_h = std::max(worst_h, std::abs(fdh - anh) / (1.0 + std::abs(anh)));
            }
        }
        const Eigen::VectorXd pg = P.gradient_at(x);
        for (int i = 0; i < n; ++i) {
            CHECK(pg[i] == doctest::Approx(P.germ().gradient()[i].evaluate(x)));
        }
    }
    CHECK(worst_g <= 1e-6);
    CHECK(worst_h <= 1e-6);
}

TEST_CASE("to_string / parse roundtrip") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const Germ g = random_germ(n, 5, rng);
        const std::string s = g.to_string();
        CHECK(Germ::parse(n, 5, s) == g);
        CHECK(Germ::parse(n, 5, s).to_string() == s);
    }
    CHECK(poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}}).to_string() == "1*x2^2 - 1*x1^4");
    CHECK(Germ::parse(2, 4, "0").is_zero());
    CHECK(Germ::parse(2, 4, "-1*x1^4 + 1*x2^2") == poly(2, 4, {{{0, 2}, 1.0}, {{4, 0}, -1.0}}));
    CHECK_THROWS_AS(Germ::parse(2, 4, "1*y2"), InputError);
    CHECK_THROWS_AS(Germ::parse(2, 4, "1*x3"), InputError);
    CHECK_THROWS_AS(Germ::parse(2, 4, ""), InputError);
}
