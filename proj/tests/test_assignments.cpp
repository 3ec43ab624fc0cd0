#include "wcf/assignments.hpp"
#include "wcf/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace wcf;

namespace {

std::vector<double> random_coords(std::mt19937& rng, int n, double lo = 0.0, double hi = 10.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> xs;
    while (static_cast<int>(xs.size()) < n) {
        xs.push_back(u(rng));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a < 1e-3; }), xs.end());
    }
    return xs;
}

// Independent of the log-magnitude product: plain left-to-right multiplication.
std::vector<double> naive_weights(const std::vector<double>& xs, const PolySpec& f) {
    std::vector<double> p;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double num = 1.0;
        for (double a : f.all_roots()) num *= a - xs[i];
        double den = 1.0;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) den *= xs[j] - xs[i];
        p.push_back(-num / den);
    }
    return p;
}

}  // namespace

TEST_CASE("lagrange weights of the worked examples") {
    const std::vector<double> c4{0, 1, 2, 3};
    const auto w = lagrange_weights(c4, PolySpec::f0()).weights();
    const std::vector<double> expect{-1.0 / 6, 0.5, -0.5, 1.0 / 6};
    REQUIRE(w.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx(expect[i]).epsilon(1e-14));

    const std::vector<double> two{1.5, 4.0};
    const auto w2 = lagrange_weights(two, PolySpec::f0()).weights();
    CHECK(w2[0] == doctest::Approx(-1.0 / 2.5));
    CHECK(w2[1] == doctest::Approx(1.0 / 2.5));

    const std::vector<double> c3{0, 1, 2};
    const auto merge = lagrange_weights(c3, PolySpec::f0()).weights();
    CHECK(merge[0] == doctest::Approx(-0.5));
    CHECK(merge[1] == doctest::Approx(1.0));
    CHECK(merge[2] == doctest::Approx(-0.5));

    const auto rooted = lagrange_weights(c3, PolySpec::from_roots({3.0})).weights();
    CHECK(rooted[0] == doctest::Approx(-1.5));
    CHECK(rooted[1] == doctest::Approx(2.0));
    CHECK(rooted[2] == doctest::Approx(-0.5));
}

TEST_CASE("lagrange weights reject bad input") {
    const std::vector<double> c{0, 1, 2};
    CHECK_THROWS_AS(lagrange_weights(c, PolySpec::from_roots({1.0, 2.0})), InputError);
    CHECK_THROWS_AS(lagrange_weights(c, PolySpec::monomial(2)), InputError);
    const std::vector<double> dup{0, 1, 1};
    CHECK_THROWS_AS(lagrange_weights(dup, PolySpec::f0()), InputError);
    const std::vector<double> one{1};
    CHECK_THROWS_AS(lagrange_weights(one, PolySpec::f0()), InputError);
}

TEST_CASE("lagrange weights match the naive product") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 8;
        const auto xs = random_coords(rng, n);
        std::uniform_real_distribution<double> u(0.0, 12.0);
        std::vector<double> roots;
        for (int r = 0; r < trial % (n - 1); ++r) roots.push_back(u(rng));
        const PolySpec f = PolySpec::from_roots(roots);
        const auto got = lagrange_weights(xs, f);
        const auto want = naive_weights(xs, f);
        double scale = 0.0;
        for (double p : want) scale = std::max(scale, std::fabs(p));
        std::size_t j = 0;
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (want[i] == 0.0) continue;  // a root on a coordinate
            REQUIRE(j < got.size());
            CHECK(std::fabs(got.points()[j].p - want[i]) <= 1e-12 * scale);
            ++j;
        }
    }
}

TEST_CASE("f0 signs alternate starting negative") {
    std::mt19937 rng(3);
    for (int n = 2; n <= 10; ++n) {
        const auto t = lagrange_weights(random_coords(rng, n), PolySpec::f0());
        for (std::size_t i = 0; i < t.size(); ++i) CHECK((t.points()[i].p < 0) == (i % 2 == 0));
    }
}

TEST_CASE("split into positive and negative parts") {
    const std::vector<double> c4{0, 1, 2, 3};
    const auto [h, g] = split_h_g(lagrange_weights(c4, PolySpec::f0()));
    REQUIRE(h.size() == 2);
    REQUIRE(g.size() == 2);
    CHECK(h.points()[0].x == 1);
    CHECK(h.points()[0].p == doctest::Approx(0.5));
    CHECK(h.points()[1].x == 3);
    CHECK(h.points()[1].p == doctest::Approx(1.0 / 6));
    CHECK(g.points()[0].x == 0);
    CHECK(g.points()[0].p == doctest::Approx(1.0 / 6));
    CHECK(g.points()[1].x == 2);
    CHECK(g.points()[1].p == doctest::Approx(0.5));

    const auto [hp, gp] = split_h_g(Assignment({{1, 2}, {3, 4}}));
    CHECK(hp.size() == 2);
    CHECK(gp.empty());

    const std::vector<double> c3{0, 1, 2};
    const auto [hm, gm] = split_h_g(lagrange_weights(c3, PolySpec::f0()));
    CHECK(hm.size() == 1);
    CHECK(hm.points()[0].p == doctest::Approx(1.0));
    CHECK(gm.size() == 2);
}

TEST_CASE("split then difference reproduces t") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = lagrange_weights(random_coords(rng, 3 + trial % 6), PolySpec::from_roots({4.0}));
        const auto [h, g] = split_h_g(t);
        std::map<double, double> sum;
        for (const auto& p : h.points()) sum[p.x] += p.p;
        for (const auto& p : g.points()) sum[p.x] -= p.p;
        REQUIRE(sum.size() == t.size());
        for (const auto& p : t.points()) CHECK(sum[p.x] == p.p);
    }
}

TEST_CASE("moments") {
    const std::vector<double> c4{0, 1, 2, 3};
    const auto t = lagrange_weights(c4, PolySpec::f0());
    CHECK(std::fabs(moment(t, 2)) < 1e-14);
    CHECK(moment(t, 3) == doctest::Approx(1.0));
    CHECK(moment(t, 0) == doctest::Approx(-1.0 / 6 + 0.5 - 0.5 + 1.0 / 6));
    CHECK_THROWS_AS(moment(t, -1), InputError);
}

TEST_CASE("moment identities on random f-assignments") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 9;
        const auto xs = random_coords(rng, n);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        std::vector<double> roots;
        for (int r = 0; r < trial % (n - 1); ++r) roots.push_back(u(rng));
        const auto t = lagrange_weights(xs, PolySpec::from_roots(roots));
        const int deg = static_cast<int>(roots.size());
        for (int k = 0; k <= n - 2 - deg; ++k)
            CHECK(std::fabs(moment(t, k)) <= 1e-10 * moment_scale(t, k));
        // First surviving moment is a divided difference of f x^k of degree n-1: (-1)^(n+deg).
        const int first = n - 1 - deg;
        const double exact = ((n + deg) % 2 == 0) ? 1.0 : -1.0;
        CHECK(std::fabs(moment(t, first) - exact) <= 1e-12 * moment_scale(t, first) + 1e-12);
    }
}

TEST_CASE("transfer oracle examples") {
    const std::vector<double> two{1.0, 3.0};
    for (double lambda : {0.0, 0.5, 7.0})
        CHECK(transfer_oracle(two, PolySpec::f0(), lambda) ==
              doctest::Approx(-1.0 / ((lambda + 1.0) * (lambda + 3.0))));
    const std::vector<double> c4{0, 1, 2, 3};
    CHECK(transfer_oracle(c4, PolySpec::f0(), 1.0) == doctest::Approx(-1.0 / 24));
    // f(-lambda) = 0 at lambda = -r; with a negative-side root the oracle vanishes.
    const std::vector<double> c3{1, 2, 3};
    CHECK(transfer_oracle(c3, PolySpec::monomial(1), 0.0) == doctest::Approx(0.0));
}

TEST_CASE("transfer oracle agrees with direct summation") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> loglam(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 9;
        const auto xs = random_coords(rng, n);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        std::vector<double> roots;
        for (int r = 0; r < trial % (n - 1); ++r) roots.push_back(u(rng));
        const PolySpec f = PolySpec::from_roots(roots);
        const auto t = lagrange_weights(xs, f);
        for (int s = 0; s < 50; ++s) {
            const double lambda = std::pow(10.0, loglam(rng));
            double direct = 0.0, scale = 0.0;
            for (const auto& p : t.points()) {
                direct += p.p / (lambda + p.x);
                scale += std::fabs(p.p / (lambda + p.x));
            }
            const double oracle = transfer_oracle(xs, f, lambda);
            CHECK(std::fabs(direct - oracle) <= 1e-10 * std::max(std::fabs(oracle), 1e-300) + 1e-13 * scale);
        }
    }
}

TEST_CASE("validity verdicts") {
    const std::vector<double> c4{0, 1, 2, 3};
    CHECK(check_validity(lagrange_weights(c4, PolySpec::f0())).verdict == Verdict::valid);
    CHECK(check_validity(Assignment({{1, 1}})).verdict == Verdict::invalid);
    const std::vector<double> c3{0, 1, 2};
    const auto merge = check_validity(lagrange_weights(c3, PolySpec::f0()));
    CHECK(merge.verdict == Verdict::valid);
    CHECK(merge.grid.size() >= 512);
    // Sum zero but the transfer function is positive near 0.
    CHECK(check_validity(Assignment({{0, 1}, {1, -2}, {2, 1}})).verdict == Verdict::invalid);
}

TEST_CASE("validity near the threshold is inconclusive") {
    // Merge weights plus d {1: +1, 2: -1}: the sum stays zero, <x> = -d, so the transfer
    // function turns positive only as lambda -> infinity, at relative size about d/4.
    const double d = 1.6e-8;
    const Assignment t({{0.0, -1.0}, {1.0, 2.0 + d}, {2.0, -1.0 - d}});
    const auto rep = check_validity(t);
    CHECK(rep.min_transfer_value > 1e-9);
    CHECK(rep.min_transfer_value < 1e-8);
    CHECK(rep.verdict == Verdict::inconclusive);
    CHECK(check_validity(Assignment({{0.0, -1.0}, {1.0, 2.0 + 1e-6}, {2.0, -1.0 - 1e-6}})).verdict ==
          Verdict::invalid);
}

TEST_CASE("verdict bands follow the tolerance") {
    const Assignment t({{1.0, 1.0}, {2.0, -1.0}});
    const double v = check_validity(t).min_transfer_value;
    REQUIRE(v > 0.0);
    GridConfig cfg;
    cfg.tol = v / 2.0;
    CHECK(check_validity(t, cfg).verdict == Verdict::inconclusive);
    cfg.tol = v * 2.0;
    CHECK(check_validity(t, cfg).verdict == Verdict::valid);
    cfg.tol = v / 20.0;
    CHECK(check_validity(t, cfg).verdict == Verdict::invalid);
}

TEST_CASE("one tenth move") {
    const std::vector<double> args{0, .5, 1, 2, 3, 4, 5, 6};
    const auto mp = one_tenth_move(args);
    CHECK(mp.coords == std::vector<double>{0, 1, 2, 3, 4});
    CHECK(mp.f.roots == std::vector<double>{.5, 5, 6});
    CHECK(check_validity(lagrange_weights(mp.coords, mp.f)).verdict == Verdict::valid);
    const std::vector<double> bad{1, .5, 2, 3, 4, 5, 6, 7};
    CHECK_THROWS_AS(one_tenth_move(bad), InputError);
    const std::vector<double> short_args{0, 1, 2};
    CHECK_THROWS_AS(one_tenth_move(short_args), InputError);
}

TEST_CASE("assignment invariants") {
    CHECK_THROWS_AS(Assignment({{1, 1}, {0, -1}}), InputError);
    CHECK_THROWS_AS(Assignment({{-1, 1}}), InputError);
    CHECK(Assignment({{0, 0.0}, {1, 2}}).size() == 1);
}
