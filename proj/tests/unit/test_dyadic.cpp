#include "doctest.h"
#include "oracles.hpp"

#include "pdolab/dyadic.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/probes.hpp"
#include "pdolab/quantize.hpp"

using namespace pdolab;

TEST_CASE("bump values and shape") {
    CHECK(DyadicSystem::bump(0.5) == 1.0);
    CHECK(DyadicSystem::bump(1.0) == 1.0);
    CHECK(DyadicSystem::bump(2.5) == 0.0);
    CHECK(DyadicSystem::bump(2.0) == 0.0);
    CHECK(DyadicSystem::bump(-0.7) == 1.0);
    const double mid = DyadicSystem::bump(1.5);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double lam = 1.0 + i / 10000.0;
        const double v = DyadicSystem::bump(lam);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(std::abs(v - oracle::psi0(lam)) < 1e-15);
        prev = v;
    }
}

TEST_CASE("band values") {
    CHECK(DyadicSystem::partial_sum(6, 3.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(DyadicSystem::band(3, 20.0) == 0.0);
    CHECK(DyadicSystem::band(2, 3.0) == doctest::Approx(1.0 - oracle::psi0(1.5)).epsilon(1e-15));
    for (int l = 1; l <= 12; ++l) {
        CHECK(DyadicSystem::band(l, std::ldexp(1.0, l - 1) * 0.999) == 0.0);
        CHECK(DyadicSystem::band(l, std::ldexp(1.0, l + 1) * 1.001) == 0.0);
        CHECK(DyadicSystem::band(l, std::ldexp(1.0, l + 1)) == 0.0);
    }
}

TEST_CASE("property: telescoping partial sums and partition of unity") {
    oracle::Gen gen(12);
    for (int i = 0; i < 10000; ++i) {
        const int top = gen.integer(2, 14);
        const double lam = gen.uniform(0.0, std::ldexp(1.0, top - 1));
        const double s = DyadicSystem::partial_sum(top, lam);
        CHECK(std::abs(s - oracle::psi0(std::ldexp(lam, -top))) <= 1e-12);
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }
}

TEST_CASE("top band covers the grid") {
    for (std::size_t N : {8, 64, 1024}) {
        const TorusGrid g(1, N);
        const int L = DyadicSystem::top_band(g);
        const double max_bracket = std::sqrt(1.0 + static_cast<double>(N * N) / 4.0);
        CHECK(std::ldexp(1.0, L - 1) > max_bracket);
        CHECK(std::ldexp(1.0, L - 2) <= max_bracket);
    }
}

TEST_CASE("band projections of a constant and a mode") {
    const TorusGrid g(1, 64);
    const GridFunction one(g, std::vector<Complex>(64, 1.0));
    CHECK(oracle::max_diff(band_project(0, one), one) < 1e-14);
    for (int l = 1; l <= 6; ++l) {
        CHECK(sup_norm(band_project(l, one)) < 1e-14);
    }
    const auto mode = single_mode(5, g);
    const double b = std::sqrt(26.0);
    for (int l = 0; l <= 7; ++l) {
        const double expect = oracle::psi(l, b);
        if (l == 2 || l == 3) {
            CHECK(expect > 0.0);
        } else {
            CHECK(expect == 0.0);
        }
        const auto p = band_project(l, mode);
        for (std::size_t j = 0; j < 64; ++j) {
            CHECK(std::abs(p[j] - expect * mode[j]) < 1e-13);
        }
    }
}

TEST_CASE("property: reconstruction, disjoint projectors, commutation") {
    oracle::Gen gen(13);
    for (int trial = 0; trial < 6; ++trial) {
        const TorusGrid g(trial % 2 == 0 ? 1 : 2, trial % 2 == 0 ? 128 : 32);
        const auto f = oracle::random_function(g, gen);
        const int L = DyadicSystem::top_band(g);
        GridFunction sum(g);
        for (int l = 0; l <= L; ++l) {
            sum += band_project(l, f);
        }
        CHECK(oracle::max_diff(sum, f) <= 1e-12);
        const int l = gen.integer(1, L - 2);
        CHECK(sup_norm(band_project(l, band_project(l + 2, f))) < 1e-13);
        const auto m = Symbol::multiplier(g.dim(), [](std::span<const double> xi) {
            return std::polar(1.0 / japanese_bracket(xi), xi[0]);
        });
        CHECK(oracle::max_diff(band_project(l, apply_multiplier(m, f)), apply_multiplier(m, band_project(l, f))) < 1e-12);
    }
}

TEST_CASE("Besov norm: constants, single mode, direct oracle") {
    const TorusGrid g(1, 64);
    CHECK(besov_norm(GridFunction(g, std::vector<Complex>(64, Complex(-3.0))), 0.7) == doctest::Approx(3.0));
    const double b = std::sqrt(26.0);
    const double expect = std::max(2.0 * oracle::psi(2, b), std::pow(2.0, 1.5) * oracle::psi(3, b));
    CHECK(besov_norm(single_mode(5, g), 0.5) == doctest::Approx(expect).epsilon(1e-12));

    oracle::Gen gen(14);
    const TorusGrid small(1, 32);
    for (int trial = 0; trial < 3; ++trial) {
        const auto f = oracle::random_function(small, gen);
        const double s = gen.uniform(-0.5, 1.5);
        CHECK(besov_norm(f, s) == doctest::Approx(oracle::besov_direct(f, s, DyadicSystem::top_band(small))).epsilon(1e-10));
    }
}

TEST_CASE("property: Besov norm is a norm") {
    oracle::Gen gen(15);
    const TorusGrid g(1, 128);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracle::random_trig_poly(g, 40, gen);
        const auto h = oracle::random_trig_poly(g, 40, gen);
        const double s = gen.uniform(0.1, 0.9);
        const double c = gen.uniform(-3.0, 3.0);
        CHECK(besov_norm(c * f, s) == doctest::Approx(std::abs(c) * besov_norm(f, s)).epsilon(1e-12));
        CHECK(besov_norm(f + h, s) <= besov_norm(f, s) + besov_norm(h, s) + 1e-12);
    }
}

TEST_CASE("Hoelder seminorm") {
    const TorusGrid g(1, 64);
    CHECK(holder_seminorm(GridFunction(g, std::vector<Complex>(64, 2.0)), 0.5) == 0.0);
    CHECK_THROWS_AS(holder_seminorm(GridFunction(g), 1.0), RangeError);
    CHECK_THROWS_AS(holder_seminorm(GridFunction(g), 0.0), RangeError);

    auto cosine = [](std::size_t N) {
        return sample([](std::span<const double> x) { return Complex(std::cos(kTwoPi * x[0])); }, TorusGrid(1, N));
    };
    const double a = holder_seminorm(cosine(256), 0.5);
    const double b = holder_seminorm(cosine(512), 0.5);
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) <= 0.05 * a);

    // The shift plan against an exhaustive pair scan on a small grid.
    oracle::Gen gen(16);
    const TorusGrid small(1, 32);
    const auto f = oracle::random_trig_poly(small, 3, gen);
    double full = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
        for (std::size_t j = 0; j < 32; ++j) {
            if (i == j) {
                continue;
            }
            const double d = std::min<double>(std::abs(static_cast<double>(i) - static_cast<double>(j)),
                                              32.0 - std::abs(static_cast<double>(i) - static_cast<double>(j))) / 32.0;
            full = std::max(full, std::abs(f[i] - f[j]) * std::pow(d, -0.5));
        }
    }
    const double planned = holder_seminorm(f, 0.5);
    CHECK(planned <= full * (1 + 1e-12));
    CHECK(planned >= 0.5 * full);
    CHECK(holder_norm(f, 0.5) == doctest::Approx(planned + sup_norm(f)));
}

TEST_CASE("band probe seminorm scales like 2^{ls}") {
    const TorusGrid g(1, 1024);
    for (int l = 3; l <= 8; ++l) {
        const auto p = band_probe(l, g, 5);
        const double ratio = holder_seminorm(p, 0.5) / (std::pow(2.0, 0.5 * l) * sup_norm(p));
        CHECK(ratio > 0.2);
        CHECK(ratio < 20.0);
    }
}

TEST_CASE("equivalence reports") {
    const TorusGrid g(1, 256);
    const auto c = sample([](std::span<const double> x) { return Complex(std::cos(kTwoPi * x[0])); }, g);
    const auto one = equivalence_report({c}, 0.5);
    CHECK(one.entries.size() == 1);
    CHECK(one.pass());

    std::vector<GridFunction> w;
    const TorusGrid fine(1, 4096);
    for (int M = 4; M <= 10; ++M) {
        w.push_back(weierstrass(0.3, M, fine));
    }
    CHECK(equivalence_report(w, 0.3).pass());

    std::vector<GridFunction> modes;
    for (int k = 1; k <= 16; ++k) {
        modes.push_back(single_mode(k, g));
    }
    modes.push_back(GridFunction(g, std::vector<Complex>(256, 1.0)));
    const auto r = equivalence_report(modes, 0.7);
    CHECK(r.pass());
    CHECK(r.excluded.size() == 1);
    CHECK(r.spread() == doctest::Approx(r.max_ratio / r.min_ratio));
}
