#include "doctest.h"
#include "oracles.hpp"

#include "pdolab/dyadic.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/probes.hpp"

#include <set>

using namespace pdolab;

TEST_CASE("Weierstrass functions") {
    const TorusGrid g(1, 1024);
    const auto w0 = weierstrass(0.5, 0, g);
    for (std::size_t j = 0; j < 1024; j += 17) {
        CHECK(std::abs(w0[j] - std::cos(kTwoPi * static_cast<double>(j) / 1024.0)) < 1e-13);
    }
    double lo = INFINITY;
    double hi = 0.0;
    for (int M = 2; M <= 8; ++M) {
        const double s = 0.4;
        const auto w = weierstrass(s, M, g);
        const double bound = (1.0 - std::pow(2.0, -s * (M + 1))) / (1.0 - std::pow(2.0, -s));
        CHECK(sup_norm(w) <= bound + 1e-12);
        const double b = besov_norm(w, s);
        CHECK(b <= 1.0 + std::pow(2.0, s));
        if (M == 4) {
            CHECK(b == doctest::Approx(oracle::besov_direct(w, s, DyadicSystem::top_band(g))).epsilon(1e-10));
        }
        lo = std::min(lo, b);
        hi = std::max(hi, b);
        for (std::size_t j = 0; j < 1024; j += 31) {
            double expect = 0.0;
            for (int k = 0; k <= M; ++k) {
                expect += std::pow(2.0, -k * s) * std::cos(kTwoPi * std::ldexp(1.0, k) * static_cast<double>(j) / 1024.0);
            }
            CHECK(std::abs(w[j] - expect) < 1e-12);
        }
    }
    CHECK(hi / lo < 1.5);
    CHECK_THROWS_AS(weierstrass(0.5, 9, g), RangeError);
    CHECK_THROWS_AS(weierstrass(1.5, 3, g), RangeError);
}

TEST_CASE("band probes: support, normalization, determinism") {
    const TorusGrid g(1, 1024);
    for (int l = 2; l <= 8; ++l) {
        const auto p = band_probe(l, g, 99);
        CHECK(besov_norm(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        const auto c = forward_fft(p);
        std::size_t modes = 0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            if (std::abs(c.coeffs()[q]) > 1e-14) {
                ++modes;
                const double b = oracle::bracket(g.frequency_of_index(q));
                CHECK(b >= std::ldexp(1.0, l - 1));
                CHECK(b <= std::ldexp(1.0, l + 1));
            }
        }
        CHECK(modes <= 32);
        CHECK(modes >= 1);
        for (int lp = 0; lp <= 10; ++lp) {
            if (std::abs(lp - l) >= 2) {
                CHECK(sup_norm(band_project(lp, p)) < 1e-13);
            }
        }
        GridFunction near(g);
        for (int lp = l - 1; lp <= l + 1; ++lp) {
            near += band_project(lp, p);
        }
        CHECK(oracle::max_diff(near, p) < 1e-12);
        CHECK(oracle::max_diff(band_probe(l, g, 99), p) == 0.0);
    }
    CHECK(oracle::max_diff(band_probe(5, g, 1), band_probe(5, g, 2)) > 1e-3);
    CHECK_THROWS_AS(band_probe(10, g, 1), RangeError);
}

TEST_CASE("seed derivation separates streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t l = 0; l < 20; ++l) {
        for (std::uint64_t p = 0; p < 20; ++p) {
            seen.insert(derive_seed(1, l, p));
        }
    }
    CHECK(seen.size() == 400);
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("probe specs") {
    const TorusGrid g(1, 256);
    ProbeSpec w{ProbeSpec::Kind::weierstrass, 0.3, 4, 1};
    CHECK(oracle::max_diff(w.build(g), weierstrass(0.3, 4, g)) == 0.0);
    ProbeSpec m{ProbeSpec::Kind::single_mode, 0.0, 7, 1};
    CHECK(oracle::max_diff(m.build(g), single_mode(7, g)) == 0.0);
    ProbeSpec b{ProbeSpec::Kind::band_random, 0.0, 4, 12};
    CHECK(oracle::max_diff(b.build(g), band_probe(4, g, 12)) == 0.0);
    CHECK_FALSE(w.label().empty());
    CHECK(w.label() != m.label());
}
