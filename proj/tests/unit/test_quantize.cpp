#include "doctest.h"
#include "oracles.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/quantize.hpp"

using namespace pdolab;

namespace {

Symbol random_table(const TorusGrid& g, oracle::Gen& gen) {
    const auto box = FrequencyBox::covering(g);
    std::vector<Complex> v(g.size() * box.size());
    for (auto& c : v) {
        c = gen.complex();
    }
    return Symbol::table(g, box, v);
}

Symbol random_separable(int dim, oracle::Gen& gen, int terms) {
    std::vector<SeparableTerm> out;
    for (int r = 0; r < terms; ++r) {
        const int kx = gen.integer(-3, 3);
        const double p = gen.uniform(0.0, 2.0);
        const double amp = gen.uniform(-1.0, 1.0);
        SeparableTerm t;
        t.x_factor = [kx, amp, dim](std::span<const double> x) {
            double s = 0.0;
            for (int d = 0; d < dim; ++d) {
                s += x[static_cast<std::size_t>(d)];
            }
            return Complex(1.0 + amp * std::cos(kTwoPi * kx * s));
        };
        t.xi_factor = [p](std::span<const double> xi) { return std::polar(std::pow(japanese_bracket(xi), -p), p); };
        out.push_back(t);
    }
    return Symbol::separable(dim, out);
}

} // namespace

TEST_CASE("identity and multiplication operators") {
    oracle::Gen gen(1);
    const TorusGrid g(1, 32);
    const auto f = oracle::random_function(g, gen);
    const auto one = Symbol::multiplier(1, [](std::span<const double>) { return Complex(1.0); });
    CHECK(oracle::max_diff(apply_toroidal(one, f), f) < 1e-13);
    CHECK(oracle::max_diff(apply_toroidal(one, f, QuantizePath::direct), f) < 1e-12);

    const auto mult = Symbol::closed_form(1, [](std::span<const double> x, std::span<const double>) {
        return std::polar(1.0, kTwoPi * x[0]);
    });
    const auto out = apply_toroidal(mult, f);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(std::abs(out[j] - std::polar(1.0, kTwoPi * static_cast<double>(j) / 32.0) * f[j]) < 1e-12);
    }
}

TEST_CASE("property: every path agrees with the direct double sum") {
    oracle::Gen gen(42);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = trial % 2 == 0 ? 1 : 2;
        const TorusGrid g(n, n == 1 ? 16 : 8);
        const auto f = oracle::random_function(g, gen);
        const auto t = random_table(g, gen);
        const auto ref = oracle::direct_quantize(t, f);
        CHECK(oracle::max_diff(apply_toroidal(t, f), ref) <= 1e-10);
        CHECK(oracle::max_diff(apply_toroidal(t, f, QuantizePath::direct), ref) <= 1e-10);

        const auto s = random_separable(n, gen, 3);
        const auto sref = oracle::direct_quantize(s, f);
        CHECK(oracle::max_diff(apply_toroidal(s, f, QuantizePath::separable), sref) <= 1e-10);
        CHECK(oracle::max_diff(apply_toroidal(s, f, QuantizePath::direct), sref) <= 1e-10);
    }
}

TEST_CASE("property: linearity in the symbol and the function") {
    oracle::Gen gen(7);
    const TorusGrid g(1, 16);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = random_table(g, gen);
        const auto b = random_table(g, gen);
        const auto f = oracle::random_function(g, gen);
        const auto h = oracle::random_function(g, gen);
        const Complex c = gen.complex();
        const auto lhs = apply_toroidal(a, f + c * h);
        const auto rhs = apply_toroidal(a, f) + c * apply_toroidal(a, h);
        CHECK(oracle::max_diff(lhs, rhs) < 1e-11);

        std::vector<Complex> sum(a.table_values().size());
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] = a.table_values()[i] + b.table_values()[i];
        }
        const auto ab = Symbol::table(g, a.box(), sum);
        CHECK(oracle::max_diff(apply_toroidal(ab, f), apply_toroidal(a, f) + apply_toroidal(b, f)) < 1e-11);
    }
}

TEST_CASE("multipliers: delta projector, indicator cross-path, commutation") {
    oracle::Gen gen(9);
    const TorusGrid g(1, 64);
    const auto f = oracle::random_function(g, gen);
    const int k = 5;
    const auto delta = Symbol::multiplier(1, [k](std::span<const double> xi) { return Complex(xi[0] == k ? 1.0 : 0.0); });
    const auto proj = apply_multiplier(delta, f);
    const auto fk = oracle::naive_dft(f)[static_cast<std::size_t>(k)];
    for (std::size_t j = 0; j < 64; ++j) {
        CHECK(std::abs(proj[j] - fk * std::polar(1.0, kTwoPi * k * static_cast<double>(j) / 64.0)) < 1e-12);
    }

    const auto ind = Symbol::multiplier(1, [](std::span<const double> xi) {
        return Complex(japanese_bracket(xi) <= 4.0 ? 1.0 : 0.0);
    });
    CHECK(oracle::max_diff(apply_multiplier(ind, f), apply_toroidal(ind, f, QuantizePath::direct)) < 1e-12);

    const auto m1 = Symbol::multiplier(1, [](std::span<const double> xi) { return std::polar(1.0, std::sqrt(std::abs(xi[0]))); });
    const auto m2 = Symbol::multiplier(1, [](std::span<const double> xi) { return Complex(1.0 / japanese_bracket(xi)); });
    CHECK(oracle::max_diff(apply_multiplier(m1, apply_multiplier(m2, f)), apply_multiplier(m2, apply_multiplier(m1, f))) <
          1e-12);
    CHECK_THROWS_AS(apply_multiplier(Symbol::closed_form(1, [](std::span<const double> x, std::span<const double>) {
                                         return Complex(x[0]);
                                     }),
                                     f),
                    Error);
}

TEST_CASE("freeze: constant-in-xi, xi-only and the diagonal identity") {
    oracle::Gen gen(10);
    const TorusGrid g(1, 32);
    const auto f = oracle::random_function(g, gen);
    const auto c = Symbol::closed_form(1, [](std::span<const double> x, std::span<const double>) {
        return Complex(2.0 + std::sin(kTwoPi * x[0]));
    });
    const auto cz = freeze(c, g, 5);
    const auto out = apply_multiplier(cz, f);
    const double value = 2.0 + std::sin(kTwoPi * 5.0 / 32.0);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(std::abs(out[j] - value * f[j]) < 1e-12);
    }

    const auto m = Symbol::multiplier(1, [](std::span<const double> xi) { return Complex(xi[0] * xi[0]); });
    const auto mz = freeze(m, g, 3);
    CHECK(oracle::max_diff(apply_multiplier(mz, f), apply_multiplier(m, f)) == 0.0);

    for (int trial = 0; trial < 3; ++trial) {
        const auto t = random_table(g, gen);
        const auto full = apply_toroidal(t, f);
        for (std::size_t j = 0; j < 32; ++j) {
            const auto frozen = apply_multiplier(freeze(t, g, j), f);
            CHECK(std::abs(frozen[j] - full[j]) < 1e-10);
        }
    }
    const auto t = random_table(g, gen);
    const std::vector<double> off{0.01};
    CHECK_THROWS_AS(freeze(t, off), Error);
}

TEST_CASE("grid and coverage checks") {
    oracle::Gen gen(11);
    const TorusGrid g(1, 16);
    const auto t = random_table(g, gen);
    CHECK_THROWS_AS(apply_toroidal(t, GridFunction(TorusGrid(1, 32))), GridMismatch);
    const auto narrow = Symbol::multiplier_table(FrequencyBox::centered(1, 3), std::vector<Complex>(7, 1.0));
    CHECK_THROWS_AS(apply_toroidal(narrow, GridFunction(g)), RangeError);
    CHECK_THROWS_AS(apply_toroidal(t, GridFunction(TorusGrid(2, 16))), Error);
    const auto m = Symbol::multiplier(1, [](std::span<const double>) { return Complex(1.0); });
    CHECK_THROWS_AS(apply_toroidal(m, GridFunction(g), QuantizePath::separable), Error);
}
