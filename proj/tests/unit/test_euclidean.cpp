#include "doctest.h"
#include "oracles.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/euclidean.hpp"

using namespace pdolab;

namespace {

double gauss(double x) { return std::exp(-kPi * x * x); }

std::vector<Complex> gaussian_samples(const EuclideanBox& box, double shift = 0.0) {
    return sample_box(box, [shift](std::span<const double> x) { return Complex(gauss(x[0] - shift)); });
}

Symbol sym(std::function<Complex(double, double)> f) {
    return Symbol::closed_form(1, [f](std::span<const double> x, std::span<const double> xi) { return f(x[0], xi[0]); });
}

Symbol phase_gaussian(double x0, double xi0) {
    return sym([=](double x, double xi) { return Complex(std::exp(-kPi * ((x - x0) * (x - x0) + (xi - xi0) * (xi - xi0)))); });
}

} // namespace

TEST_CASE("box geometry") {
    const auto box = EuclideanBox::balanced(1, 64);
    CHECK(box.width() == doctest::Approx(8.0));
    CHECK(box.spacing() == doctest::Approx(0.125));
    CHECK(box.point(0) == doctest::Approx(-4.0));
    CHECK(box.frequency(3) == doctest::Approx(0.375));
    CHECK(box.wrap(4.5) == doctest::Approx(-3.5));
    CHECK(box.wrap(-4.0) == doctest::Approx(-4.0));
    CHECK_THROWS_AS(EuclideanBox(1, -1.0, 16), InvariantError);
}

TEST_CASE("Kohn-Nirenberg: identity, derivative, multiplication") {
    const auto box = EuclideanBox::balanced(1, 64);
    const auto f = gaussian_samples(box);
    const auto id = kn_apply_euclidean(sym([](double, double) { return Complex(1.0); }), box, f);
    CHECK(oracle::max_diff(id.values, f) <= 1e-8);
    CHECK_FALSE(id.truncation_warning);

    const auto d = kn_apply_euclidean(sym([](double, double xi) { return Complex(xi); }), box, f);
    for (std::size_t j = 0; j < box.size(); ++j) {
        const double x = box.point(j);
        const Complex expect = (-kTwoPi * x * gauss(x)) / Complex(0.0, kTwoPi);
        CHECK(std::abs(d.values[j] - expect) <= 1e-6);
    }

    const auto m = kn_apply_euclidean(sym([](double x, double) { return Complex(x); }), box, f);
    for (std::size_t j = 0; j < box.size(); ++j) {
        CHECK(std::abs(m.values[j] - box.point(j) * f[j]) <= 1e-8);
    }
}

TEST_CASE("Weyl: identity, derivative, symmetrized multiplication, KN agreement") {
    const auto box = EuclideanBox::balanced(1, 64);
    const auto f = gaussian_samples(box);
    CHECK(oracle::max_diff(weyl_apply(sym([](double, double) { return Complex(1.0); }), box, f).values, f) <= 1e-8);

    const auto d = weyl_apply(sym([](double, double xi) { return Complex(xi); }), box, f);
    for (std::size_t j = 0; j < box.size(); ++j) {
        const double x = box.point(j);
        CHECK(std::abs(d.values[j] - (-kTwoPi * x * gauss(x)) / Complex(0.0, kTwoPi)) <= 1e-6);
    }
    const auto m = weyl_apply(sym([](double x, double) { return Complex(x); }), box, f);
    for (std::size_t j = 0; j < box.size(); ++j) {
        CHECK(std::abs(m.values[j] - box.point(j) * f[j]) <= 1e-6);
    }

    const auto s = sym([](double, double xi) { return Complex(1.0 / std::sqrt(1.0 + xi * xi), xi); });
    const auto kw = kn_matrix(s, box);
    const auto ww = weyl_matrix(s, box);
    CHECK((kw - ww).max_abs() == 0.0);
}

TEST_CASE("dense matrix kernel agrees with the FFT application") {
    const auto box = EuclideanBox::balanced(1, 32);
    const auto f = gaussian_samples(box, 0.3);
    const auto a = sym([](double x, double xi) { return Complex(std::cos(x), 0.1 * xi); });
    const auto via_fft = kn_apply_euclidean(a, box, f);
    const auto via_matrix = kn_matrix(a, box).apply(f);
    CHECK(oracle::max_diff(via_fft.values, via_matrix) < 1e-12);
}

TEST_CASE("truncation guard") {
    const auto box = EuclideanBox::balanced(1, 16);
    const auto wide = sample_box(box, [](std::span<const double> x) { return Complex(std::exp(-0.1 * x[0] * x[0])); });
    CHECK(boundary_ratio(box, wide) > kBoundaryMassThreshold);
    const auto r = kn_apply_euclidean(sym([](double, double) { return Complex(1.0); }), box, wide);
    CHECK(r.truncation_warning);
    const auto fine = EuclideanBox::balanced(1, 64);
    CHECK(boundary_ratio(fine, gaussian_samples(fine)) < kBoundaryMassThreshold);
}

TEST_CASE("two-dimensional KN application") {
    const auto box = EuclideanBox::balanced(2, 16);
    const auto f = sample_box(box, [](std::span<const double> x) { return Complex(gauss(x[0]) * gauss(x[1])); });
    const auto a = Symbol::closed_form(2, [](std::span<const double>, std::span<const double> xi) { return Complex(xi[1]); });
    const auto r = kn_apply_euclidean(a, box, f);
    std::vector<double> x(2);
    for (std::size_t j = 0; j < box.size(); ++j) {
        box.node_point(j, x);
        const Complex expect = -kTwoPi * x[1] * gauss(x[0]) * gauss(x[1]) / Complex(0.0, kTwoPi);
        CHECK(std::abs(r.values[j] - expect) < 1e-5);
    }
}

TEST_CASE("Moyal product: unit element") {
    const auto box = EuclideanBox::balanced(1, 16);
    const auto a = phase_gaussian(0.0, 0.3);
    const auto one = sym([](double, double) { return Complex(1.0); });
    const auto p = moyal_product(a, one, box);
    const auto& xs = p.x_nodes();
    const auto& ks = p.xi_nodes();
    double err = 0.0;
    for (std::size_t i = xs.size() / 4; i < 3 * xs.size() / 4; ++i) {
        for (std::size_t k = ks.size() / 4; k < 3 * ks.size() / 4; ++k) {
            err = std::max(err, std::abs(p.at(i, k) - a({xs[i]}, {ks[k]})));
        }
    }
    CHECK(err <= 1e-6);
    const auto q = moyal_product(one, one, box);
    CHECK(std::abs(q(0.0, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("Moyal product: windowed commutator of x and xi") {
    const double s = 1.5;
    auto window = [s](double x, double xi) { return std::exp(-(x * x + xi * xi) / (2 * s * s)); };
    const auto X = sym([&](double x, double xi) { return Complex(x * window(x, xi)); });
    const auto Xi = sym([&](double x, double xi) { return Complex(xi * window(x, xi)); });
    const auto box = EuclideanBox::balanced(1, 32);
    const auto xy = moyal_product(X, Xi, box);
    const auto yx = moyal_product(Xi, X, box);
    const Complex commutator = xy(0.0, 0.0) - yx(0.0, 0.0);
    const Complex expect(0.0, 1.0 / kTwoPi);
    CHECK(std::abs(commutator - expect) <= 0.01 * std::abs(expect));
}

TEST_CASE("composition identity residuals") {
    const auto one = sym([](double, double) { return Complex(1.0); });
    CHECK(composition_identity_residual(one, one, EuclideanBox::balanced(1, 16)) <= 1e-8);
    const auto a = phase_gaussian(0.0, 0.0);
    const auto b = phase_gaussian(0.3, 0.0);
    const double r16 = composition_identity_residual(a, b, EuclideanBox::balanced(1, 16));
    const double r32 = composition_identity_residual(a, b, EuclideanBox::balanced(1, 32));
    CHECK(r32 <= 1e-4);
    CHECK(r32 < r16);
}

TEST_CASE("phase table lookups and guards") {
    PhaseTable t({0.0, 0.5}, {-1.0, 1.0}, {1.0, 2.0, 3.0, 4.0});
    CHECK(t(0.5, -1.0) == Complex(3.0));
    CHECK_THROWS_AS(t(0.25, 1.0), RangeError);
    CHECK(t.to_symbol()({0.0}, {1.0}) == Complex(2.0));
    const auto one = sym([](double, double) { return Complex(1.0); });
    MoyalOptions tight;
    tight.max_terms = 1e5;
    CHECK_THROWS_AS(moyal_product(one, one, EuclideanBox::balanced(1, 16), tight), CostGuardError);
    const auto two = Symbol::closed_form(2, [](std::span<const double>, std::span<const double>) { return Complex(1.0); });
    CHECK_THROWS_AS(moyal_product(two, two, EuclideanBox::balanced(2, 8)), UnsupportedOperation);
}
