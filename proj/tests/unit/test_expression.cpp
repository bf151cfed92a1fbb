#include "doctest.h"

#include "pdolab/errors.hpp"
#include "pdolab/expression.hpp"

#include <cmath>

using namespace pdolab;

namespace {

Complex eval(const std::string& src, std::vector<double> x = {0.0}, std::vector<double> xi = {0.0}) {
    const auto e = Expression::parse(src, static_cast<int>(x.size()));
    return e.evaluate(x, xi);
}

void check_error(const std::string& src, std::size_t line, std::size_t column, int dim = 1) {
    try {
        (void)Expression::parse(src, dim);
        FAIL("expected a parse error for '" << src << "'");
    } catch (const ParseError& e) {
        CHECK_MESSAGE(e.line() == line, src << ": " << std::string(e.what()));
        CHECK_MESSAGE(e.column() == column, src << ": " << std::string(e.what()));
    }
}

} // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(eval("1 + 2 * 3") == Complex(7.0));
    CHECK(eval("(1 + 2) * 3") == Complex(9.0));
    CHECK(eval("2 ^ 3 ^ 2") == Complex(512.0));
    CHECK(eval("-2 ^ 2") == Complex(-4.0));
    CHECK(eval("2 ^ -1") == Complex(0.5));
    CHECK(eval("8 / 4 / 2") == Complex(1.0));
    CHECK(eval("10 - 4 - 3") == Complex(3.0));
    CHECK(eval("1.5e2") == Complex(150.0));
    CHECK(eval(".25") == Complex(0.25));
}

TEST_CASE("variables and constants") {
    CHECK(eval("x1 + 10 * xi1", {0.25}, {3.0}) == Complex(30.25));
    CHECK(eval("x2 * xi2", {0.0, 0.5}, {0.0, 4.0}) == Complex(2.0));
    CHECK(std::abs(eval("pi") - kPi) < 1e-15);
    CHECK(std::abs(eval("e") - std::exp(1.0)) < 1e-15);
    CHECK(eval("i * i") == Complex(-1.0));
    const auto e = Expression::parse("x1 + xi1", 1);
    CHECK(e.uses_x());
    CHECK(e.uses_xi());
    CHECK_FALSE(Expression::parse("angle(xi1)", 1).uses_x());
}

TEST_CASE("functions") {
    CHECK(std::abs(eval("exp(i * pi)") + 1.0) < 1e-15);
    CHECK(std::abs(eval("sin(pi / 2)") - 1.0) < 1e-15);
    CHECK(std::abs(eval("cos(2 * pi * x1)", {0.5}) + 1.0) < 1e-15);
    CHECK(eval("abs(-3 + 4 * i)") == Complex(5.0));
    CHECK(eval("sqrt(16)") == Complex(4.0));
    CHECK(std::abs(eval("log(e^2)") - 2.0) < 1e-14);
    CHECK(eval("re(3 + 4*i)") == Complex(3.0));
    CHECK(eval("im(3 + 4*i)") == Complex(4.0));
    CHECK(eval("conj(3 + 4*i)") == Complex(3.0, -4.0));
    CHECK(std::abs(eval("angle(xi1)", {0.0}, {std::sqrt(3.0)}) - 2.0) < 1e-15);
    CHECK(std::abs(eval("angle()", {0.0, 0.0}, {2.0, 2.0}) - 3.0) < 1e-15);
    CHECK(std::abs(eval("angle(xi)", {0.0, 0.0}, {2.0, 2.0}) - 3.0) < 1e-15);
    CHECK(std::abs(eval("angle(3)") - std::sqrt(10.0)) < 1e-15);
}

TEST_CASE("powers: integer exponents exact, real base real power") {
    CHECK(eval("xi1^4", {0.0}, {-3.0}) == Complex(81.0));
    CHECK(eval("(-2)^3") == Complex(-8.0));
    CHECK(std::abs(eval("angle(xi1)^(-0.5)", {0.0}, {std::sqrt(15.0)}) - 0.5) < 1e-15);
    CHECK(std::abs(eval("(-1)^0.5") - Complex(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(eval("sqrt(-4)") - Complex(0.0, 2.0)) < 1e-15);
    CHECK(std::abs(eval("log(-1)") - Complex(0.0, kPi)) < 1e-15);
}

TEST_CASE("comments and line breaks") {
    const std::string src = "# leading comment\n1 +\n  2 # trailing\n";
    CHECK(eval(src) == Complex(3.0));
}

TEST_CASE("errors carry line and column") {
    check_error("1 + * 2", 1, 5);
    check_error("foo(1)", 1, 1);
    check_error("x2", 1, 1);
    check_error("1 +\n  bar", 2, 3);
    check_error("(1 + 2", 1, 7);
    check_error("1 2", 1, 3);
    check_error("sin 2", 1, 5);
    check_error("", 1, 1);
    check_error("3 $ 4", 1, 3);
    check_error("xi0", 1, 1, 2);
}

TEST_CASE("wrapping as symbols and functions") {
    const auto m = symbol_from_expression(Expression::parse("xi1^2", 1));
    CHECK(m.x_independent());
    const auto c = symbol_from_expression(Expression::parse("x1 * xi1", 1));
    CHECK_FALSE(c.x_independent());
    const std::vector<double> x{0.5};
    const std::vector<double> xi{4.0};
    CHECK(c(x, xi) == Complex(2.0));
    CHECK_THROWS_AS(function_from_expression(Expression::parse("xi1", 1)), Error);
    const auto f = function_from_expression(Expression::parse("2 * x1", 1));
    CHECK(f(x) == Complex(1.0));
}
