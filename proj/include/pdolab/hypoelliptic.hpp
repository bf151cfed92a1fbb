#pragma once

#include "pdolab/metrics.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pdolab {

/// Exact rational in lowest terms with positive denominator.
class Rational {
public:
    Rational(std::int64_t num = 0, std::int64_t den = 1);
    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b);

private:
    std::int64_t num_;
    std::int64_t den_;
};

struct Q0Eps0 {
    Rational Q0;
    Rational eps0;
};

/// Q_0 = r_0 + 2(n - r_0), eps_0 = Q_0/(2n) - 1/2. RangeError unless 1 <= r_0 <= n.
Q0Eps0 q0_eps0(int n, int r0);

/// Second-order operator -sum X_j^* X_j + X_0 in R^n with principal symbol
/// a(x, xi) = sum_j <X_j(x), xi>^2 and coefficient-rank lower bound r_0.
struct HypoellipticModel {
    std::string name;
    std::string description;
    int n = 1;
    int r0 = 1;
    Rational Q0;
    Rational eps0;
    std::function<double(std::span<const double> x, std::span<const double> xi)> principal;
    /// Parameters the model was built with (e.g. delta), for reports.
    std::map<std::string, double> parameters;

    /// a(x, xi); ModelViolation when negative or non-finite.
    double a(std::span<const double> x, std::span<const double> xi) const;
};

using VectorFieldSystem = std::vector<std::function<void(std::span<const double> x, std::span<double> v)>>;

/// Builds a model from vector fields X_1..X_k (second-order part only).
HypoellipticModel sum_of_squares_model(std::string name, int n, int r0, VectorFieldSystem fields,
                                       std::string description = {});

/// Known names: laplacian, heat, kolmogorov, mumford, degenerate_exponential.
/// Parameters: "n" (laplacian, heat spatial dimension), "delta" (degenerate_exponential).
HypoellipticModel hypoelliptic_gallery(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> gallery_names();

/// g = m^{-2}(<xi>^2 dx^2 + dxi^2) with m = (a + <xi>)^{1/2}.
SplitMetric model_metric(const HypoellipticModel& model);
/// M = m^{exponent}.
Weight model_weight(const HypoellipticModel& model, double exponent);
/// Closed form (a + <xi>)/<xi>.
double model_lambda(const HypoellipticModel& model, std::span<const double> X);

} // namespace pdolab
