#include "pdolab/hypoelliptic.hpp"

#include "pdolab/errors.hpp"

#include <cmath>
#include <numeric>

namespace pdolab {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw InvariantError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

Q0Eps0 q0_eps0(int n, int r0) {
    if (n < 1 || r0 < 1 || r0 > n) {
        throw RangeError("rank bound r_0 = " + std::to_string(r0) + " must satisfy 1 <= r_0 <= n = " + std::to_string(n));
    }
    const Rational Q0(r0 + 2 * (n - r0));
    return {Q0, Q0 / Rational(2 * n) - Rational(1, 2)};
}

double HypoellipticModel::a(std::span<const double> x, std::span<const double> xi) const {
    const double v = principal(x, xi);
    if (!std::isfinite(v) || v < 0.0) {
        throw ModelViolation("model '" + name + "' has principal symbol " + std::to_string(v) + " < 0");
    }
    return v;
}

HypoellipticModel sum_of_squares_model(std::string name, int n, int r0, VectorFieldSystem fields,
                                       std::string description) {
    HypoellipticModel m;
    const auto q = q0_eps0(n, r0);
    m.name = std::move(name);
    m.description = std::move(description);
    m.n = n;
    m.r0 = r0;
    m.Q0 = q.Q0;
    m.eps0 = q.eps0;
    m.principal = [n, fields = std::move(fields)](std::span<const double> x, std::span<const double> xi) {
        std::vector<double> v(static_cast<std::size_t>(n));
        double s = 0.0;
        for (const auto& X : fields) {
            X(x, v);
            double dot = 0.0;
            for (int d = 0; d < n; ++d) {
                dot += v[d] * xi[d];
            }
            s += dot * dot;
        }
        return s;
    };
    return m;
}

namespace {

auto coordinate_field(int axis) {
    return [axis](std::span<const double>, std::span<double> v) {
        std::fill(v.begin(), v.end(), 0.0);
        v[static_cast<std::size_t>(axis)] = 1.0;
    };
}

int integer_param(const std::map<std::string, double>& params, const std::string& key, int fallback) {
    const auto it = params.find(key);
    if (it == params.end()) {
        return fallback;
    }
    const double v = it->second;
    if (v != std::round(v) || v < 1 || v > 16) {
        throw RangeError("parameter '" + key + "' must be an integer in 1..16");
    }
    return static_cast<int>(v);
}

} // namespace

std::vector<std::string> gallery_names() {
    return {"degenerate_exponential", "heat", "kolmogorov", "laplacian", "mumford"};
}

HypoellipticModel hypoelliptic_gallery(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "laplacian") {
        const int n = integer_param(params, "n", 2);
        VectorFieldSystem f;
        for (int d = 0; d < n; ++d) {
            f.push_back(coordinate_field(d));
        }
        auto m = sum_of_squares_model(name, n, n, std::move(f), "-Delta_x");
        m.parameters["n"] = n;
        return m;
    }
    if (name == "heat") {
        const int n = integer_param(params, "n", 2);
        VectorFieldSystem f;
        for (int d = 0; d < n; ++d) {
            f.push_back(coordinate_field(d));
        }
        auto m = sum_of_squares_model(name, n + 1, n, std::move(f), "-Delta_x + d_t in (x, t)");
        m.parameters["n"] = n;
        return m;
    }
    if (name == "kolmogorov") {
        VectorFieldSystem f{coordinate_field(0)};
        return sum_of_squares_model(name, 3, 1, std::move(f), "-d_x^2 - x d_y + d_t in (x, y, t)");
    }
    if (name == "mumford") {
        VectorFieldSystem f{coordinate_field(0)};
        return sum_of_squares_model(name, 4, 1, std::move(f),
                                    "-d_theta^2 + cos(theta) d_x - sin(theta) d_y + d_t in (theta, x, y, t)");
    }
    if (name == "degenerate_exponential") {
        const auto it = params.find("delta");
        const double delta = it == params.end() ? 1.0 : it->second;
        if (!(delta > 0.0) || !std::isfinite(delta)) {
            throw RangeError("parameter 'delta' must be positive");
        }
        VectorFieldSystem f{coordinate_field(0), coordinate_field(1),
                            [delta](std::span<const double> x, std::span<double> v) {
                                std::fill(v.begin(), v.end(), 0.0);
                                const double t = std::abs(x[1]);
                                v[2] = t > 0.0 ? std::exp(-0.5 / std::pow(t, delta)) : 0.0;
                            }};
        auto m = sum_of_squares_model(name, 3, 2, std::move(f),
                                      "-d_x^2 - d_y^2 - exp(-1/|y|^delta) d_z^2 in (x, y, z)");
        m.parameters["delta"] = delta;
        return m;
    }
    std::string known;
    for (const auto& n : gallery_names()) {
        known += (known.empty() ? "" : ", ") + n;
    }
    throw RangeError("unknown model '" + name + "'; available: " + known);
}

namespace {

double bracket(std::span<const double> xi) {
    double s = 1.0;
    for (double t : xi) {
        s += t * t;
    }
    return std::sqrt(s);
}

} // namespace

SplitMetric model_metric(const HypoellipticModel& model) {
    const int n = model.n;
    return SplitMetric("model:" + model.name, n, [model, n](std::span<const double> X, std::span<double> hx,
                                                             std::span<double> hxi) {
        const auto x = X.first(static_cast<std::size_t>(n));
        const auto xi = X.subspan(static_cast<std::size_t>(n));
        const double b = bracket(xi);
        const double m2 = model.a(x, xi) + b;
        std::fill(hx.begin(), hx.end(), b * b / m2);
        std::fill(hxi.begin(), hxi.end(), 1.0 / m2);
    });
}

Weight model_weight(const HypoellipticModel& model, double exponent) {
    const int n = model.n;
    return Weight("model:" + model.name, n, [model, n, exponent](std::span<const double> X) {
        const auto x = X.first(static_cast<std::size_t>(n));
        const auto xi = X.subspan(static_cast<std::size_t>(n));
        return std::pow(model.a(x, xi) + bracket(xi), 0.5 * exponent);
    });
}

double model_lambda(const HypoellipticModel& model, std::span<const double> X) {
    const auto n = static_cast<std::size_t>(model.n);
    const auto xi = X.subspan(n);
    const double b = bracket(xi);
    return (model.a(X.first(n), xi) + b) / b;
}

} // namespace pdolab
