#include "pdolab/metrics.hpp"

#include "pdolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pdolab {

namespace {

void check_point(std::span<const double> X, int dim) {
    if (X.size() != static_cast<std::size_t>(2 * dim)) {
        throw InvariantError("phase point must have 2n = " + std::to_string(2 * dim) + " entries");
    }
}

double bracket_of(std::span<const double> v) {
    double s = 1.0;
    for (double t : v) {
        s += t * t;
    }
    return std::sqrt(s);
}

std::span<const double> xi_part(std::span<const double> X, int dim) {
    return X.subspan(static_cast<std::size_t>(dim));
}

} // namespace

double MetricAt::operator()(std::span<const double> t) const {
    const auto n = hx.size();
    double s = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        s += hx[d] * t[d] * t[d] + hxi[d] * t[n + d] * t[n + d];
    }
    return s;
}

MetricAt MetricAt::dual() const {
    MetricAt out;
    out.hx.resize(hx.size());
    out.hxi.resize(hx.size());
    for (std::size_t d = 0; d < hx.size(); ++d) {
        out.hx[d] = 1.0 / hxi[d];
        out.hxi[d] = 1.0 / hx[d];
    }
    return out;
}

double MetricAt::lambda() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < hx.size(); ++d) {
        best = std::min(best, 1.0 / std::sqrt(hx[d] * hxi[d]));
    }
    return best;
}

MetricAt MetricAt::scaled(double c) const {
    MetricAt out = *this;
    for (auto& v : out.hx) {
        v *= c;
    }
    for (auto& v : out.hxi) {
        v *= c;
    }
    return out;
}

SplitMetric::SplitMetric(std::string name, int dim, Coefficients coefficients)
    : name_(std::move(name)), dim_(dim), coefficients_(std::move(coefficients)) {
    if (dim < 1) {
        throw InvariantError("metric dimension must be positive");
    }
}

MetricAt SplitMetric::at(std::span<const double> X) const {
    check_point(X, dim_);
    MetricAt m;
    m.hx.resize(static_cast<std::size_t>(dim_));
    m.hxi.resize(static_cast<std::size_t>(dim_));
    coefficients_(X, m.hx, m.hxi);
    for (int d = 0; d < dim_; ++d) {
        for (double v : {m.hx[d], m.hxi[d]}) {
            if (!std::isfinite(v) || !(v > 0.0)) {
                throw InvariantError("metric '" + name_ + "' has a non-positive or non-finite coefficient on axis " +
                                     std::to_string(d + 1));
            }
        }
    }
    return m;
}

Weight::Weight(std::string name, int dim, Function f) : name_(std::move(name)), dim_(dim), f_(std::move(f)) {}

double Weight::operator()(std::span<const double> X) const {
    check_point(X, dim_);
    const double v = f_(X);
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvariantError("weight '" + name_ + "' is not positive and finite");
    }
    return v;
}

SplitMetric flat_metric(int dim) {
    return SplitMetric("flat", dim, [](std::span<const double>, std::span<double> hx, std::span<double> hxi) {
        std::fill(hx.begin(), hx.end(), 1.0);
        std::fill(hxi.begin(), hxi.end(), 1.0);
    });
}

SplitMetric rho_delta_metric(int dim, double rho, double delta) {
    if (!(0.0 <= delta && delta <= rho && rho <= 1.0 && delta < 1.0)) {
        throw InvariantError("g^{rho,delta} needs 0 <= delta <= rho <= 1 and delta < 1");
    }
    return SplitMetric("rho_delta", dim, [dim, rho, delta](std::span<const double> X, std::span<double> hx,
                                                            std::span<double> hxi) {
        const double b = bracket_of(xi_part(X, dim));
        std::fill(hx.begin(), hx.end(), std::pow(b, 2.0 * delta));
        std::fill(hxi.begin(), hxi.end(), std::pow(b, -2.0 * rho));
    });
}

SplitMetric shubin_metric(int dim, double rho) {
    if (!(0.0 <= rho && rho <= 1.0)) {
        throw InvariantError("Shubin metric needs 0 <= rho <= 1");
    }
    return SplitMetric("shubin", dim, [rho](std::span<const double> X, std::span<double> hx, std::span<double> hxi) {
        const double c = std::pow(bracket_of(X), -rho);
        std::fill(hx.begin(), hx.end(), c);
        std::fill(hxi.begin(), hxi.end(), c);
    });
}

Weight constant_weight(int dim, double value) {
    return Weight("constant", dim, [value](std::span<const double>) { return value; });
}

Weight bracket_weight(int dim, double m) {
    return Weight("bracket", dim, [dim, m](std::span<const double> X) { return std::pow(bracket_of(xi_part(X, dim)), m); });
}

Weight shubin_weight(int dim, double m) {
    return Weight("shubin", dim, [m](std::span<const double> X) { return std::pow(bracket_of(X), m); });
}

double metric_eval(const SplitMetric& g, std::span<const double> X, std::span<const double> T) {
    check_point(T, g.dim());
    return g.at(X)(T);
}

MetricAt symplectic_dual(const SplitMetric& g, std::span<const double> X) { return g.at(X).dual(); }

double lambda_g(const SplitMetric& g, std::span<const double> X) { return g.at(X).lambda(); }

double symplectic_form(std::span<const double> T, std::span<const double> Z) {
    const std::size_t n = T.size() / 2;
    double s = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        s += T[n + d] * Z[d] - T[d] * Z[n + d];
    }
    return s;
}

std::vector<PhaseVector> SamplePlan::points(int dim, std::uint64_t stream) const {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + stream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<std::size_t>(dim);
    std::vector<PhaseVector> out(count, PhaseVector(2 * n));
    for (auto& X : out) {
        for (std::size_t d = 0; d < n; ++d) {
            X[d] = x_extent * (2.0 * unit(rng) - 1.0);
        }
        const double r = std::expm1(unit(rng) * std::log1p(xi_max));
        double norm = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            X[n + d] = normal(rng);
            norm += X[n + d] * X[n + d];
        }
        norm = std::sqrt(norm);
        for (std::size_t d = 0; d < n; ++d) {
            X[n + d] = norm > 0.0 ? r * X[n + d] / norm : 0.0;
        }
    }
    return out;
}

namespace {

// Extremes of g_X(Z)/g_Y(Z) over Z != 0: for split metrics these are the
// extreme coefficient ratios.
std::pair<double, double> ratio_range(const MetricAt& a, const MetricAt& b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t d = 0; d < a.hx.size(); ++d) {
        for (double r : {a.hx[d] / b.hx[d], a.hxi[d] / b.hxi[d]}) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    return {lo, hi};
}

PhaseVector random_direction(std::mt19937_64& rng, std::size_t size) {
    std::normal_distribution<double> normal(0.0, 1.0);
    PhaseVector v(size);
    double s = 0.0;
    for (auto& t : v) {
        t = normal(rng);
        s += t * t;
    }
    s = std::sqrt(s);
    for (auto& t : v) {
        t /= s;
    }
    return v;
}

// Draws Y with g_X(Y) = bound * u, u uniform in (0, 1].
PhaseVector bounded_step(const MetricAt& gX, double bound, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto v = random_direction(rng, 2 * gX.hx.size());
    const double q = gX(v);
    const double scale = std::sqrt(bound * (1.0 - unit(rng)) / q);
    for (auto& t : v) {
        t *= scale;
    }
    return v;
}

PhaseVector add(std::span<const double> a, std::span<const double> b) {
    PhaseVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = a[i] + b[i];
    }
    return c;
}

TemperanceFit fit_exponent(const std::vector<std::pair<double, double>>& ratio_base, double cap, int max_exponent) {
    TemperanceFit fit;
    for (int J = 0; J <= max_exponent; ++J) {
        double worst = 0.0;
        for (const auto& [ratio, base] : ratio_base) {
            worst = std::max(worst, ratio / std::pow(base, J));
        }
        fit.constants_by_exponent.push_back(worst);
        if (fit.exponent < 0 && worst <= cap) {
            fit.exponent = J;
            fit.constant = worst;
        }
    }
    return fit;
}

} // namespace

ContinuityReport check_continuity(const SplitMetric& g, const SamplePlan& plan, double C, double c, double c_prime) {
    ContinuityReport report;
    report.C = C;
    report.c = c;
    report.c_prime = c_prime;
    const auto X = plan.points(g.dim(), 0);
    std::mt19937_64 rng(plan.seed ^ 0xC0FFEEULL);
    report.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& x : X) {
        const auto gX = g.at(x);
        const auto Y = bounded_step(gX, C, rng);
        const auto gXY = g.at(add(x, Y));
        const auto [lo, hi] = ratio_range(gX, gXY);
        report.min_ratio = std::min(report.min_ratio, lo);
        report.max_ratio = std::max(report.max_ratio, hi);
        if (lo < c_prime || hi > c) {
            ++report.violations;
        }
        ++report.samples;
    }
    report.pass = report.samples > 0 && report.violations == 0;
    return report;
}

TemperanceReport check_temperance(const SplitMetric& g, const SamplePlan& plan, double cap) {
    TemperanceReport report;
    report.cap = cap;
    const auto X = plan.points(g.dim(), 0);
    const auto Y = plan.points(g.dim(), 1);
    std::vector<std::pair<double, double>> data;
    data.reserve(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto gX = g.at(X[i]);
        const auto gY = g.at(Y[i]);
        const auto [lo, hi] = ratio_range(gX, gY);
        PhaseVector diff(X[i].size());
        for (std::size_t d = 0; d < diff.size(); ++d) {
            diff[d] = X[i][d] - Y[i][d];
        }
        data.emplace_back(std::max(hi, 1.0 / lo), 1.0 + gY.dual()(diff));
    }
    report.samples = data.size();
    report.fit = fit_exponent(data, cap, 8);
    report.pass = report.fit.exponent >= 0;
    return report;
}

WeightReport check_weight(const Weight& M, const SplitMetric& g, const SamplePlan& plan, double cap) {
    WeightReport report;
    const auto X = plan.points(g.dim(), 0);
    report.samples = X.size();
    for (double D = 1.0; D <= 64.0; D *= 2.0) {
        std::mt19937_64 rng(plan.seed ^ 0xBEEFULL);
        double worst = 1.0;
        for (const auto& x : X) {
            const auto Y = bounded_step(g.at(x), 1.0 / D, rng);
            const double r = M(add(x, Y)) / M(x);
            worst = std::max({worst, r, 1.0 / r});
        }
        if (worst <= D) {
            report.continuity_D = D;
            report.continuity_max_ratio = worst;
            report.continuity_pass = true;
            break;
        }
    }
    const auto Y = plan.points(g.dim(), 1);
    std::vector<std::pair<double, double>> data;
    data.reserve(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double r = M(Y[i]) / M(X[i]);
        PhaseVector diff(X[i].size());
        for (std::size_t d = 0; d < diff.size(); ++d) {
            diff[d] = X[i][d] - Y[i][d];
        }
        data.emplace_back(std::max(r, 1.0 / r), 1.0 + g.at(Y[i]).dual()(diff));
    }
    report.temperance = fit_exponent(data, cap, 8);
    report.temperance_pass = report.temperance.exponent >= 0;
    report.pass = report.continuity_pass && report.temperance_pass;
    return report;
}

namespace {

constexpr double kStencilStep = 0.25;
constexpr int kRandomDirections = 4;

class Stencil {
public:
    Stencil(const Symbol& sigma, std::span<const double> X, const MetricAt& gX) : sigma_(sigma), X_(X.begin(), X.end()) {
        const std::size_t n = gX.hx.size();
        unit_.resize(2 * n);
        for (std::size_t d = 0; d < n; ++d) {
            unit_[d] = 1.0 / std::sqrt(gX.hx[d]);
            unit_[n + d] = 1.0 / std::sqrt(gX.hxi[d]);
        }
    }

    // Mixed partial in g-unit coordinates along the listed axes.
    Complex partial(const std::vector<int>& axes) const { return partial_at(X_, axes, axes.size()); }

    // j-th derivative along a g-unit direction v.
    Complex directional(const PhaseVector& v, int j) const {
        const double h = kStencilStep;
        auto F = [&](double t) {
            PhaseVector p = X_;
            for (std::size_t a = 0; a < p.size(); ++a) {
                p[a] += t * v[a] * unit_[a];
            }
            return eval(p);
        };
        switch (j) {
        case 1:
            return (F(h) - F(-h)) / (2 * h);
        case 2:
            return (F(h) - 2.0 * F(0) + F(-h)) / (h * h);
        default:
            return (F(2 * h) - 2.0 * F(h) + 2.0 * F(-h) - F(-2 * h)) / (2 * h * h * h);
        }
    }

    Complex eval(const PhaseVector& p) const {
        const std::size_t n = p.size() / 2;
        return sigma_(std::span<const double>(p.data(), n), std::span<const double>(p.data() + n, n));
    }

private:
    Complex partial_at(const PhaseVector& p, const std::vector<int>& axes, std::size_t remaining) const {
        if (remaining == 0) {
            return eval(p);
        }
        const auto a = static_cast<std::size_t>(axes[remaining - 1]);
        PhaseVector plus = p;
        PhaseVector minus = p;
        plus[a] += kStencilStep * unit_[a];
        minus[a] -= kStencilStep * unit_[a];
        return (partial_at(plus, axes, remaining - 1) - partial_at(minus, axes, remaining - 1)) / (2 * kStencilStep);
    }

    const Symbol& sigma_;
    PhaseVector X_;
    std::vector<double> unit_;
};

void multisets(int slots, int order, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == order) {
        out.push_back(cur);
        return;
    }
    for (int a = start; a < slots; ++a) {
        cur.push_back(a);
        multisets(slots, order, a, cur, out);
        cur.pop_back();
    }
}

} // namespace

SmgReport smg_seminorm(const Symbol& sigma, const Weight& M, const SplitMetric& g, int k, const SamplePlan& plan) {
    if (k < 0 || k > 3) {
        throw RangeError("smg_seminorm supports 0 <= k <= 3");
    }
    if (sigma.dim() != g.dim() || M.dim() != g.dim()) {
        throw GridMismatch("symbol, weight and metric dimensions differ");
    }
    SmgReport report;
    report.k = k;
    report.constants.assign(static_cast<std::size_t>(k) + 1, 0.0);
    const int slots = 2 * g.dim();
    std::vector<std::vector<std::vector<int>>> combos(static_cast<std::size_t>(k) + 1);
    for (int j = 1; j <= k; ++j) {
        std::vector<int> cur;
        multisets(slots, j, 0, cur, combos[static_cast<std::size_t>(j)]);
    }
    std::mt19937_64 rng(plan.seed ^ 0x5EEDULL);
    for (const auto& X : plan.points(g.dim(), 0)) {
        const auto gX = g.at(X);
        const double weight = M(X);
        const Stencil st(sigma, X, gX);
        report.constants[0] = std::max(report.constants[0], std::abs(st.eval(X)) / weight);
        for (int j = 1; j <= k; ++j) {
            double best = 0.0;
            for (const auto& axes : combos[static_cast<std::size_t>(j)]) {
                best = std::max(best, std::abs(st.partial(axes)));
            }
            for (int r = 0; r < kRandomDirections; ++r) {
                best = std::max(best, std::abs(st.directional(random_direction(rng, static_cast<std::size_t>(slots)), j)));
            }
            report.constants[static_cast<std::size_t>(j)] =
                std::max(report.constants[static_cast<std::size_t>(j)], best / weight);
        }
        ++report.samples;
    }
    return report;
}

} // namespace pdolab
