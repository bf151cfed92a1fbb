#pragma once

#include "pdolab/symbol.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pdolab {

/// Phase-space points and tangent vectors are flat arrays (x_1..x_n, xi_1..xi_n).
using PhaseVector = std::vector<double>;

/// Diagonal metric coefficients at one point:
/// g_X(T) = sum_d hx_d t_{x,d}^2 + hxi_d t_{xi,d}^2.
struct MetricAt {
    std::vector<double> hx;
    std::vector<double> hxi;

    int dim() const noexcept { return static_cast<int>(hx.size()); }
    double operator()(std::span<const double> t) const;
    /// Coefficients of g^omega: t_x weighted by 1/hxi, t_xi by 1/hx.
    MetricAt dual() const;
    /// min_d (hx_d hxi_d)^{-1/2}.
    double lambda() const;
    /// Multiplies every coefficient by c > 0.
    MetricAt scaled(double c) const;
};

/// A split Riemannian metric X -> g_X on R^{2n}.
class SplitMetric {
public:
    using Coefficients = std::function<void(std::span<const double> X, std::span<double> hx, std::span<double> hxi)>;

    SplitMetric(std::string name, int dim, Coefficients coefficients);

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return dim_; }
    /// Raises InvariantError on a non-finite or non-positive coefficient.
    MetricAt at(std::span<const double> X) const;

private:
    std::string name_;
    int dim_;
    Coefficients coefficients_;
};

/// A positive weight M(X) on R^{2n}.
class Weight {
public:
    using Function = std::function<double(std::span<const double> X)>;

    Weight(std::string name, int dim, Function f);

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return dim_; }
    double operator()(std::span<const double> X) const;

private:
    std::string name_;
    int dim_;
    Function f_;
};

SplitMetric flat_metric(int dim);
/// <xi>^{2 delta} dx^2 + <xi>^{-2 rho} dxi^2; requires 0 <= delta <= rho <= 1, delta < 1.
SplitMetric rho_delta_metric(int dim, double rho, double delta);
/// <x, xi>^{-rho} (dx^2 + dxi^2), 0 <= rho <= 1.
SplitMetric shubin_metric(int dim, double rho);

Weight constant_weight(int dim, double value = 1.0);
/// <xi>^m.
Weight bracket_weight(int dim, double m);
/// <x, xi>^m.
Weight shubin_weight(int dim, double m);

double metric_eval(const SplitMetric& g, std::span<const double> X, std::span<const double> T);
MetricAt symplectic_dual(const SplitMetric& g, std::span<const double> X);
double lambda_g(const SplitMetric& g, std::span<const double> X);

/// <T, Z>_omega = sum_d t_{xi,d} z_{x,d} - t_{x,d} z_{xi,d}.
double symplectic_form(std::span<const double> T, std::span<const double> Z);

/// Random phase points: x uniform in [-x_extent, x_extent]^n, |xi| log-uniform
/// on [0, xi_max] with a uniformly random direction.
struct SamplePlan {
    std::size_t count = 10000;
    double xi_max = 1024.0;
    double x_extent = 1.0;
    std::uint64_t seed = 1;

    std::vector<PhaseVector> points(int dim, std::uint64_t stream = 0) const;
};

struct ContinuityReport {
    double C = 0.25;
    double c = 4.0;
    double c_prime = 0.25;
    std::size_t samples = 0;
    double min_ratio = 0.0; ///< min of g_X(Z) / g_{X+Y}(Z)
    double max_ratio = 0.0;
    std::size_t violations = 0;
    bool pass = false;
};

/// Triples (X, Y, Z) with g_X(Y) <= C; PASS when every g_X(Z)/g_{X+Y}(Z)
/// lies in [c', c].
ContinuityReport check_continuity(const SplitMetric& g, const SamplePlan& plan = {}, double C = 0.25, double c = 4.0,
                                  double c_prime = 0.25);

struct TemperanceFit {
    int exponent = -1;        ///< J (metric) or N (weight); -1 when no fit
    double constant = 0.0;    ///< C-bar or D'
    std::vector<double> constants_by_exponent;
};

struct TemperanceReport {
    std::size_t samples = 0;
    double cap = 16.0;
    TemperanceFit fit;
    bool pass = false;
};

/// Pairs (X, Y): ratio = sup_T (g_X(T)/g_Y(T))^{+-1}, base = 1 + g^omega_Y(X - Y).
/// Fits the smallest J <= 8 with max ratio/base^J <= cap.
TemperanceReport check_temperance(const SplitMetric& g, const SamplePlan& plan = {}, double cap = 16.0);

struct WeightReport {
    std::size_t samples = 0;
    double continuity_D = 0.0;          ///< smallest passing candidate, 0 if none
    double continuity_max_ratio = 0.0;  ///< measured at that candidate
    bool continuity_pass = false;
    TemperanceFit temperance;           ///< N and D'
    bool temperance_pass = false;
    bool pass = false;
};

/// Weight continuity over candidates D in {1, 2, 4, ..., 64} and the
/// temperance fit with the same cap convention as check_temperance.
WeightReport check_weight(const Weight& M, const SplitMetric& g, const SamplePlan& plan = {}, double cap = 16.0);

struct SmgReport {
    int k = 0;
    std::vector<double> constants; ///< C_0..C_k
    std::size_t samples = 0;
};

/// C_j = max over sampled X and directions T_i (coordinate axes plus random
/// g-unit mixtures) of |sigma^{(j)}(T_1..T_j)| / (M(X) prod g_X(T_i)^{1/2}),
/// with central stencils of step 0.25 in g-unit coordinates. k <= 3.
/// sigma is evaluated as sigma(x, xi) at X = (x, xi).
SmgReport smg_seminorm(const Symbol& sigma, const Weight& M, const SplitMetric& g, int k, const SamplePlan& plan = {});

} // namespace pdolab
