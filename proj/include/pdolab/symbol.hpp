#pragma once

#include "pdolab/multi_index.hpp"
#include "pdolab/torus.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pdolab {

/// Inclusive integer box lo_d <= xi_d <= hi_d of lattice frequencies.
class FrequencyBox {
public:
    FrequencyBox() = default;
    FrequencyBox(std::vector<int> lo, std::vector<int> hi);
    /// |xi_d| <= radius on every axis.
    static FrequencyBox centered(int dim, int radius);
    /// All stored frequencies of `grid`, widened by `margin` columns on the high side.
    static FrequencyBox covering(const TorusGrid& grid, int margin = 0);

    int dim() const noexcept { return static_cast<int>(lo_.size()); }
    int lo(int d) const { return lo_[static_cast<std::size_t>(d)]; }
    int hi(int d) const { return hi_[static_cast<std::size_t>(d)]; }
    std::size_t extent(int d) const { return static_cast<std::size_t>(hi(d) - lo(d) + 1); }
    std::size_t size() const noexcept { return size_; }

    bool contains(std::span<const int> xi) const;
    /// Throws RangeError naming the first offending axis.
    std::size_t flat(std::span<const int> xi) const;
    void frequency(std::size_t flat, std::span<int> xi) const;

    friend bool operator==(const FrequencyBox&, const FrequencyBox&) = default;

private:
    std::vector<int> lo_;
    std::vector<int> hi_;
    std::size_t size_ = 0;
};

/// Optional class metadata declared with a symbol.
struct ClassMeta {
    std::optional<double> order;
    std::optional<double> rho;
    std::optional<double> delta;
};

/// One term c(x) m(xi) of a symbol declared separable by its author.
struct SeparableTerm {
    std::function<Complex(std::span<const double> x)> x_factor;
    std::function<Complex(std::span<const double> xi)> xi_factor;
    /// Optional analytic d^beta/dx^beta of x_factor.
    std::function<Complex(std::span<const double> x, const MultiIndex& beta)> x_derivative;
};

/// A symbol a(x, xi) on T^n x Z^n (or T^n x R^n for closed forms).
///
/// Closed forms evaluate at any x in [0,1)^n and real xi. Tables hold values
/// on the nodes of a TorusGrid times a FrequencyBox; they answer only at grid
/// nodes and integer frequencies inside the box.
class Symbol {
public:
    using Evaluator = std::function<Complex(std::span<const double> x, std::span<const double> xi)>;
    using XDerivative =
        std::function<Complex(std::span<const double> x, std::span<const double> xi, const MultiIndex& beta)>;
    using Multiplier = std::function<Complex(std::span<const double> xi)>;

    static Symbol closed_form(int dim, Evaluator f, XDerivative dx = {});
    /// x-independent closed form; every x-derivative of positive order is zero.
    static Symbol multiplier(int dim, Multiplier m);
    /// sum_r c_r(x) m_r(xi); enables the FFT-accelerated quantization path.
    static Symbol separable(int dim, std::vector<SeparableTerm> terms);
    static Symbol table(const TorusGrid& grid, FrequencyBox box, std::vector<Complex> values);
    /// x-independent table over a frequency box.
    static Symbol multiplier_table(FrequencyBox box, std::vector<Complex> values);
    static Symbol zero(int dim);

    int dim() const noexcept;
    bool is_tabulated() const noexcept;
    bool x_independent() const noexcept;
    bool is_separable() const noexcept;
    bool has_x_derivative() const noexcept;

    const ClassMeta& meta() const noexcept;
    Symbol with_meta(ClassMeta meta) const;

    Complex operator()(std::span<const double> x, std::span<const double> xi) const;
    Complex operator()(std::initializer_list<double> x, std::initializer_list<double> xi) const;
    /// Value at grid node `node` of `grid` and lattice frequency xi.
    Complex on_grid(const TorusGrid& grid, std::size_t node, std::span<const int> xi) const;

    const std::vector<SeparableTerm>& terms() const;

    /// Table accessors; throw UnsupportedOperation for closed forms.
    const FrequencyBox& box() const;
    const TorusGrid& table_grid() const;
    std::span<const Complex> table_values() const;

    /// Analytic x-derivative for closed forms that registered one.
    Complex x_derivative_value(std::span<const double> x, std::span<const double> xi, const MultiIndex& beta) const;

private:
    struct Impl;
    explicit Symbol(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Forward differences Delta_xi^alpha a. Tables shrink their box by alpha on
/// the high side; separable symbols stay separable.
Symbol difference(const Symbol& a, const MultiIndex& alpha);

/// d^beta/dx^beta a. Spectral for tables, analytic for closed forms with a
/// registered derivative, zero for x-independent symbols.
Symbol x_derivative(const Symbol& a, const MultiIndex& beta);

/// Samples a closed form on grid nodes times box (a multiplier table when a
/// is x-independent).
Symbol tabulate(const Symbol& a, const TorusGrid& grid, const FrequencyBox& box);

/// <xi> = (1 + |xi|^2)^{1/2}.
double japanese_bracket(std::span<const double> xi);
double japanese_bracket(std::span<const int> xi);

} // namespace pdolab
