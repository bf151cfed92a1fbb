#pragma once

#include "pdolab/symbol.hpp"
#include "pdolab/torus.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pdolab {

/// Periodized box [-T/2, T/2)^n with M points per axis (M a power of two),
/// spacing h = T/M and frequencies xi_k = k/T, k in [-M/2, M/2).
class EuclideanBox {
public:
    EuclideanBox(int dim, double width, std::size_t points);
    /// T = sqrt(M): balances spatial and spectral truncation of a unit Gaussian.
    static EuclideanBox balanced(int dim, std::size_t points);

    int dim() const noexcept { return grid_.dim(); }
    double width() const noexcept { return width_; }
    std::size_t points_per_axis() const noexcept { return grid_.points_per_axis(); }
    std::size_t size() const noexcept { return grid_.size(); }
    double spacing() const noexcept { return width_ / static_cast<double>(points_per_axis()); }
    double point(std::size_t j) const { return -0.5 * width_ + spacing() * static_cast<double>(j); }
    double frequency(int k) const { return static_cast<double>(k) / width_; }
    /// Wraps t into [-T/2, T/2).
    double wrap(double t) const;
    /// Companion torus grid used for the box-periodic FFT.
    const TorusGrid& torus() const noexcept { return grid_; }
    void node_point(std::size_t node, std::span<double> x) const;

private:
    double width_;
    TorusGrid grid_;
};

/// Samples f at the box nodes (row-major, first axis slowest).
std::vector<Complex> sample_box(const EuclideanBox& box, const PointFunction& f);

/// Samples plus the truncation guard: max boundary |f| over max |f|.
struct EuclideanResult {
    std::vector<Complex> values;
    double boundary_ratio = 0.0;
    bool truncation_warning = false;
};

inline constexpr double kBoundaryMassThreshold = 1e-10;

/// Max |f| on the outermost layer of nodes divided by max |f|.
double boundary_ratio(const EuclideanBox& box, std::span<const Complex> f);

/// Dense complex matrix, row-major.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    Complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double max_abs() const;
    std::vector<Complex> apply(std::span<const Complex> v) const;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// Kohn-Nirenberg quantization on the box:
/// (Op a f)(x_j) = sum_k exp(2 pi i x_j xi_k) a(x_j, xi_k) f^(xi_k) dxi with
/// f^ the rectangle-rule transform. Evaluated with one FFT and a synthesis sum.
EuclideanResult kn_apply_euclidean(const Symbol& a, const EuclideanBox& box, std::span<const Complex> f);

/// K(j, m) = (1/M^n) sum_k exp(2 pi i (j - m) k / M) a(x_j, xi_k).
DenseMatrix kn_matrix(const Symbol& a, const EuclideanBox& box);

/// Weyl kernel: as kn_matrix with a evaluated at the midpoint y_m + d/2,
/// d = wrap(x_j - y_m) taken per axis, midpoint wrapped into the box.
DenseMatrix weyl_matrix(const Symbol& a, const EuclideanBox& box);

EuclideanResult weyl_apply(const Symbol& a, const EuclideanBox& box, std::span<const Complex> f);

/// Sampled values of a Moyal product on a tensor phase grid (n = 1).
class PhaseTable {
public:
    PhaseTable(std::vector<double> x, std::vector<double> xi, std::vector<Complex> values);

    const std::vector<double>& x_nodes() const noexcept { return x_; }
    const std::vector<double>& xi_nodes() const noexcept { return xi_; }
    Complex at(std::size_t i, std::size_t k) const { return values_[i * xi_.size() + k]; }
    /// Exact node lookup (tolerance 1e-9 relative to spacing); RangeError otherwise.
    Complex operator()(double x, double xi) const;
    /// Closed-form wrapper answering only at table nodes.
    Symbol to_symbol() const;

private:
    std::size_t locate(const std::vector<double>& nodes, double v, const char* axis, bool periodic) const;

    std::vector<double> x_;
    std::vector<double> xi_;
    std::vector<Complex> values_;
};

struct MoyalOptions {
    double hbar = 1.0 / kTwoPi;
    double max_terms = 1e9;
};

/// a # b (X) = (pi hbar)^{-2} int int exp(-(2i/hbar) s(X-Y, X-Z)) a(Y) b(Z) dY dZ
/// with s((x,xi),(y,eta)) = y xi - x eta, by the rectangle rule on the
/// phase grid of `box` refined twice per axis (2M points of spacing h/2 in x
/// and 1/(2T) in xi). Output nodes are that refined grid. n = 1 only.
/// Raises CostGuardError when (2M)^4 exceeds options.max_terms.
PhaseTable moyal_product(const Symbol& a, const Symbol& b, const EuclideanBox& box, const MoyalOptions& options = {});

/// max |W(a#b) - W(a) W(b)| / (max |W(a)| max |W(b)|) with W the Weyl kernel matrix.
double composition_identity_residual(const Symbol& a, const Symbol& b, const EuclideanBox& box,
                                     const MoyalOptions& options = {});

} // namespace pdolab
