#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace pdolab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Periodic sampling grid on T^n = [0,1)^n with N points per axis, N a power
/// of two. Nodes are stored row-major with the first axis varying slowest.
///
/// Frequencies are centered signed integers: along each axis the storage
/// index k in [0, N) maps to xi = k for k < N/2 and xi = k - N otherwise, so
/// every stored xi satisfies -N/2 <= xi < N/2.
class TorusGrid {
public:
    static constexpr int kMaxDim = 3;
    static constexpr std::size_t kMaxPoints = std::size_t{1} << 26;

    TorusGrid(int dim, std::size_t points_per_axis);

    int dim() const noexcept { return dim_; }
    std::size_t points_per_axis() const noexcept { return n_; }
    std::size_t size() const noexcept { return total_; }
    double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }

    void node_index(std::size_t node, std::span<std::size_t> index) const;
    std::size_t node_of(std::span<const std::size_t> index) const;
    void node_point(std::size_t node, std::span<double> x) const;

    int frequency_of_index(std::size_t k) const noexcept {
        return k < n_ / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n_);
    }
    /// Throws RangeError when xi is outside [-N/2, N/2).
    std::size_t index_of_frequency(int xi) const;
    void frequency(std::size_t flat, std::span<int> xi) const;
    std::size_t flat_of_frequency(std::span<const int> xi) const;

    int min_frequency() const noexcept { return -static_cast<int>(n_ / 2); }
    int max_frequency() const noexcept { return static_cast<int>(n_ / 2) - 1; }

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
    int dim_;
    std::size_t n_;
    std::size_t total_;
};

/// Complex samples of a function on the nodes of a TorusGrid.
class GridFunction {
public:
    explicit GridFunction(TorusGrid grid);
    GridFunction(TorusGrid grid, std::vector<Complex> values);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const Complex> values() const noexcept { return values_; }
    std::span<Complex> values() noexcept { return values_; }
    Complex operator[](std::size_t node) const { return values_[node]; }
    Complex& operator[](std::size_t node) { return values_[node]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(Complex c);

private:
    TorusGrid grid_;
    std::vector<Complex> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(Complex c, GridFunction a);

/// Fourier coefficients stored in FFT order (see TorusGrid for the map).
class SpectralCoeffs {
public:
    explicit SpectralCoeffs(TorusGrid grid);
    SpectralCoeffs(TorusGrid grid, std::vector<Complex> coeffs);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    Complex at(std::span<const int> xi) const { return coeffs_[grid_.flat_of_frequency(xi)]; }
    Complex& at(std::span<const int> xi) { return coeffs_[grid_.flat_of_frequency(xi)]; }

private:
    TorusGrid grid_;
    std::vector<Complex> coeffs_;
};

/// coeffs(xi) = N^{-n} sum_j f(x_j) exp(-2 pi i <x_j, xi>).
SpectralCoeffs forward_fft(const GridFunction& f);

/// values(x_j) = sum_xi coeffs(xi) exp(2 pi i <x_j, xi>).
GridFunction inverse_fft(const SpectralCoeffs& c);

using PointFunction = std::function<Complex(std::span<const double> x)>;

/// Pointwise evaluation at the grid nodes. A non-finite result raises
/// InvariantError naming the node.
GridFunction sample(const PointFunction& expr, const TorusGrid& grid);

double sup_norm(const GridFunction& f);

/// CSV with header i1..in,re,im (node indices per axis).
void write_csv(std::ostream& out, const GridFunction& f);
/// CSV with header xi1..xin,re,im (signed frequencies).
void write_csv(std::ostream& out, const SpectralCoeffs& c);
/// Reads the GridFunction CSV layout back; the grid is inferred from the row count.
GridFunction read_grid_function_csv(std::istream& in);

} // namespace pdolab
