#pragma once

#include "pdolab/symbol.hpp"
#include "pdolab/torus.hpp"

#include <span>
#include <vector>

namespace pdolab {

enum class QuantizePath {
    automatic, ///< multiplier for x-independent symbols, separable when declared, else direct
    direct,    ///< per-node synthesis sum, cost N^n * N^n
    separable, ///< sum_r c_r * inverse_fft(m_r * f^); requires a separable symbol
};

/// (Op(a) f)(x_j) = sum_xi exp(2 pi i <x_j, xi>) a(x_j, xi) f^(xi) over the
/// stored frequencies of f's grid.
GridFunction apply_toroidal(const Symbol& a, const GridFunction& f, QuantizePath path = QuantizePath::automatic);

/// m(xi) at every stored frequency of `grid`, in FFT order.
std::vector<Complex> multiplier_on_grid(const Symbol& m, const TorusGrid& grid);

/// inverse_fft(m * forward_fft(f)); m must be x-independent.
GridFunction apply_multiplier(const Symbol& m, const GridFunction& f);
/// Same with the multiplier already sampled by multiplier_on_grid.
GridFunction apply_multiplier(std::span<const Complex> m, const GridFunction& f);

/// sigma_z(xi) = a(z, xi). Tables require z to be one of their grid nodes.
Symbol freeze(const Symbol& a, std::span<const double> z);
/// Freeze at node `node` of `grid`.
Symbol freeze(const Symbol& a, const TorusGrid& grid, std::size_t node);

} // namespace pdolab
