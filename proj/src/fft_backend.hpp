#pragma once

#include <complex>
#include <cstddef>

namespace pdolab::detail {

/// Unnormalized n-dimensional DFT of a row-major cube of side `points`.
/// sign = -1 analysis, +1 synthesis. `in` and `out` may alias.
void dft(int dim, std::size_t points, const std::complex<double>* in,
         std::complex<double>* out, int sign);

} // namespace pdolab::detail
