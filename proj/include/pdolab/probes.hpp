#pragma once

#include "pdolab/torus.hpp"

#include <cstdint>
#include <string>

namespace pdolab {

/// splitmix64 finalizer, used to derive independent per-(band, probe) seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// W(x) = sum_{j=0..M} 2^{-j s} cos(2 pi 2^j x_1); RangeError when 2^M >= N/2.
GridFunction weierstrass(double s, int M, const TorusGrid& grid);

/// Unimodular random coefficients on up to `modes` distinct stored
/// frequencies with 2^{l-1} <= <xi> <= 2^{l+1}, scaled to Besov norm 1 at s = 0.
GridFunction band_probe(int l, const TorusGrid& grid, std::uint64_t seed, int modes = 32);

/// exp(2 pi i k x_1).
GridFunction single_mode(int k, const TorusGrid& grid);

struct ProbeSpec {
    enum class Kind { weierstrass, band_random, single_mode };
    Kind kind = Kind::band_random;
    double s = 0.5;        ///< weierstrass regularity
    int order = 2;         ///< M, band l or mode k
    std::uint64_t seed = 1;

    GridFunction build(const TorusGrid& grid) const;
    std::string label() const;
};

} // namespace pdolab
