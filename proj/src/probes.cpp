#include "pdolab/probes.hpp"

#include "pdolab/dyadic.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pdolab {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(mix_seed(seed) ^ a) ^ b);
}

GridFunction weierstrass(double s, int M, const TorusGrid& grid) {
    if (!(s > 0.0 && s < 1.0)) {
        throw RangeError("Weierstrass regularity must lie in (0, 1)");
    }
    if (M < 0 || M > 62 || (std::uint64_t{1} << M) >= grid.points_per_axis() / 2) {
        throw RangeError("Weierstrass top frequency 2^" + std::to_string(M) + " must stay below N/2 = " +
                         std::to_string(grid.points_per_axis() / 2));
    }
    SpectralCoeffs c(grid);
    std::vector<int> xi(static_cast<std::size_t>(grid.dim()), 0);
    for (int j = 0; j <= M; ++j) {
        const double amp = 0.5 * std::pow(2.0, -j * s);
        xi[0] = 1 << j;
        c.at(xi) += amp;
        xi[0] = -(1 << j);
        c.at(xi) += amp;
    }
    return inverse_fft(c);
}

namespace {

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

GridFunction band_probe(int l, const TorusGrid& grid, std::uint64_t seed, int modes) {
    if (l < 0 || modes < 1) {
        throw RangeError("band probe needs l >= 0 and at least one mode");
    }
    const double lo = std::ldexp(1.0, l - 1);
    const double hi = std::ldexp(1.0, l + 1);
    if (hi > static_cast<double>(grid.points_per_axis() / 2)) {
        throw RangeError("band " + std::to_string(l) + " reaches 2^" + std::to_string(l + 1) +
                         ", beyond the grid Nyquist " + std::to_string(grid.points_per_axis() / 2));
    }
    const auto n = static_cast<std::size_t>(grid.dim());
    std::vector<std::size_t> annulus;
    std::vector<int> xi(n);
    for (std::size_t q = 0; q < grid.size(); ++q) {
        grid.frequency(q, xi);
        const double b = japanese_bracket(std::span<const int>(xi));
        if (b >= lo && b <= hi) {
            annulus.push_back(q);
        }
    }
    if (annulus.empty()) {
        throw RangeError("band " + std::to_string(l) + " has no stored frequencies on this grid");
    }
    std::mt19937_64 rng(seed);
    const std::size_t take = std::min(annulus.size(), static_cast<std::size_t>(modes));
    // Partial Fisher-Yates: the first `take` entries become a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(unit_double(rng) * static_cast<double>(annulus.size() - i));
        std::swap(annulus[i], annulus[std::min(j, annulus.size() - 1)]);
    }
    SpectralCoeffs c(grid);
    for (std::size_t i = 0; i < take; ++i) {
        c.coeffs()[annulus[i]] = std::polar(1.0, kTwoPi * unit_double(rng));
    }
    auto f = inverse_fft(c);
    const double norm = besov_norm(f, 0.0);
    f *= 1.0 / norm;
    return f;
}

GridFunction single_mode(int k, const TorusGrid& grid) {
    SpectralCoeffs c(grid);
    std::vector<int> xi(static_cast<std::size_t>(grid.dim()), 0);
    xi[0] = k;
    c.at(xi) = 1.0;
    return inverse_fft(c);
}

GridFunction ProbeSpec::build(const TorusGrid& grid) const {
    switch (kind) {
    case Kind::weierstrass:
        return weierstrass(s, order, grid);
    case Kind::band_random:
        return band_probe(order, grid, seed);
    case Kind::single_mode:
        return single_mode(order, grid);
    }
    throw InvariantError("unknown probe kind");
}

std::string ProbeSpec::label() const {
    switch (kind) {
    case Kind::weierstrass:
        return "weierstrass(M=" + std::to_string(order) + ")";
    case Kind::band_random:
        return "band(l=" + std::to_string(order) + ",seed=" + std::to_string(seed) + ")";
    case Kind::single_mode:
        return "mode(k=" + std::to_string(order) + ")";
    }
    return "probe";
}

} // namespace pdolab
