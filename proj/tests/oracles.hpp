#pragma once

// Reference implementations used only by the tests. Each one is a direct,
// slow transcription of a defining formula and shares no code with the
// library beyond the data containers.

#include "pdolab/symbol.hpp"
#include "pdolab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oracle {

using pdolab::Complex;
using pdolab::GridFunction;
using pdolab::kTwoPi;
using pdolab::Symbol;
using pdolab::TorusGrid;

/// Hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline int freq(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

/// Node j's coordinates, first axis slowest.
inline std::vector<double> node_coords(const TorusGrid& g, std::size_t node) {
    std::vector<double> x(static_cast<std::size_t>(g.dim()));
    const std::size_t n = g.points_per_axis();
    for (int d = g.dim() - 1; d >= 0; --d) {
        x[static_cast<std::size_t>(d)] = static_cast<double>(node % n) / static_cast<double>(n);
        node /= n;
    }
    return x;
}

/// Frequency of flat FFT-order index q.
inline std::vector<int> flat_freq(const TorusGrid& g, std::size_t q) {
    std::vector<int> xi(static_cast<std::size_t>(g.dim()));
    const std::size_t n = g.points_per_axis();
    for (int d = g.dim() - 1; d >= 0; --d) {
        xi[static_cast<std::size_t>(d)] = freq(q % n, n);
        q /= n;
    }
    return xi;
}

inline double dot(const std::vector<double>& x, const std::vector<int>& xi) {
    double s = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        s += x[d] * xi[d];
    }
    return s;
}

/// c(xi) = N^{-n} sum_j f(x_j) exp(-2 pi i <x_j, xi>), FFT order.
inline std::vector<Complex> naive_dft(const GridFunction& f) {
    const auto& g = f.grid();
    std::vector<Complex> c(g.size());
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t q = 0; q < g.size(); ++q) {
        const auto xi = flat_freq(g, q);
        Complex acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            acc += f[j] * std::polar(1.0, -kTwoPi * dot(node_coords(g, j), xi));
        }
        c[q] = acc * scale;
    }
    return c;
}

/// sum_xi exp(2 pi i <x_j, xi>) a(x_j, xi) c(xi), evaluating a through its
/// grid accessor.
inline GridFunction direct_quantize(const Symbol& a, const GridFunction& f) {
    const auto& g = f.grid();
    const auto c = naive_dft(f);
    GridFunction out(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = node_coords(g, j);
        Complex acc = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            const auto xi = flat_freq(g, q);
            acc += std::polar(1.0, kTwoPi * dot(x, xi)) * a.on_grid(g, j, xi) * c[q];
        }
        out[j] = acc;
    }
    return out;
}

inline GridFunction random_function(const TorusGrid& g, Gen& gen) {
    GridFunction f(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        f[j] = gen.complex();
    }
    return f;
}

/// Random trigonometric polynomial with |xi_d| <= degree.
inline GridFunction random_trig_poly(const TorusGrid& g, int degree, Gen& gen) {
    std::vector<Complex> coeffs;
    std::vector<std::vector<int>> modes;
    const int n = g.dim();
    const int side = 2 * degree + 1;
    int count = 1;
    for (int d = 0; d < n; ++d) {
        count *= side;
    }
    for (int m = 0; m < count; ++m) {
        std::vector<int> xi(static_cast<std::size_t>(n));
        int r = m;
        for (int d = 0; d < n; ++d) {
            xi[static_cast<std::size_t>(d)] = r % side - degree;
            r /= side;
        }
        modes.push_back(xi);
        coeffs.push_back(gen.complex());
    }
    GridFunction f(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = node_coords(g, j);
        Complex acc = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            acc += coeffs[m] * std::polar(1.0, kTwoPi * dot(x, modes[m]));
        }
        f[j] = acc;
    }
    return f;
}

inline double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return a.size() == b.size() ? m : INFINITY;
}

inline double max_diff(const GridFunction& a, const GridFunction& b) { return max_diff(a.values(), b.values()); }

inline double max_abs(std::span<const Complex> a) {
    double m = 0.0;
    for (const auto& v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

/// The Littlewood-Paley bump written out from its definition.
inline double psi0(double lambda) {
    const double t = std::abs(lambda) - 1.0;
    if (t <= 0.0) {
        return 1.0;
    }
    if (t >= 1.0) {
        return 0.0;
    }
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return 1.0 - a / (a + b);
}

inline double psi(int l, double lambda) {
    if (l == 0) {
        return psi0(lambda);
    }
    return psi0(std::ldexp(lambda, -l)) - psi0(std::ldexp(lambda, -l + 1));
}

inline double bracket(double xi) { return std::sqrt(1.0 + xi * xi); }

/// sup_l 2^{ls} max_x |sum_xi psi_l(<xi>) c(xi) e^{2 pi i x xi}| for n = 1,
/// evaluated by direct synthesis.
inline double besov_direct(const GridFunction& f, double s, int top) {
    const auto& g = f.grid();
    const auto c = naive_dft(f);
    double best = 0.0;
    for (int l = 0; l <= top; ++l) {
        double sup = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const auto x = node_coords(g, j);
            Complex acc = 0.0;
            for (std::size_t q = 0; q < g.size(); ++q) {
                const auto xi = flat_freq(g, q);
                double r2 = 1.0;
                for (int v : xi) {
                    r2 += static_cast<double>(v) * v;
                }
                acc += psi(l, std::sqrt(r2)) * c[q] * std::polar(1.0, kTwoPi * dot(x, xi));
            }
            sup = std::max(sup, std::abs(acc));
        }
        best = std::max(best, std::ldexp(sup, 0) * std::pow(2.0, l * s));
    }
    return best;
}

} // namespace oracle
