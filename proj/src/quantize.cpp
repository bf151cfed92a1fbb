#include "pdolab/quantize.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/parallel.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pdolab {

namespace {

void check_coverage(const FrequencyBox& box, const TorusGrid& grid) {
    for (int d = 0; d < grid.dim(); ++d) {
        if (box.lo(d) > grid.min_frequency() || box.hi(d) < grid.max_frequency()) {
            throw RangeError("symbol table covers [" + std::to_string(box.lo(d)) + ", " + std::to_string(box.hi(d)) +
                             "] on axis " + std::to_string(d + 1) + " but the grid stores [" +
                             std::to_string(grid.min_frequency()) + ", " + std::to_string(grid.max_frequency()) + "]");
        }
    }
}

void check_symbol_against(const Symbol& a, const TorusGrid& grid) {
    if (a.dim() != grid.dim()) {
        throw GridMismatch("symbol dimension " + std::to_string(a.dim()) + " differs from grid dimension " +
                           std::to_string(grid.dim()));
    }
    if (a.is_tabulated()) {
        if (!a.x_independent() && !(a.table_grid() == grid)) {
            throw GridMismatch("symbol table lives on a different grid");
        }
        check_coverage(a.box(), grid);
    }
}

GridFunction apply_direct(const Symbol& a, const GridFunction& f) {
    const auto& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.dim());
    const std::size_t np = grid.points_per_axis();
    const std::size_t size = grid.size();
    const auto coeffs = forward_fft(f);

    std::vector<Complex> twiddle(np);
    for (std::size_t k = 0; k < np; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(np);
        twiddle[k] = {std::cos(t), std::sin(t)};
    }
    std::vector<int> freqs(size * n);
    for (std::size_t q = 0; q < size; ++q) {
        grid.frequency(q, std::span<int>(freqs.data() + q * n, n));
    }
    std::vector<std::size_t> table_offset;
    if (a.is_tabulated()) {
        table_offset.resize(size);
        for (std::size_t q = 0; q < size; ++q) {
            table_offset[q] = a.box().flat(std::span<const int>(freqs.data() + q * n, n));
        }
    }

    std::vector<Complex> out(size);
    const auto c = coeffs.coeffs();
    const auto mask = static_cast<long long>(np - 1);
    parallel_for(size, [&](std::size_t node) {
        std::array<std::size_t, TorusGrid::kMaxDim> idx{};
        grid.node_index(node, std::span<std::size_t>(idx.data(), n));
        const Complex* row = nullptr;
        if (a.is_tabulated()) {
            row = a.table_values().data() + (a.x_independent() ? 0 : node * a.box().size());
        }
        Complex sum = 0.0;
        for (std::size_t q = 0; q < size; ++q) {
            if (c[q] == Complex(0.0)) {
                continue;
            }
            long long phase = 0;
            for (std::size_t d = 0; d < n; ++d) {
                phase += static_cast<long long>(idx[d]) * freqs[q * n + d];
            }
            const Complex e = twiddle[static_cast<std::size_t>(phase & mask)];
            const Complex s = row ? row[table_offset[q]]
                                  : a.on_grid(grid, node, std::span<const int>(freqs.data() + q * n, n));
            sum += e * s * c[q];
        }
        out[node] = sum;
    });
    return GridFunction(grid, std::move(out));
}

GridFunction apply_separable(const Symbol& a, const GridFunction& f) {
    const auto& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.dim());
    const auto coeffs = forward_fft(f);
    std::vector<Complex> out(grid.size());
    std::vector<int> xi(n);
    std::vector<double> xd(n);
    for (const auto& term : a.terms()) {
        SpectralCoeffs scaled(grid);
        auto s = scaled.coeffs();
        const auto c = coeffs.coeffs();
        for (std::size_t q = 0; q < grid.size(); ++q) {
            grid.frequency(q, xi);
            for (std::size_t d = 0; d < n; ++d) {
                xd[d] = xi[d];
            }
            s[q] = term.xi_factor(xd) * c[q];
        }
        const auto g = inverse_fft(scaled);
        for (std::size_t node = 0; node < grid.size(); ++node) {
            grid.node_point(node, xd);
            out[node] += term.x_factor(xd) * g[node];
        }
    }
    return GridFunction(grid, std::move(out));
}

} // namespace

std::vector<Complex> multiplier_on_grid(const Symbol& m, const TorusGrid& grid) {
    if (!m.x_independent()) {
        throw UnsupportedOperation("multiplier must not depend on x");
    }
    check_symbol_against(m, grid);
    std::vector<Complex> values(grid.size());
    std::vector<int> xi(static_cast<std::size_t>(grid.dim()));
    for (std::size_t q = 0; q < grid.size(); ++q) {
        grid.frequency(q, xi);
        values[q] = m.on_grid(grid, 0, xi);
    }
    return values;
}

GridFunction apply_multiplier(std::span<const Complex> m, const GridFunction& f) {
    if (m.size() != f.grid().size()) {
        throw GridMismatch("multiplier has " + std::to_string(m.size()) + " samples, grid has " +
                           std::to_string(f.grid().size()));
    }
    auto coeffs = forward_fft(f);
    auto c = coeffs.coeffs();
    for (std::size_t q = 0; q < c.size(); ++q) {
        c[q] *= m[q];
    }
    return inverse_fft(coeffs);
}

GridFunction apply_multiplier(const Symbol& m, const GridFunction& f) {
    return apply_multiplier(multiplier_on_grid(m, f.grid()), f);
}

GridFunction apply_toroidal(const Symbol& a, const GridFunction& f, QuantizePath path) {
    check_symbol_against(a, f.grid());
    switch (path) {
    case QuantizePath::automatic:
        if (a.x_independent()) {
            return apply_multiplier(a, f);
        }
        if (a.is_separable()) {
            return apply_separable(a, f);
        }
        return apply_direct(a, f);
    case QuantizePath::direct:
        return apply_direct(a, f);
    case QuantizePath::separable:
        if (!a.is_separable()) {
            throw UnsupportedOperation("separable path requested for a symbol not declared separable");
        }
        return apply_separable(a, f);
    }
    throw UnsupportedOperation("unknown quantization path");
}

Symbol freeze(const Symbol& a, std::span<const double> z) {
    if (static_cast<int>(z.size()) != a.dim()) {
        throw GridMismatch("freeze point has the wrong dimension");
    }
    if (a.x_independent()) {
        return a;
    }
    if (a.is_tabulated()) {
        const auto& grid = a.table_grid();
        const auto np = static_cast<double>(grid.points_per_axis());
        std::array<std::size_t, TorusGrid::kMaxDim> idx{};
        for (int d = 0; d < a.dim(); ++d) {
            const double u = z[static_cast<std::size_t>(d)] * np;
            const double r = std::round(u);
            if (std::abs(u - r) > 1e-6) {
                throw RangeError("freeze point is off the table grid on axis " + std::to_string(d + 1));
            }
            auto i = static_cast<long long>(r) % static_cast<long long>(np);
            idx[d] = static_cast<std::size_t>(i < 0 ? i + static_cast<long long>(np) : i);
        }
        return freeze(a, grid, grid.node_of(std::span<const std::size_t>(idx.data(), static_cast<std::size_t>(a.dim()))));
    }
    const std::vector<double> point(z.begin(), z.end());
    return Symbol::multiplier(a.dim(), [a, point](std::span<const double> xi) { return a(point, xi); })
        .with_meta(a.meta());
}

Symbol freeze(const Symbol& a, const TorusGrid& grid, std::size_t node) {
    if (a.x_independent()) {
        return a;
    }
    if (a.is_tabulated()) {
        if (!(a.table_grid() == grid)) {
            throw GridMismatch("freeze node refers to a different grid");
        }
        const auto row = a.table_values().subspan(node * a.box().size(), a.box().size());
        return Symbol::multiplier_table(a.box(), std::vector<Complex>(row.begin(), row.end())).with_meta(a.meta());
    }
    std::vector<double> z(static_cast<std::size_t>(grid.dim()));
    grid.node_point(node, z);
    return freeze(a, z);
}

} // namespace pdolab
