#include "pdolab/torus.hpp"

#include "fft_backend.hpp"
#include "pdolab/csv.hpp"
#include "pdolab/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace pdolab {

TorusGrid::TorusGrid(int dim, std::size_t points_per_axis) : dim_(dim), n_(points_per_axis), total_(1) {
    if (dim < 1 || dim > kMaxDim) {
        throw InvariantError("TorusGrid: dimension must be in 1.." + std::to_string(kMaxDim) +
                             ", got " + std::to_string(dim));
    }
    if (points_per_axis < 8 || !std::has_single_bit(points_per_axis)) {
        throw InvariantError("TorusGrid: points per axis must be a power of two >= 8, got " +
                             std::to_string(points_per_axis));
    }
    for (int d = 0; d < dim; ++d) {
        if (total_ > kMaxPoints / points_per_axis) {
            throw InvariantError("TorusGrid: N^n exceeds 2^26 points");
        }
        total_ *= points_per_axis;
    }
}

void TorusGrid::node_index(std::size_t node, std::span<std::size_t> index) const {
    for (int d = dim_ - 1; d >= 0; --d) {
        index[d] = node % n_;
        node /= n_;
    }
}

std::size_t TorusGrid::node_of(std::span<const std::size_t> index) const {
    std::size_t node = 0;
    for (int d = 0; d < dim_; ++d) {
        node = node * n_ + index[d] % n_;
    }
    return node;
}

void TorusGrid::node_point(std::size_t node, std::span<double> x) const {
    for (int d = dim_ - 1; d >= 0; --d) {
        x[d] = static_cast<double>(node % n_) / static_cast<double>(n_);
        node /= n_;
    }
}

std::size_t TorusGrid::index_of_frequency(int xi) const {
    if (xi < min_frequency() || xi > max_frequency()) {
        throw RangeError("frequency " + std::to_string(xi) + " outside [" +
                         std::to_string(min_frequency()) + ", " + std::to_string(max_frequency()) + "]");
    }
    return xi >= 0 ? static_cast<std::size_t>(xi) : static_cast<std::size_t>(xi + static_cast<int>(n_));
}

void TorusGrid::frequency(std::size_t flat, std::span<int> xi) const {
    for (int d = dim_ - 1; d >= 0; --d) {
        xi[d] = frequency_of_index(flat % n_);
        flat /= n_;
    }
}

std::size_t TorusGrid::flat_of_frequency(std::span<const int> xi) const {
    std::size_t flat = 0;
    for (int d = 0; d < dim_; ++d) {
        flat = flat * n_ + index_of_frequency(xi[d]);
    }
    return flat;
}

namespace {

void require_finite(std::span<const Complex> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
            throw InvariantError(std::string(what) + ": non-finite value at index " + std::to_string(i));
        }
    }
}

} // namespace

GridFunction::GridFunction(TorusGrid grid) : grid_(grid), values_(grid.size()) {}

GridFunction::GridFunction(TorusGrid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvariantError("GridFunction: expected " + std::to_string(grid_.size()) + " values, got " +
                             std::to_string(values_.size()));
    }
    require_finite(values_, "GridFunction");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!(grid_ == other.grid_)) {
        throw GridMismatch("GridFunction addition on different grids");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (!(grid_ == other.grid_)) {
        throw GridMismatch("GridFunction subtraction on different grids");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
    for (auto& v : values_) {
        v *= c;
    }
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

SpectralCoeffs::SpectralCoeffs(TorusGrid grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralCoeffs::SpectralCoeffs(TorusGrid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) {
        throw InvariantError("SpectralCoeffs: expected " + std::to_string(grid_.size()) + " coefficients, got " +
                             std::to_string(coeffs_.size()));
    }
    require_finite(coeffs_, "SpectralCoeffs");
}

SpectralCoeffs forward_fft(const GridFunction& f) {
    const auto& grid = f.grid();
    std::vector<Complex> out(grid.size());
    detail::dft(grid.dim(), grid.points_per_axis(), f.values().data(), out.data(), -1);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : out) {
        c *= scale;
    }
    return SpectralCoeffs(grid, std::move(out));
}

GridFunction inverse_fft(const SpectralCoeffs& c) {
    const auto& grid = c.grid();
    std::vector<Complex> out(grid.size());
    detail::dft(grid.dim(), grid.points_per_axis(), c.coeffs().data(), out.data(), +1);
    return GridFunction(grid, std::move(out));
}

GridFunction sample(const PointFunction& expr, const TorusGrid& grid) {
    std::vector<Complex> values(grid.size());
    double x[TorusGrid::kMaxDim];
    std::span<double> point(x, static_cast<std::size_t>(grid.dim()));
    for (std::size_t node = 0; node < grid.size(); ++node) {
        grid.node_point(node, point);
        const Complex v = expr(point);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::string where;
            for (int d = 0; d < grid.dim(); ++d) {
                where += (d ? ", " : "") + format_number(x[d]);
            }
            throw InvariantError("sample: non-finite value at node " + std::to_string(node) + " (x = " + where + ")");
        }
        values[node] = v;
    }
    return GridFunction(grid, std::move(values));
}

double sup_norm(const GridFunction& f) {
    double best = 0.0;
    for (const auto& v : f.values()) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

void write_csv(std::ostream& out, const GridFunction& f) {
    const auto& grid = f.grid();
    for (int d = 0; d < grid.dim(); ++d) {
        out << 'i' << d + 1 << ',';
    }
    out << "re,im\n";
    std::size_t index[TorusGrid::kMaxDim];
    for (std::size_t node = 0; node < grid.size(); ++node) {
        grid.node_index(node, std::span(index, static_cast<std::size_t>(grid.dim())));
        for (int d = 0; d < grid.dim(); ++d) {
            out << index[d] << ',';
        }
        out << format_number(f[node].real()) << ',' << format_number(f[node].imag()) << '\n';
    }
}

void write_csv(std::ostream& out, const SpectralCoeffs& c) {
    const auto& grid = c.grid();
    for (int d = 0; d < grid.dim(); ++d) {
        out << "xi" << d + 1 << ',';
    }
    out << "re,im\n";
    int xi[TorusGrid::kMaxDim];
    for (std::size_t k = 0; k < grid.size(); ++k) {
        grid.frequency(k, std::span(xi, static_cast<std::size_t>(grid.dim())));
        for (int d = 0; d < grid.dim(); ++d) {
            out << xi[d] << ',';
        }
        const auto v = c.coeffs()[k];
        out << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
    }
}

GridFunction read_grid_function_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty function file", 1, 1);
    }
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[header.size() - 2] != "re" || header.back() != "im") {
        throw ParseError("expected header i1..in,re,im", 1, 1);
    }
    const int dim = static_cast<int>(header.size()) - 2;
    struct Row {
        std::vector<std::size_t> index;
        Complex value;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no, 1);
        }
        Row row;
        try {
            for (int d = 0; d < dim; ++d) {
                row.index.push_back(std::stoul(fields[d]));
            }
            row.value = {std::stod(fields[dim]), std::stod(fields[dim + 1])};
        } catch (const std::exception&) {
            throw ParseError("malformed number", line_no, 1);
        }
        rows.push_back(std::move(row));
    }
    const auto points = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(rows.size()), 1.0 / dim)));
    TorusGrid grid(dim, points);
    if (grid.size() != rows.size()) {
        throw InvariantError("function file: row count is not N^n");
    }
    std::vector<Complex> values(grid.size());
    std::vector<bool> seen(grid.size(), false);
    for (const auto& row : rows) {
        for (auto i : row.index) {
            if (i >= points) {
                throw RangeError("function file: node index " + std::to_string(i) + " out of range");
            }
        }
        const auto node = grid.node_of(row.index);
        if (seen[node]) {
            throw InvariantError("function file: duplicate node " + std::to_string(node));
        }
        seen[node] = true;
        values[node] = row.value;
    }
    return GridFunction(grid, std::move(values));
}

} // namespace pdolab
