#include "pdolab/symbol.hpp"

#include "fft_backend.hpp"
#include "pdolab/errors.hpp"

#include <cmath>
#include <string>

namespace pdolab {

FrequencyBox::FrequencyBox(std::vector<int> lo, std::vector<int> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.empty()) {
        throw InvariantError("FrequencyBox: lo/hi dimension mismatch");
    }
    size_ = 1;
    for (std::size_t d = 0; d < lo_.size(); ++d) {
        if (hi_[d] < lo_[d]) {
            throw InvariantError("FrequencyBox: empty range on axis " + std::to_string(d + 1));
        }
        size_ *= static_cast<std::size_t>(hi_[d] - lo_[d] + 1);
    }
}

FrequencyBox FrequencyBox::centered(int dim, int radius) {
    return FrequencyBox(std::vector<int>(static_cast<std::size_t>(dim), -radius),
                        std::vector<int>(static_cast<std::size_t>(dim), radius));
}

FrequencyBox FrequencyBox::covering(const TorusGrid& grid, int margin) {
    return FrequencyBox(std::vector<int>(static_cast<std::size_t>(grid.dim()), grid.min_frequency()),
                        std::vector<int>(static_cast<std::size_t>(grid.dim()), grid.max_frequency() + margin));
}

bool FrequencyBox::contains(std::span<const int> xi) const {
    for (std::size_t d = 0; d < lo_.size(); ++d) {
        if (xi[d] < lo_[d] || xi[d] > hi_[d]) {
            return false;
        }
    }
    return true;
}

std::size_t FrequencyBox::flat(std::span<const int> xi) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < lo_.size(); ++d) {
        if (xi[d] < lo_[d] || xi[d] > hi_[d]) {
            throw RangeError("frequency " + std::to_string(xi[d]) + " on axis " + std::to_string(d + 1) +
                             " outside table range [" + std::to_string(lo_[d]) + ", " + std::to_string(hi_[d]) +
                             "]");
        }
        flat = flat * static_cast<std::size_t>(hi_[d] - lo_[d] + 1) + static_cast<std::size_t>(xi[d] - lo_[d]);
    }
    return flat;
}

void FrequencyBox::frequency(std::size_t flat, std::span<int> xi) const {
    for (int d = dim() - 1; d >= 0; --d) {
        const auto e = extent(d);
        xi[static_cast<std::size_t>(d)] = lo(d) + static_cast<int>(flat % e);
        flat /= e;
    }
}

double japanese_bracket(std::span<const double> xi) {
    double s = 1.0;
    for (double v : xi) {
        s += v * v;
    }
    return std::sqrt(s);
}

double japanese_bracket(std::span<const int> xi) {
    double s = 1.0;
    for (int v : xi) {
        s += static_cast<double>(v) * v;
    }
    return std::sqrt(s);
}

enum class Kind { closed, multiplier, separable, table, multiplier_table };

struct Symbol::Impl {
    Kind kind;
    int dim;
    ClassMeta meta;
    Evaluator eval;
    XDerivative dx;
    Multiplier mult;
    std::vector<SeparableTerm> terms;
    std::optional<TorusGrid> grid;
    FrequencyBox box;
    std::vector<Complex> values;
};

Symbol::Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Symbol Symbol::closed_form(int dim, Evaluator f, XDerivative dx) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::closed;
    impl->dim = dim;
    impl->eval = std::move(f);
    impl->dx = std::move(dx);
    return Symbol(std::move(impl));
}

Symbol Symbol::multiplier(int dim, Multiplier m) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::multiplier;
    impl->dim = dim;
    impl->mult = std::move(m);
    return Symbol(std::move(impl));
}

Symbol Symbol::separable(int dim, std::vector<SeparableTerm> terms) {
    if (terms.empty()) {
        throw InvariantError("separable symbol needs at least one term");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::separable;
    impl->dim = dim;
    impl->terms = std::move(terms);
    return Symbol(std::move(impl));
}

Symbol Symbol::table(const TorusGrid& grid, FrequencyBox box, std::vector<Complex> values) {
    if (box.dim() != grid.dim()) {
        throw InvariantError("symbol table: box and grid dimensions differ");
    }
    if (values.size() != grid.size() * box.size()) {
        throw InvariantError("symbol table: expected " + std::to_string(grid.size() * box.size()) + " values");
    }
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InvariantError("symbol table: non-finite entry");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::table;
    impl->dim = grid.dim();
    impl->grid = grid;
    impl->box = std::move(box);
    impl->values = std::move(values);
    return Symbol(std::move(impl));
}

Symbol Symbol::multiplier_table(FrequencyBox box, std::vector<Complex> values) {
    if (values.size() != box.size()) {
        throw InvariantError("multiplier table: expected " + std::to_string(box.size()) + " values");
    }
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InvariantError("multiplier table: non-finite entry");
        }
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::multiplier_table;
    impl->dim = box.dim();
    impl->box = std::move(box);
    impl->values = std::move(values);
    return Symbol(std::move(impl));
}

Symbol Symbol::zero(int dim) {
    return multiplier(dim, [](std::span<const double>) { return Complex{}; });
}

int Symbol::dim() const noexcept { return impl_->dim; }
bool Symbol::is_tabulated() const noexcept {
    return impl_->kind == Kind::table || impl_->kind == Kind::multiplier_table;
}
bool Symbol::x_independent() const noexcept {
    return impl_->kind == Kind::multiplier || impl_->kind == Kind::multiplier_table;
}
bool Symbol::is_separable() const noexcept { return impl_->kind == Kind::separable; }

bool Symbol::has_x_derivative() const noexcept {
    switch (impl_->kind) {
    case Kind::closed:
        return static_cast<bool>(impl_->dx);
    case Kind::separable:
        for (const auto& t : impl_->terms) {
            if (!t.x_derivative) {
                return false;
            }
        }
        return true;
    default:
        return true;
    }
}

const ClassMeta& Symbol::meta() const noexcept { return impl_->meta; }

Symbol Symbol::with_meta(ClassMeta meta) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->meta = meta;
    return Symbol(std::move(impl));
}

const std::vector<SeparableTerm>& Symbol::terms() const {
    if (impl_->kind != Kind::separable) {
        throw UnsupportedOperation("symbol was not declared separable");
    }
    return impl_->terms;
}

const FrequencyBox& Symbol::box() const {
    if (!is_tabulated()) {
        throw UnsupportedOperation("closed-form symbol has no frequency box");
    }
    return impl_->box;
}

const TorusGrid& Symbol::table_grid() const {
    if (impl_->kind != Kind::table) {
        throw UnsupportedOperation("symbol has no x-grid");
    }
    return *impl_->grid;
}

std::span<const Complex> Symbol::table_values() const {
    if (!is_tabulated()) {
        throw UnsupportedOperation("closed-form symbol has no table");
    }
    return impl_->values;
}

namespace {

std::size_t snap_to_node(const TorusGrid& grid, std::span<const double> x) {
    std::size_t index[TorusGrid::kMaxDim];
    const auto n = static_cast<double>(grid.points_per_axis());
    for (int d = 0; d < grid.dim(); ++d) {
        const double t = x[static_cast<std::size_t>(d)] * n;
        const double r = std::round(t);
        if (std::abs(t - r) > 1e-6) {
            throw RangeError("table symbol evaluated off-grid on axis " + std::to_string(d + 1));
        }
        auto k = static_cast<long long>(r) % static_cast<long long>(grid.points_per_axis());
        if (k < 0) {
            k += static_cast<long long>(grid.points_per_axis());
        }
        index[d] = static_cast<std::size_t>(k);
    }
    return grid.node_of(std::span<const std::size_t>(index, static_cast<std::size_t>(grid.dim())));
}

void snap_to_lattice(std::span<const double> xi, std::span<int> out) {
    for (std::size_t d = 0; d < xi.size(); ++d) {
        const double r = std::round(xi[d]);
        if (std::abs(xi[d] - r) > 1e-9) {
            throw RangeError("table symbol evaluated at non-integer frequency on axis " + std::to_string(d + 1));
        }
        out[d] = static_cast<int>(r);
    }
}

} // namespace

Complex Symbol::operator()(std::span<const double> x, std::span<const double> xi) const {
    const auto& im = *impl_;
    switch (im.kind) {
    case Kind::closed:
        return im.eval(x, xi);
    case Kind::multiplier:
        return im.mult(xi);
    case Kind::separable: {
        Complex sum{};
        for (const auto& t : im.terms) {
            sum += t.x_factor(x) * t.xi_factor(xi);
        }
        return sum;
    }
    case Kind::table: {
        int k[TorusGrid::kMaxDim];
        std::span<int> ks(k, static_cast<std::size_t>(im.dim));
        snap_to_lattice(xi, ks);
        const auto node = snap_to_node(*im.grid, x);
        return im.values[node * im.box.size() + im.box.flat(ks)];
    }
    case Kind::multiplier_table: {
        int k[TorusGrid::kMaxDim];
        std::span<int> ks(k, static_cast<std::size_t>(im.dim));
        snap_to_lattice(xi, ks);
        return im.values[im.box.flat(ks)];
    }
    }
    return {};
}

Complex Symbol::operator()(std::initializer_list<double> x, std::initializer_list<double> xi) const {
    return (*this)(std::span<const double>(x.begin(), x.size()), std::span<const double>(xi.begin(), xi.size()));
}

Complex Symbol::on_grid(const TorusGrid& grid, std::size_t node, std::span<const int> xi) const {
    const auto& im = *impl_;
    if (im.kind == Kind::table) {
        if (!(grid == *im.grid)) {
            throw GridMismatch("symbol table lives on a different grid");
        }
        return im.values[node * im.box.size() + im.box.flat(xi)];
    }
    if (im.kind == Kind::multiplier_table) {
        return im.values[im.box.flat(xi)];
    }
    double x[TorusGrid::kMaxDim];
    double k[TorusGrid::kMaxDim];
    const auto n = static_cast<std::size_t>(grid.dim());
    grid.node_point(node, std::span(x, n));
    for (std::size_t d = 0; d < n; ++d) {
        k[d] = xi[d];
    }
    return (*this)(std::span<const double>(x, n), std::span<const double>(k, n));
}

Complex Symbol::x_derivative_value(std::span<const double> x, std::span<const double> xi,
                                   const MultiIndex& beta) const {
    const auto& im = *impl_;
    if (beta.is_zero()) {
        return (*this)(x, xi);
    }
    switch (im.kind) {
    case Kind::multiplier:
    case Kind::multiplier_table:
        return {};
    case Kind::closed:
        if (im.dx) {
            return im.dx(x, xi, beta);
        }
        break;
    case Kind::separable: {
        Complex sum{};
        for (const auto& t : im.terms) {
            if (!t.x_derivative) {
                throw UnsupportedOperation("separable term without registered x-derivative");
            }
            sum += t.x_derivative(x, beta) * t.xi_factor(xi);
        }
        return sum;
    }
    case Kind::table:
        break;
    }
    throw UnsupportedOperation("no analytic x-derivative registered for this symbol");
}

namespace {

struct StencilPoint {
    std::vector<int> offset;
    double weight;
};

// Delta^alpha f(xi) = sum_gamma prod_d (-1)^{alpha_d-gamma_d} C(alpha_d, gamma_d) f(xi + gamma).
std::vector<StencilPoint> difference_stencil(const MultiIndex& alpha) {
    std::vector<StencilPoint> points{{{}, 1.0}};
    for (int d = 0; d < alpha.dim(); ++d) {
        const int a = alpha[d];
        std::vector<StencilPoint> next;
        double binom = 1.0;
        for (int g = 0; g <= a; ++g) {
            const double w = ((a - g) % 2 == 0 ? 1.0 : -1.0) * binom;
            for (const auto& p : points) {
                auto off = p.offset;
                off.push_back(g);
                next.push_back({std::move(off), p.weight * w});
            }
            binom = binom * (a - g) / (g + 1);
        }
        points = std::move(next);
    }
    return points;
}

template <class F>
Complex apply_stencil(const std::vector<StencilPoint>& stencil, std::span<const double> xi, F&& f) {
    double shifted[TorusGrid::kMaxDim];
    std::span<const double> s(shifted, xi.size());
    Complex sum{};
    for (const auto& p : stencil) {
        for (std::size_t d = 0; d < xi.size(); ++d) {
            shifted[d] = xi[d] + p.offset[d];
        }
        sum += p.weight * f(s);
    }
    return sum;
}

std::vector<Complex> difference_values(const FrequencyBox& src, const FrequencyBox& dst,
                                       std::span<const Complex> values, std::size_t rows,
                                       const std::vector<StencilPoint>& stencil) {
    std::vector<Complex> out(rows * dst.size());
    const int dim = src.dim();
    int xi[TorusGrid::kMaxDim];
    int shifted[TorusGrid::kMaxDim];
    std::span<int> xs(xi, static_cast<std::size_t>(dim));
    std::span<const int> ss(shifted, static_cast<std::size_t>(dim));
    for (std::size_t k = 0; k < dst.size(); ++k) {
        dst.frequency(k, xs);
        for (const auto& p : stencil) {
            for (int d = 0; d < dim; ++d) {
                shifted[d] = xi[d] + p.offset[static_cast<std::size_t>(d)];
            }
            const auto flat = src.flat(ss);
            for (std::size_t r = 0; r < rows; ++r) {
                out[r * dst.size() + k] += p.weight * values[r * src.size() + flat];
            }
        }
    }
    return out;
}

} // namespace

Symbol difference(const Symbol& a, const MultiIndex& alpha) {
    if (alpha.dim() != a.dim()) {
        throw InvariantError("difference: multi-index dimension differs from symbol dimension");
    }
    if (alpha.is_zero()) {
        return a;
    }
    auto stencil = difference_stencil(alpha);
    if (a.is_tabulated()) {
        const auto& box = a.box();
        std::vector<int> lo, hi;
        for (int d = 0; d < a.dim(); ++d) {
            lo.push_back(box.lo(d));
            hi.push_back(box.hi(d) - alpha[d]);
            if (hi.back() < lo.back()) {
                throw RangeError("difference: table too narrow on axis " + std::to_string(d + 1) +
                                 " for order " + std::to_string(alpha[d]));
            }
        }
        FrequencyBox dst(lo, hi);
        if (a.x_independent()) {
            return Symbol::multiplier_table(dst, difference_values(box, dst, a.table_values(), 1, stencil));
        }
        const auto& grid = a.table_grid();
        return Symbol::table(grid, dst, difference_values(box, dst, a.table_values(), grid.size(), stencil));
    }
    if (a.x_independent()) {
        return Symbol::multiplier(a.dim(), [a, stencil](std::span<const double> xi) {
            return apply_stencil(stencil, xi, [&](std::span<const double> s) {
                const double x0[TorusGrid::kMaxDim] = {};
                return a(std::span<const double>(x0, s.size()), s);
            });
        });
    }
    if (a.is_separable()) {
        std::vector<SeparableTerm> terms;
        for (const auto& t : a.terms()) {
            SeparableTerm nt = t;
            nt.xi_factor = [f = t.xi_factor, stencil](std::span<const double> xi) {
                return apply_stencil(stencil, xi, f);
            };
            terms.push_back(std::move(nt));
        }
        return Symbol::separable(a.dim(), std::move(terms));
    }
    Symbol::XDerivative dx;
    if (a.has_x_derivative()) {
        dx = [a, stencil](std::span<const double> x, std::span<const double> xi, const MultiIndex& beta) {
            return apply_stencil(stencil, xi, [&](std::span<const double> s) { return a.x_derivative_value(x, s, beta); });
        };
    }
    return Symbol::closed_form(
        a.dim(),
        [a, stencil](std::span<const double> x, std::span<const double> xi) {
            return apply_stencil(stencil, xi, [&](std::span<const double> s) { return a(x, s); });
        },
        std::move(dx));
}

Symbol x_derivative(const Symbol& a, const MultiIndex& beta) {
    if (beta.dim() != a.dim()) {
        throw InvariantError("x_derivative: multi-index dimension differs from symbol dimension");
    }
    if (beta.is_zero()) {
        return a;
    }
    if (a.x_independent()) {
        if (a.is_tabulated()) {
            return Symbol::multiplier_table(a.box(), std::vector<Complex>(a.box().size()));
        }
        return Symbol::zero(a.dim());
    }
    if (a.is_tabulated()) {
        const auto& grid = a.table_grid();
        const auto& box = a.box();
        const auto values = a.table_values();
        const std::size_t rows = grid.size();
        const std::size_t n = grid.points_per_axis();
        // Spectral factor prod_d (2 pi i k_d)^beta_d; the Nyquist mode is
        // dropped for odd orders so real tables stay real.
        std::vector<Complex> factor(rows);
        int k[TorusGrid::kMaxDim];
        std::span<int> ks(k, static_cast<std::size_t>(grid.dim()));
        for (std::size_t f = 0; f < rows; ++f) {
            grid.frequency(f, ks);
            Complex w{1.0, 0.0};
            for (int d = 0; d < grid.dim(); ++d) {
                const int b = beta[d];
                if (b % 2 == 1 && k[d] == -static_cast<int>(n / 2)) {
                    w = 0.0;
                }
                w *= std::pow(Complex(0.0, kTwoPi * k[d]), b);
            }
            factor[f] = w / static_cast<double>(rows);
        }
        std::vector<Complex> out(values.size());
        std::vector<Complex> column(rows);
        for (std::size_t c = 0; c < box.size(); ++c) {
            for (std::size_t r = 0; r < rows; ++r) {
                column[r] = values[r * box.size() + c];
            }
            detail::dft(grid.dim(), n, column.data(), column.data(), -1);
            for (std::size_t r = 0; r < rows; ++r) {
                column[r] *= factor[r];
            }
            detail::dft(grid.dim(), n, column.data(), column.data(), +1);
            for (std::size_t r = 0; r < rows; ++r) {
                out[r * box.size() + c] = column[r];
            }
        }
        return Symbol::table(grid, box, std::move(out));
    }
    if (!a.has_x_derivative()) {
        throw UnsupportedOperation("x_derivative: closed-form symbol has no registered x-derivative");
    }
    if (a.is_separable()) {
        std::vector<SeparableTerm> terms;
        for (const auto& t : a.terms()) {
            SeparableTerm nt;
            nt.xi_factor = t.xi_factor;
            nt.x_factor = [d = t.x_derivative, beta](std::span<const double> x) { return d(x, beta); };
            nt.x_derivative = [d = t.x_derivative, beta](std::span<const double> x, const MultiIndex& b2) {
                return d(x, beta + b2);
            };
            terms.push_back(std::move(nt));
        }
        return Symbol::separable(a.dim(), std::move(terms));
    }
    return Symbol::closed_form(
        a.dim(),
        [a, beta](std::span<const double> x, std::span<const double> xi) { return a.x_derivative_value(x, xi, beta); },
        [a, beta](std::span<const double> x, std::span<const double> xi, const MultiIndex& b2) {
            return a.x_derivative_value(x, xi, beta + b2);
        });
}

Symbol tabulate(const Symbol& a, const TorusGrid& grid, const FrequencyBox& box) {
    if (box.dim() != a.dim() || grid.dim() != a.dim()) {
        throw InvariantError("tabulate: dimension mismatch");
    }
    int k[TorusGrid::kMaxDim];
    std::span<int> ks(k, static_cast<std::size_t>(a.dim()));
    if (a.x_independent()) {
        std::vector<Complex> values(box.size());
        for (std::size_t f = 0; f < box.size(); ++f) {
            box.frequency(f, ks);
            values[f] = a.on_grid(grid, 0, ks);
        }
        return Symbol::multiplier_table(box, std::move(values));
    }
    std::vector<Complex> values(grid.size() * box.size());
    for (std::size_t node = 0; node < grid.size(); ++node) {
        for (std::size_t f = 0; f < box.size(); ++f) {
            box.frequency(f, ks);
            values[node * box.size() + f] = a.on_grid(grid, node, ks);
        }
    }
    return Symbol::table(grid, box, std::move(values));
}

} // namespace pdolab
