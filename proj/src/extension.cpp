#include "pdolab/extension.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/smooth.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pdolab {

namespace {

constexpr double kBumpEdge = 0.75;
constexpr int kQuadraturePoints = 6144;

struct KernelTerms {
    double value;
    double slope;
};

// theta(t) = 2 int_0^{3/4} chi(w) cos(2 pi w t) dw by the trapezoid rule; chi
// and all its derivatives vanish at 3/4 and its odd derivatives vanish at 0,
// so the rule converges spectrally.
KernelTerms quadrature(double t) {
    const double h = kBumpEdge / kQuadraturePoints;
    double v = 0.0;
    double s = 0.0;
    for (int q = 0; q <= kQuadraturePoints; ++q) {
        const double w = q * h;
        const double weight = (q == 0 || q == kQuadraturePoints) ? 0.5 : 1.0;
        const double c = weight * CardinalKernel::bump(w);
        v += c * std::cos(kTwoPi * w * t);
        s -= c * kTwoPi * w * std::sin(kTwoPi * w * t);
    }
    return {2.0 * h * v, 2.0 * h * s};
}

} // namespace

double CardinalKernel::bump(double w) {
    const double a = std::abs(w);
    return 1.0 - smooth_step(2.0 * a - 0.5);
}

CardinalKernel::CardinalKernel() {
    const std::size_t count = static_cast<std::size_t>(kRadius) * kSamplesPerUnit + 1;
    values_.resize(count);
    slopes_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto terms = quadrature(static_cast<double>(i) / kSamplesPerUnit);
        values_[i] = terms.value;
        slopes_[i] = terms.slope;
    }
    for (int j = 0; j <= kRadius; ++j) {
        values_[static_cast<std::size_t>(j) * kSamplesPerUnit] = j == 0 ? 1.0 : 0.0;
    }
    slopes_[0] = 0.0;
}

const CardinalKernel& CardinalKernel::instance() {
    static const CardinalKernel kernel;
    return kernel;
}

double CardinalKernel::value(double t) const {
    const double a = std::abs(t);
    if (a >= kRadius) {
        return 0.0;
    }
    const double u = a * kSamplesPerUnit;
    const auto i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    if (f == 0.0) {
        return values_[i];
    }
    const double h = 1.0 / kSamplesPerUnit;
    const double f2 = f * f;
    const double f3 = f2 * f;
    return (2 * f3 - 3 * f2 + 1) * values_[i] + (f3 - 2 * f2 + f) * h * slopes_[i] +
           (-2 * f3 + 3 * f2) * values_[i + 1] + (f3 - f2) * h * slopes_[i + 1];
}

double CardinalKernel::derivative(double t) const {
    const double a = std::abs(t);
    if (a >= kRadius) {
        return 0.0;
    }
    const double u = a * kSamplesPerUnit;
    const auto i = static_cast<std::size_t>(u);
    const double f = u - static_cast<double>(i);
    const double h = 1.0 / kSamplesPerUnit;
    const double f2 = f * f;
    const double d = ((6 * f2 - 6 * f) * (values_[i] - values_[i + 1])) / h + (3 * f2 - 4 * f + 1) * slopes_[i] +
                     (3 * f2 - 2 * f) * slopes_[i + 1];
    return t < 0 ? -d : d;
}

namespace {

// Shared evaluator: sum over the window of lattice points k with
// |xi_d - k_d| < R of prod_d w_d(xi_d - k_d) a(node, k), where w_d is theta
// or theta' on the differentiated axis.
class Extension {
public:
    Extension(Symbol table, int diff_axis) : table_(std::move(table)), diff_axis_(diff_axis) {}

    Complex operator()(std::span<const double> x, std::span<const double> xi) const {
        const int n = table_.dim();
        const auto& box = table_.box();
        const auto& kernel = CardinalKernel::instance();
        const int r = kernel.radius();
        std::array<int, 3> start{};
        std::array<int, 3> count{};
        std::array<std::array<double, 2 * CardinalKernel::kRadius + 1>, 3> weights{};
        for (int d = 0; d < n; ++d) {
            const double v = xi[static_cast<std::size_t>(d)];
            if (!(v >= box.lo(d) + r && v <= box.hi(d) - r)) {
                throw RangeError("extended symbol evaluated at xi = " + std::to_string(v) + " on axis " +
                                 std::to_string(d + 1) + "; valid range is [" + std::to_string(box.lo(d) + r) +
                                 ", " + std::to_string(box.hi(d) - r) + "]");
            }
            const int k0 = static_cast<int>(std::floor(v)) - r + 1;
            start[d] = k0;
            count[d] = 2 * r;
            for (int j = 0; j < count[d]; ++j) {
                const double t = v - (k0 + j);
                weights[d][j] = d == diff_axis_ ? kernel.derivative(t) : kernel.value(t);
            }
        }
        const auto values = table_.table_values();
        std::size_t row = 0;
        if (!table_.x_independent()) {
            row = node_of(x) * box.size();
        }
        std::array<int, 3> j{};
        std::array<int, 3> k{};
        Complex sum = 0.0;
        while (true) {
            double w = 1.0;
            for (int d = 0; d < n; ++d) {
                k[d] = start[d] + j[d];
                w *= weights[d][j[d]];
            }
            if (w != 0.0) {
                sum += w * values[row + box.flat(std::span<const int>(k.data(), static_cast<std::size_t>(n)))];
            }
            int d = n - 1;
            while (d >= 0 && ++j[d] == count[d]) {
                j[d] = 0;
                --d;
            }
            if (d < 0) {
                break;
            }
        }
        return sum;
    }

private:
    std::size_t node_of(std::span<const double> x) const {
        const auto& grid = table_.table_grid();
        const auto np = static_cast<double>(grid.points_per_axis());
        std::array<std::size_t, 3> index{};
        for (int d = 0; d < grid.dim(); ++d) {
            const double u = x[static_cast<std::size_t>(d)] * np;
            const double r = std::round(u);
            if (std::abs(u - r) > 1e-6) {
                throw RangeError("extended symbol evaluated off-grid on axis " + std::to_string(d + 1));
            }
            auto i = static_cast<long long>(r) % static_cast<long long>(np);
            if (i < 0) {
                i += static_cast<long long>(np);
            }
            index[d] = static_cast<std::size_t>(i);
        }
        return grid.node_of(std::span<const std::size_t>(index.data(), static_cast<std::size_t>(grid.dim())));
    }

    Symbol table_;
    int diff_axis_;
};

Symbol make_extension(const Symbol& table, int diff_axis) {
    if (!table.is_tabulated()) {
        throw UnsupportedOperation("extend_symbol needs a tabulated symbol");
    }
    Extension ext(table, diff_axis);
    if (table.x_independent()) {
        const int n = table.dim();
        return Symbol::multiplier(n, [ext, n](std::span<const double> xi) {
                   const std::array<double, 3> x{};
                   return ext(std::span<const double>(x.data(), static_cast<std::size_t>(n)), xi);
               })
            .with_meta(table.meta());
    }
    return Symbol::closed_form(table.dim(), ext).with_meta(table.meta());
}

} // namespace

Symbol extend_symbol(const Symbol& table) { return make_extension(table, -1); }

Symbol extend_symbol_derivative(const Symbol& table, int axis) {
    if (axis < 0 || axis >= table.dim()) {
        throw RangeError("extend_symbol_derivative: axis out of range");
    }
    return make_extension(table, axis);
}

double restriction_check(const Symbol& table, const Symbol& extension) {
    const auto& box = table.box();
    const int n = table.dim();
    const int r = CardinalKernel::kRadius;
    std::vector<int> lo(static_cast<std::size_t>(n));
    std::vector<int> hi(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        lo[d] = box.lo(d) + r;
        hi[d] = box.hi(d) - r;
        if (lo[d] > hi[d]) {
            return 0.0;
        }
    }
    const FrequencyBox inner(lo, hi);
    std::vector<int> k(static_cast<std::size_t>(n));
    std::vector<double> kd(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    const std::size_t nodes = table.x_independent() ? 1 : table.table_grid().size();
    const auto values = table.table_values();
    double worst = 0.0;
    for (std::size_t node = 0; node < nodes; ++node) {
        if (!table.x_independent()) {
            table.table_grid().node_point(node, x);
        }
        for (std::size_t f = 0; f < inner.size(); ++f) {
            inner.frequency(f, k);
            for (int d = 0; d < n; ++d) {
                kd[d] = k[d];
            }
            const Complex exact = values[node * box.size() + box.flat(k)];
            worst = std::max(worst, std::abs(exact - extension(x, kd)));
        }
    }
    return worst;
}

} // namespace pdolab
