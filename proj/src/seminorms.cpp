#include "pdolab/seminorms.hpp"

#include "pdolab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pdolab {

void ClassSpec::validate() const {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw InvariantError("ClassSpec: rho must lie in (0, 1]");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw InvariantError("ClassSpec: delta must lie in [0, 1]");
    }
    if (max_derivative < 0) {
        throw InvariantError("ClassSpec: derivative order must be >= 0");
    }
}

ScanPlan ScanPlan::for_table(const Symbol& a) {
    if (!a.is_tabulated() || a.x_independent()) {
        throw UnsupportedOperation("ScanPlan::for_table needs an x-dependent table");
    }
    const auto& box = a.box();
    int half = std::numeric_limits<int>::max();
    for (int d = 0; d < box.dim(); ++d) {
        half = std::min({half, -box.lo(d), box.hi(d)});
    }
    return {a.table_grid(), std::max(0, half / 2)};
}

const SeminormEntry& SeminormReport::at(const MultiIndex& alpha, const MultiIndex& beta) const {
    for (const auto& e : entries) {
        if (e.alpha == alpha && e.beta == beta) {
            return e;
        }
    }
    throw RangeError("seminorm report has no entry for alpha=" + alpha.to_string() + " beta=" + beta.to_string());
}

namespace {

// Max of |s(x, xi)| * <xi>^{power}; strict comparison keeps the first
// maximizer in (node, xi) lexicographic order.
SeminormEntry scan_max(const Symbol& s, double power, const ScanPlan& plan) {
    const int dim = s.dim();
    const int side = 2 * plan.xi_radius + 1;
    std::size_t count = 1;
    for (int d = 0; d < dim; ++d) {
        count *= static_cast<std::size_t>(side);
    }
    std::vector<int> xi(static_cast<std::size_t>(dim));
    std::vector<double> weights(count);
    std::vector<std::vector<int>> lattice(count);
    for (std::size_t f = 0; f < count; ++f) {
        std::size_t rem = f;
        for (int d = dim - 1; d >= 0; --d) {
            xi[static_cast<std::size_t>(d)] = static_cast<int>(rem % static_cast<std::size_t>(side)) - plan.xi_radius;
            rem /= static_cast<std::size_t>(side);
        }
        lattice[f] = xi;
        weights[f] = std::pow(japanese_bracket(std::span<const int>(xi)), power);
    }
    const std::size_t nodes = s.x_independent() ? 1 : plan.x_grid.size();
    SeminormEntry best;
    best.argmax_xi = lattice.front();
    for (std::size_t node = 0; node < nodes; ++node) {
        for (std::size_t f = 0; f < count; ++f) {
            const double v = std::abs(s.on_grid(plan.x_grid, node, lattice[f])) * weights[f];
            if (!std::isfinite(v)) {
                throw InvariantError("seminorm scan hit a non-finite symbol value");
            }
            if (v > best.constant) {
                best.constant = v;
                best.argmax_node = node;
                best.argmax_xi = lattice[f];
            }
        }
    }
    return best;
}

} // namespace

SeminormReport toroidal_seminorm(const Symbol& a, const ClassSpec& spec, const ScanPlan& plan, double threshold) {
    spec.validate();
    if (plan.x_grid.dim() != a.dim()) {
        throw InvariantError("toroidal_seminorm: scan plan dimension differs from symbol dimension");
    }
    SeminormReport report;
    const auto alphas = multi_indices_up_to(a.dim(), spec.difference_order(a.dim()));
    const auto betas = multi_indices_up_to(a.dim(), spec.max_derivative);
    for (const auto& beta : betas) {
        const Symbol derived = x_derivative(a, beta);
        for (const auto& alpha : alphas) {
            const double exponent = spec.order - spec.rho * alpha.order() + spec.delta * beta.order();
            auto entry = scan_max(difference(derived, alpha), -exponent, plan);
            entry.alpha = alpha;
            entry.beta = beta;
            entry.flagged = entry.constant > threshold;
            report.overall_max = std::max(report.overall_max, entry.constant);
            report.any_flagged = report.any_flagged || entry.flagged;
            report.entries.push_back(std::move(entry));
        }
    }
    std::stable_sort(report.entries.begin(), report.entries.end(), [](const auto& l, const auto& r) {
        return l.alpha.order() + l.beta.order() < r.alpha.order() + r.beta.order();
    });
    return report;
}

FeffermanReport fefferman_seminorm(const Symbol& a, double epsilon, int k, const ScanPlan& plan) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw InvariantError("fefferman_seminorm: epsilon must lie in [0, 1)");
    }
    if (k < 0) {
        throw InvariantError("fefferman_seminorm: k must be >= 0");
    }
    FeffermanReport report;
    report.epsilon = epsilon;
    report.k = k;
    const double n = a.dim();
    for (const auto& alpha : multi_indices_up_to(a.dim(), k)) {
        const double power = n * epsilon / 2.0 + (1.0 - epsilon) * alpha.order();
        auto entry = scan_max(difference(a, alpha), power, plan);
        entry.alpha = alpha;
        entry.beta = MultiIndex(a.dim());
        report.sup_constant = std::max(report.sup_constant, entry.constant);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace pdolab
