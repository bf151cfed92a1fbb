#include "pdolab/dyadic.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/quantize.hpp"
#include "pdolab/smooth.hpp"
#include "pdolab/symbol.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace pdolab {

double DyadicSystem::bump(double lambda) { return 1.0 - smooth_step(std::abs(lambda) - 1.0); }

double DyadicSystem::band(int l, double lambda) {
    if (l < 0) {
        throw RangeError("band index must be nonnegative");
    }
    if (l == 0) {
        return bump(lambda);
    }
    return bump(std::ldexp(lambda, -l)) - bump(std::ldexp(lambda, -l + 1));
}

double DyadicSystem::partial_sum(int top, double lambda) {
    double s = 0.0;
    for (int l = 0; l <= top; ++l) {
        s += band(l, lambda);
    }
    return s;
}

int DyadicSystem::top_band(const TorusGrid& grid) {
    const double half = static_cast<double>(grid.points_per_axis() / 2);
    const double peak = std::sqrt(1.0 + grid.dim() * half * half);
    int L = 2;
    while (std::ldexp(1.0, L - 1) <= peak) {
        ++L;
    }
    return L;
}

std::vector<double> band_multiplier(int l, const TorusGrid& grid) {
    std::vector<double> m(grid.size());
    std::array<int, TorusGrid::kMaxDim> xi{};
    const auto n = static_cast<std::size_t>(grid.dim());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        grid.frequency(q, std::span<int>(xi.data(), n));
        m[q] = DyadicSystem::band(l, japanese_bracket(std::span<const int>(xi.data(), n)));
    }
    return m;
}

GridFunction band_project(int l, const GridFunction& f) {
    const auto m = band_multiplier(l, f.grid());
    return apply_multiplier(std::vector<Complex>(m.begin(), m.end()), f);
}

std::vector<double> band_sups(const GridFunction& f, int top) {
    const auto& grid = f.grid();
    if (top < 0) {
        top = DyadicSystem::top_band(grid);
    }
    const auto coeffs = forward_fft(f);
    std::vector<double> brackets(grid.size());
    std::array<int, TorusGrid::kMaxDim> xi{};
    const auto n = static_cast<std::size_t>(grid.dim());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        grid.frequency(q, std::span<int>(xi.data(), n));
        brackets[q] = japanese_bracket(std::span<const int>(xi.data(), n));
    }
    std::vector<double> sups(static_cast<std::size_t>(top) + 1, 0.0);
    SpectralCoeffs band(grid);
    for (int l = 0; l <= top; ++l) {
        auto b = band.coeffs();
        bool any = false;
        for (std::size_t q = 0; q < grid.size(); ++q) {
            const double w = DyadicSystem::band(l, brackets[q]);
            b[q] = w * coeffs.coeffs()[q];
            any = any || (w != 0.0 && coeffs.coeffs()[q] != Complex(0.0));
        }
        sups[static_cast<std::size_t>(l)] = any ? sup_norm(inverse_fft(band)) : 0.0;
    }
    return sups;
}

double besov_from_sups(const std::vector<double>& sups, double s) {
    double best = 0.0;
    for (std::size_t l = 0; l < sups.size(); ++l) {
        best = std::max(best, std::pow(2.0, s * static_cast<double>(l)) * sups[l]);
    }
    return best;
}

double besov_norm(const GridFunction& f, double s, int top) { return besov_from_sups(band_sups(f, top), s); }

ShiftPlan ShiftPlan::dyadic(const TorusGrid& grid) {
    ShiftPlan plan;
    const auto n = static_cast<std::size_t>(grid.dim());
    const auto N = static_cast<long long>(grid.points_per_axis());
    for (long long step = N / 2; step >= 1; step /= 2) {
        for (std::size_t d = 0; d < n; ++d) {
            std::vector<long long> h(n, 0);
            h[d] = step;
            plan.shifts.push_back(std::move(h));
        }
        if (n > 1) {
            plan.shifts.emplace_back(n, step);
        }
    }
    return plan;
}

double holder_seminorm(const GridFunction& f, double s, const ShiftPlan& plan) {
    if (!(s > 0.0 && s < 1.0)) {
        throw RangeError("Hoelder exponent must lie in (0, 1)");
    }
    const auto& grid = f.grid();
    const auto n = static_cast<std::size_t>(grid.dim());
    const auto N = static_cast<long long>(grid.points_per_axis());
    std::array<std::size_t, TorusGrid::kMaxDim> idx{};
    std::array<std::size_t, TorusGrid::kMaxDim> moved{};
    double best = 0.0;
    for (const auto& h : plan.shifts) {
        double dist2 = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            long long r = ((h[d] % N) + N) % N;
            r = std::min(r, N - r);
            const double t = static_cast<double>(r) / static_cast<double>(N);
            dist2 += t * t;
        }
        if (dist2 == 0.0) {
            continue;
        }
        const double weight = std::pow(std::sqrt(dist2), -s);
        double worst = 0.0;
        for (std::size_t node = 0; node < grid.size(); ++node) {
            grid.node_index(node, std::span<std::size_t>(idx.data(), n));
            for (std::size_t d = 0; d < n; ++d) {
                moved[d] = static_cast<std::size_t>(((static_cast<long long>(idx[d]) + h[d]) % N + N) % N);
            }
            const auto other = grid.node_of(std::span<const std::size_t>(moved.data(), n));
            worst = std::max(worst, std::abs(f[other] - f[node]));
        }
        best = std::max(best, worst * weight);
    }
    return best;
}

double holder_seminorm(const GridFunction& f, double s) {
    return holder_seminorm(f, s, ShiftPlan::dyadic(f.grid()));
}

double holder_norm(const GridFunction& f, double s) { return holder_seminorm(f, s) + sup_norm(f); }

EquivalenceReport equivalence_report(const std::vector<GridFunction>& family, double s,
                                     const std::vector<std::string>& labels) {
    if (family.empty()) {
        throw InvariantError("equivalence family is empty");
    }
    EquivalenceReport report;
    report.s = s;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const std::string label = i < labels.size() ? labels[i] : "f" + std::to_string(i);
        const auto& f = family[i];
        const double semi = holder_seminorm(f, s);
        if (semi == 0.0) {
            report.excluded.push_back(label);
            continue;
        }
        EquivalenceEntry e;
        e.label = label;
        e.holder = semi + sup_norm(f);
        e.besov = besov_norm(f, s);
        e.ratio = e.holder / e.besov;
        report.entries.push_back(e);
    }
    if (!report.entries.empty()) {
        const auto [lo, hi] = std::minmax_element(report.entries.begin(), report.entries.end(),
                                                  [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
        report.min_ratio = lo->ratio;
        report.max_ratio = hi->ratio;
    }
    return report;
}

} // namespace pdolab
