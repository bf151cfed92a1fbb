#pragma once

#include "pdolab/torus.hpp"

#include <string>
#include <vector>

namespace pdolab {

/// psi_0(lambda) = 1 - r(|lambda| - 1) with the C^infinity step r, and
/// psi_l(lambda) = psi_0(2^{-l} lambda) - psi_0(2^{-l+1} lambda) for l >= 1.
class DyadicSystem {
public:
    static double bump(double lambda);
    static double band(int l, double lambda);
    /// sum_{l=0..L} psi_l(lambda), evaluated term by term.
    static double partial_sum(int top, double lambda);
    /// Smallest L with 2^{L-1} > max <xi> over the stored frequencies of `grid`.
    static int top_band(const TorusGrid& grid);
};

/// psi_l(<xi>) sampled at the stored frequencies of `grid` (FFT order).
std::vector<double> band_multiplier(int l, const TorusGrid& grid);

/// psi_l(R) f = inverse_fft(psi_l(<xi>) f^).
GridFunction band_project(int l, const GridFunction& f);

/// sup_norm(psi_l(R) f) for l = 0..top (top < 0 selects DyadicSystem::top_band).
std::vector<double> band_sups(const GridFunction& f, int top = -1);

/// sup_l 2^{l s} ||psi_l(R) f||_inf over l = 0..top.
double besov_norm(const GridFunction& f, double s, int top = -1);
/// The same functional from precomputed band sups.
double besov_from_sups(const std::vector<double>& sups, double s);

/// Displacements of the dyadic-shift plan: h = 2^{-j} along each axis and
/// along the diagonal, j = 1..log2 N, in grid steps.
struct ShiftPlan {
    std::vector<std::vector<long long>> shifts;
    static ShiftPlan dyadic(const TorusGrid& grid);
};

/// max over nodes x and plan shifts h of |f(x+h) - f(x)| |h|_T^{-s}.
double holder_seminorm(const GridFunction& f, double s, const ShiftPlan& plan);
double holder_seminorm(const GridFunction& f, double s);
/// Seminorm plus sup norm.
double holder_norm(const GridFunction& f, double s);

struct EquivalenceEntry {
    std::string label;
    double holder = 0.0;
    double besov = 0.0;
    double ratio = 0.0;
};

struct EquivalenceReport {
    double s = 0.0;
    std::vector<EquivalenceEntry> entries;
    std::vector<std::string> excluded; ///< labels of constant functions skipped
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double spread() const { return min_ratio > 0.0 ? max_ratio / min_ratio : 0.0; }
    bool pass(double limit = 50.0) const { return !entries.empty() && spread() <= limit; }
};

/// holder_norm / besov_norm for each function; requires 0 < s < 1.
EquivalenceReport equivalence_report(const std::vector<GridFunction>& family, double s,
                                     const std::vector<std::string>& labels = {});

} // namespace pdolab
