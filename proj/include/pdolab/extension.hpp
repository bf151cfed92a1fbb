#pragma once

#include "pdolab/symbol.hpp"

#include <vector>

namespace pdolab {

/// Smooth cardinal kernel theta(t) = int chi(w) exp(2 pi i w t) dw where chi
/// is an even C^infinity bump, flat on |w| <= 1/4, vanishing for |w| >= 3/4,
/// with chi(w) + chi(1 - w) = 1 on [0, 1]. Hence theta(0) = 1 and
/// theta(j) = 0 at every other integer.
///
/// theta and theta' are computed once by quadrature on [0, radius] with step
/// 1/128 and evaluated by cubic Hermite interpolation; integer nodes hold the
/// exact values 1 and 0.
class CardinalKernel {
public:
    static constexpr int kRadius = 24;
    static constexpr int kSamplesPerUnit = 128;

    static const CardinalKernel& instance();

    /// Zero for |t| >= radius.
    double value(double t) const;
    double derivative(double t) const;
    int radius() const noexcept { return kRadius; }

    /// The bump chi itself.
    static double bump(double w);

private:
    CardinalKernel();

    std::vector<double> values_;
    std::vector<double> slopes_;
};

/// a'(x, xi) = sum_k theta(xi - k) a(x, k) over the table box, for real xi
/// with lo_d + radius <= xi_d <= hi_d - radius. Agrees with the table at
/// every integer point of that range exactly.
Symbol extend_symbol(const Symbol& table);

/// d a'/d xi_axis of the extension, same domain.
Symbol extend_symbol_derivative(const Symbol& table, int axis);

/// max |a(x,k) - a'(x,k)| over every grid node and every lattice point in the
/// extension's domain.
double restriction_check(const Symbol& table, const Symbol& extension);

} // namespace pdolab
