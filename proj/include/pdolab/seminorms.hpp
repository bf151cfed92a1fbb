#pragma once

#include "pdolab/multi_index.hpp"
#include "pdolab/symbol.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace pdolab {

/// (m, rho, delta, k, l) of the toroidal class S^m_{rho,delta}(T^n x Z^n).
struct ClassSpec {
    double order = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    int max_difference = -1; ///< k; negative selects [n/2] + 1
    int max_derivative = 0;  ///< l

    int difference_order(int dim) const { return max_difference >= 0 ? max_difference : dim / 2 + 1; }
    void validate() const;
};

/// Finite (x, xi) sample set: every node of `x_grid` times the lattice cube
/// |xi|_inf <= xi_radius.
struct ScanPlan {
    TorusGrid x_grid;
    int xi_radius;

    /// All table nodes and |xi|_inf <= Xi_max / 2 where Xi_max is the
    /// smallest half-width of the table box.
    static ScanPlan for_table(const Symbol& a);
    ScanPlan doubled() const { return {x_grid, 2 * xi_radius}; }
};

struct SeminormEntry {
    MultiIndex alpha;
    MultiIndex beta;
    double constant = 0.0;
    std::size_t argmax_node = 0;
    std::vector<int> argmax_xi;
    bool flagged = false;
};

struct SeminormReport {
    std::vector<SeminormEntry> entries;
    double overall_max = 0.0;
    bool any_flagged = false;

    const SeminormEntry& at(const MultiIndex& alpha, const MultiIndex& beta) const;
};

/// C_{alpha,beta} = max over the plan of
/// |Delta^alpha d_x^beta a| <xi>^{-(m - rho|alpha| + delta|beta|)}
/// for |alpha| <= k, |beta| <= l. Entries above `threshold` are flagged.
SeminormReport toroidal_seminorm(const Symbol& a, const ClassSpec& spec, const ScanPlan& plan,
                                 double threshold = std::numeric_limits<double>::infinity());

struct FeffermanReport {
    double epsilon = 0.0;
    int k = 0;
    std::vector<SeminormEntry> entries; ///< beta is always zero
    double sup_constant = 0.0;          ///< sup{C_alpha : |alpha| <= k}
};

/// C_alpha = max over the plan of |Delta^alpha a| <xi>^{n eps/2 + (1-eps)|alpha|}.
FeffermanReport fefferman_seminorm(const Symbol& a, double epsilon, int k, const ScanPlan& plan);

} // namespace pdolab
