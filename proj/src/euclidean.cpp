#include "pdolab/euclidean.hpp"

#include "pdolab/errors.hpp"
#include "pdolab/parallel.hpp"
#include "pdolab/quantize.hpp"

#include <array>
#include <cmath>
#include <string>

namespace pdolab {

EuclideanBox::EuclideanBox(int dim, double width, std::size_t points) : width_(width), grid_(dim, points) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InvariantError("box width must be positive and finite");
    }
}

EuclideanBox EuclideanBox::balanced(int dim, std::size_t points) {
    return EuclideanBox(dim, std::sqrt(static_cast<double>(points)), points);
}

double EuclideanBox::wrap(double t) const {
    double u = std::fmod(t + 0.5 * width_, width_);
    if (u < 0.0) {
        u += width_;
    }
    return u - 0.5 * width_;
}

void EuclideanBox::node_point(std::size_t node, std::span<double> x) const {
    std::array<std::size_t, TorusGrid::kMaxDim> idx{};
    grid_.node_index(node, std::span<std::size_t>(idx.data(), static_cast<std::size_t>(dim())));
    for (int d = 0; d < dim(); ++d) {
        x[static_cast<std::size_t>(d)] = point(idx[d]);
    }
}

std::vector<Complex> sample_box(const EuclideanBox& box, const PointFunction& f) {
    std::vector<Complex> out(box.size());
    std::vector<double> x(static_cast<std::size_t>(box.dim()));
    for (std::size_t node = 0; node < box.size(); ++node) {
        box.node_point(node, x);
        out[node] = f(x);
    }
    return out;
}

double boundary_ratio(const EuclideanBox& box, std::span<const Complex> f) {
    const auto n = static_cast<std::size_t>(box.dim());
    const std::size_t last = box.points_per_axis() - 1;
    std::array<std::size_t, TorusGrid::kMaxDim> idx{};
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t node = 0; node < box.size(); ++node) {
        const double v = std::abs(f[node]);
        peak = std::max(peak, v);
        box.torus().node_index(node, std::span<std::size_t>(idx.data(), n));
        for (std::size_t d = 0; d < n; ++d) {
            if (idx[d] == 0 || idx[d] == last) {
                edge = std::max(edge, v);
                break;
            }
        }
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::vector<Complex> DenseMatrix::apply(std::span<const Complex> v) const {
    if (v.size() != cols) {
        throw GridMismatch("matrix-vector size mismatch");
    }
    std::vector<Complex> out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            s += data[i * cols + j] * v[j];
        }
        out[i] = s;
    }
    return out;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) {
        throw GridMismatch("matrix product size mismatch");
    }
    DenseMatrix c(a.rows, b.cols);
    parallel_for(a.rows, [&](std::size_t i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    });
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw GridMismatch("matrix difference size mismatch");
    }
    DenseMatrix c(a.rows, a.cols);
    for (std::size_t i = 0; i < c.data.size(); ++i) {
        c.data[i] = a.data[i] - b.data[i];
    }
    return c;
}

namespace {

void check_box_input(const Symbol& a, const EuclideanBox& box, std::span<const Complex> f) {
    if (a.dim() != box.dim()) {
        throw GridMismatch("symbol and box dimensions differ");
    }
    if (f.size() != box.size()) {
        throw GridMismatch("input has " + std::to_string(f.size()) + " samples, box has " + std::to_string(box.size()));
    }
}

EuclideanResult guarded(const EuclideanBox& box, std::span<const Complex> f, std::vector<Complex> values) {
    EuclideanResult r;
    r.values = std::move(values);
    r.boundary_ratio = boundary_ratio(box, f);
    r.truncation_warning = r.boundary_ratio > kBoundaryMassThreshold;
    return r;
}

// Kernel sum K(j, m) = M^{-n} sum_k e^{2 pi i <j - m, k>/M} a(point(j, m), xi_k)
// where point() picks the evaluation point of the quantization.
template <class Point>
DenseMatrix kernel_matrix(const Symbol& a, const EuclideanBox& box, Point point) {
    const auto n = static_cast<std::size_t>(box.dim());
    const std::size_t P = box.size();
    const std::size_t M = box.points_per_axis();
    const auto& grid = box.torus();
    std::vector<Complex> twiddle(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(M);
        twiddle[k] = {std::cos(t), std::sin(t)};
    }
    std::vector<int> freqs(P * n);
    std::vector<double> xis(P * n);
    for (std::size_t q = 0; q < P; ++q) {
        grid.frequency(q, std::span<int>(freqs.data() + q * n, n));
        for (std::size_t d = 0; d < n; ++d) {
            xis[q * n + d] = box.frequency(freqs[q * n + d]);
        }
    }
    const double norm = 1.0 / static_cast<double>(P);
    const auto mask = static_cast<long long>(M - 1);
    DenseMatrix K(P, P);
    parallel_for(P, [&](std::size_t j) {
        std::array<std::size_t, TorusGrid::kMaxDim> jj{};
        std::array<std::size_t, TorusGrid::kMaxDim> mm{};
        std::array<double, TorusGrid::kMaxDim> x{};
        grid.node_index(j, std::span<std::size_t>(jj.data(), n));
        for (std::size_t m = 0; m < P; ++m) {
            grid.node_index(m, std::span<std::size_t>(mm.data(), n));
            point(jj, mm, x);
            Complex s = 0.0;
            for (std::size_t q = 0; q < P; ++q) {
                long long phase = 0;
                for (std::size_t d = 0; d < n; ++d) {
                    phase += (static_cast<long long>(jj[d]) - static_cast<long long>(mm[d])) * freqs[q * n + d];
                }
                s += twiddle[static_cast<std::size_t>(phase & mask)] *
                     a(std::span<const double>(x.data(), n), std::span<const double>(xis.data() + q * n, n));
            }
            K(j, m) = s * norm;
        }
    });
    return K;
}

using Index = std::array<std::size_t, TorusGrid::kMaxDim>;
using Point = std::array<double, TorusGrid::kMaxDim>;

} // namespace

EuclideanResult kn_apply_euclidean(const Symbol& a, const EuclideanBox& box, std::span<const Complex> f) {
    check_box_input(a, box, f);
    const int n = box.dim();
    const double T = box.width();
    // Same sum as the toroidal quantization of a(-T/2 + T x', k / T).
    Symbol scaled = a.x_independent()
                        ? Symbol::multiplier(n,
                                             [a, T, n](std::span<const double> k) {
                                                 std::array<double, TorusGrid::kMaxDim> x{};
                                                 std::array<double, TorusGrid::kMaxDim> xi{};
                                                 for (int d = 0; d < n; ++d) {
                                                     xi[d] = k[d] / T;
                                                 }
                                                 const auto sz = static_cast<std::size_t>(n);
                                                 return a(std::span<const double>(x.data(), sz),
                                                          std::span<const double>(xi.data(), sz));
                                             })
                        : Symbol::closed_form(n, [a, T, n](std::span<const double> xp, std::span<const double> k) {
                              std::array<double, TorusGrid::kMaxDim> x{};
                              std::array<double, TorusGrid::kMaxDim> xi{};
                              for (int d = 0; d < n; ++d) {
                                  x[d] = -0.5 * T + T * xp[d];
                                  xi[d] = k[d] / T;
                              }
                              const auto sz = static_cast<std::size_t>(n);
                              return a(std::span<const double>(x.data(), sz), std::span<const double>(xi.data(), sz));
                          });
    const GridFunction input(box.torus(), std::vector<Complex>(f.begin(), f.end()));
    const auto out = apply_toroidal(scaled, input);
    return guarded(box, f, std::vector<Complex>(out.values().begin(), out.values().end()));
}

DenseMatrix kn_matrix(const Symbol& a, const EuclideanBox& box) {
    if (a.dim() != box.dim()) {
        throw GridMismatch("symbol and box dimensions differ");
    }
    const auto n = static_cast<std::size_t>(box.dim());
    return kernel_matrix(a, box, [&](const Index& j, const Index&, Point& x) {
        for (std::size_t d = 0; d < n; ++d) {
            x[d] = box.point(j[d]);
        }
    });
}

DenseMatrix weyl_matrix(const Symbol& a, const EuclideanBox& box) {
    if (a.dim() != box.dim()) {
        throw GridMismatch("symbol and box dimensions differ");
    }
    const auto n = static_cast<std::size_t>(box.dim());
    return kernel_matrix(a, box, [&](const Index& j, const Index& m, Point& x) {
        for (std::size_t d = 0; d < n; ++d) {
            const double y = box.point(m[d]);
            const double diff = box.wrap(box.point(j[d]) - y);
            x[d] = box.wrap(y + 0.5 * diff);
        }
    });
}

EuclideanResult weyl_apply(const Symbol& a, const EuclideanBox& box, std::span<const Complex> f) {
    check_box_input(a, box, f);
    return guarded(box, f, weyl_matrix(a, box).apply(f));
}

PhaseTable::PhaseTable(std::vector<double> x, std::vector<double> xi, std::vector<Complex> values)
    : x_(std::move(x)), xi_(std::move(xi)), values_(std::move(values)) {
    if (x_.size() < 2 || xi_.size() < 2 || values_.size() != x_.size() * xi_.size()) {
        throw InvariantError("phase table dimensions are inconsistent");
    }
}

std::size_t PhaseTable::locate(const std::vector<double>& nodes, double v, const char* axis, bool periodic) const {
    const double step = nodes[1] - nodes[0];
    const double u = (v - nodes[0]) / step;
    double r = std::round(u);
    const auto size = static_cast<double>(nodes.size());
    if (periodic && r == size) {
        r = 0.0;
    }
    if (std::abs(u - std::round(u)) > 1e-9 || r < 0 || r >= size) {
        throw RangeError(std::string("phase table has no node at ") + axis + " = " + std::to_string(v));
    }
    return static_cast<std::size_t>(r);
}

Complex PhaseTable::operator()(double x, double xi) const { return at(locate(x_, x, "x", true), locate(xi_, xi, "xi", false)); }

Symbol PhaseTable::to_symbol() const {
    auto self = std::make_shared<PhaseTable>(*this);
    return Symbol::closed_form(1, [self](std::span<const double> x, std::span<const double> xi) {
        return (*self)(x[0], xi[0]);
    });
}

PhaseTable moyal_product(const Symbol& a, const Symbol& b, const EuclideanBox& box, const MoyalOptions& options) {
    if (a.dim() != 1 || b.dim() != 1 || box.dim() != 1) {
        throw UnsupportedOperation("moyal_product supports n = 1 only");
    }
    const std::size_t Q = 2 * box.points_per_axis();
    const double terms = std::pow(static_cast<double>(Q), 4.0);
    if (terms > options.max_terms) {
        throw CostGuardError("moyal quadrature needs " + std::to_string(terms) + " terms, budget is " +
                             std::to_string(options.max_terms));
    }
    const double T = box.width();
    const double dx = T / static_cast<double>(Q);
    const double dxi = 0.5 / T;
    std::vector<double> xs(Q);
    std::vector<double> xis(Q);
    for (std::size_t i = 0; i < Q; ++i) {
        xs[i] = -0.5 * T + dx * static_cast<double>(i);
        xis[i] = dxi * (static_cast<double>(i) - 0.5 * static_cast<double>(Q));
    }
    const double w = 2.0 / options.hbar;
    std::vector<Complex> A(Q * Q);
    std::vector<Complex> B(Q * Q);
    std::vector<Complex> E(Q * Q); // exp(i w x_i xi_l)
    for (std::size_t i = 0; i < Q; ++i) {
        for (std::size_t l = 0; l < Q; ++l) {
            A[i * Q + l] = a({xs[i]}, {xis[l]});
            B[i * Q + l] = b({xs[i]}, {xis[l]});
            E[i * Q + l] = std::polar(1.0, w * xs[i] * xis[l]);
        }
    }
    // G(p, q) = sum over l - j = p, i - k = q of
    //   a(y_i, eta_j) e^{i w y_i zeta_l} b(z_k, zeta_l) e^{-i w z_k eta_j}.
    const std::size_t span = 2 * Q - 1;
    std::vector<Complex> G(span * span); // row p + Q - 1, column q + Q - 1
    parallel_for(span, [&](std::size_t qc) {
        const long long q = static_cast<long long>(qc) - static_cast<long long>(Q - 1);
        std::vector<Complex> u(Q);
        std::vector<Complex> v(Q);
        for (std::size_t i = 0; i < Q; ++i) {
            const long long k = static_cast<long long>(i) - q;
            if (k < 0 || k >= static_cast<long long>(Q)) {
                continue;
            }
            const auto ku = static_cast<std::size_t>(k);
            for (std::size_t j = 0; j < Q; ++j) {
                u[j] = A[i * Q + j] * std::conj(E[ku * Q + j]);
                v[j] = E[i * Q + j] * B[ku * Q + j];
            }
            for (std::size_t j = 0; j < Q; ++j) {
                Complex* row = &G[(Q - 1 - j) * span + qc];
                for (std::size_t l = 0; l < Q; ++l) {
                    row[l * span] += u[j] * v[l];
                }
            }
        }
    });
    const double c = std::pow(kPi * options.hbar, -2.0) * std::pow(dx * dxi, 2.0);
    // a#b(x, xi) = c sum_p e^{-i w x p dxi} sum_q G(p, q) e^{-i w xi q dx}.
    std::vector<Complex> H(span * Q); // H[p][b] = sum_q G(p,q) e^{-i w xi_b q dx}
    parallel_for(span, [&](std::size_t pc) {
        for (std::size_t bq = 0; bq < Q; ++bq) {
            Complex s = 0.0;
            for (std::size_t qc = 0; qc < span; ++qc) {
                const double q = static_cast<double>(qc) - static_cast<double>(Q - 1);
                s += G[pc * span + qc] * std::polar(1.0, -w * xis[bq] * q * dx);
            }
            H[pc * Q + bq] = s;
        }
    });
    std::vector<Complex> out(Q * Q);
    parallel_for(Q, [&](std::size_t ai) {
        for (std::size_t pc = 0; pc < span; ++pc) {
            const double p = static_cast<double>(pc) - static_cast<double>(Q - 1);
            const Complex e = c * std::polar(1.0, -w * xs[ai] * p * dxi);
            for (std::size_t bq = 0; bq < Q; ++bq) {
                out[ai * Q + bq] += e * H[pc * Q + bq];
            }
        }
    });
    return PhaseTable(std::move(xs), std::move(xis), std::move(out));
}

double composition_identity_residual(const Symbol& a, const Symbol& b, const EuclideanBox& box,
                                     const MoyalOptions& options) {
    const auto ab = moyal_product(a, b, box, options).to_symbol();
    const auto Ma = weyl_matrix(a, box);
    const auto Mb = weyl_matrix(b, box);
    const auto Mab = weyl_matrix(ab, box);
    const double scale = Ma.max_abs() * Mb.max_abs();
    if (scale == 0.0) {
        return Mab.max_abs();
    }
    return (Mab - Ma * Mb).max_abs() / scale;
}

} // namespace pdolab
