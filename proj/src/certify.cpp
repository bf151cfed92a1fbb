#include "pdolab/certify.hpp"

#include "pdolab/dyadic.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/parallel.hpp"
#include "pdolab/probes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace pdolab {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::bounded:
        return "BOUNDED";
    case Verdict::suspect_growth:
        return "SUSPECT-GROWTH";
    case Verdict::info:
        return "INFO";
    }
    return "UNKNOWN";
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double fit_slope(const std::vector<BandSummary>& bands) {
    const auto n = static_cast<double>(bands.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& b : bands) {
        sx += b.l;
        sy += std::log2(b.ratio);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& b : bands) {
        sxx += (b.l - mx) * (b.l - mx);
        sxy += (b.l - mx) * (std::log2(b.ratio) - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

using Clock = std::chrono::steady_clock;

void run_bands(const Symbol& sigma, const TorusGrid& grid, const CertifyOptions& opt, CertificationReport& report) {
    if (opt.l_max - opt.l_min + 1 < 5) {
        throw RangeError("certification needs at least five bands, got " + std::to_string(opt.l_max - opt.l_min + 1));
    }
    if (opt.l_min < 1 || opt.probes < 1) {
        throw RangeError("certification needs l_min >= 1 and at least one probe per band");
    }
    if (std::ldexp(1.0, opt.l_max + 1) > static_cast<double>(grid.points_per_axis() / 2)) {
        throw RangeError("grid Nyquist " + std::to_string(grid.points_per_axis() / 2) + " is below 2^(l_max+1) = " +
                         std::to_string(1LL << (opt.l_max + 1)));
    }
    report.s = opt.s;
    report.s_out = opt.s - opt.target_shift;
    const int band_count = opt.l_max - opt.l_min + 1;
    const auto total = static_cast<std::size_t>(band_count * opt.probes);
    report.probes.assign(total, {});
    parallel_for(total, [&](std::size_t idx) {
        const int l = opt.l_min + static_cast<int>(idx) / opt.probes;
        const int p = static_cast<int>(idx) % opt.probes;
        ProbeRecord rec;
        rec.l = l;
        rec.probe_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(p));
        const auto f = band_probe(l, grid, rec.probe_seed, opt.probe_modes);
        const auto g = apply_toroidal(sigma, f, opt.path);
        rec.besov_in = besov_norm(f, report.s);
        rec.besov_out = besov_norm(g, report.s_out);
        rec.ratio = rec.besov_out / rec.besov_in;
        report.probes[idx] = rec;
    });
    report.bands.clear();
    std::vector<double> ratios;
    for (int b = 0; b < band_count; ++b) {
        BandSummary s{opt.l_min + b, 0.0};
        for (int p = 0; p < opt.probes; ++p) {
            s.ratio = std::max(s.ratio, report.probes[static_cast<std::size_t>(b * opt.probes + p)].ratio);
        }
        if (!(s.ratio > 0.0) || !std::isfinite(s.ratio)) {
            throw InvariantError("band " + std::to_string(s.l) + " produced a non-positive ratio");
        }
        report.bands.push_back(s);
        ratios.push_back(s.ratio);
    }
    report.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    report.median_ratio = median(ratios);
    report.slope = fit_slope(report.bands);
    const bool flat = report.slope <= opt.slope_limit;
    const bool no_outlier = report.max_ratio <= opt.outlier_factor * report.median_ratio;
    report.verdict = flat && no_outlier ? Verdict::bounded : Verdict::suspect_growth;
}

// Seminorm constants attached to reports: Fefferman constants on a lattice
// cube and toroidal constants of a coarse tabulation with spectral
// x-derivatives (l = 2).
constexpr int kFeffermanRadius = 256;
constexpr std::size_t kTabulationNodes = 16;

int scan_radius(int dim) { return dim == 1 ? 128 : (dim == 2 ? 16 : 6); }

void attach_seminorms(const Symbol& sigma, double epsilon, const ClassSpec& spec, CertificationReport& report) {
    const int n = sigma.dim();
    const int k = n / 2 + 1;
    try {
        const ScanPlan plan{TorusGrid(n, 8), n == 1 ? kFeffermanRadius : scan_radius(n)};
        report.fefferman = fefferman_seminorm(sigma, epsilon, k, plan);
    } catch (const Error& e) {
        report.notes.push_back(std::string("fefferman constants unavailable: ") + e.what());
    }
    try {
        const int r = scan_radius(n);
        const TorusGrid coarse(n, kTabulationNodes);
        const auto table = sigma.is_tabulated() ? sigma : tabulate(sigma, coarse, FrequencyBox::centered(n, r + k));
        const ScanPlan plan{table.x_independent() ? coarse : table.table_grid(), r};
        report.toroidal = toroidal_seminorm(table, spec, plan);
    } catch (const Error& e) {
        report.notes.push_back(std::string("toroidal constants unavailable: ") + e.what());
    }
}

ClassSpec declared_spec(const Symbol& sigma) {
    ClassSpec spec;
    spec.order = sigma.meta().order.value_or(0.0);
    spec.rho = sigma.meta().rho.value_or(1.0);
    spec.delta = sigma.meta().delta.value_or(0.0);
    spec.max_derivative = 2;
    return spec;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

CertificationReport certify_holder(const Symbol& sigma, const TorusGrid& grid, const CertifyOptions& options,
                                   const std::string& label, double fefferman_epsilon) {
    const auto start = Clock::now();
    CertificationReport report;
    report.symbol = label;
    run_bands(sigma, grid, options, report);
    if (options.attach_seminorms) {
        attach_seminorms(sigma, fefferman_epsilon, declared_spec(sigma), report);
    }
    report.runtime_seconds = seconds_since(start);
    return report;
}

Symbol graded_surrogate(int dim, double gamma) {
    ClassMeta meta;
    meta.order = gamma;
    meta.rho = 1.0;
    meta.delta = 0.0;
    return Symbol::multiplier(dim, [gamma](std::span<const double> xi) { return Complex(std::pow(japanese_bracket(xi), gamma)); })
        .with_meta(meta);
}

CertificationReport certify_graded(double beta, const GradingExponent& model, const TorusGrid& grid,
                                   const CertifyOptions& options, bool wrong_target) {
    const auto start = Clock::now();
    constexpr double tol = 1e-12;
    const double top = model.n * model.eps0;
    if (beta < -tol || beta > top + tol) {
        throw RangeError("beta = " + std::to_string(beta) + " must lie in [0, n eps_0] = [0, " + std::to_string(top) + "]");
    }
    const double gamma = std::max(0.0, model.gap(beta));
    if (!(options.s - gamma > 0.0 && options.s - gamma < 1.0)) {
        throw RangeError("s - gamma = " + std::to_string(options.s - gamma) + " must lie in (0, 1)");
    }
    CertifyOptions opt = options;
    opt.target_shift = wrong_target ? 0.0 : gamma;
    CertificationReport report;
    report.kind = wrong_target ? "graded-wrong-target" : "graded";
    report.symbol = "<xi>^" + std::to_string(gamma);
    const auto sigma = graded_surrogate(grid.dim(), gamma);
    run_bands(sigma, grid, opt, report);
    report.notes.push_back("gamma = n eps_0 - beta = " + std::to_string(gamma));
    if (options.attach_seminorms) {
        attach_seminorms(sigma, 0.0, declared_spec(sigma), report);
    }
    report.runtime_seconds = seconds_since(start);
    return report;
}

bool corollary_hypothesis(double m, double rho, double delta, int ell, int n) {
    return m >= delta * ell + 0.5 * n * (1.0 - rho) - 1e-12;
}

CertificationReport certify_corollary_m(const Symbol& sigma, double m, double rho, double delta, int ell,
                                        const TorusGrid& grid, const CertifyOptions& options,
                                        const std::string& label) {
    const auto start = Clock::now();
    CertificationReport report;
    report.kind = "corollary";
    report.symbol = label;
    run_bands(sigma, grid, options, report);
    const int n = grid.dim();
    const double rhs = delta * ell + 0.5 * n * (1.0 - rho);
    const bool holds = corollary_hypothesis(m, rho, delta, ell, n);
    report.notes.push_back("hypothesis m >= delta*l + (n/2)(1-rho): " + std::to_string(m) + " >= " +
                           std::to_string(rhs) + (holds ? " holds" : " fails"));
    if (!holds && report.verdict == Verdict::bounded) {
        report.verdict = Verdict::info;
        report.notes.push_back("verdict downgraded to INFO: hypothesis not met");
    }
    if (options.attach_seminorms) {
        ClassSpec spec;
        spec.order = -m;
        spec.rho = rho;
        spec.delta = delta;
        spec.max_derivative = ell;
        attach_seminorms(sigma, 0.0, spec, report);
    }
    report.runtime_seconds = seconds_since(start);
    return report;
}

namespace {

Complex bracket_power(std::span<const double> xi, double p) { return std::pow(japanese_bracket(xi), p); }

Complex wave(std::span<const double> xi, double eps) {
    const double b = japanese_bracket(xi);
    return std::pow(b, -eps / 2.0) * std::polar(1.0, std::pow(b, eps));
}

// c(x) = 1 + amp cos(2 pi freq x + phase) with its analytic x-derivatives.
SeparableTerm modulated(double amp, int freq, double phase, std::function<Complex(std::span<const double>)> m) {
    SeparableTerm t;
    const double w = kTwoPi * freq;
    t.x_factor = [=](std::span<const double> x) { return Complex(1.0 + amp * std::cos(w * x[0] + phase)); };
    t.xi_factor = std::move(m);
    t.x_derivative = [=](std::span<const double> x, const MultiIndex& beta) {
        const int k = beta[0];
        if (k == 0) {
            return Complex(1.0 + amp * std::cos(w * x[0] + phase));
        }
        return Complex(amp * std::pow(w, k) * std::cos(w * x[0] + phase + k * kPi / 2.0));
    };
    return t;
}

ClassMeta meta_for(double eps) {
    ClassMeta m;
    m.order = -eps / 2.0;
    m.rho = 1.0 - eps;
    m.delta = 0.0;
    return m;
}

} // namespace

std::vector<GallerySymbol> fefferman_gallery() {
    std::vector<GallerySymbol> out;
    auto riesz = [](std::span<const double> xi) { return Complex(xi[0] / japanese_bracket(xi)); };
    out.push_back({"riesz", 0.0, Symbol::multiplier(1, riesz).with_meta(meta_for(0.0)), "xi/<xi>"});
    out.push_back({"riesz_modulated", 0.0,
                   Symbol::separable(1, {modulated(0.5, 1, 0.0, riesz)}).with_meta(meta_for(0.0)),
                   "(1 + cos(2 pi x)/2) xi/<xi>"});
    for (double eps : {0.5, 0.75}) {
        auto m = [eps](std::span<const double> xi) { return wave(xi, eps); };
        const std::string tag = eps == 0.5 ? "half" : "three_quarter";
        const std::string formula = eps == 0.5 ? "<xi>^(-1/4) exp(i <xi>^(1/2))" : "<xi>^(-3/8) exp(i <xi>^(3/4))";
        out.push_back({"wave_" + tag, eps, Symbol::multiplier(1, m).with_meta(meta_for(eps)), formula});
        const double phase = eps == 0.5 ? -kPi / 2.0 : 0.0;
        const int freq = eps == 0.5 ? 1 : 2;
        const std::string mod = eps == 0.5 ? "(1 + sin(2 pi x)/2) " : "(1 + cos(4 pi x)/4) ";
        out.push_back({"wave_" + tag + "_modulated", eps,
                       Symbol::separable(1, {modulated(eps == 0.5 ? 0.5 : 0.25, freq, phase, m)}).with_meta(meta_for(eps)),
                       mod + formula});
    }
    return out;
}

GallerySymbol negative_control() {
    ClassMeta meta;
    meta.order = 0.5;
    return {"growth_control", 0.0,
            Symbol::multiplier(1, [](std::span<const double> xi) { return bracket_power(xi, 0.5); }).with_meta(meta),
            "<xi>^(1/2)"};
}

GallerySymbol gallery_symbol(const std::string& name) {
    for (auto& g : fefferman_gallery()) {
        if (g.name == name) {
            return g;
        }
    }
    if (name == negative_control().name) {
        return negative_control();
    }
    std::string known;
    for (const auto& g : fefferman_gallery()) {
        known += g.name + ", ";
    }
    throw RangeError("unknown gallery symbol '" + name + "'; available: " + known + negative_control().name);
}

EnvelopeReport frozen_envelope(const Symbol& sigma, const GridFunction& f, int l_max, double tolerance) {
    const auto& grid = f.grid();
    EnvelopeReport report;
    report.tolerance = tolerance;
    const auto out = apply_toroidal(sigma, f);
    const auto fhat = forward_fft(f);
    const std::size_t nodes = grid.size();
    const auto bands = static_cast<std::size_t>(l_max) + 1;
    std::vector<std::vector<double>> multipliers(bands);
    for (std::size_t l = 0; l < bands; ++l) {
        multipliers[l] = band_multiplier(static_cast<int>(l), grid);
    }
    std::vector<double> envelope_per_node(nodes * bands, 0.0);
    parallel_for(nodes, [&](std::size_t z) {
        const auto frozen = multiplier_on_grid(freeze(sigma, grid, z), grid);
        SpectralCoeffs c(grid);
        for (std::size_t l = 0; l < bands; ++l) {
            for (std::size_t q = 0; q < grid.size(); ++q) {
                c.coeffs()[q] = multipliers[l][q] * frozen[q] * fhat.coeffs()[q];
            }
            envelope_per_node[z * bands + l] = sup_norm(inverse_fft(c));
        }
    });
    report.pass = true;
    for (std::size_t l = 0; l < bands; ++l) {
        EnvelopeBand b;
        b.l = static_cast<int>(l);
        const auto m = multipliers[l];
        b.operator_sup = sup_norm(apply_multiplier(std::vector<Complex>(m.begin(), m.end()), out));
        for (std::size_t z = 0; z < nodes; ++z) {
            b.envelope = std::max(b.envelope, envelope_per_node[z * bands + l]);
        }
        b.pass = b.operator_sup <= (1.0 + tolerance) * b.envelope + 1e-14;
        report.pass = report.pass && b.pass;
        report.bands.push_back(b);
    }
    return report;
}

} // namespace pdolab
