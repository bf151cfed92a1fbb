#pragma once

#include "pdolab/quantize.hpp"
#include "pdolab/seminorms.hpp"
#include "pdolab/symbol.hpp"
#include "pdolab/torus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pdolab {

enum class Verdict { bounded, suspect_growth, info };
std::string to_string(Verdict v);

struct CertifyOptions {
    double s = 0.5;            ///< regularity of the input norm
    double target_shift = 0.0; ///< output norm uses s - target_shift
    int l_min = 2;
    int l_max = 10;
    int probes = 8;
    int probe_modes = 32;
    std::uint64_t seed = 1;
    double slope_limit = 0.05;
    double outlier_factor = 10.0;
    QuantizePath path = QuantizePath::automatic;
    bool attach_seminorms = true;
};

struct ProbeRecord {
    int l = 0;
    std::uint64_t probe_seed = 0;
    double ratio = 0.0;
    double besov_in = 0.0;
    double besov_out = 0.0;
};

struct BandSummary {
    int l = 0;
    double ratio = 0.0; ///< max over probes
};

struct CertificationReport {
    std::string experiment_id;
    std::string symbol;
    std::string kind = "holder";
    double s = 0.0;
    double s_out = 0.0;
    std::vector<ProbeRecord> probes;
    std::vector<BandSummary> bands;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double slope = 0.0;
    Verdict verdict = Verdict::bounded;
    std::vector<std::string> notes;
    std::optional<FeffermanReport> fefferman;
    std::optional<SeminormReport> toroidal;
    double runtime_seconds = 0.0;
};

/// Least-squares slope of log2(ratio) against l.
double fit_slope(const std::vector<BandSummary>& bands);
double median(std::vector<double> values);

/// r_l = max over probes of ||Op(sigma) f||_{B^{s_out}} / ||f||_{B^s} for
/// band probes f in bands l_min..l_max; BOUNDED iff slope <= slope_limit and
/// max r_l <= outlier_factor * median r_l. Needs at least five bands.
CertificationReport certify_holder(const Symbol& sigma, const TorusGrid& grid, const CertifyOptions& options,
                                   const std::string& label = "symbol", double fefferman_epsilon = 0.0);

/// Grading exponent of a model: ambient dimension n and eps_0.
struct GradingExponent {
    int n = 1;
    double eps0 = 0.0;
    double gap(double beta) const { return n * eps0 - beta; }
};

/// Multiplier surrogate of a symbol of S(m^{-beta}, g) measured against the
/// bounded class: <xi>^{gamma} with gamma = n eps_0 - beta.
Symbol graded_surrogate(int dim, double gamma);

/// Certifies the graded surrogate from B^s into B^{s - gamma}
/// (or into B^s when wrong_target is set). Requires 0 <= beta <= n eps_0 and
/// 0 < s - gamma < 1.
CertificationReport certify_graded(double beta, const GradingExponent& model, const TorusGrid& grid,
                                   const CertifyOptions& options, bool wrong_target = false);

/// m >= delta * ell + (n/2)(1 - rho).
bool corollary_hypothesis(double m, double rho, double delta, int ell, int n);

/// certify_holder plus the hypothesis annotation; a BOUNDED verdict is
/// downgraded to INFO when the hypothesis fails.
CertificationReport certify_corollary_m(const Symbol& sigma, double m, double rho, double delta, int ell,
                                        const TorusGrid& grid, const CertifyOptions& options,
                                        const std::string& label = "symbol");

struct GallerySymbol {
    std::string name;
    double epsilon = 0.0;
    Symbol symbol;
    std::string formula;
};

/// Six n = 1 symbols obeying the Fefferman envelope for eps in {0, 1/2, 3/4}
/// (an x-independent and an x-modulated one per eps).
std::vector<GallerySymbol> fefferman_gallery();
/// <xi>^{1/2}: the growth control.
GallerySymbol negative_control();
/// Looks up a gallery symbol (including the control) by name.
GallerySymbol gallery_symbol(const std::string& name);

struct EnvelopeBand {
    int l = 0;
    double operator_sup = 0.0; ///< ||psi_l Op(sigma) f||_inf
    double envelope = 0.0;     ///< max_z ||psi_l sigma_z(D) f||_inf over grid nodes z
    bool pass = false;
};

struct EnvelopeReport {
    std::vector<EnvelopeBand> bands;
    double tolerance = 0.05;
    bool pass = false;
};

/// Band-wise comparison of Op(sigma) f with the frozen-symbol envelope for
/// l = 0..l_max.
EnvelopeReport frozen_envelope(const Symbol& sigma, const GridFunction& f, int l_max = 8, double tolerance = 0.05);

} // namespace pdolab
