#pragma once

#include "pdolab/certify.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdolab {

enum class ExperimentKind { holder, graded, corollary };

struct ExperimentSpec {
    std::string id;
    ExperimentKind kind = ExperimentKind::holder;
    std::string symbol_label;
    std::optional<Symbol> symbol; // absent for graded runs
    double epsilon = 0.0;         // Fefferman exponent for attached constants
    CertifyOptions options;

    // graded
    GradingExponent grading;
    double beta = 0.0;
    bool wrong_target = false;

    // corollary
    double m = 0.0;
    double rho = 1.0;
    double delta = 0.0;
    int ell = 0;
};

struct RunConfig {
    TorusGrid grid{1, 1024};
    std::uint64_t seed = 1;
    std::vector<ExperimentSpec> experiments;
};

/// Parses a JSON run configuration. Relative table paths resolve against
/// `base_dir`. Syntax errors raise ParseError with the JSON location; all
/// missing required fields are reported together.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".",
                       std::optional<std::uint64_t> seed_override = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Reads a symbol table. Header `k1..kn,re,im` gives an x-independent table;
/// `i1..in,k1..kn,re,im` a table on the N^n grid with node indices i.
Symbol read_symbol_table(std::istream& in);

CertificationReport run_experiment(const ExperimentSpec& spec, const TorusGrid& grid);

/// Runs every experiment on `jobs` workers (0 = hardware concurrency);
/// reports come back sorted by id.
std::vector<CertificationReport> run_config(const RunConfig& config, int jobs = 0);

void write_results_csv(std::ostream& out, const std::vector<CertificationReport>& reports);
std::string report_json(const std::vector<CertificationReport>& reports, int indent = 2);
void write_plot_data(std::ostream& out, const CertificationReport& report);

/// results.csv, report.json and plot_<id>.dat under `dir`.
void write_outputs(const std::filesystem::path& dir, const std::vector<CertificationReport>& reports);

/// 2 on any SUSPECT-GROWTH, else 0.
int exit_code(const std::vector<CertificationReport>& reports);

} // namespace pdolab
