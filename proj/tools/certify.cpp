#include "pdolab/certify.hpp"
#include "pdolab/dyadic.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/experiment.hpp"
#include "pdolab/expression.hpp"
#include "pdolab/hypoelliptic.hpp"
#include "pdolab/metrics.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace pdolab;
using nlohmann::json;

int cmd_run(const std::string& config_path, const std::string& out_dir, int jobs, std::optional<std::uint64_t> seed) {
    const auto config = load_config(config_path, seed);
    const auto reports = run_config(config, jobs);
    write_outputs(out_dir, reports);
    for (const auto& r : reports) {
        std::cout << r.experiment_id << ": " << to_string(r.verdict) << " slope=" << r.slope
                  << " max=" << r.max_ratio << " median=" << r.median_ratio << '\n';
    }
    std::cout << reports.size() << " experiment(s), outputs in " << out_dir << '\n';
    return exit_code(reports);
}

int cmd_gallery() {
    std::cout << "symbols:\n";
    for (const auto& g : fefferman_gallery()) {
        std::cout << "  " << g.name << "  eps=" << g.epsilon << "  " << g.formula << '\n';
    }
    const auto c = negative_control();
    std::cout << "  " << c.name << "  (control)  " << c.formula << '\n';
    std::cout << "models:\n";
    for (const auto& name : gallery_names()) {
        const auto m = hypoelliptic_gallery(name);
        std::cout << "  " << m.name << "  n=" << m.n << " r0=" << m.r0 << " Q0=" << m.Q0.to_string()
                  << " eps0=" << m.eps0.to_string() << "  " << m.description << '\n';
    }
    return 0;
}

GridFunction load_function(const std::string& path, int dim, std::size_t points) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    if (path.ends_with(".csv")) {
        return read_grid_function_csv(in);
    }
    if (points == 0) {
        throw Error("expression files need --N");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return sample(function_from_expression(Expression::parse(buffer.str(), dim)), TorusGrid(dim, points));
}

int cmd_norms(const std::string& path, double s, int dim, std::size_t points) {
    const auto f = load_function(path, dim, points);
    json j;
    j["grid"] = {{"dim", f.grid().dim()}, {"N", f.grid().points_per_axis()}};
    j["s"] = s;
    j["sup_norm"] = sup_norm(f);
    j["besov_norm"] = besov_norm(f, s);
    j["band_sups"] = band_sups(f);
    if (s > 0.0 && s < 1.0) {
        j["holder_seminorm"] = holder_seminorm(f, s);
        j["holder_norm"] = holder_norm(f, s);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        parts.push_back(part);
    }
    return parts;
}

double number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw Error("metric parameter " + what + ": not a number '" + text + "'");
}

int cmd_axioms(const std::string& name, int dim, std::size_t samples, std::uint64_t seed) {
    const auto parts = split(name, ':');
    SamplePlan plan;
    plan.count = samples;
    plan.seed = seed;
    std::optional<SplitMetric> g;
    std::optional<Weight> weight;
    std::optional<HypoellipticModel> model;
    if (parts[0] == "flat") {
        g = flat_metric(dim);
        weight = constant_weight(dim);
    } else if (parts[0] == "rho_delta" || parts[0] == "g10") {
        const double rho = parts.size() > 1 ? number(parts[1], "rho") : 1.0;
        const double delta = parts.size() > 2 ? number(parts[2], "delta") : 0.0;
        g = rho_delta_metric(dim, rho, delta);
        weight = bracket_weight(dim, 1.0);
    } else if (parts[0] == "shubin") {
        const double rho = parts.size() > 1 ? number(parts[1], "rho") : 1.0;
        g = shubin_metric(dim, rho);
        weight = shubin_weight(dim, 1.0);
    } else if (parts[0] == "model" && parts.size() > 1) {
        std::map<std::string, double> params;
        for (std::size_t i = 2; i < parts.size(); ++i) {
            const auto kv = split(parts[i], '=');
            if (kv.size() != 2) {
                throw Error("model parameters take the form key=value");
            }
            params[kv[0]] = number(kv[1], kv[0]);
        }
        model = hypoelliptic_gallery(parts[1], params);
        g = model_metric(*model);
        weight = model_weight(*model, 1.0);
    } else {
        throw Error("unknown metric '" + name + "'; use flat, rho_delta[:rho[:delta]], shubin[:rho] or model:<name>");
    }

    const auto cont = check_continuity(*g, plan);
    const auto temp = check_temperance(*g, plan);
    const auto w = check_weight(*weight, *g, plan);
    json j;
    j["metric"] = g->name();
    j["dim"] = g->dim();
    j["samples"] = plan.count;
    j["continuity"] = {{"C", cont.C},
                       {"c", cont.c},
                       {"c_prime", cont.c_prime},
                       {"min_ratio", cont.min_ratio},
                       {"max_ratio", cont.max_ratio},
                       {"violations", cont.violations},
                       {"verdict", cont.pass ? "PASS" : "FAIL"}};
    j["temperance"] = {{"J", temp.fit.exponent},
                       {"C_bar", temp.fit.constant},
                       {"cap", temp.cap},
                       {"verdict", temp.pass ? "PASS" : "FAIL"}};
    j["weight"] = {{"name", weight->name()},
                   {"continuity_D", w.continuity_D},
                   {"temperance_N", w.temperance.exponent},
                   {"temperance_D_prime", w.temperance.constant},
                   {"verdict", w.pass ? "PASS" : "FAIL"}};
    bool ok = cont.pass && temp.pass && w.pass;
    if (model) {
        double lam_min = std::numeric_limits<double>::infinity();
        for (const auto& X : plan.points(g->dim(), 7)) {
            lam_min = std::min(lam_min, lambda_g(*g, X));
        }
        const bool up = lam_min >= 1.0 - 1e-12;
        j["model"] = {{"name", model->name},
                      {"n", model->n},
                      {"r0", model->r0},
                      {"Q0", model->Q0.to_string()},
                      {"eps0", model->eps0.to_string()}};
        j["uncertainty"] = {{"min_lambda", lam_min}, {"verdict", up ? "PASS" : "FAIL"}};
        ok = ok && up;
    }
    std::cout << j.dump(2) << '\n';
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical boundedness certificates for pseudo-differential operators on the torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "certify-out";
    int jobs = 0;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "run a JSON experiment configuration");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--jobs", jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    run->add_option("--seed", seed, "override every probe seed");

    auto* gallery = app.add_subcommand("gallery", "list built-in symbols and models");
    gallery->add_subcommand("list", "print the gallery")->required(false);

    std::string function_path;
    double s = 0.5;
    int dim = 1;
    std::size_t points = 0;
    auto* norms = app.add_subcommand("norms", "Besov and Hoelder norms of a grid function");
    norms->add_option("function-file", function_path, "CSV grid function or expression file")->required();
    norms->add_option("--s", s, "regularity")->required();
    norms->add_option("--dim", dim, "dimension for expression files")->check(CLI::Range(1, 3));
    norms->add_option("--N", points, "points per axis for expression files");

    std::string metric;
    std::size_t samples = 10000;
    std::uint64_t axiom_seed = 1;
    int metric_dim = 1;
    auto* axioms = app.add_subcommand("axioms", "scan the metric and weight axioms");
    axioms->add_option("metric-name", metric, "flat, rho_delta[:rho[:delta]], shubin[:rho], model:<name>[:k=v]")
        ->required();
    axioms->add_option("--dim", metric_dim, "dimension for flat/rho_delta/shubin")->check(CLI::Range(1, 4));
    axioms->add_option("--samples", samples, "sample count");
    axioms->add_option("--seed", axiom_seed, "sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return cmd_run(config_path, out_dir, jobs, seed);
        }
        if (*gallery) {
            return cmd_gallery();
        }
        if (*norms) {
            return cmd_norms(function_path, s, dim, points);
        }
        if (*axioms) {
            return cmd_axioms(metric, metric_dim, samples, axiom_seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
