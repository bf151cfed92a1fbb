#include "pdolab/experiment.hpp"

#include "pdolab/csv.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/expression.hpp"
#include "pdolab/hypoelliptic.hpp"
#include "pdolab/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pdolab {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

class FieldReader {
public:
    explicit FieldReader(std::vector<std::string>& missing) : missing_(missing) {}

    const json* require(const json& obj, const std::string& key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) {
            missing_.push_back(where + key);
            return nullptr;
        }
        return &obj.at(key);
    }

private:
    std::vector<std::string>& missing_;
};

template <class T>
T get_as(const json& v, const std::string& where) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw Error("config: field " + where + " has the wrong type");
    }
}

template <class T>
T value_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        return fallback;
    }
    return get_as<T>(obj.at(key), where + key);
}

Symbol compile_expression(const std::string& source, int dim, const std::string& where) {
    try {
        return symbol_from_expression(Expression::parse(source, dim));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + std::string(e.what()).substr(0, std::string(e.what()).find(" at line")),
                         e.line(), e.column());
    }
}

PointFunction compile_function(const std::string& source, int dim, const std::string& where) {
    try {
        return function_from_expression(Expression::parse(source, dim));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + std::string(e.what()).substr(0, std::string(e.what()).find(" at line")),
                         e.line(), e.column());
    }
}

Symbol compile_multiplier(const std::string& source, int dim, const std::string& where) {
    auto s = compile_expression(source, dim, where);
    if (!s.x_independent()) {
        throw Error(where + ": the xi factor of a separable term must not depend on x");
    }
    return s;
}

CertifyOptions read_options(const json& obj, CertifyOptions base, const std::string& where) {
    base.s = value_or(obj, "s", base.s, where);
    base.target_shift = value_or(obj, "target_shift", base.target_shift, where);
    if (obj.is_object() && obj.contains("bands")) {
        const auto bands = get_as<std::vector<int>>(obj.at("bands"), where + "bands");
        if (bands.size() != 2) {
            throw Error("config: " + where + "bands must be [l_min, l_max]");
        }
        base.l_min = bands[0];
        base.l_max = bands[1];
    }
    base.probes = value_or(obj, "probes", base.probes, where);
    base.probe_modes = value_or(obj, "probe_modes", base.probe_modes, where);
    base.slope_limit = value_or(obj, "slope_limit", base.slope_limit, where);
    base.outlier_factor = value_or(obj, "outlier_factor", base.outlier_factor, where);
    base.attach_seminorms = value_or(obj, "seminorms", base.attach_seminorms, where);
    if (obj.is_object() && obj.contains("seed")) {
        base.seed = get_as<std::uint64_t>(obj.at("seed"), where + "seed");
    }
    if (obj.is_object() && obj.contains("path")) {
        const auto p = get_as<std::string>(obj.at("path"), where + "path");
        if (p == "automatic") {
            base.path = QuantizePath::automatic;
        } else if (p == "direct") {
            base.path = QuantizePath::direct;
        } else if (p == "separable") {
            base.path = QuantizePath::separable;
        } else {
            throw Error("config: " + where + "path must be automatic, direct or separable");
        }
    }
    return base;
}

void read_symbol(const json& src, int dim, const std::filesystem::path& base_dir, const std::string& where,
                 ExperimentSpec& spec) {
    if (!src.is_object()) {
        throw Error("config: " + where + "symbol must be an object");
    }
    ClassMeta meta;
    if (src.contains("gallery")) {
        const auto g = gallery_symbol(get_as<std::string>(src.at("gallery"), where + "gallery"));
        if (g.symbol.dim() != dim) {
            throw GridMismatch("config: gallery symbol " + g.name + " is one-dimensional");
        }
        spec.symbol = g.symbol;
        spec.symbol_label = g.name;
        spec.epsilon = g.epsilon;
        return;
    }
    if (src.contains("expression")) {
        const auto text = get_as<std::string>(src.at("expression"), where + "expression");
        spec.symbol = compile_expression(text, dim, where + "expression");
        spec.symbol_label = text;
    } else if (src.contains("terms")) {
        std::vector<SeparableTerm> terms;
        std::string label;
        const auto& arr = src.at("terms");
        if (!arr.is_array() || arr.empty()) {
            throw Error("config: " + where + "terms must be a non-empty array");
        }
        for (std::size_t r = 0; r < arr.size(); ++r) {
            const auto w = where + "terms[" + std::to_string(r) + "].";
            const auto xs = value_or<std::string>(arr[r], "x", "1", w);
            const auto ks = value_or<std::string>(arr[r], "xi", "1", w);
            SeparableTerm t;
            t.x_factor = compile_function(xs, dim, w + "x");
            const auto m = compile_multiplier(ks, dim, w + "xi");
            t.xi_factor = [m](std::span<const double> xi) {
                std::vector<double> zero(xi.size(), 0.0);
                return m(zero, xi);
            };
            terms.push_back(std::move(t));
            label += (r ? " + (" : "(") + xs + ")(" + ks + ")";
        }
        spec.symbol = Symbol::separable(dim, std::move(terms));
        spec.symbol_label = label;
    } else if (src.contains("table")) {
        const auto rel = get_as<std::string>(src.at("table"), where + "table");
        const auto path = base_dir / rel;
        std::ifstream in(path);
        if (!in) {
            throw Error("config: cannot open symbol table " + path.string());
        }
        spec.symbol = read_symbol_table(in);
        if (spec.symbol->dim() != dim) {
            throw GridMismatch("config: symbol table " + rel + " has dimension " + std::to_string(spec.symbol->dim()));
        }
        spec.symbol_label = rel;
    } else {
        throw Error("config: " + where + "symbol needs one of gallery, expression, terms, table");
    }
    if (src.contains("order")) {
        meta.order = get_as<double>(src.at("order"), where + "order");
    }
    if (src.contains("rho")) {
        meta.rho = get_as<double>(src.at("rho"), where + "rho");
    }
    if (src.contains("delta")) {
        meta.delta = get_as<double>(src.at("delta"), where + "delta");
    }
    spec.symbol = spec.symbol->with_meta(meta);
    spec.epsilon = value_or(src, "epsilon", 0.0, where);
}

} // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        const auto colon = msg.find("syntax error");
        throw ParseError("config: " + (colon == std::string::npos ? msg : msg.substr(colon)), line, column);
    }
    if (!root.is_object()) {
        throw ParseError("config: top level must be an object", 1, 1);
    }

    std::vector<std::string> missing;
    FieldReader fields(missing);
    RunConfig cfg;
    const json* grid = fields.require(root, "grid", "");
    const json* experiments = fields.require(root, "experiments", "");
    const json* dim = grid ? fields.require(*grid, "dim", "grid.") : nullptr;
    const json* points = grid ? fields.require(*grid, "N", "grid.") : nullptr;
    if (experiments && experiments->is_array()) {
        for (std::size_t i = 0; i < experiments->size(); ++i) {
            const auto& e = (*experiments)[i];
            const auto w = "experiments[" + std::to_string(i) + "].";
            fields.require(e, "id", w);
            const auto kind = value_or<std::string>(e, "kind", "holder", w);
            if (kind == "graded") {
                fields.require(e, "beta", w);
                if (!e.contains("model") && !(e.contains("n") && e.contains("eps0"))) {
                    missing.push_back(w + "model (or n and eps0)");
                }
            } else {
                fields.require(e, "symbol", w);
            }
            if (kind == "corollary") {
                fields.require(e, "m", w);
                fields.require(e, "rho", w);
            }
        }
    } else if (experiments) {
        throw Error("config: experiments must be an array");
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) {
            list += (list.empty() ? "" : ", ") + m;
        }
        throw Error("config: missing required fields: " + list);
    }

    cfg.grid = TorusGrid(get_as<int>(*dim, "grid.dim"), get_as<std::size_t>(*points, "grid.N"));
    cfg.seed = seed_override.value_or(value_or<std::uint64_t>(root, "seed", 1, ""));
    CertifyOptions defaults;
    defaults.seed = cfg.seed;
    if (root.contains("defaults")) {
        defaults = read_options(root.at("defaults"), defaults, "defaults.");
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < experiments->size(); ++i) {
        const auto& e = (*experiments)[i];
        const auto w = "experiments[" + std::to_string(i) + "].";
        ExperimentSpec spec;
        spec.id = get_as<std::string>(e.at("id"), w + "id");
        if (spec.id.empty() || spec.id.find_first_of(",/\\\n\"") != std::string::npos) {
            throw Error("config: " + w + "id must be non-empty and free of , / \\ \" and newlines");
        }
        if (!ids.insert(spec.id).second) {
            throw Error("config: duplicate experiment id '" + spec.id + "'");
        }
        spec.options = read_options(e, defaults, w);
        if (seed_override) {
            spec.options.seed = *seed_override;
        }
        const auto kind = value_or<std::string>(e, "kind", "holder", w);
        if (kind == "holder") {
            spec.kind = ExperimentKind::holder;
        } else if (kind == "graded") {
            spec.kind = ExperimentKind::graded;
        } else if (kind == "corollary") {
            spec.kind = ExperimentKind::corollary;
        } else {
            throw Error("config: " + w + "kind must be holder, graded or corollary");
        }
        if (spec.kind == ExperimentKind::graded) {
            spec.beta = get_as<double>(e.at("beta"), w + "beta");
            spec.wrong_target = value_or(e, "wrong_target", false, w);
            if (e.contains("model")) {
                std::map<std::string, double> params;
                if (e.contains("model_params")) {
                    params = get_as<std::map<std::string, double>>(e.at("model_params"), w + "model_params");
                }
                const auto model = hypoelliptic_gallery(get_as<std::string>(e.at("model"), w + "model"), params);
                spec.grading = {model.n, model.eps0.value()};
                spec.symbol_label = model.name;
            } else {
                spec.grading = {get_as<int>(e.at("n"), w + "n"), get_as<double>(e.at("eps0"), w + "eps0")};
            }
        } else {
            read_symbol(e.at("symbol"), cfg.grid.dim(), base_dir, w + "symbol.", spec);
        }
        if (spec.kind == ExperimentKind::corollary) {
            spec.m = get_as<double>(e.at("m"), w + "m");
            spec.rho = get_as<double>(e.at("rho"), w + "rho");
            spec.delta = value_or(e, "delta", 0.0, w);
            spec.ell = value_or(e, "ell", 0, w);
        }
        cfg.experiments.push_back(std::move(spec));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path(), seed_override);
}

Symbol read_symbol_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty symbol table", 1, 1);
    }
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[header.size() - 2] != "re" || header.back() != "im") {
        throw ParseError("symbol table header must end with re,im", 1, 1);
    }
    const std::size_t index_columns = header.size() - 2;
    const bool has_nodes = header[0].starts_with("i");
    const int dim = static_cast<int>(has_nodes ? index_columns / 2 : index_columns);
    if (dim < 1 || (has_nodes && index_columns % 2 != 0)) {
        throw ParseError("symbol table header must be k1..kn,re,im or i1..in,k1..kn,re,im", 1, 1);
    }
    struct Row {
        std::vector<long long> index;
        Complex value;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()),
                             line_no, 1);
        }
        Row row;
        std::size_t column = 1;
        try {
            for (std::size_t c = 0; c < index_columns; ++c) {
                row.index.push_back(std::stoll(f[c]));
                column += f[c].size() + 1;
            }
            row.value = {std::stod(f[index_columns]), std::stod(f[index_columns + 1])};
        } catch (const std::exception&) {
            throw ParseError("malformed number", line_no, column);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("symbol table has no rows", line_no, 1);
    }
    const std::size_t off = has_nodes ? static_cast<std::size_t>(dim) : 0;
    std::vector<int> lo(static_cast<std::size_t>(dim), std::numeric_limits<int>::max());
    std::vector<int> hi(static_cast<std::size_t>(dim), std::numeric_limits<int>::min());
    long long max_node = 0;
    for (const auto& r : rows) {
        for (int d = 0; d < dim; ++d) {
            const auto k = static_cast<int>(r.index[off + d]);
            lo[d] = std::min(lo[d], k);
            hi[d] = std::max(hi[d], k);
            if (has_nodes) {
                max_node = std::max(max_node, r.index[d]);
            }
        }
    }
    FrequencyBox box(lo, hi);
    std::vector<int> xi(static_cast<std::size_t>(dim));
    if (!has_nodes) {
        if (rows.size() != box.size()) {
            throw InvariantError("symbol table: rows do not fill the frequency box");
        }
        std::vector<Complex> values(box.size());
        for (const auto& r : rows) {
            for (int d = 0; d < dim; ++d) {
                xi[d] = static_cast<int>(r.index[d]);
            }
            values[box.flat(xi)] = r.value;
        }
        return Symbol::multiplier_table(box, std::move(values));
    }
    const TorusGrid grid(dim, static_cast<std::size_t>(max_node + 1));
    if (rows.size() != grid.size() * box.size()) {
        throw InvariantError("symbol table: rows do not fill grid x frequency box");
    }
    std::vector<Complex> values(grid.size() * box.size());
    std::vector<std::size_t> node(static_cast<std::size_t>(dim));
    for (const auto& r : rows) {
        for (int d = 0; d < dim; ++d) {
            if (r.index[d] < 0) {
                throw InvariantError("symbol table: negative node index");
            }
            node[d] = static_cast<std::size_t>(r.index[d]);
            xi[d] = static_cast<int>(r.index[off + d]);
        }
        values[grid.node_of(node) * box.size() + box.flat(xi)] = r.value;
    }
    return Symbol::table(grid, box, std::move(values));
}

CertificationReport run_experiment(const ExperimentSpec& spec, const TorusGrid& grid) {
    CertificationReport report;
    switch (spec.kind) {
    case ExperimentKind::holder:
        report = certify_holder(*spec.symbol, grid, spec.options, spec.symbol_label, spec.epsilon);
        break;
    case ExperimentKind::graded:
        report = certify_graded(spec.beta, spec.grading, grid, spec.options, spec.wrong_target);
        if (!spec.symbol_label.empty()) {
            report.notes.push_back("grading exponent from model " + spec.symbol_label);
        }
        break;
    case ExperimentKind::corollary:
        report = certify_corollary_m(*spec.symbol, spec.m, spec.rho, spec.delta, spec.ell, grid, spec.options,
                                     spec.symbol_label);
        break;
    }
    report.experiment_id = spec.id;
    return report;
}

std::vector<CertificationReport> run_config(const RunConfig& config, int jobs) {
    std::vector<CertificationReport> reports(config.experiments.size());
    parallel_for(
        config.experiments.size(),
        [&](std::size_t i) { reports[i] = run_experiment(config.experiments[i], config.grid); },
        jobs > 0 ? static_cast<unsigned>(jobs) : 0U);
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) { return a.experiment_id < b.experiment_id; });
    return reports;
}

void write_results_csv(std::ostream& out, const std::vector<CertificationReport>& reports) {
    out << "experiment_id,l,probe_seed,ratio,besov_in,besov_out,slope,verdict\n";
    for (const auto& r : reports) {
        auto probes = r.probes;
        std::stable_sort(probes.begin(), probes.end(), [](const auto& a, const auto& b) { return a.l < b.l; });
        for (const auto& p : probes) {
            out << r.experiment_id << ',' << p.l << ',' << p.probe_seed << ',' << format_number(p.ratio) << ','
                << format_number(p.besov_in) << ',' << format_number(p.besov_out) << ',' << format_number(r.slope)
                << ',' << to_string(r.verdict) << '\n';
        }
    }
}

namespace {

json entries_json(const std::vector<SeminormEntry>& entries, bool with_beta) {
    json arr = json::array();
    for (const auto& e : entries) {
        json j;
        j["alpha"] = e.alpha.entries();
        if (with_beta) {
            j["beta"] = e.beta.entries();
        }
        j["constant"] = e.constant;
        j["argmax_node"] = e.argmax_node;
        j["argmax_xi"] = e.argmax_xi;
        arr.push_back(std::move(j));
    }
    return arr;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::string report_json(const std::vector<CertificationReport>& reports, int indent) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["experiment_id"] = r.experiment_id;
        j["kind"] = r.kind;
        j["symbol"] = r.symbol;
        j["s"] = r.s;
        j["s_out"] = r.s_out;
        json bands = json::array();
        for (const auto& b : r.bands) {
            bands.push_back({{"l", b.l}, {"ratio", finite_or_null(b.ratio)}});
        }
        j["bands"] = std::move(bands);
        json probes = json::array();
        for (const auto& p : r.probes) {
            probes.push_back({{"l", p.l},
                              {"probe_seed", p.probe_seed},
                              {"ratio", finite_or_null(p.ratio)},
                              {"besov_in", finite_or_null(p.besov_in)},
                              {"besov_out", finite_or_null(p.besov_out)}});
        }
        j["probes"] = std::move(probes);
        j["max_ratio"] = finite_or_null(r.max_ratio);
        j["median_ratio"] = finite_or_null(r.median_ratio);
        j["slope"] = finite_or_null(r.slope);
        j["verdict"] = to_string(r.verdict);
        j["notes"] = r.notes;
        if (r.fefferman) {
            j["fefferman"] = {{"epsilon", r.fefferman->epsilon},
                              {"k", r.fefferman->k},
                              {"sup_constant", finite_or_null(r.fefferman->sup_constant)},
                              {"entries", entries_json(r.fefferman->entries, false)}};
        }
        if (r.toroidal) {
            j["toroidal"] = {{"overall_max", finite_or_null(r.toroidal->overall_max)},
                             {"entries", entries_json(r.toroidal->entries, true)}};
        }
        j["runtime_seconds"] = r.runtime_seconds;
        arr.push_back(std::move(j));
    }
    return arr.dump(indent);
}

void write_plot_data(std::ostream& out, const CertificationReport& report) {
    out << "# " << report.experiment_id << ": l log2(r_l)\n";
    for (const auto& b : report.bands) {
        out << b.l << ' ' << format_number(std::log2(b.ratio)) << '\n';
    }
}

void write_outputs(const std::filesystem::path& dir, const std::vector<CertificationReport>& reports) {
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
            throw Error("cannot write " + (dir / name).string());
        }
        return f;
    };
    {
        auto f = open("results.csv");
        write_results_csv(f, reports);
    }
    {
        auto f = open("report.json");
        f << report_json(reports) << '\n';
    }
    for (const auto& r : reports) {
        auto f = open("plot_" + r.experiment_id + ".dat");
        write_plot_data(f, r);
    }
}

int exit_code(const std::vector<CertificationReport>& reports) {
    const bool suspect = std::any_of(reports.begin(), reports.end(),
                                     [](const auto& r) { return r.verdict == Verdict::suspect_growth; });
    return suspect ? 2 : 0;
}

} // namespace pdolab
