#include "pcss/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "pcss/matrix_io.hpp"

namespace pcss {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool is_sampling(SelectorKind kind) {
    return kind == SelectorKind::norm_sampling || kind == SelectorKind::leverage_sampling;
}

void validate(const RunConfig& config) {
    const bool has_path = !config.input_path.empty();
    const bool has_gen = config.generator.has_value();
    if (has_path == has_gen) {
        throw ParameterError("run: exactly one of input path or generator must be set");
    }
    if (config.r < 1) throw ParameterError("run: r must be positive");
    if (config.threads < 1) throw ParameterError("run: threads must be positive");
    if (config.dims && config.algorithm != PartitionAlgorithm::cvod) {
        throw ParameterError("run: explicit dims apply to the cvod algorithm only");
    }
    const bool random_init = config.algorithm != PartitionAlgorithm::none &&
                             config.init != InitKind::provided;
    if (random_init && !config.seed) {
        throw ParameterError("run: partition initialization is randomized, a seed is required");
    }
    if (is_sampling(config.selector.kind) && !config.selector.seed && !config.seed) {
        throw ParameterError("run: sampling selector needs a seed");
    }
}

// The run-level seed doubles as the selector seed when a sampling selector
// does not carry its own.
SelectorSpec effective_selector(const RunConfig& config) {
    SelectorSpec spec = config.selector;
    if (is_sampling(spec.kind) && !spec.seed) spec.seed = config.seed;
    return spec;
}

PartitionConfig partition_config(const RunConfig& config) {
    PartitionConfig pc;
    pc.k = config.k;
    pc.r = config.r;
    pc.dims = config.dims;
    pc.epsilon = config.epsilon;
    pc.max_iters = config.max_iters;
    pc.init = config.init;
    pc.relative_epsilon = config.relative_epsilon;
    pc.seed = config.seed.value_or(0);
    pc.threads = config.threads;
    return pc;
}

// Every check that applies to this run. Checks whose hypotheses need the
// full allocation (one C_i of size d_i per set) are skipped when the
// pipeline had to reduce an allocation.
std::vector<BoundReport> evaluate_bounds(const Matrix& a, const Partition& p,
                                         const PipelineResult& sel, Index r,
                                         const std::optional<CurResult>& cur,
                                         const Tolerances& tol) {
    std::vector<BoundReport> reports;
    if (sel.r_achieved < a.rows()) {
        const Matrix w1 = truncated_left_basis(a, sel.r_achieved);
        const Matrix z1 = qr_factor(sel.c, tol).q;
        reports.push_back(check_subspace_distance(w1, z1, tol));
    }
    reports.push_back(check_projection_lemma(a, sel.c, sel.r_achieved, tol));
    reports.push_back(check_energy_bound(a, p, r, tol));
    if (sel.warnings.empty()) {
        // needs one full C_i per set, matching the centroid dimensions
        reports.push_back(check_id_vs_energy(a, p, sel, tol));
    }
    if (sel.warnings.empty() && sel.r_achieved == r) {
        // these two compare against ||A - A_r|| at the requested rank and
        // need C to carry exactly r columns
        reports.push_back(check_combined_bound(a, p, sel, r, tol));
        reports.push_back(check_worst_block_bound(a, p, sel, r, tol));
    }
    if (cur) {
        reports.push_back(check_cur_bound(a, *cur, r, tol));
    }
    return reports;
}

} // namespace

RunReport run(const RunConfig& config, const Tolerances& tol) {
    validate(config);
    Matrix a = config.generator ? generate(*config.generator, config.generator_seed)
                                : load_matrix(config.input_path);
    return run_on_matrix(config, a, tol);
}

RunReport run_on_matrix(const RunConfig& config, const Matrix& a, const Tolerances& tol) {
    validate(config);
    require_finite(a, "run input");

    const auto t_total = Clock::now();
    RunReport report;
    report.config = config;
    report.rows = a.rows();
    report.cols = a.cols();
    report.frobenius_norm = a.norm();

    const PartitionConfig pc = partition_config(config);
    const auto t_partition = Clock::now();
    LloydResult lloyd = run_partition_algorithm(a, config.algorithm, pc, tol);
    report.partition = std::move(lloyd.partition);
    report.trace = std::move(lloyd.trace);
    report.timings.partition_ms = ms_since(t_partition);

    const SelectorSpec spec = effective_selector(config);
    const auto t_pipeline = Clock::now();
    report.selection = partitioned_cssp(a, report.partition, spec, config.strict, tol);
    report.id_error_value = id_error(a, report.selection.c, tol);
    report.baseline_tail = tail_norm(svd(a), config.r);
    report.timings.pipeline_ms = ms_since(t_pipeline);

    std::optional<CurResult> cur;
    if (config.with_cur) {
        CurConfig cc;
        cc.algorithm = config.algorithm;
        cc.partition = pc;
        cc.strict = config.strict;
        cur = build_cur(a, spec, cc, tol);
        CurSummary summary;
        summary.column_indices = cur->column_indices;
        summary.row_indices = cur->row_indices;
        summary.reconstruction_error = cur->reconstruction_error;
        summary.row_sets = cur->row_partition.sets;
        summary.row_dims = cur->row_partition.dims;
        summary.row_per_set = cur->row_run.per_set;
        report.cur = std::move(summary);
    }

    const auto t_bounds = Clock::now();
    report.bounds =
        evaluate_bounds(a, report.partition, report.selection, config.r, cur, tol);
    report.timings.bounds_ms = ms_since(t_bounds);
    report.timings.total_ms = ms_since(t_total);
    return report;
}

bool all_bounds_satisfied(const RunReport& report) {
    for (const BoundReport& b : report.bounds) {
        if (!b.satisfied) return false;
    }
    return true;
}

namespace {

const char* init_name(InitKind init) {
    switch (init) {
        case InitKind::random_balanced: return "balanced";
        case InitKind::random_uniform: return "uniform";
        case InitKind::provided: return "provided";
    }
    return "?";
}

InitKind parse_init(const std::string& text) {
    if (text == "balanced") return InitKind::random_balanced;
    if (text == "uniform") return InitKind::random_uniform;
    if (text == "provided") return InitKind::provided;
    throw ParameterError("unknown init kind: '" + text + "'");
}

nlohmann::ordered_json generator_to_json(const GeneratorParams& g) {
    nlohmann::ordered_json j;
    j["kind"] = generator_kind_name(g.kind);
    j["rows"] = g.rows;
    j["cols"] = g.cols;
    switch (g.kind) {
        case GeneratorKind::lowrank_noise:
            j["true_rank"] = g.true_rank;
            j["noise_sigma"] = g.noise_sigma;
            break;
        case GeneratorKind::clustered:
            j["clusters"] = g.clusters;
            j["subspace_dim"] = g.subspace_dim;
            j["angle_deg"] = g.angle_deg;
            break;
        case GeneratorKind::spectrum:
            j["sigma"] = g.sigma;
            break;
    }
    return j;
}

GeneratorParams generator_from_json(const nlohmann::ordered_json& j) {
    GeneratorParams g;
    g.kind = parse_generator_kind(j.at("kind").get<std::string>());
    g.rows = j.at("rows").get<Index>();
    g.cols = j.at("cols").get<Index>();
    switch (g.kind) {
        case GeneratorKind::lowrank_noise:
            g.true_rank = j.at("true_rank").get<Index>();
            g.noise_sigma = j.at("noise_sigma").get<double>();
            break;
        case GeneratorKind::clustered:
            g.clusters = j.at("clusters").get<Index>();
            g.subspace_dim = j.at("subspace_dim").get<Index>();
            g.angle_deg = j.at("angle_deg").get<double>();
            break;
        case GeneratorKind::spectrum:
            g.sigma = j.at("sigma").get<std::vector<double>>();
            break;
    }
    return g;
}

nlohmann::ordered_json per_set_to_json(const std::vector<PerSetSelection>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const PerSetSelection& e : entries) {
        nlohmann::ordered_json j;
        j["set"] = e.set;
        j["local"] = e.local;
        j["global"] = e.global;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<PerSetSelection> per_set_from_json(const nlohmann::ordered_json& arr) {
    std::vector<PerSetSelection> out;
    for (const auto& j : arr) {
        PerSetSelection e;
        e.set = j.at("set").get<std::size_t>();
        e.local = j.at("local").get<std::vector<Index>>();
        e.global = j.at("global").get<std::vector<Index>>();
        out.push_back(std::move(e));
    }
    return out;
}

nlohmann::ordered_json bound_to_json(const BoundReport& b) {
    nlohmann::ordered_json j;
    j["name"] = b.name;
    j["lhs"] = b.lhs;
    j["rhs"] = b.rhs;
    j["slack"] = b.slack;
    j["satisfied"] = b.satisfied;
    j["ill_conditioned"] = b.ill_conditioned;
    j["ingredients"] = b.ingredients;
    return j;
}

BoundReport bound_from_json(const nlohmann::ordered_json& j) {
    BoundReport b;
    b.name = j.at("name").get<std::string>();
    b.lhs = j.at("lhs").get<double>();
    b.rhs = j.at("rhs").get<double>();
    b.slack = j.at("slack").get<double>();
    b.satisfied = j.at("satisfied").get<bool>();
    b.ill_conditioned = j.at("ill_conditioned").get<bool>();
    b.ingredients = j.at("ingredients").get<std::map<std::string, double>>();
    return b;
}

} // namespace

nlohmann::ordered_json report_to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = report.schema_version;

    nlohmann::ordered_json config;
    config["algorithm"] = partition_algorithm_name(report.config.algorithm);
    config["selector"] = selector_spec_to_string(report.config.selector);
    config["k"] = report.config.k;
    config["r"] = report.config.r;
    if (report.config.dims) config["dims"] = *report.config.dims;
    config["epsilon"] = report.config.epsilon;
    config["max_iters"] = report.config.max_iters;
    config["init"] = init_name(report.config.init);
    config["relative_epsilon"] = report.config.relative_epsilon;
    if (report.config.seed) config["seed"] = *report.config.seed;
    config["strict"] = report.config.strict;
    config["cur"] = report.config.with_cur;
    config["threads"] = report.config.threads;
    if (report.config.generator) {
        config["generator"] = generator_to_json(*report.config.generator);
        config["generator_seed"] = report.config.generator_seed;
    } else {
        config["input"] = report.config.input_path;
    }
    j["config"] = std::move(config);

    nlohmann::ordered_json matrix;
    matrix["rows"] = report.rows;
    matrix["cols"] = report.cols;
    matrix["frobenius_norm"] = report.frobenius_norm;
    j["matrix"] = std::move(matrix);

    nlohmann::ordered_json partition;
    partition["k"] = report.partition.k();
    partition["dims"] = report.partition.dims;
    nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
    for (const auto& set : report.partition.sets) sizes.push_back(set.size());
    partition["set_sizes"] = std::move(sizes);
    partition["sets"] = report.partition.sets;
    j["partition"] = std::move(partition);

    nlohmann::ordered_json trace;
    trace["energies"] = report.trace.energies;
    trace["iterations"] = report.trace.iterations;
    trace["converged"] = report.trace.converged;
    trace["k_history"] = report.trace.k_history;
    trace["clamp_events"] = report.trace.clamp_events;
    trace["repair_events"] = report.trace.repair_events;
    j["trace"] = std::move(trace);

    nlohmann::ordered_json selection;
    selection["global_indices"] = report.selection.global_indices; // 0-based
    selection["r_achieved"] = report.selection.r_achieved;
    selection["per_set"] = per_set_to_json(report.selection.per_set);
    selection["warnings"] = report.selection.warnings;
    j["selection"] = std::move(selection);

    nlohmann::ordered_json metrics;
    metrics["id_error"] = report.id_error_value;
    metrics["baseline_tail_error"] = report.baseline_tail;
    metrics["relative_id_error"] =
        report.frobenius_norm > 0.0 ? report.id_error_value / report.frobenius_norm : 0.0;
    j["metrics"] = std::move(metrics);

    nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
    for (const BoundReport& b : report.bounds) bounds.push_back(bound_to_json(b));
    j["bounds"] = std::move(bounds);

    if (report.cur) {
        nlohmann::ordered_json cur;
        cur["column_indices"] = report.cur->column_indices;
        cur["row_indices"] = report.cur->row_indices;
        cur["reconstruction_error"] = report.cur->reconstruction_error;
        cur["row_sets"] = report.cur->row_sets;
        cur["row_dims"] = report.cur->row_dims;
        cur["row_per_set"] = per_set_to_json(report.cur->row_per_set);
        j["cur"] = std::move(cur);
    }

    nlohmann::ordered_json timing;
    timing["partition"] = report.timings.partition_ms;
    timing["pipeline"] = report.timings.pipeline_ms;
    timing["bounds"] = report.timings.bounds_ms;
    timing["total"] = report.timings.total_ms;
    j["timing_ms"] = std::move(timing);
    return j;
}

RunReport report_from_json(const nlohmann::ordered_json& j) {
    RunReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != 1) {
        throw ParseError("report: unsupported schema_version");
    }

    const auto& config = j.at("config");
    report.config.algorithm =
        parse_partition_algorithm(config.at("algorithm").get<std::string>());
    report.config.selector = parse_selector_spec(config.at("selector").get<std::string>());
    report.config.k = config.at("k").get<Index>();
    report.config.r = config.at("r").get<Index>();
    if (config.contains("dims")) {
        report.config.dims = config.at("dims").get<std::vector<Index>>();
    }
    report.config.epsilon = config.at("epsilon").get<double>();
    report.config.max_iters = config.at("max_iters").get<Index>();
    report.config.init = parse_init(config.at("init").get<std::string>());
    report.config.relative_epsilon = config.at("relative_epsilon").get<bool>();
    if (config.contains("seed")) {
        report.config.seed = config.at("seed").get<std::uint64_t>();
    }
    report.config.strict = config.at("strict").get<bool>();
    report.config.with_cur = config.at("cur").get<bool>();
    report.config.threads = config.at("threads").get<int>();
    if (config.contains("generator")) {
        report.config.generator = generator_from_json(config.at("generator"));
        report.config.generator_seed = config.at("generator_seed").get<std::uint64_t>();
    } else {
        report.config.input_path = config.at("input").get<std::string>();
    }

    const auto& matrix = j.at("matrix");
    report.rows = matrix.at("rows").get<Index>();
    report.cols = matrix.at("cols").get<Index>();
    report.frobenius_norm = matrix.at("frobenius_norm").get<double>();

    const auto& partition = j.at("partition");
    report.partition.sets = partition.at("sets").get<std::vector<std::vector<Index>>>();
    report.partition.dims = partition.at("dims").get<std::vector<Index>>();
    // centroids are derived data; verify_report rebuilds them from the matrix

    const auto& trace = j.at("trace");
    report.trace.energies = trace.at("energies").get<std::vector<double>>();
    report.trace.iterations = trace.at("iterations").get<Index>();
    report.trace.converged = trace.at("converged").get<bool>();
    report.trace.k_history = trace.at("k_history").get<std::vector<Index>>();
    report.trace.clamp_events = trace.at("clamp_events").get<Index>();
    report.trace.repair_events = trace.at("repair_events").get<Index>();

    const auto& selection = j.at("selection");
    report.selection.global_indices =
        selection.at("global_indices").get<std::vector<Index>>();
    report.selection.r_achieved = selection.at("r_achieved").get<Index>();
    report.selection.per_set = per_set_from_json(selection.at("per_set"));
    report.selection.warnings = selection.at("warnings").get<std::vector<std::string>>();

    const auto& metrics = j.at("metrics");
    report.id_error_value = metrics.at("id_error").get<double>();
    report.baseline_tail = metrics.at("baseline_tail_error").get<double>();

    for (const auto& b : j.at("bounds")) {
        report.bounds.push_back(bound_from_json(b));
    }

    if (j.contains("cur")) {
        const auto& cur = j.at("cur");
        CurSummary summary;
        summary.column_indices = cur.at("column_indices").get<std::vector<Index>>();
        summary.row_indices = cur.at("row_indices").get<std::vector<Index>>();
        summary.reconstruction_error = cur.at("reconstruction_error").get<double>();
        summary.row_sets = cur.at("row_sets").get<std::vector<std::vector<Index>>>();
        summary.row_dims = cur.at("row_dims").get<std::vector<Index>>();
        summary.row_per_set = per_set_from_json(cur.at("row_per_set"));
        report.cur = std::move(summary);
    }

    if (j.contains("timing_ms")) {
        const auto& timing = j.at("timing_ms");
        report.timings.partition_ms = timing.at("partition").get<double>();
        report.timings.pipeline_ms = timing.at("pipeline").get<double>();
        report.timings.bounds_ms = timing.at("bounds").get<double>();
        report.timings.total_ms = timing.at("total").get<double>();
    }
    return report;
}

std::string report_to_text(const RunReport& report) {
    std::ostringstream out;
    out << std::setprecision(6);
    out << "run: algorithm=" << partition_algorithm_name(report.config.algorithm)
        << " selector=" << selector_spec_to_string(report.config.selector)
        << " k=" << report.config.k << " r=" << report.config.r << "\n";
    out << "matrix: " << report.rows << "x" << report.cols
        << "  |A|_F = " << report.frobenius_norm << "\n";
    out << "partition: k=" << report.partition.k() << " dims=[";
    for (std::size_t i = 0; i < report.partition.dims.size(); ++i) {
        out << (i ? "," : "") << report.partition.dims[i];
    }
    out << "] sizes=[";
    for (std::size_t i = 0; i < report.partition.sets.size(); ++i) {
        out << (i ? "," : "") << report.partition.sets[i].size();
    }
    out << "]\n";
    if (!report.trace.energies.empty()) {
        out << "lloyd: iterations=" << report.trace.iterations
            << " converged=" << (report.trace.converged ? "yes" : "no")
            << " energy " << report.trace.energies.front() << " -> "
            << report.trace.energies.back() << "\n";
    }
    out << "selected columns (1-based):";
    for (const Index j : report.selection.global_indices) out << " " << (j + 1);
    out << "\n";
    for (const std::string& w : report.selection.warnings) {
        out << "warning: " << w << "\n";
    }
    out << "id error = " << report.id_error_value
        << "  (best rank-" << report.config.r << " error = " << report.baseline_tail
        << ")\n";
    if (report.cur) {
        out << "cur: |A - CUR|_F = " << report.cur->reconstruction_error
            << "  rows (1-based):";
        for (const Index i : report.cur->row_indices) out << " " << (i + 1);
        out << "\n";
    }
    out << "bounds:\n";
    for (const BoundReport& b : report.bounds) {
        out << "  [" << (b.satisfied ? "ok" : "FALSIFIED") << "] " << b.name
            << ": lhs=" << b.lhs << " rhs=" << b.rhs << " slack=" << b.slack;
        if (b.ill_conditioned) out << " (ill-conditioned)";
        out << "\n";
    }
    return out.str();
}

VerifyResult verify_report(const Matrix& a, const RunReport& stored,
                           const Tolerances& tol) {
    VerifyResult out;
    if (a.rows() != stored.rows || a.cols() != stored.cols) {
        std::ostringstream msg;
        msg << "verify: matrix is " << a.rows() << "x" << a.cols()
            << " but the report describes " << stored.rows << "x" << stored.cols;
        throw ParameterError(msg.str());
    }

    const auto drift = [&](const char* what, double recomputed, double recorded) {
        const double scale = std::max({1.0, std::abs(recomputed), std::abs(recorded)});
        if (std::abs(recomputed - recorded) > 1e-8 * scale) {
            std::ostringstream msg;
            msg << what << ": recomputed " << recomputed << " differs from recorded "
                << recorded;
            out.notes.push_back(msg.str());
            out.consistent = false;
        }
    };

    // Rebuild the partition; centroids are recomputed from the stored sets.
    Partition p;
    p.sets = stored.partition.sets;
    p.dims = stored.partition.dims;
    Index clamped = 0;
    p.centroids = update_centroids_fixed(a, p.sets, p.dims, 1, &clamped);
    if (clamped > 0) {
        out.notes.push_back("verify: stored dims exceed a set's rank; report and matrix disagree");
        out.consistent = false;
        for (std::size_t i = 0; i < p.centroids.size(); ++i) {
            p.dims[i] = p.centroids[i].cols();
        }
    }
    validate_partition(a, p);

    PipelineResult sel;
    sel.global_indices = stored.selection.global_indices;
    sel.c = gather_columns(a, sel.global_indices);
    sel.per_set = stored.selection.per_set;
    sel.r_achieved = sel.c.cols();
    sel.warnings = stored.selection.warnings;

    out.id_error_recomputed = id_error(a, sel.c, tol);
    drift("id_error", out.id_error_recomputed, stored.id_error_value);

    std::optional<CurResult> cur;
    if (stored.cur) {
        if (stored.cur->column_indices != stored.selection.global_indices) {
            out.notes.push_back("verify: cur column indices differ from the main selection");
            out.consistent = false;
        }
        CurResult c;
        c.column_partition = p;
        c.column_run = sel;
        c.c = sel.c;
        c.column_indices = stored.cur->column_indices;
        c.row_indices = stored.cur->row_indices;

        const Matrix at = a.transpose();
        c.row_partition.sets = stored.cur->row_sets;
        c.row_partition.dims = stored.cur->row_dims;
        Index row_clamped = 0;
        c.row_partition.centroids = update_centroids_fixed(
            at, c.row_partition.sets, c.row_partition.dims, 1, &row_clamped);
        if (row_clamped > 0) {
            out.notes.push_back("verify: stored cur row dims exceed a set's rank");
            out.consistent = false;
            for (std::size_t i = 0; i < c.row_partition.centroids.size(); ++i) {
                c.row_partition.dims[i] = c.row_partition.centroids[i].cols();
            }
        }
        validate_partition(at, c.row_partition);
        c.row_run.global_indices = stored.cur->row_indices;
        c.row_run.c = gather_columns(at, stored.cur->row_indices);
        c.row_run.per_set = stored.cur->row_per_set;
        c.row_run.r_achieved = c.row_run.c.cols();
        c.r = c.row_run.c.transpose();

        const Matrix x = c.c.completeOrthogonalDecomposition().solve(a);
        c.u = c.row_run.c.completeOrthogonalDecomposition()
                  .solve(x.transpose())
                  .transpose();
        c.reconstruction_error = (a - c.c * c.u * c.r).norm();
        drift("cur reconstruction_error", c.reconstruction_error,
              stored.cur->reconstruction_error);
        cur = std::move(c);
    }

    out.bounds = evaluate_bounds(a, p, sel, stored.config.r, cur, tol);

    // Compare the recomputed reports with the recorded ones by name.
    for (const BoundReport& fresh : out.bounds) {
        const BoundReport* recorded = nullptr;
        for (const BoundReport& b : stored.bounds) {
            if (b.name == fresh.name) {
                recorded = &b;
                break;
            }
        }
        if (!recorded) {
            out.notes.push_back("verify: bound '" + fresh.name + "' missing from the report");
            out.consistent = false;
            continue;
        }
        drift((fresh.name + ".lhs").c_str(), fresh.lhs, recorded->lhs);
        drift((fresh.name + ".rhs").c_str(), fresh.rhs, recorded->rhs);
    }
    return out;
}

Tolerances tolerances_from_env() {
    Tolerances tol;
    const auto read = [](const char* name, double& target) {
        if (const char* text = std::getenv(name)) {
            char* end = nullptr;
            const double value = std::strtod(text, &end);
            if (end == text || *end != '\0' || !(value > 0.0)) {
                throw ParameterError(std::string(name) + ": expected a positive number");
            }
            target = value;
        }
    };
    read("PCSS_TOL_RECONSTRUCTION", tol.reconstruction);
    read("PCSS_TOL_ORTHONORMALITY", tol.orthonormality);
    read("PCSS_TOL_QR_RANK", tol.qr_rank);
    read("PCSS_TOL_RESIDUAL_CLAMP", tol.residual_clamp);
    read("PCSS_TOL_INDEPENDENCE", tol.independence);
    read("PCSS_TOL_BOUND_SLACK", tol.bound_slack);
    read("PCSS_TOL_LLOYD_SLACK", tol.lloyd_slack);
    read("PCSS_TOL_CONDITIONING", tol.conditioning);
    if (const char* text = std::getenv("PCSS_TOL_SAMPLING_RETRIES")) {
        char* end = nullptr;
        const long value = std::strtol(text, &end, 10);
        if (end == text || *end != '\0' || value < 1) {
            throw ParameterError("PCSS_TOL_SAMPLING_RETRIES: expected a positive integer");
        }
        tol.sampling_retries = static_cast<int>(value);
    }
    return tol;
}

} // namespace pcss
