// Command-line front end: run (partition + select + certify bounds),
// generate (synthetic inputs), verify (re-check a saved report).
//
// Exit codes: 0 success, 1 error, 2 at least one falsified bound.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pcss/matrix_io.hpp"
#include "pcss/runner.hpp"

namespace {

using namespace pcss;

void emit_report(const RunReport& report) {
    std::string text;
    if (report.config.format == ReportFormat::json) {
        text = report_to_json(report).dump(2);
        text.push_back('\n');
    } else {
        text = report_to_text(report);
    }
    if (report.config.report_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(report.config.report_path);
        if (!out) {
            throw ParseError(report.config.report_path + ": cannot open for writing");
        }
        out << text;
    }
}

int do_run(const RunConfig& config) {
    const RunReport report = run(config, tolerances_from_env());
    emit_report(report);
    if (!all_bounds_satisfied(report)) {
        std::cerr << "pcss: at least one bound was falsified\n";
        return 2;
    }
    return 0;
}

int do_verify(const std::string& input, const std::string& report_path) {
    const Matrix a = load_matrix(input);
    std::ifstream in(report_path);
    if (!in) {
        throw ParseError(report_path + ": cannot open for reading");
    }
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(report_path + ": " + e.what());
    }
    const RunReport stored = report_from_json(j);
    const VerifyResult result = verify_report(a, stored, tolerances_from_env());

    for (const std::string& note : result.notes) {
        std::cout << "note: " << note << "\n";
    }
    bool all_ok = true;
    for (const BoundReport& b : result.bounds) {
        std::cout << "[" << (b.satisfied ? "ok" : "FALSIFIED") << "] " << b.name
                  << ": lhs=" << b.lhs << " rhs=" << b.rhs;
        if (b.ill_conditioned) std::cout << " (ill-conditioned)";
        std::cout << "\n";
        all_ok = all_ok && b.satisfied;
    }
    std::cout << "id error (recomputed) = " << result.id_error_recomputed << "\n";
    if (!all_ok) return 2;
    if (!result.consistent) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition-based column subset selection"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "partition, select columns, check bounds");
    RunConfig config;
    std::string algorithm = "none";
    std::string selector = "cpqr";
    std::string init = "balanced";
    std::string format = "json";
    std::string gen_kind;
    GeneratorParams gen;
    std::vector<Index> dims;
    std::vector<double> gen_sigma;
    bool seed_given = false;
    std::uint64_t seed_value = 0;

    run_cmd->add_option("--input", config.input_path, "matrix file (.csv or PMAT1 binary)");
    run_cmd->add_option("--generate", gen_kind,
                        "generator kind instead of a file (lowrank-noise|clustered|spectrum)");
    run_cmd->add_option("--gen-rows", gen.rows, "generator rows");
    run_cmd->add_option("--gen-cols", gen.cols, "generator cols");
    run_cmd->add_option("--gen-rank", gen.true_rank, "lowrank-noise: exact rank");
    run_cmd->add_option("--gen-noise", gen.noise_sigma, "lowrank-noise: noise level");
    run_cmd->add_option("--gen-clusters", gen.clusters, "clustered: cluster count");
    run_cmd->add_option("--gen-subdim", gen.subspace_dim, "clustered: subspace dimension");
    run_cmd->add_option("--gen-angle", gen.angle_deg, "clustered: angle in degrees");
    run_cmd->add_option("--gen-sigma", gen_sigma, "spectrum: singular values")
        ->delimiter(',');
    run_cmd->add_option("--gen-seed", config.generator_seed, "generator seed");
    run_cmd->add_option("--algorithm", algorithm, "none|cvod|adapt-cvod")
        ->capture_default_str();
    run_cmd->add_option("--selector", selector,
                        "deim|cpqr|lupp|norm:seed=N|leverage:seed=N,k=K")
        ->capture_default_str();
    run_cmd->add_option("--k", config.k, "number of Voronoi sets");
    run_cmd->add_option("--r", config.r, "target rank / number of columns");
    run_cmd->add_option("--dims", dims, "per-set dimensions (cvod only)")->delimiter(',');
    run_cmd->add_option("--epsilon", config.epsilon, "energy improvement stop threshold")
        ->capture_default_str();
    run_cmd->add_option("--max-iters", config.max_iters, "iteration cap")
        ->capture_default_str();
    run_cmd->add_option("--init", init, "balanced|uniform")->capture_default_str();
    run_cmd->add_flag("--relative-epsilon", config.relative_epsilon,
                      "compare relative instead of absolute energy improvement");
    run_cmd->add_option("--seed", seed_value, "run seed")->each([&](const std::string&) {
        seed_given = true;
    });
    run_cmd->add_flag("--strict", config.strict, "abort instead of shrinking allocations");
    run_cmd->add_flag("--cur", config.with_cur, "also build a CUR factorization");
    run_cmd->add_option("--threads", config.threads, "parallel per-set factorizations")
        ->capture_default_str();
    run_cmd->add_option("--report", config.report_path, "report file (default stdout)");
    run_cmd->add_option("--format", format, "json|text")->capture_default_str();

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "write a synthetic matrix");
    std::string out_path;
    std::string g_kind;
    GeneratorParams g;
    std::vector<double> g_sigma;
    std::uint64_t g_seed = 0;
    gen_cmd->add_option("--kind", g_kind, "lowrank-noise|clustered|spectrum")->required();
    gen_cmd->add_option("--rows", g.rows, "rows")->required();
    gen_cmd->add_option("--cols", g.cols, "cols")->required();
    gen_cmd->add_option("--rank", g.true_rank, "lowrank-noise: exact rank");
    gen_cmd->add_option("--noise", g.noise_sigma, "lowrank-noise: noise level");
    gen_cmd->add_option("--clusters", g.clusters, "clustered: cluster count");
    gen_cmd->add_option("--subdim", g.subspace_dim, "clustered: subspace dimension");
    gen_cmd->add_option("--angle", g.angle_deg, "clustered: angle in degrees");
    gen_cmd->add_option("--sigma", g_sigma, "spectrum: singular values")->delimiter(',');
    gen_cmd->add_option("--seed", g_seed, "generator seed");
    gen_cmd->add_option("--out", out_path, "output path (.csv or binary)")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "re-check bounds from a saved report");
    std::string v_input;
    std::string v_report;
    verify_cmd->add_option("--input", v_input, "matrix file")->required();
    verify_cmd->add_option("--report", v_report, "report JSON from a previous run")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            config.algorithm = parse_partition_algorithm(algorithm);
            config.selector = parse_selector_spec(selector);
            if (init == "balanced") config.init = InitKind::random_balanced;
            else if (init == "uniform") config.init = InitKind::random_uniform;
            else throw ParameterError("--init must be balanced or uniform");
            if (format == "json") config.format = ReportFormat::json;
            else if (format == "text") config.format = ReportFormat::text;
            else throw ParameterError("--format must be json or text");
            if (!dims.empty()) config.dims = dims;
            if (seed_given) config.seed = seed_value;
            if (!gen_kind.empty()) {
                gen.kind = parse_generator_kind(gen_kind);
                gen.sigma = gen_sigma;
                config.generator = gen;
            }
            return do_run(config);
        }
        if (*gen_cmd) {
            g.kind = parse_generator_kind(g_kind);
            g.sigma = g_sigma;
            save_matrix(out_path, generate(g, g_seed));
            std::cout << "wrote " << describe(g) << " to " << out_path << "\n";
            return 0;
        }
        if (*verify_cmd) {
            return do_verify(v_input, v_report);
        }
    } catch (const pcss::Error& e) {
        std::cerr << "pcss: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "pcss: unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
