#pragma once

//
// End-to-end orchestration: load or generate a matrix, partition it, run
// the selection pipeline, evaluate every applicable bound, and emit a
// machine-readable report. Reports round-trip through JSON losslessly
// (timings are excluded from determinism guarantees).
//

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcss/bounds.hpp"
#include "pcss/generators.hpp"
#include "pcss/pipeline.hpp"

namespace pcss {

enum class ReportFormat { json, text };

struct RunConfig {
    // Exactly one input source: a file path or a generator.
    std::string input_path;
    std::optional<GeneratorParams> generator;
    std::uint64_t generator_seed = 0;

    PartitionAlgorithm algorithm = PartitionAlgorithm::none;
    SelectorSpec selector;
    Index k = 1;
    Index r = 1;
    std::optional<std::vector<Index>> dims; // cvod only
    double epsilon = 1e-8;
    Index max_iters = 100;
    InitKind init = InitKind::random_balanced;
    bool relative_epsilon = false;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    bool with_cur = false;
    int threads = 1;

    std::string report_path; // empty writes to stdout
    ReportFormat format = ReportFormat::json;
};

struct PhaseTimings {
    double partition_ms = 0.0;
    double pipeline_ms = 0.0;
    double bounds_ms = 0.0;
    double total_ms = 0.0;
};

struct CurSummary {
    std::vector<Index> column_indices;
    std::vector<Index> row_indices;
    double reconstruction_error = 0.0;
    // Row-side run data (over the columns of A^T), kept so a saved report
    // carries everything needed to re-check the CUR bound.
    std::vector<std::vector<Index>> row_sets;
    std::vector<Index> row_dims;
    std::vector<PerSetSelection> row_per_set;
};

struct RunReport {
    int schema_version = 1;
    RunConfig config;
    Index rows = 0;
    Index cols = 0;
    double frobenius_norm = 0.0;
    Partition partition; // centroids live in memory only, not in the JSON
    LloydTrace trace;
    PipelineResult selection;
    double id_error_value = 0.0;
    double baseline_tail = 0.0; // ||A - A_r||_F
    std::vector<BoundReport> bounds;
    std::optional<CurSummary> cur;
    PhaseTimings timings;
};

// Loads/generates the input and delegates to run_on_matrix.
RunReport run(const RunConfig& config, const Tolerances& tol = {});
RunReport run_on_matrix(const RunConfig& config, const Matrix& a,
                        const Tolerances& tol = {});

bool all_bounds_satisfied(const RunReport& report);

nlohmann::ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::ordered_json& j);
std::string report_to_text(const RunReport& report); // 1-based indices

struct VerifyResult {
    std::vector<BoundReport> bounds; // recomputed from the matrix + report
    double id_error_recomputed = 0.0;
    bool consistent = true;              // recomputed values match the stored ones
    std::vector<std::string> notes;      // drift and structural findings
};

// Re-checks a saved run against the matrix it came from.
VerifyResult verify_report(const Matrix& a, const RunReport& stored,
                           const Tolerances& tol = {});

// Tolerances with PCSS_TOL_* environment overrides applied (the only
// configuration the environment may override).
Tolerances tolerances_from_env();

} // namespace pcss
