#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgraphon/distance.hpp"
#include "mgraphon/embedding.hpp"
#include "mgraphon/model.hpp"
#include "mgraphon/smoother.hpp"

namespace mgraphon {

enum class Arm { Proposed, Oracle1, Oracle2, OracleRep, Usvt, Nbs, PerEdge, PerNetwork };

std::string arm_name(Arm a);
Arm arm_from_name(const std::string& name);

struct Scenario {
    std::string id;  // derived from the contents when empty
    MultiGraphonSpec spec;
    int n = 0;
    int m = 0;
    std::optional<double> rho;  // default: 1 / sup f (grid-estimated)
    SamplingMode mode = SamplingMode::Replicated;
    double sigma_cov = 0.28;
    std::vector<Arm> arms;
    int replications = 5;
    std::uint64_t seed = 0;
    SmootherConfig smoother;
    EmbedOptions embed;
    int distance_e = 1;
};

struct MseRecord {
    std::string scenario;
    std::string arm;
    int replications = 0;
    double mse_low_z = 0.0;   // layers with z < 0.8
    double mse_high_z = 0.0;  // layers with z >= 0.8
    double mse_overall = 0.0;
    double std_dev = 0.0;  // across replications, of the overall MSE
    double runtime_seconds = 0.0;  // wall clock; only the timings sidecar reports it
};

struct MseSplit {
    double overall = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Mean over i != j and all layers of (f_hat - f(x_i, x_j; z_l))^2, plus the
// same averages restricted to z_l < 0.8 and z_l >= 0.8. Values are on the raw
// scale; reports multiply by 1e3.
MseSplit mse_split(const FitResult& fit, const MultiGraphonSpec& spec, const Vector& x,
                   const Vector& z, double z_threshold = 0.8);
double mse(const FitResult& fit, const MultiGraphonSpec& spec, const Vector& x, const Vector& z);

// Oracle nodal positions assigned by the rank of the true latent positions:
// the node with the r-th smallest x gets r/(n+1).
Vector oracle_positions_from_latents(const Vector& x);

struct ScenarioRun {
    std::string scenario_id;
    std::vector<MseRecord> records;
    // last replication's fit per arm, kept for heatmap reports
    std::map<std::string, FitResult> exemplar_fits;
};

// Runs every arm on the same sampled data within each replication and
// aggregates across replications. Deterministic given the scenario seed,
// regardless of worker count.
ScenarioRun run_scenario(const Scenario& s);

enum class ReportFormat { DelimitedTable, KeyValueRecords, HeatmapGrid };

// Writes deterministic report files into out_dir and returns their paths.
// with_paper_context appends published SBA/SAS values (labeled source=paper)
// for scenarios matching a published table row. write_timings adds a
// timings.tsv sidecar with wall-clock runtimes, which is the one output that
// is not byte-reproducible.
std::vector<std::string> emit_report(const ScenarioRun& run, ReportFormat format,
                                     const std::string& out_dir,
                                     bool with_paper_context = false,
                                     bool write_timings = false);

std::vector<MseRecord> read_report_table(const std::string& path);

}  // namespace mgraphon
