#include "mgraphon/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mgraphon/baselines.hpp"
#include "mgraphon/io.hpp"
#include "mgraphon/rng.hpp"
#include "mgraphon/stats.hpp"

namespace mgraphon {

std::string arm_name(Arm a) {
    switch (a) {
        case Arm::Proposed: return "proposed";
        case Arm::Oracle1: return "oracle1";
        case Arm::Oracle2: return "oracle2";
        case Arm::OracleRep: return "oracle_rep";
        case Arm::Usvt: return "usvt";
        case Arm::Nbs: return "nbs";
        case Arm::PerEdge: return "per_edge";
        case Arm::PerNetwork: return "per_network";
    }
    return "?";
}

Arm arm_from_name(const std::string& name) {
    for (Arm a : {Arm::Proposed, Arm::Oracle1, Arm::Oracle2, Arm::OracleRep, Arm::Usvt, Arm::Nbs,
                  Arm::PerEdge, Arm::PerNetwork})
        if (arm_name(a) == name) return a;
    throw std::invalid_argument("unknown arm: " + name);
}

Vector oracle_positions_from_latents(const Vector& x) {
    const int n = static_cast<int>(x.size());
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] != x[b] ? x[a] < x[b] : a < b; });
    Vector pos(n);
    for (int r = 0; r < n; ++r)
        pos[idx[static_cast<std::size_t>(r)]] = static_cast<double>(r + 1) / static_cast<double>(n + 1);
    return pos;
}

MseSplit mse_split(const FitResult& fit, const MultiGraphonSpec& spec, const Vector& x,
                   const Vector& z, double z_threshold) {
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(z.size());
    if (fit.n != n || fit.m != m) throw std::invalid_argument("mse: shape mismatch");
    double acc_all = 0.0, acc_low = 0.0, acc_high = 0.0;
    long long cnt_all = 0, cnt_low = 0, cnt_high = 0;
    for (int l = 0; l < m; ++l) {
        const Matrix fh = fit.f_hat_layer(l);
        double layer_acc = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double d = fh(i, j) - evaluate(spec, x[i], x[j], z[l]);
                layer_acc += d * d;
            }
        }
        const long long pairs = static_cast<long long>(n) * (n - 1);
        acc_all += layer_acc;
        cnt_all += pairs;
        if (z[l] < z_threshold) {
            acc_low += layer_acc;
            cnt_low += pairs;
        } else {
            acc_high += layer_acc;
            cnt_high += pairs;
        }
    }
    MseSplit out;
    out.overall = cnt_all > 0 ? acc_all / static_cast<double>(cnt_all) : 0.0;
    out.low = cnt_low > 0 ? acc_low / static_cast<double>(cnt_low) : out.overall;
    out.high = cnt_high > 0 ? acc_high / static_cast<double>(cnt_high) : out.overall;
    return out;
}

double mse(const FitResult& fit, const MultiGraphonSpec& spec, const Vector& x, const Vector& z) {
    return mse_split(fit, spec, x, z).overall;
}

namespace {

std::string kind_name(GraphonKind k) {
    switch (k) {
        case GraphonKind::F1: return "f1";
        case GraphonKind::F2: return "f2";
        case GraphonKind::F3: return "f3";
        case GraphonKind::Grid: return "grid";
    }
    return "?";
}

std::string mode_name(SamplingMode m) {
    switch (m) {
        case SamplingMode::Replicated: return "replicated";
        case SamplingMode::Dynamic: return "dynamic";
        case SamplingMode::CrossSection: return "cross_section";
    }
    return "?";
}

std::string derive_id(const Scenario& s) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s_b%.3g_n%d_m%d_%s", kind_name(s.spec.kind).c_str(),
                  s.spec.beta, s.n, s.m, mode_name(s.mode).c_str());
    return buf;
}

FitResult matrix_as_fit(const GraphCollection& g, Matrix p) {
    FitResult fit;
    fit.kind = FitKind::Replicated;
    fit.n = g.n;
    fit.m = g.m;
    fit.rho_hat = estimate_density(g);
    fit.constant_in_layers = true;
    fit.P_layers.assign(1, std::move(p));
    return fit;
}

// netpos fed to the fitting step; the truth is always scored at the true z
Vector fitting_netpos(const Scenario& s, const LatentDraw& lat) {
    switch (s.mode) {
        case SamplingMode::Dynamic: return lat.z;  // observed time points
        case SamplingMode::CrossSection: return lat.z_check;
        case SamplingMode::Replicated: {
            Vector t(s.m);  // pseudo-times for the regression-over-layers arms
            for (int l = 0; l < s.m; ++l)
                t[l] = static_cast<double>(l + 1) / static_cast<double>(s.m);
            return t;
        }
    }
    return lat.z;
}

void validate_scenario(const Scenario& s) {
    if (s.n < 2 || s.m < 1) throw std::invalid_argument("scenario: need n >= 2, m >= 1");
    if (s.replications < 1) throw std::invalid_argument("scenario: need replications >= 1");
    if (s.arms.empty()) throw std::invalid_argument("scenario: no arms selected");
    for (Arm a : s.arms) {
        if (a == Arm::Oracle2 && s.mode != SamplingMode::CrossSection)
            throw std::invalid_argument("scenario: oracle2 requires cross_section mode");
        if (a == Arm::PerEdge && s.m < 2)
            throw std::invalid_argument("scenario: per_edge requires m >= 2");
    }
}

}  // namespace

ScenarioRun run_scenario(const Scenario& s) {
    validate_scenario(s);
    const double rho = s.rho.value_or(1.0 / sup_on_grid(s.spec));
    const int reps = s.replications;

    ScenarioRun run;
    run.scenario_id = s.id.empty() ? derive_id(s) : s.id;

    std::map<std::string, std::vector<MseSplit>> splits;
    std::map<std::string, double> runtimes;
    for (Arm a : s.arms) {
        splits[arm_name(a)].resize(static_cast<std::size_t>(reps));
        runtimes[arm_name(a)] = 0.0;
    }

    // replications run serially; the heavy inner loops are parallel
    for (int rep = 0; rep < reps; ++rep) {
        const std::uint64_t rep_seed = stream_seed(s.seed, "replication", static_cast<std::uint64_t>(rep));
        const SampleResult data = sample(s.spec, s.n, s.m, rho, s.sigma_cov, s.mode, rep_seed);
        const GraphCollection& g = data.graphs;
        const LatentDraw& lat = data.latents;
        const Vector netpos = fitting_netpos(s, lat);
        const Vector oracle_pos = oracle_positions_from_latents(lat.x);

        // the embedded positions are shared by every non-oracle arm
        Vector embedded;
        bool have_embedded = false;
        auto embedded_positions = [&]() -> const Vector& {
            if (!have_embedded) {
                const DistanceMatrix d = distance_matrix(g, LayerSplit::first_half(), s.distance_e);
                EmbedOptions opts = s.embed;
                opts.seed = stream_seed(rep_seed, "embedding");
                embedded = embed_1d(d, opts).positions;
                have_embedded = true;
            }
            return embedded;
        };

        for (Arm a : s.arms) {
            const auto t0 = std::chrono::steady_clock::now();
            FitResult fit;
            switch (a) {
                case Arm::Proposed:
                    fit = s.mode == SamplingMode::Replicated
                              ? fit_replicated(g, embedded_positions(), s.smoother)
                              : fit_multigraphon(g, embedded_positions(), netpos, s.smoother);
                    break;
                case Arm::Oracle1:
                    fit = fit_multigraphon(g, oracle_pos, lat.z, s.smoother);
                    break;
                case Arm::Oracle2:
                    fit = fit_multigraphon(g, oracle_pos, lat.z_check, s.smoother);
                    break;
                case Arm::OracleRep:
                    fit = fit_replicated(g, oracle_pos, s.smoother);
                    break;
                case Arm::Usvt:
                    fit = matrix_as_fit(g, usvt(g.aggregated()));
                    break;
                case Arm::Nbs:
                    fit = matrix_as_fit(g, nbs(g.aggregated()));
                    break;
                case Arm::PerEdge:
                    fit = fit_per_edge(g, netpos, s.smoother);
                    break;
                case Arm::PerNetwork:
                    fit = fit_per_network(g, netpos, s.smoother);
                    break;
            }
            splits[arm_name(a)][static_cast<std::size_t>(rep)] = mse_split(fit, s.spec, lat.x, lat.z);
            runtimes[arm_name(a)] +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (rep == reps - 1) run.exemplar_fits.emplace(arm_name(a), std::move(fit));
        }
    }

    for (Arm a : s.arms) {
        const auto& v = splits[arm_name(a)];
        MseRecord rec;
        rec.scenario = run.scenario_id;
        rec.arm = arm_name(a);
        rec.replications = reps;
        std::vector<double> overall;
        for (const auto& sp : v) {
            rec.mse_low_z += sp.low;
            rec.mse_high_z += sp.high;
            rec.mse_overall += sp.overall;
            overall.push_back(sp.overall);
        }
        rec.mse_low_z /= reps;
        rec.mse_high_z /= reps;
        rec.mse_overall /= reps;
        if (s.mode == SamplingMode::Replicated) {
            // no split in replicated mode
            rec.mse_low_z = rec.mse_overall;
            rec.mse_high_z = rec.mse_overall;
        }
        rec.std_dev = sample_sd(overall);
        rec.runtime_seconds = runtimes[arm_name(a)];
        run.records.push_back(std::move(rec));
    }
    return run;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

namespace {

// Published comparison values for SBA and SAS (mean, sd; x1e-3 scale), quoted
// for context only and clearly labeled source=paper in reports.
struct PaperRow {
    GraphonKind kind;
    double beta;
    bool replicated;
    int n, m;
    double sba, sba_sd, sas, sas_sd;
};

const PaperRow kPaperRows[] = {
    {GraphonKind::F1, 0.0, true, 50, 150, 339.40, 185.10, 83.60, 60.80},
    {GraphonKind::F1, 0.0, true, 100, 150, 240.50, 118.20, 63.30, 43.60},
    {GraphonKind::F1, 0.0, true, 150, 150, 272.80, 215.20, 26.00, 22.90},
    {GraphonKind::F1, 0.0, true, 150, 50, 181.90, 214.80, 40.40, 46.40},
    {GraphonKind::F1, 0.0, true, 150, 100, 186.10, 199.80, 24.40, 17.80},
    {GraphonKind::F2, 0.0, true, 50, 150, 7.90, 2.80, 11.50, 1.50},
    {GraphonKind::F2, 0.0, true, 100, 150, 5.40, 3.00, 11.10, 1.20},
    {GraphonKind::F2, 0.0, true, 150, 150, 6.00, 4.50, 10.40, 0.87},
    {GraphonKind::F2, 0.0, true, 150, 50, 4.20, 3.20, 10.20, 0.72},
    {GraphonKind::F2, 0.0, true, 150, 100, 3.00, 3.10, 10.40, 1.00},
    {GraphonKind::F3, 0.0, true, 50, 150, 2.70, 7.20, 14.70, 13.80},
    {GraphonKind::F3, 0.0, true, 100, 150, 0.25, 0.05, 10.60, 10.70},
    {GraphonKind::F3, 0.0, true, 150, 150, 0.09, 0.02, 9.70, 12.20},
    {GraphonKind::F3, 0.0, true, 150, 50, 0.15, 0.009, 13.20, 13.20},
    {GraphonKind::F3, 0.0, true, 150, 100, 0.16, 0.04, 11.40, 12.50},
    {GraphonKind::F1, 0.35, false, 50, 150, 248.50, 178.80, 75.80, 45.40},
    {GraphonKind::F1, 0.35, false, 100, 150, 159.80, 164.10, 58.40, 38.80},
    {GraphonKind::F1, 0.35, false, 150, 150, 157.30, 151.10, 38.90, 22.70},
    {GraphonKind::F1, 0.35, false, 150, 50, 91.70, 88.60, 40.40, 22.40},
    {GraphonKind::F1, 0.35, false, 150, 100, 130.00, 132.70, 40.30, 22.70},
    {GraphonKind::F2, 0.5, false, 50, 150, 4.80, 1.70, 6.70, 1.70},
    {GraphonKind::F2, 0.5, false, 100, 150, 2.90, 1.80, 6.30, 1.70},
    {GraphonKind::F2, 0.5, false, 150, 150, 3.00, 1.90, 5.60, 1.50},
    {GraphonKind::F2, 0.5, false, 150, 50, 2.40, 1.30, 5.60, 1.50},
    {GraphonKind::F2, 0.5, false, 150, 100, 1.80, 1.30, 5.60, 1.50},
    {GraphonKind::F3, 0.6, false, 50, 150, 2.90, 2.00, 13.40, 9.50},
    {GraphonKind::F3, 0.6, false, 100, 150, 51.30, 6.50, 53.60, 5.90},
    {GraphonKind::F3, 0.6, false, 150, 150, 2.40, 1.70, 13.90, 9.00},
    {GraphonKind::F3, 0.6, false, 150, 50, 2.40, 1.70, 15.80, 9.90},
    {GraphonKind::F3, 0.6, false, 150, 100, 2.30, 1.90, 13.80, 8.70},
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// parse the scenario id back into the fields needed to match a paper row
bool match_paper_row(const std::string& scenario_id, const PaperRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s_b%.3g_n%d_m%d_%s",
                  kind_name(row.kind).c_str(), row.beta, row.n, row.m,
                  row.replicated ? "replicated" : "cross_section");
    return scenario_id == buf;
}

}  // namespace

std::vector<std::string> emit_report(const ScenarioRun& run, ReportFormat format,
                                     const std::string& out_dir, bool with_paper_context,
                                     bool write_timings) {
    if (run.records.empty()) throw std::invalid_argument("emit_report: no records");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    auto context_rows = [&]() {
        std::vector<MseRecord> rows;
        if (!with_paper_context) return rows;
        for (const auto& pr : kPaperRows) {
            if (!match_paper_row(run.scenario_id, pr)) continue;
            for (const auto& [name, value, sd] :
                 {std::tuple<const char*, double, double>{"sba", pr.sba, pr.sba_sd},
                  std::tuple<const char*, double, double>{"sas", pr.sas, pr.sas_sd}}) {
                MseRecord rec;
                rec.scenario = run.scenario_id;
                rec.arm = name;
                rec.replications = 50;
                rec.mse_overall = value * 1e-3;
                rec.mse_low_z = rec.mse_high_z = rec.mse_overall;
                rec.std_dev = sd * 1e-3;
                rows.push_back(std::move(rec));
            }
        }
        return rows;
    };

    if (format == ReportFormat::DelimitedTable) {
        const std::string path = (fs::path(out_dir) / "report.tsv").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_report: cannot write " + path);
        out << "scenario\tarm\treplications\tmse_low_z_x1e3\tmse_high_z_x1e3\t"
               "mse_overall_x1e3\tstd_dev_x1e3\tsource\n";
        auto row = [&](const MseRecord& r, const char* source) {
            out << r.scenario << '\t' << r.arm << '\t' << r.replications << '\t'
                << fmt(r.mse_low_z * 1e3) << '\t' << fmt(r.mse_high_z * 1e3) << '\t'
                << fmt(r.mse_overall * 1e3) << '\t' << fmt(r.std_dev * 1e3) << '\t' << source
                << '\n';
        };
        for (const auto& r : run.records) row(r, "ours");
        for (const auto& r : context_rows()) row(r, "paper");
        written.push_back(path);
    } else if (format == ReportFormat::KeyValueRecords) {
        const std::string path = (fs::path(out_dir) / "report.kv").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_report: cannot write " + path);
        int k = 0;
        auto block = [&](const MseRecord& r, const char* source) {
            const std::string p = "record" + std::to_string(k++) + ".";
            out << p << "scenario=" << r.scenario << '\n'
                << p << "arm=" << r.arm << '\n'
                << p << "replications=" << r.replications << '\n'
                << p << "mse_low_z_x1e3=" << fmt(r.mse_low_z * 1e3) << '\n'
                << p << "mse_high_z_x1e3=" << fmt(r.mse_high_z * 1e3) << '\n'
                << p << "mse_overall_x1e3=" << fmt(r.mse_overall * 1e3) << '\n'
                << p << "std_dev_x1e3=" << fmt(r.std_dev * 1e3) << '\n'
                << p << "source=" << source << '\n';
        };
        for (const auto& r : run.records) block(r, "ours");
        for (const auto& r : context_rows()) block(r, "paper");
        written.push_back(path);
    } else {
        for (const auto& [arm, fit] : run.exemplar_fits) {
            const int layers = fit.constant_in_layers ? 1 : fit.m;
            double vmax = 0.0;
            for (int l = 0; l < layers; ++l) vmax = std::max(vmax, fit.f_hat_layer(l).maxCoeff());
            for (int l = 0; l < layers; ++l) {
                const Matrix fh = fit.f_hat_layer(l);
                const std::string base =
                    (fs::path(out_dir) / (run.scenario_id + "_" + arm + "_layer" + std::to_string(l)))
                        .string();
                write_matrix(fh, base + ".txt");
                write_pgm(fh, base + ".pgm", vmax);
                written.push_back(base + ".txt");
                written.push_back(base + ".pgm");
            }
        }
    }

    if (write_timings) {
        const std::string path = (fs::path(out_dir) / "timings.tsv").string();
        std::ofstream out(path);
        out << "scenario\tarm\truntime_seconds\n";
        for (const auto& r : run.records)
            out << r.scenario << '\t' << r.arm << '\t' << fmt(r.runtime_seconds) << '\n';
        written.push_back(path);
    }
    return written;
}

std::vector<MseRecord> read_report_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_report_table: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_report_table: empty file");
    std::vector<MseRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        MseRecord r;
        std::string low, high, overall, sd, source;
        ss >> r.scenario >> r.arm >> r.replications >> low >> high >> overall >> sd >> source;
        if (!ss) throw std::runtime_error("read_report_table: malformed row: " + line);
        r.mse_low_z = std::stod(low) * 1e-3;
        r.mse_high_z = std::stod(high) * 1e-3;
        r.mse_overall = std::stod(overall) * 1e-3;
        r.std_dev = std::stod(sd) * 1e-3;
        if (source == "paper") continue;  // context rows are not ours
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mgraphon
