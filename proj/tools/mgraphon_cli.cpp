// mgraphon command line: simulate graph collections, estimate distances,
// embed nodes, fit the generating function, run benchmarks, resample
// statistics and compute bootstrap confidence bands.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mgraphon/baselines.hpp"
#include "mgraphon/bench.hpp"
#include "mgraphon/distance.hpp"
#include "mgraphon/embedding.hpp"
#include "mgraphon/io.hpp"
#include "mgraphon/model.hpp"
#include "mgraphon/netstats.hpp"
#include "mgraphon/parallel.hpp"
#include "mgraphon/smoother.hpp"

namespace fs = std::filesystem;
using namespace mgraphon;

namespace {

SamplingMode parse_mode(const std::string& s) {
    if (s == "replicated") return SamplingMode::Replicated;
    if (s == "dynamic") return SamplingMode::Dynamic;
    if (s == "cross_section") return SamplingMode::CrossSection;
    throw std::invalid_argument("unknown mode: " + s);
}

MultiGraphonSpec spec_from_options(const std::string& spec_path, const std::string& kind,
                                   double beta) {
    if (!spec_path.empty()) return read_spec_config(spec_path);
    if (kind == "f1") return MultiGraphonSpec::f1(beta);
    if (kind == "f2") return MultiGraphonSpec::f2(beta);
    if (kind == "f3") return MultiGraphonSpec::f3(beta);
    throw std::invalid_argument("unknown kind: " + kind + " (use --spec for grid kernels)");
}

struct SmootherFlags {
    std::string method = "nadaraya_watson";
    std::string kernel = "epanechnikov";
    double bw_x = 0.0;  // 0 = auto
    double bw_z = 0.0;
    std::string link = "identity";
    bool cv = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--method", method, "nadaraya_watson|local_linear");
        cmd->add_option("--kernel", kernel, "uniform|epanechnikov|gaussian");
        cmd->add_option("--bw-x", bw_x, "position bandwidth (0 = auto)");
        cmd->add_option("--bw-z", bw_z, "network-position bandwidth (0 = auto)");
        cmd->add_option("--link", link, "identity|logit");
        cmd->add_flag("--cv", cv, "5-fold bandwidth cross-validation");
    }

    SmootherConfig resolve() const {
        SmootherConfig cfg;
        if (method == "nadaraya_watson") cfg.method = SmoothMethod::NadarayaWatson;
        else if (method == "local_linear") cfg.method = SmoothMethod::LocalLinear;
        else throw std::invalid_argument("unknown smoother method: " + method);
        if (kernel == "uniform") cfg.kernel = KernelType::Uniform;
        else if (kernel == "epanechnikov") cfg.kernel = KernelType::Epanechnikov;
        else if (kernel == "gaussian") cfg.kernel = KernelType::Gaussian;
        else throw std::invalid_argument("unknown kernel: " + kernel);
        if (link == "identity") cfg.link = LinkType::Identity;
        else if (link == "logit") cfg.link = LinkType::Logit;
        else throw std::invalid_argument("unknown link: " + link);
        if (bw_x > 0.0) cfg.bandwidth_x = bw_x;
        if (bw_z > 0.0) cfg.bandwidth_z = bw_z;
        cfg.cross_validate = cv;
        return cfg;
    }
};

// shared inputs of the fitting subcommands: network + node positions +
// network positions (covariates file, equispaced time points, or none)
struct FitInputs {
    std::string network, positions, covariates;
    bool dynamic = false;
    bool replicated = false;
    int n_override = 0, m_override = 0;

    void attach(CLI::App* cmd, bool need_positions = true) {
        cmd->add_option("--network", network, "edge list file (layer i j weight)")->required();
        if (need_positions)
            cmd->add_option("--positions", positions, "node positions file")->required();
        cmd->add_option("--covariates", covariates, "network covariates file (layer value)");
        cmd->add_flag("--dynamic", dynamic, "use equispaced time points l/m");
        cmd->add_flag("--replicated", replicated, "treat layers as replicated draws");
        cmd->add_option("--n", n_override, "node count (default: max index)");
        cmd->add_option("--m", m_override, "layer count (default: max index)");
    }

    GraphCollection load_network() const {
        return read_edge_list(network,
                              n_override > 0 ? std::optional<int>(n_override) : std::nullopt,
                              m_override > 0 ? std::optional<int>(m_override) : std::nullopt);
    }

    Vector load_netpos(int m) const {
        if (replicated) return Vector();
        if (dynamic) {
            Vector t(m);
            for (int l = 0; l < m; ++l) t[l] = static_cast<double>(l + 1) / m;
            return t;
        }
        if (covariates.empty())
            throw std::invalid_argument(
                "network positions required: pass --covariates, --dynamic or --replicated");
        return read_covariates(covariates, m);
    }
};

int run(int argc, char** argv) {
    CLI::App app{"multi-graphon estimation toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = auto)");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "sample a synthetic graph collection");
    struct {
        std::string spec, kind = "f2", mode = "replicated", out_dir = ".";
        double beta = 0.0, rho = 0.0, sigma = 0.28;
        int n = 150, m = 150;
        std::uint64_t seed = 0;
    } sim_opt;
    sim->add_option("--spec", sim_opt.spec, "kernel config file (kind=, beta=, grid=)");
    sim->add_option("--kind", sim_opt.kind, "f1|f2|f3");
    sim->add_option("--beta", sim_opt.beta, "heterogeneity coefficient");
    sim->add_option("--n", sim_opt.n, "nodes")->check(CLI::PositiveNumber);
    sim->add_option("--m", sim_opt.m, "layers")->check(CLI::PositiveNumber);
    sim->add_option("--rho", sim_opt.rho, "sparsity (0 = 1/sup f)");
    sim->add_option("--mode", sim_opt.mode, "replicated|dynamic|cross_section");
    sim->add_option("--sigma", sim_opt.sigma, "covariate noise sd");
    sim->add_option("--seed", sim_opt.seed, "RNG seed");
    sim->add_option("--out-dir", sim_opt.out_dir, "output directory");

    // ---- distance ----
    auto* dist = app.add_subcommand("distance", "pairwise node distances from a collection");
    struct {
        std::string network, out = "distances.tsv", split = "first_half";
        int n = 0, m = 0, e = 1;
        std::uint64_t split_seed = 0;
    } dist_opt;
    dist->add_option("--network", dist_opt.network)->required();
    dist->add_option("--n", dist_opt.n);
    dist->add_option("--m", dist_opt.m);
    dist->add_option("--split", dist_opt.split, "first_half|random");
    dist->add_option("--split-seed", dist_opt.split_seed);
    dist->add_option("--e", dist_opt.e, "path-length exponent (paths of length 2e)");
    dist->add_option("--out", dist_opt.out);

    // ---- embed ----
    auto* emb = app.add_subcommand("embed", "1-D ordinal embedding of a distance matrix");
    struct {
        std::string distances, out = "positions.tsv";
        int restarts = 10, max_iter = 2000;
        std::uint64_t embed_seed = 0;
    } emb_opt;
    emb->add_option("--distances", emb_opt.distances)->required();
    emb->add_option("--restarts", emb_opt.restarts);
    emb->add_option("--max-iter", emb_opt.max_iter);
    emb->add_option("--embed-seed", emb_opt.embed_seed);
    emb->add_option("--out", emb_opt.out);

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "kernel regression over embedded positions");
    FitInputs fit_in;
    fit_in.attach(fit_cmd);
    SmootherFlags fit_flags;
    fit_flags.attach(fit_cmd);
    struct {
        std::string out_dir = "fit_out", regime = "standard";
        bool heatmaps = false;
    } fit_opt;
    fit_cmd->add_option("--regime", fit_opt.regime, "standard|per_edge|per_network|auto");
    fit_cmd->add_option("--out-dir", fit_opt.out_dir);
    fit_cmd->add_flag("--heatmaps", fit_opt.heatmaps, "also write per-layer PGM images");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "simulation study over a scenario config");
    struct {
        std::string config, out_dir = "bench_out", format = "table", method;
        int reps = 0;
        std::uint64_t seed = 0;
        bool seed_set = false, with_paper_context = false;
    } bench_opt;
    bench->add_option("--config", bench_opt.config, "scenario key=value file")->required();
    bench->add_option("--reps", bench_opt.reps, "replications override (paper scale: 50)");
    bench->add_option("--seed", bench_opt.seed)->each([&](const std::string&) {
        bench_opt.seed_set = true;
    });
    bench->add_option("--out-dir", bench_opt.out_dir);
    bench->add_option("--format", bench_opt.format, "table|kv|heatmap");
    bench->add_option("--method", bench_opt.method, "add a baseline arm: usvt|nbs");
    bench->add_flag("--with-paper-context", bench_opt.with_paper_context,
                    "append published SBA/SAS rows labeled source=paper");

    // ---- resample ----
    auto* rsmp = app.add_subcommand("resample", "graph statistics of resampled networks");
    FitInputs rsmp_in;
    rsmp_in.attach(rsmp);
    SmootherFlags rsmp_flags;
    rsmp_flags.attach(rsmp);
    struct {
        std::vector<double> zvalues;
        std::string out = "resample.tsv";
        int draws = 10000;
        double level = 0.95;
        std::uint64_t seed = 0;
    } rsmp_opt;
    rsmp->add_option("--z", rsmp_opt.zvalues, "network positions to resample at")->required();
    rsmp->add_option("--draws", rsmp_opt.draws, "bootstrap replications");
    rsmp->add_option("--level", rsmp_opt.level);
    rsmp->add_option("--seed", rsmp_opt.seed);
    rsmp->add_option("--out", rsmp_opt.out);

    // ---- ci ----
    auto* ci = app.add_subcommand("ci", "subsampling-bootstrap bands for one node pair");
    FitInputs ci_in;
    ci_in.attach(ci);
    SmootherFlags ci_flags;
    ci_flags.attach(ci);
    struct {
        std::vector<int> pair;
        std::string zgrid = "0.05:0.95:19", out = "ci.tsv";
        int draws = 200;
        double level = 0.95;
        std::uint64_t seed = 0;
    } ci_opt;
    ci->add_option("--pair", ci_opt.pair, "node pair, 1-indexed (two values)")
        ->expected(2)
        ->required();
    ci->add_option("--zgrid", ci_opt.zgrid, "lo:hi:count evaluation grid");
    ci->add_option("--draws", ci_opt.draws, "bootstrap replications");
    ci->add_option("--level", ci_opt.level);
    ci->add_option("--seed", ci_opt.seed);
    ci->add_option("--out", ci_opt.out);

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_max_threads(threads);

    if (sim->parsed()) {
        const auto spec = spec_from_options(sim_opt.spec, sim_opt.kind, sim_opt.beta);
        const double rho = sim_opt.rho > 0.0 ? sim_opt.rho : 1.0 / sup_on_grid(spec);
        const auto mode = parse_mode(sim_opt.mode);
        const auto res = sample(spec, sim_opt.n, sim_opt.m, rho, sim_opt.sigma, mode, sim_opt.seed);
        fs::create_directories(sim_opt.out_dir);
        const fs::path dir(sim_opt.out_dir);
        write_edge_list(res.graphs, (dir / "network.tsv").string());
        write_positions(res.latents.x, (dir / "positions-true.tsv").string());
        write_covariates(res.latents.z, (dir / "netpos-true.tsv").string());
        if (mode == SamplingMode::CrossSection)
            write_covariates(res.latents.z_check, (dir / "covariates.tsv").string());
        std::printf("wrote %s (n=%d m=%d rho=%.6g density=%.6g)\n",
                    (dir / "network.tsv").string().c_str(), res.graphs.n, res.graphs.m, rho,
                    estimate_density(res.graphs));
        return 0;
    }

    if (dist->parsed()) {
        const auto g = read_edge_list(dist_opt.network,
                                      dist_opt.n > 0 ? std::optional<int>(dist_opt.n) : std::nullopt,
                                      dist_opt.m > 0 ? std::optional<int>(dist_opt.m) : std::nullopt);
        LayerSplit split = LayerSplit::first_half();
        if (dist_opt.split == "random") split = LayerSplit::seeded_random(dist_opt.split_seed);
        else if (dist_opt.split != "first_half")
            throw std::invalid_argument("unknown split: " + dist_opt.split);
        const auto d = distance_matrix(g, split, dist_opt.e);
        write_distance_matrix(d, dist_opt.out);
        std::printf("wrote %s (n=%d, e=%d, split=%s)\n", dist_opt.out.c_str(), d.n,
                    d.path_exponent, d.split.c_str());
        return 0;
    }

    if (emb->parsed()) {
        const auto d = read_distance_matrix(emb_opt.distances);
        EmbedOptions opts;
        opts.restarts = emb_opt.restarts;
        opts.max_iter = emb_opt.max_iter;
        opts.seed = emb_opt.embed_seed;
        const auto e = embed_1d(d, opts);
        write_positions(e.positions, emb_opt.out);
        std::printf("wrote %s (stress=%.6g violated=%.4f restarts=%d)\n", emb_opt.out.c_str(),
                    e.stress, e.violated_fraction, e.restarts_used);
        return 0;
    }

    if (fit_cmd->parsed()) {
        const auto g = fit_in.load_network();
        const Vector positions = read_positions(fit_in.positions, g.n);
        const Vector netpos = fit_in.load_netpos(g.m);
        const SmootherConfig cfg = fit_flags.resolve();
        std::string regime = fit_opt.regime;
        if (regime == "auto") {
            switch (select_regime(g.n, g.m, estimate_density(g))) {
                case Regime::Standard: regime = fit_in.replicated ? "replicated" : "standard"; break;
                case Regime::PerEdge: regime = "per_edge"; break;
                case Regime::PerNetwork: regime = "per_network"; break;
            }
            std::printf("selected regime: %s\n", regime.c_str());
        } else if (fit_in.replicated && regime == "standard") {
            regime = "replicated";
        }
        FitResult fit;
        if (regime == "standard") fit = fit_multigraphon(g, positions, netpos, cfg);
        else if (regime == "replicated") fit = fit_replicated(g, positions, cfg);
        else if (regime == "per_edge") fit = fit_per_edge(g, netpos, cfg);
        else if (regime == "per_network") fit = fit_per_network(g, netpos, cfg);
        else throw std::invalid_argument("unknown regime: " + regime);
        const auto files = write_fit_layers(fit, fit_opt.out_dir, "phat");
        if (fit_opt.heatmaps) {
            const int layers = fit.constant_in_layers ? 1 : fit.m;
            double vmax = 0.0;
            for (int l = 0; l < layers; ++l) vmax = std::max(vmax, fit.f_hat_layer(l).maxCoeff());
            for (int l = 0; l < layers; ++l)
                write_pgm(fit.f_hat_layer(l),
                          (fs::path(fit_opt.out_dir) / ("fhat_layer" + std::to_string(l + 1) + ".pgm"))
                              .string(),
                          vmax);
        }
        std::printf("wrote %zu files to %s (rho_hat=%.6g, bw_x=%.4g, bw_z=%.4g, widenings=%d)\n",
                    files.size(), fit_opt.out_dir.c_str(), fit.rho_hat, fit.config.bandwidth_x,
                    fit.config.bandwidth_z, fit.config.widenings);
        return 0;
    }

    if (bench->parsed()) {
        const auto kv = read_flat_config(bench_opt.config);
        auto get = [&](const std::string& key, const std::string& fallback) {
            const auto it = kv.find(key);
            return it == kv.end() ? fallback : it->second;
        };
        Scenario s;
        {
            const std::string kind = get("kind", "f2");
            const double beta = std::stod(get("beta", "0"));
            if (kind == "grid") {
                fs::path gp(get("grid", ""));
                if (gp.is_relative()) gp = fs::path(bench_opt.config).parent_path() / gp;
                s.spec = MultiGraphonSpec::from_grid(read_grid_file(gp.string()));
            } else {
                s.spec = spec_from_options("", kind, beta);
            }
        }
        s.n = std::stoi(get("n", "150"));
        s.m = std::stoi(get("m", "150"));
        const std::string rho = get("rho", "auto");
        if (rho != "auto") s.rho = std::stod(rho);
        s.mode = parse_mode(get("mode", "replicated"));
        s.sigma_cov = std::stod(get("sigma", "0.28"));
        s.replications = bench_opt.reps > 0 ? bench_opt.reps : std::stoi(get("reps", "5"));
        s.seed = bench_opt.seed_set ? bench_opt.seed : std::stoull(get("seed", "0"));
        s.distance_e = std::stoi(get("distance_e", "1"));
        s.embed.restarts = std::stoi(get("embed_restarts", "10"));
        s.embed.max_iter = std::stoi(get("embed_max_iter", "2000"));
        {
            SmootherFlags flags;
            flags.method = get("method", flags.method);
            flags.kernel = get("kernel", flags.kernel);
            flags.bw_x = std::stod(get("bw_x", "0"));
            flags.bw_z = std::stod(get("bw_z", "0"));
            flags.link = get("link", flags.link);
            flags.cv = get("cv", "0") == "1";
            s.smoother = flags.resolve();
        }
        std::string arms = get("arms", "proposed,nbs");
        if (!bench_opt.method.empty()) arms += "," + bench_opt.method;
        for (std::size_t pos = 0; pos < arms.size();) {
            const auto comma = arms.find(',', pos);
            const auto len = comma == std::string::npos ? arms.size() - pos : comma - pos;
            const std::string name = arms.substr(pos, len);
            if (!name.empty()) {
                const Arm arm = arm_from_name(name);
                if (std::find(s.arms.begin(), s.arms.end(), arm) == s.arms.end())
                    s.arms.push_back(arm);
            }
            pos += len + 1;
        }
        const auto run = run_scenario(s);
        ReportFormat format = ReportFormat::DelimitedTable;
        if (bench_opt.format == "kv") format = ReportFormat::KeyValueRecords;
        else if (bench_opt.format == "heatmap") format = ReportFormat::HeatmapGrid;
        else if (bench_opt.format != "table")
            throw std::invalid_argument("unknown format: " + bench_opt.format);
        const auto files =
            emit_report(run, format, bench_opt.out_dir, bench_opt.with_paper_context, true);
        for (const auto& rec : run.records)
            std::printf("%-24s %-12s mse(x1e3) overall=%.4f low=%.4f high=%.4f sd=%.4f\n",
                        rec.scenario.c_str(), rec.arm.c_str(), rec.mse_overall * 1e3,
                        rec.mse_low_z * 1e3, rec.mse_high_z * 1e3, rec.std_dev * 1e3);
        std::printf("wrote %zu files to %s\n", files.size(), bench_opt.out_dir.c_str());
        return 0;
    }

    if (rsmp->parsed()) {
        const auto g = rsmp_in.load_network();
        const Vector positions = read_positions(rsmp_in.positions, g.n);
        const Vector netpos = rsmp_in.load_netpos(g.m);
        const SmootherConfig cfg = rsmp_flags.resolve();
        const FitResult fit = rsmp_in.replicated ? fit_replicated(g, positions, cfg)
                                                 : fit_multigraphon(g, positions, netpos, cfg);
        std::ofstream out(rsmp_opt.out);
        if (!out) throw std::runtime_error("cannot write " + rsmp_opt.out);
        out << "zvalue\tstatistic\tmean\tlo\thi\tskipped\n";
        for (double z : rsmp_opt.zvalues) {
            const auto stats =
                resample_stats(fit, z, rsmp_opt.draws, rsmp_opt.level, rsmp_opt.seed);
            auto row = [&](const char* name, const StatSummary& s) {
                out << z << '\t' << name << '\t' << s.mean << '\t' << s.lo << '\t' << s.hi << '\t'
                    << s.skipped << '\n';
            };
            row("density", stats.density);
            row("triangles", stats.triangles);
            row("transitivity", stats.transitivity);
            row("avg_path_length", stats.avg_path_length);
        }
        std::printf("wrote %s (%d draws per z)\n", rsmp_opt.out.c_str(), rsmp_opt.draws);
        return 0;
    }

    if (ci->parsed()) {
        const auto g = ci_in.load_network();
        const Vector positions = read_positions(ci_in.positions, g.n);
        const Vector netpos = ci_in.load_netpos(g.m);
        if (ci_in.replicated)
            throw std::invalid_argument("ci needs network positions (--covariates or --dynamic)");
        double lo, hi;
        int count;
        if (std::sscanf(ci_opt.zgrid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
            throw std::invalid_argument("bad --zgrid, expected lo:hi:count");
        Vector zgrid(count);
        for (int t = 0; t < count; ++t)
            zgrid[t] = count == 1 ? lo : lo + (hi - lo) * t / (count - 1);
        const auto bands =
            bootstrap_ci(g, positions, netpos, ci_flags.resolve(), ci_opt.pair[0] - 1,
                         ci_opt.pair[1] - 1, zgrid, ci_opt.draws, ci_opt.level, ci_opt.seed);
        const double rho_hat = estimate_density(g);
        std::ofstream out(ci_opt.out);
        if (!out) throw std::runtime_error("cannot write " + ci_opt.out);
        out << "z\tphat\tphat_lo\tphat_hi\tfhat\tfhat_lo\tfhat_hi\n";
        for (int t = 0; t < count; ++t)
            out << zgrid[t] << '\t' << bands.curve[t] << '\t' << bands.lower[t] << '\t'
                << bands.upper[t] << '\t' << bands.curve[t] / rho_hat << '\t'
                << bands.lower[t] / rho_hat << '\t' << bands.upper[t] / rho_hat << '\n';
        std::printf("wrote %s (pair %d,%d; %d replicates)\n", ci_opt.out.c_str(), ci_opt.pair[0],
                    ci_opt.pair[1], ci_opt.draws);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
