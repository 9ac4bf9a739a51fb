#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgraphon/baselines.hpp"
#include "mgraphon/model.hpp"
#include "mgraphon/rng.hpp"
#include "mgraphon/smoother.hpp"

using namespace mgraphon;

namespace {

GraphCollection bernoulli_layers(const Matrix& prob, int m, std::uint64_t seed) {
    const int n = static_cast<int>(prob.rows());
    GraphCollection g;
    g.n = n;
    g.m = m;
    g.layers.assign(static_cast<std::size_t>(m), Matrix::Zero(n, n));
    RngStream r(seed, "layers");
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (r.bernoulli(prob(i, j))) {
                    g.layers[static_cast<std::size_t>(l)](i, j) = 1.0;
                    g.layers[static_cast<std::size_t>(l)](j, i) = 1.0;
                }
    return g;
}

// brute-force product-kernel regression over the design (i != j, all layers)
double naive_nw(const GraphCollection& g, const Vector& pos, const Vector& netpos, double hx,
                double hz, double x, double y, double z) {
    auto epan = [](double u) { return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0; };
    double num = 0.0, den = 0.0;
    for (int l = 0; l < g.m; ++l)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                if (i == j) continue;
                const double w =
                    epan((pos[i] - x) / hx) * epan((pos[j] - y) / hx) * epan((netpos[l] - z) / hz);
                num += w * g.layer(l)(i, j);
                den += w;
            }
    return den > 0 ? num / den : 0.0;
}

}  // namespace

TEST_CASE("oracle_positions: equispaced interior grid") {
    const Vector p1 = oracle_positions(1);
    CHECK(p1.size() == 1);
    CHECK(p1[0] == doctest::Approx(0.5));
    const Vector p3 = oracle_positions(3);
    CHECK(p3[0] == doctest::Approx(0.25));
    CHECK(p3[1] == doctest::Approx(0.5));
    CHECK(p3[2] == doctest::Approx(0.75));
    const Vector p9 = oracle_positions(9);
    for (int i = 0; i + 1 < 9; ++i) CHECK(p9[i + 1] - p9[i] == doctest::Approx(0.1));
    CHECK_THROWS_AS(oracle_positions(0), std::invalid_argument);
}

TEST_CASE("select_regime: the three worked examples and the tie rule") {
    CHECK(select_regime(10, 200, 0.5) == Regime::PerEdge);
    CHECK(select_regime(1000, 3, 0.002) == Regime::PerNetwork);
    CHECK(select_regime(150, 150, 0.25) == Regime::Standard);
    // m > n^2 dominates even when the per-network bound would also trigger
    CHECK(select_regime(2, 5, 1e-9) == Regime::PerEdge);
}

TEST_CASE("fit_multigraphon: constant probability reduces to the global mean") {
    const int n = 14, m = 10;
    const double p = 0.4;
    Matrix prob = Matrix::Constant(n, n, p);
    prob.diagonal().setZero();
    const auto g = bernoulli_layers(prob, m, 21);
    Vector netpos(m);
    for (int l = 0; l < m; ++l) netpos[l] = (l + 1.0) / m;
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_x = 1.0;
    cfg.bandwidth_z = 1.0;
    const auto fit = fit_multigraphon(g, oracle_positions(n), netpos, cfg);
    const double global_mean = estimate_density(g);
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) CHECK(fit.p_hat(i, j, l) == doctest::Approx(global_mean).epsilon(1e-12));
    const double bound = 3.0 * std::sqrt(p * (1 - p) / (n * (n - 1) * m / 2.0));
    CHECK(std::abs(fit.p_hat(0, 1, 0) - p) <= bound);
}

TEST_CASE("fit_multigraphon: singleton neighborhood returns the observation") {
    GraphCollection g;
    g.n = 2;
    g.m = 1;
    g.layers.assign(1, Matrix::Zero(2, 2));
    g.layers[0](0, 1) = g.layers[0](1, 0) = 1.0;
    Vector pos(2), netpos(1);
    pos << 0.3, 0.7;
    netpos << 0.5;
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_x = 0.1;  // below the 0.4 point spacing
    cfg.bandwidth_z = 0.1;
    const auto fit = fit_multigraphon(g, pos, netpos, cfg);
    CHECK(fit.p_hat(0, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("fit_multigraphon: matches the brute-force kernel sum at small sizes") {
    const auto res = sample(MultiGraphonSpec::f2(0.5), 8, 5, 0.8, 0.0, SamplingMode::Dynamic, 31);
    const auto& g = res.graphs;
    SmootherConfig cfg;
    cfg.bandwidth_x = 0.25;
    cfg.bandwidth_z = 0.4;
    const auto fit = fit_multigraphon(g, res.latents.x, res.latents.z, cfg);
    for (int l : {0, 2, 4})
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                if (i == j) continue;
                const double ref = naive_nw(g, res.latents.x, res.latents.z, 0.25, 0.4,
                                            res.latents.x[i], res.latents.x[j], res.latents.z[l]);
                CHECK(fit.p_hat(i, j, l) ==
                      doctest::Approx(std::clamp(ref, 0.0, 1.0)).epsilon(1e-10));
            }
}

TEST_CASE("fit invariants: symmetry is exact and the range is [0,1]") {
    const auto res =
        sample(MultiGraphonSpec::f3(0.6), 12, 6, 1.0, 0.28, SamplingMode::CrossSection, 4);
    for (SmoothMethod method : {SmoothMethod::NadarayaWatson, SmoothMethod::LocalLinear}) {
        SmootherConfig cfg;
        cfg.method = method;
        const auto fit =
            fit_multigraphon(res.graphs, oracle_positions(12), res.latents.z_check, cfg);
        for (int l = 0; l < 6; ++l) {
            const Matrix& p = fit.p_hat_layer(l);
            CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(p.minCoeff() >= 0.0);
            CHECK(p.maxCoeff() <= 1.0);
            const Matrix fh = fit.f_hat_layer(l);
            CHECK(fh.maxCoeff() <= 1.0 / fit.rho_hat + 1e-12);
        }
    }
}

TEST_CASE("fit_replicated: identical layers equal the 3-D fit on shared values") {
    Matrix prob = Matrix::Constant(10, 10, 0.5);
    prob.diagonal().setZero();
    auto one = bernoulli_layers(prob, 1, 77);
    GraphCollection g;
    g.n = 10;
    g.m = 4;
    g.layers.assign(4, one.layer(0));
    Vector netpos(4);
    netpos << 0.2, 0.4, 0.6, 0.8;
    SmootherConfig cfg;
    cfg.bandwidth_x = 0.25;  // shared between both fits; auto would differ by d
    cfg.bandwidth_z = 1.0;
    const auto rep = fit_replicated(g, oracle_positions(10), cfg);
    const auto full = fit_multigraphon(g, oracle_positions(10), netpos, cfg);
    for (int l = 0; l < 4; ++l)
        CHECK((rep.p_hat_layer(l) - full.p_hat_layer(l)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fit_replicated: all-ones collection fits identically one") {
    GraphCollection g;
    g.n = 6;
    g.m = 3;
    g.layers.assign(3, Matrix::Ones(6, 6) - Matrix::Identity(6, 6));
    const auto fit = fit_replicated(g, oracle_positions(6), {});
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j) CHECK(fit.p_hat(i, j, 0) == doctest::Approx(1.0));
}

TEST_CASE("predict: consistent with the stored fit, symmetric, clamped") {
    const auto res = sample(MultiGraphonSpec::f2(0.5), 10, 6, 0.8, 0.0, SamplingMode::Dynamic, 9);
    for (SmoothMethod method : {SmoothMethod::NadarayaWatson, SmoothMethod::LocalLinear}) {
        SmootherConfig cfg;
        cfg.method = method;
        const auto fit = fit_multigraphon(res.graphs, res.latents.x, res.latents.z, cfg);
        for (int l : {0, 3})
            for (int i : {0, 4})
                for (int j : {1, 7}) {
                    const double stored = fit.p_hat(i, j, l);
                    const double predicted =
                        predict(fit, res.latents.x[i], res.latents.x[j], res.latents.z[l]);
                    CHECK(predicted == doctest::Approx(stored).epsilon(1e-9));
                }
        CHECK(predict(fit, 0.31, 0.72, 0.5) == predict(fit, 0.72, 0.31, 0.5));
        const double v = predict(fit, 0.1, 0.9, 0.4);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("predict: constant fit predicts the constant everywhere") {
    Matrix prob = Matrix::Constant(12, 12, 0.35);
    prob.diagonal().setZero();
    const auto g = bernoulli_layers(prob, 8, 3);
    Vector netpos(8);
    for (int l = 0; l < 8; ++l) netpos[l] = (l + 1.0) / 8;
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_x = 1.0;
    cfg.bandwidth_z = 1.0;
    const auto fit = fit_multigraphon(g, oracle_positions(12), netpos, cfg);
    const double c = fit.p_hat(0, 1, 0);
    for (double x : {0.05, 0.5, 0.93})
        for (double z : {0.1, 0.9}) CHECK(predict(fit, x, 1.0 - x, z) == doctest::Approx(c));
}

TEST_CASE("predict: empty neighborhoods widen the bandwidth instead of failing") {
    const auto res = sample(MultiGraphonSpec::f2(0.0), 8, 4, 0.8, 0.0, SamplingMode::Dynamic, 13);
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_x = 0.01;
    cfg.bandwidth_z = 0.01;
    const auto fit = fit_multigraphon(res.graphs, res.latents.x, res.latents.z, cfg);
    const double v = predict(fit, 0.5, 0.5, 10.0);  // far outside every window
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK_THROWS_AS(predict(FitResult{}, 0.1, 0.2, 0.3), std::invalid_argument);
}

TEST_CASE("link choice: argmax is invariant on noiseless block inputs") {
    // uneven two-block weighted collection with entries exactly 0.2 / 0.8 and
    // irregular positions, so the maximizer is unique up to (i,j) symmetry
    const int n = 8;
    Matrix w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = (i < 3) == (j < 3) ? 0.8 : 0.2;
    w.diagonal().setZero();
    GraphCollection g;
    g.n = n;
    g.m = 2;
    g.binary = false;
    g.layers.assign(2, w);
    Vector netpos(2);
    netpos << 0.3, 0.7;
    Vector pos(n);
    RngStream r(6, "pos");
    for (int i = 0; i < n; ++i) pos[i] = r.uniform();
    int arg_id = -1, arg_logit = -1;
    for (LinkType link : {LinkType::Identity, LinkType::Logit}) {
        SmootherConfig cfg;
        cfg.link = link;
        const auto fit = fit_multigraphon(g, pos, netpos, cfg);
        double best = -1.0;
        int best_idx = -1;
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double v = fit.p_hat(i, j, l);
                    if (v > best) {
                        best = v;
                        best_idx = (l * n + i) * n + j;
                    }
                }
        (link == LinkType::Identity ? arg_id : arg_logit) = best_idx;
    }
    CHECK(arg_id == arg_logit);
}

TEST_CASE("fit_per_edge: constant layers give per-pair means") {
    const auto res = sample(MultiGraphonSpec::f2(0.0), 9, 12, 0.8, 0.0, SamplingMode::Dynamic, 55);
    const auto& g = res.graphs;
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_z = 1.0;
    const auto fit = fit_per_edge(g, res.latents.z, cfg);
    const Matrix abar = g.aggregated();
    for (int l : {0, 5})
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                if (i != j) CHECK(fit.p_hat(i, j, l) == doctest::Approx(abar(i, j)).epsilon(1e-12));
}

TEST_CASE("fit_per_edge: alternating single pair smooths to one half") {
    GraphCollection g;
    g.n = 2;
    g.m = 4;
    g.layers.assign(4, Matrix::Zero(2, 2));
    for (int l : {1, 3}) {
        g.layers[static_cast<std::size_t>(l)](0, 1) = 1.0;
        g.layers[static_cast<std::size_t>(l)](1, 0) = 1.0;
    }
    Vector netpos(4);
    netpos << 0.2, 0.4, 0.6, 0.8;
    SmootherConfig cfg;
    cfg.kernel = KernelType::Uniform;
    cfg.bandwidth_z = 1.0;
    const auto fit = fit_per_edge(g, netpos, cfg);
    for (int l = 0; l < 4; ++l) CHECK(fit.p_hat(0, 1, l) == doctest::Approx(0.5));
}

TEST_CASE("fit_per_edge: recovers a linear-in-z edge probability") {
    const int m = 500;
    GraphCollection g;
    g.n = 2;
    g.m = m;
    g.layers.assign(static_cast<std::size_t>(m), Matrix::Zero(2, 2));
    Vector netpos(m);
    RngStream r(8, "edges");
    for (int l = 0; l < m; ++l) {
        netpos[l] = (l + 0.5) / m;
        if (r.bernoulli(netpos[l])) {
            g.layers[static_cast<std::size_t>(l)](0, 1) = 1.0;
            g.layers[static_cast<std::size_t>(l)](1, 0) = 1.0;
        }
    }
    const auto fit = fit_per_edge(g, netpos, {});
    for (int l = 0; l < m; ++l) {
        if (netpos[l] < 0.2 || netpos[l] > 0.8) continue;
        CHECK(std::abs(fit.p_hat(0, 1, l) - netpos[l]) <= 0.1);
    }
    GraphCollection single;
    single.n = 2;
    single.m = 1;
    single.layers.assign(1, Matrix::Zero(2, 2));
    Vector one(1);
    one << 0.5;
    CHECK_THROWS_AS(fit_per_edge(single, one, {}), std::invalid_argument);
}

TEST_CASE("fit_per_edge at full z-bandwidth equals per-pair means of fit_replicated") {
    const auto res = sample(MultiGraphonSpec::f2(0.0), 8, 10, 0.8, 0.0, SamplingMode::Dynamic, 66);
    const auto& g = res.graphs;
    SmootherConfig edge_cfg;
    edge_cfg.kernel = KernelType::Uniform;
    edge_cfg.bandwidth_z = 1.0;
    const auto per_edge = fit_per_edge(g, res.latents.z, edge_cfg);
    SmootherConfig rep_cfg;
    rep_cfg.kernel = KernelType::Uniform;
    rep_cfg.bandwidth_x = 1e-4;  // below any point spacing: per-pair means
    const auto rep = fit_replicated(g, oracle_positions(8), rep_cfg);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j)
                CHECK(per_edge.p_hat(i, j, 0) == doctest::Approx(rep.p_hat(i, j, 0)).epsilon(1e-12));
}

TEST_CASE("fit_per_network: identical layers reduce to the common nbs estimate") {
    Matrix prob(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) prob(i, j) = (i < 6) == (j < 6) ? 0.8 : 0.2;
    prob.diagonal().setZero();
    auto one = bernoulli_layers(prob, 1, 91);
    GraphCollection g;
    g.n = 12;
    g.m = 3;
    g.layers.assign(3, one.layer(0));
    Vector netpos(3);
    netpos << 0.25, 0.5, 0.75;
    const auto fit = fit_per_network(g, netpos, {});
    const Matrix expected = nbs(one.layer(0));
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (i != j)
                    CHECK(fit.p_hat(i, j, l) == doctest::Approx(expected(i, j)).epsilon(1e-12));
}

TEST_CASE("fit_per_network: m=1 is exactly nbs of the single layer") {
    Matrix prob(11, 11);
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) prob(i, j) = (i < 5) == (j < 5) ? 0.7 : 0.25;
    prob.diagonal().setZero();
    const auto g = bernoulli_layers(prob, 1, 17);
    Vector netpos(1);
    netpos << 0.5;
    const auto fit = fit_per_network(g, netpos, {});
    const Matrix expected = nbs(g.layer(0));
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            if (i != j) CHECK(fit.p_hat(i, j, 0) == doctest::Approx(expected(i, j)).epsilon(1e-12));
    const auto small = bernoulli_layers(Matrix::Zero(5, 5), 1, 1);
    CHECK_THROWS_AS(fit_per_network(small, netpos, {}), std::invalid_argument);
}

TEST_CASE("fit_per_network: drifting cross-block intensity is monotone in z") {
    const int n = 40, m = 24;
    GraphCollection g;
    g.n = n;
    g.m = m;
    g.layers.reserve(static_cast<std::size_t>(m));
    Vector netpos(m);
    RngStream r(12, "drift");
    for (int l = 0; l < m; ++l) {
        netpos[l] = (l + 1.0) / m;
        const double cross = 0.15 + 0.6 * netpos[l];
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double p = (i < n / 2) == (j < n / 2) ? 0.75 : cross;
                if (r.bernoulli(p)) a(i, j) = a(j, i) = 1.0;
            }
        g.layers.push_back(std::move(a));
    }
    const auto fit = fit_per_network(g, netpos, {});
    const double q1 = fit.p_hat(0, n - 1, m / 4);
    const double q2 = fit.p_hat(0, n - 1, m / 2);
    const double q3 = fit.p_hat(0, n - 1, 3 * m / 4);
    CHECK(q1 < q2);
    CHECK(q2 < q3);
}

TEST_CASE("cross-validation flag: runs, records multipliers, keeps the contract") {
    const auto res = sample(MultiGraphonSpec::f2(0.5), 10, 8, 0.8, 0.0, SamplingMode::Dynamic, 23);
    SmootherConfig cfg;
    cfg.cross_validate = true;
    const auto fit = fit_multigraphon(res.graphs, oracle_positions(10), res.latents.z, cfg);
    const bool mx_ok = fit.config.cv_mult_x == 0.5 || fit.config.cv_mult_x == 1.0 ||
                       fit.config.cv_mult_x == 2.0;
    const bool mz_ok = fit.config.cv_mult_z == 0.5 || fit.config.cv_mult_z == 1.0 ||
                       fit.config.cv_mult_z == 2.0;
    CHECK(mx_ok);
    CHECK(mz_ok);
    for (int l = 0; l < 8; ++l) {
        const Matrix& p = fit.p_hat_layer(l);
        CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(p.maxCoeff() <= 1.0);
    }
}

TEST_CASE("bootstrap_ci: invalid inputs are rejected") {
    const auto res = sample(MultiGraphonSpec::f2(0.0), 8, 10, 0.8, 0.0, SamplingMode::Dynamic, 3);
    Vector zg(3);
    zg << 0.25, 0.5, 0.75;
    CHECK_THROWS_AS(bootstrap_ci(res.graphs, res.latents.x, res.latents.z, {}, 0, 1, zg, 5),
                    std::invalid_argument);  // B < 10
    GraphCollection short_g = res.graphs;
    short_g.m = 3;
    short_g.layers.resize(3);
    Vector z3 = res.latents.z.head(3);
    CHECK_THROWS_AS(bootstrap_ci(short_g, res.latents.x, z3, {}, 0, 1, zg), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_ci(res.graphs, res.latents.x, res.latents.z, {}, 2, 2, zg),
                    std::invalid_argument);  // i == j
}

TEST_CASE("bootstrap_ci: identical layers have zero-width bands") {
    Matrix prob = Matrix::Constant(8, 8, 0.5);
    prob.diagonal().setZero();
    auto one = bernoulli_layers(prob, 1, 5);
    GraphCollection g;
    g.n = 8;
    g.m = 12;
    g.layers.assign(12, one.layer(0));
    Vector netpos(12);
    for (int l = 0; l < 12; ++l) netpos[l] = (l + 1.0) / 12;
    Vector zg(4);
    zg << 0.2, 0.4, 0.6, 0.8;
    const auto bands = bootstrap_ci(g, oracle_positions(8), netpos, {}, 0, 5, zg, 40, 0.95, 11);
    for (int t = 0; t < 4; ++t) {
        CHECK(bands.upper[t] == doctest::Approx(bands.lower[t]));
        CHECK(bands.curve[t] == doctest::Approx(bands.lower[t]));
    }
}

TEST_CASE("bootstrap_ci: level 0 collapses to the replicate median") {
    const auto res = sample(MultiGraphonSpec::f2(0.5), 10, 16, 0.8, 0.0, SamplingMode::Dynamic, 29);
    Vector zg(2);
    zg << 0.3, 0.7;
    const auto b0 =
        bootstrap_ci(res.graphs, res.latents.x, res.latents.z, {}, 1, 6, zg, 50, 0.0, 7);
    for (int t = 0; t < 2; ++t) CHECK(b0.lower[t] == doctest::Approx(b0.upper[t]).epsilon(1e-12));
}

TEST_CASE("bootstrap_ci: bands cover a constant truth and shrink with m") {
    Matrix prob = Matrix::Constant(12, 12, 0.4);
    prob.diagonal().setZero();
    Vector zg(3);
    zg << 0.25, 0.5, 0.75;
    double width_small = 0.0, width_large = 0.0;
    for (int m : {40, 160}) {
        const auto g = bernoulli_layers(prob, m, 19);
        Vector netpos(m);
        for (int l = 0; l < m; ++l) netpos[l] = (l + 1.0) / m;
        const auto bands =
            bootstrap_ci(g, oracle_positions(12), netpos, {}, 2, 9, zg, 200, 0.95, 23);
        double width = 0.0;
        for (int t = 0; t < 3; ++t) {
            width += bands.upper[t] - bands.lower[t];
            CHECK(bands.lower[t] <= bands.curve[t] + 1e-12);
            CHECK(bands.curve[t] <= bands.upper[t] + 1e-12);
        }
        (m == 40 ? width_small : width_large) = width;
    }
    CHECK(width_large < width_small);
}

TEST_CASE("local linear: reproduces a bilinear surface better than local constant") {
    // weighted single layer with responses exactly linear in the design
    const int n = 20;
    Vector pos = oracle_positions(n);
    Matrix w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (pos[i] + pos[j]);
    w.diagonal().setZero();
    GraphCollection g;
    g.n = n;
    g.m = 1;
    g.binary = false;
    g.layers.assign(1, w);
    SmootherConfig nwc;
    nwc.bandwidth_x = 0.2;
    SmootherConfig llc = nwc;
    llc.method = SmoothMethod::LocalLinear;
    const auto fit_nw = fit_replicated(g, pos, nwc);
    const auto fit_ll = fit_replicated(g, pos, llc);
    double err_nw = 0.0, err_ll = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            err_nw += std::abs(fit_nw.p_hat(i, j, 0) - w(i, j));
            err_ll += std::abs(fit_ll.p_hat(i, j, 0) - w(i, j));
        }
    CHECK(err_ll < err_nw);
}
