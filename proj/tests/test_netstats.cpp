#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mgraphon/netstats.hpp"
#include "mgraphon/rng.hpp"

using namespace mgraphon;

namespace {

SimpleGraph complete(int n) {
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.set_edge(i, j);
    return g;
}

long long choose3(long long n) { return n * (n - 1) * (n - 2) / 6; }

}  // namespace

TEST_CASE("statistics: complete graphs") {
    const auto k3 = complete(3);
    CHECK(density(k3) == doctest::Approx(1.0));
    CHECK(triangles(k3) == 1);
    CHECK(transitivity(k3) == doctest::Approx(1.0));
    CHECK(avg_path_length(k3) == doctest::Approx(1.0));

    const auto k4 = complete(4);
    CHECK(triangles(k4) == 4);
    CHECK(transitivity(k4) == doctest::Approx(1.0));

    for (int n : {5, 9}) {
        CHECK(triangles(complete(n)) == choose3(n));
        CHECK(density(complete(n)) == doctest::Approx(1.0));
    }
}

TEST_CASE("statistics: path graph 1-2-3") {
    SimpleGraph g(3);
    g.set_edge(0, 1);
    g.set_edge(1, 2);
    CHECK(triangles(g) == 0);
    CHECK(transitivity(g) == 0.0);
    CHECK(avg_path_length(g) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("statistics: disconnection and degenerate cases") {
    SimpleGraph edgeless(4);
    CHECK(density(edgeless) == 0.0);
    CHECK(transitivity(edgeless) == 0.0);
    CHECK_THROWS_WITH_AS(avg_path_length(edgeless), doctest::Contains("undefined-statistic"),
                         std::invalid_argument);
    // two components: a triangle and a 2-path; the largest component wins
    SimpleGraph g(7);
    g.set_edge(0, 1);
    g.set_edge(1, 2);
    g.set_edge(0, 2);
    g.set_edge(3, 4);
    g.set_edge(4, 5);
    g.set_edge(5, 6);
    CHECK(avg_path_length(g) == doctest::Approx((1 + 2 + 3 + 1 + 2 + 1) / 6.0));
}

TEST_CASE("statistics: permutation invariance") {
    RngStream r(77, "g");
    SimpleGraph g(12);
    for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j)
            if (r.bernoulli(0.35)) g.set_edge(i, j);
    std::vector<int> pi = {5, 3, 11, 0, 8, 1, 10, 2, 7, 4, 9, 6};
    SimpleGraph h(12);
    for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j)
            if (g.edge(i, j)) h.set_edge(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]);
    CHECK(density(g) == density(h));
    CHECK(triangles(g) == triangles(h));
    CHECK(transitivity(g) == transitivity(h));
    if (density(g) > 0) CHECK(avg_path_length(g) == avg_path_length(h));
}

TEST_CASE("SimpleGraph::from_matrix validates structure") {
    Matrix ok = Matrix::Zero(3, 3);
    ok(0, 1) = ok(1, 0) = 1.0;
    CHECK(SimpleGraph::from_matrix(ok).edge(0, 1));
    Matrix frac = ok;
    frac(1, 2) = frac(2, 1) = 0.5;
    CHECK_THROWS_AS(SimpleGraph::from_matrix(frac), std::invalid_argument);
    Matrix diag = ok;
    diag(2, 2) = 1.0;
    CHECK_THROWS_AS(SimpleGraph::from_matrix(diag), std::invalid_argument);
}

TEST_CASE("resample_stats: deterministic in the seed and worker-count independent") {
    Matrix p = Matrix::Constant(20, 20, 0.3);
    p.diagonal().setZero();
    const auto a = resample_stats(p, 50, 0.95, 99);
    const auto b = resample_stats(p, 50, 0.95, 99);
    CHECK(a.density.mean == b.density.mean);
    CHECK(a.triangles.lo == b.triangles.lo);
    CHECK(a.avg_path_length.hi == b.avg_path_length.hi);
    CHECK(a.transitivity.mean == b.transitivity.mean);
}

TEST_CASE("resample_stats: degenerate probabilities") {
    Matrix ones = Matrix::Constant(10, 10, 1.0);
    ones.diagonal().setZero();
    const auto full = resample_stats(ones, 20, 0.95, 1);
    CHECK(full.density.mean == doctest::Approx(1.0));
    CHECK(full.density.lo == full.density.hi);
    CHECK(full.triangles.mean == doctest::Approx(static_cast<double>(choose3(10))));
    CHECK(full.avg_path_length.mean == doctest::Approx(1.0));
    CHECK(full.avg_path_length.skipped == 0);

    const Matrix zeros = Matrix::Zero(10, 10);
    const auto empty = resample_stats(zeros, 20, 0.95, 1);
    CHECK(empty.density.mean == 0.0);
    CHECK(empty.avg_path_length.skipped == 20);
    CHECK(std::isnan(empty.avg_path_length.mean));
    CHECK_THROWS_AS(resample_stats(zeros, 5, 0.95, 1), std::invalid_argument);
}

TEST_CASE("resample_stats: transitivity approaches p for a large constant graph") {
    Matrix p = Matrix::Constant(200, 200, 0.3);
    p.diagonal().setZero();
    const auto stats = resample_stats(p, 2000, 0.95, 7);
    CHECK(std::abs(stats.transitivity.mean - 0.3) <= 0.02);
}
