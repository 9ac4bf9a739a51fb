#include "mgraphon/netstats.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "mgraphon/parallel.hpp"
#include "mgraphon/rng.hpp"
#include "mgraphon/stats.hpp"

namespace mgraphon {

SimpleGraph::SimpleGraph(int n_nodes)
    : n(n_nodes), words_per_row((n_nodes + 63) / 64),
      bits(static_cast<std::size_t>(n_nodes) * static_cast<std::size_t>((n_nodes + 63) / 64), 0) {}

bool SimpleGraph::edge(int i, int j) const {
    return (bits[static_cast<std::size_t>(i) * words_per_row + static_cast<std::size_t>(j / 64)] >>
            (j % 64)) & 1ULL;
}

void SimpleGraph::set_edge(int i, int j) {
    bits[static_cast<std::size_t>(i) * words_per_row + static_cast<std::size_t>(j / 64)] |=
        1ULL << (j % 64);
    bits[static_cast<std::size_t>(j) * words_per_row + static_cast<std::size_t>(i / 64)] |=
        1ULL << (i % 64);
}

SimpleGraph SimpleGraph::from_matrix(const Matrix& adjacency) {
    const int n = static_cast<int>(adjacency.rows());
    if (adjacency.cols() != n) throw std::invalid_argument("SimpleGraph: matrix not square");
    SimpleGraph g(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = adjacency(i, j);
            if (v != 0.0 && v != 1.0)
                throw std::invalid_argument("SimpleGraph: adjacency entries must be 0 or 1");
            if (adjacency(j, i) != v)
                throw std::invalid_argument("SimpleGraph: adjacency not symmetric");
            if (v == 1.0) g.set_edge(i, j);
        }
        if (adjacency(i, i) != 0.0)
            throw std::invalid_argument("SimpleGraph: diagonal must be zero");
    }
    return g;
}

namespace {

int degree(const SimpleGraph& g, int i) {
    int d = 0;
    const std::size_t base = static_cast<std::size_t>(i) * g.words_per_row;
    for (int w = 0; w < g.words_per_row; ++w) d += std::popcount(g.bits[base + w]);
    return d;
}

long long edge_count(const SimpleGraph& g) {
    long long deg_sum = 0;
    for (int i = 0; i < g.n; ++i) deg_sum += degree(g, i);
    return deg_sum / 2;
}

}  // namespace

double density(const SimpleGraph& g) {
    if (g.n < 2) return 0.0;
    return 2.0 * static_cast<double>(edge_count(g)) /
           (static_cast<double>(g.n) * static_cast<double>(g.n - 1));
}

long long triangles(const SimpleGraph& g) {
    long long closed = 0;  // each triangle counted once per edge
    for (int i = 0; i < g.n; ++i) {
        const std::size_t bi = static_cast<std::size_t>(i) * g.words_per_row;
        for (int j = i + 1; j < g.n; ++j) {
            if (!g.edge(i, j)) continue;
            const std::size_t bj = static_cast<std::size_t>(j) * g.words_per_row;
            for (int w = 0; w < g.words_per_row; ++w)
                closed += std::popcount(g.bits[bi + w] & g.bits[bj + w]);
        }
    }
    return closed / 3;
}

double transitivity(const SimpleGraph& g) {
    long long wedges = 0;
    for (int i = 0; i < g.n; ++i) {
        const long long d = degree(g, i);
        wedges += d * (d - 1) / 2;
    }
    if (wedges == 0) return 0.0;
    return 3.0 * static_cast<double>(triangles(g)) / static_cast<double>(wedges);
}

double avg_path_length(const SimpleGraph& g) {
    if (g.n < 1) throw std::invalid_argument("undefined-statistic: empty graph");
    // components by BFS; largest wins, ties broken by smallest member index
    std::vector<int> comp(static_cast<std::size_t>(g.n), -1);
    int best_root = -1, best_size = 0, n_comp = 0;
    std::vector<int> queue;
    for (int s = 0; s < g.n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        const int id = n_comp++;
        int size = 0;
        queue.assign(1, s);
        comp[static_cast<std::size_t>(s)] = id;
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            ++size;
            for (int v = 0; v < g.n; ++v) {
                if (comp[static_cast<std::size_t>(v)] < 0 && g.edge(u, v)) {
                    comp[static_cast<std::size_t>(v)] = id;
                    queue.push_back(v);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best_root = s;
        }
    }
    if (best_size < 2)
        throw std::invalid_argument("undefined-statistic: largest component has < 2 nodes");

    const int target = comp[static_cast<std::size_t>(best_root)];
    long long dist_sum = 0, pair_cnt = 0;
    std::vector<int> dist(static_cast<std::size_t>(g.n));
    std::deque<int> bfs;
    for (int s = 0; s < g.n; ++s) {
        if (comp[static_cast<std::size_t>(s)] != target) continue;
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        bfs.assign(1, s);
        while (!bfs.empty()) {
            const int u = bfs.front();
            bfs.pop_front();
            for (int v = 0; v < g.n; ++v) {
                if (g.edge(u, v) && dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    bfs.push_back(v);
                }
            }
        }
        for (int v = 0; v < g.n; ++v)
            if (v != s && comp[static_cast<std::size_t>(v)] == target) {
                dist_sum += dist[static_cast<std::size_t>(v)];
                ++pair_cnt;
            }
    }
    return static_cast<double>(dist_sum) / static_cast<double>(pair_cnt);
}

// ---------------------------------------------------------------------------
// resampling
// ---------------------------------------------------------------------------

ResampleStats resample_stats(const Matrix& edge_prob, int B, double level, std::uint64_t seed) {
    const int n = static_cast<int>(edge_prob.rows());
    if (edge_prob.cols() != n) throw std::invalid_argument("resample_stats: matrix not square");
    if (B < 10) throw std::invalid_argument("resample_stats: need B >= 10");
    if (level < 0.0 || level > 1.0) throw std::invalid_argument("resample_stats: level in [0,1]");

    Matrix p = edge_prob.cwiseMax(0.0).cwiseMin(1.0);
    std::vector<double> dens(static_cast<std::size_t>(B)), tris(static_cast<std::size_t>(B)),
        trans(static_cast<std::size_t>(B)), apl(static_cast<std::size_t>(B));
    std::vector<char> apl_ok(static_cast<std::size_t>(B), 0);

    parallel_for(B, [&](std::int64_t b) {
        RngStream r(seed, "resample-draw", static_cast<std::uint64_t>(b));
        SimpleGraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (r.bernoulli(p(i, j))) g.set_edge(i, j);
        const std::size_t k = static_cast<std::size_t>(b);
        dens[k] = density(g);
        tris[k] = static_cast<double>(triangles(g));
        trans[k] = transitivity(g);
        try {
            apl[k] = avg_path_length(g);
            apl_ok[k] = 1;
        } catch (const std::invalid_argument&) {
            apl[k] = 0.0;
        }
    });

    const double lo_p = (1.0 - level) / 2.0;
    const double hi_p = (1.0 + level) / 2.0;
    auto summarize = [&](const std::vector<double>& v, const std::vector<char>* ok) {
        StatSummary s;
        std::vector<double> kept;
        kept.reserve(v.size());
        for (std::size_t t = 0; t < v.size(); ++t)
            if (!ok || (*ok)[t]) kept.push_back(v[t]);
        s.skipped = static_cast<int>(v.size() - kept.size());
        if (kept.empty()) {
            s.mean = s.lo = s.hi = std::numeric_limits<double>::quiet_NaN();
            return s;
        }
        s.mean = mean_of(kept);
        s.lo = quantile(kept, lo_p);
        s.hi = quantile(kept, hi_p);
        return s;
    };

    ResampleStats out;
    out.draws = B;
    out.level = level;
    out.density = summarize(dens, nullptr);
    out.triangles = summarize(tris, nullptr);
    out.transitivity = summarize(trans, nullptr);
    out.avg_path_length = summarize(apl, &apl_ok);
    return out;
}

ResampleStats resample_stats(const FitResult& fit, double zvalue, int B, double level,
                             std::uint64_t seed) {
    Matrix p = predict_layer(fit, zvalue);
    p.diagonal().setZero();  // no self-loops
    return resample_stats(p, B, level, seed);
}

}  // namespace mgraphon
