#include "mgraphon/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgraphon/parallel.hpp"
#include "mgraphon/rng.hpp"
#include "mgraphon/stats.hpp"

namespace mgraphon {

OrdinalConstraintSet build_constraints(const DistanceMatrix& d, ConstraintScheme scheme) {
    const int n = d.n;
    if (n < 2) throw std::invalid_argument("build_constraints: need n >= 2");
    OrdinalConstraintSet out;
    if (scheme.kind == ConstraintScheme::Kind::WithinRow) {
        out.scheme = "within_row";
        std::vector<std::pair<double, int>> row;
        for (int i = 0; i < n; ++i) {
            row.clear();
            for (int j = 0; j < n; ++j)
                if (j != i) row.emplace_back(d.D(i, j), j);
            std::sort(row.begin(), row.end());
            for (std::size_t t = 0; t + 1 < row.size(); ++t) {
                if (row[t].first < row[t + 1].first)
                    out.constraints.push_back({i, row[t].second, i, row[t + 1].second});
            }
        }
    } else {
        out.scheme = "sampled_quadruples(" + std::to_string(scheme.count) + "," +
                     std::to_string(scheme.seed) + ")";
        RngStream r(scheme.seed, "quadruples");
        const long long max_attempts = 64LL * std::max(1, scheme.count) + 1024;
        long long attempts = 0;
        auto draw_pair = [&](int& a, int& b) {
            a = static_cast<int>(r.below(static_cast<std::uint64_t>(n)));
            do { b = static_cast<int>(r.below(static_cast<std::uint64_t>(n))); } while (b == a);
        };
        while (static_cast<int>(out.constraints.size()) < scheme.count &&
               attempts++ < max_attempts) {
            int i, j, p, q;
            draw_pair(i, j);
            draw_pair(p, q);
            if (std::minmax(i, j) == std::minmax(p, q)) continue;
            const double dij = d.D(i, j), dpq = d.D(p, q);
            if (dij == dpq) continue;
            if (dij < dpq)
                out.constraints.push_back({i, j, p, q});
            else
                out.constraints.push_back({p, q, i, j});
        }
    }
    return out;
}

double stress_of(const Vector& x, const OrdinalConstraintSet& cs, double margin) {
    if (cs.constraints.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& c : cs.constraints) {
        const double u = margin + std::abs(x[c.i] - x[c.j]) - std::abs(x[c.p] - x[c.q]);
        if (u > 0.0) acc += u * u;
    }
    return acc / static_cast<double>(cs.constraints.size());
}

double violated_fraction_of(const Vector& x, const OrdinalConstraintSet& cs) {
    if (cs.constraints.empty()) return 0.0;
    std::size_t bad = 0;
    for (const auto& c : cs.constraints)
        if (std::abs(x[c.i] - x[c.j]) >= std::abs(x[c.p] - x[c.q])) ++bad;
    return static_cast<double>(bad) / static_cast<double>(cs.constraints.size());
}

namespace {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Vector index_positions(int n) {
    Vector p(n);
    for (int i = 0; i < n; ++i)
        p[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    return p;
}

struct RestartResult {
    Vector positions;
    double stress = 0.0;
};

// Gradient descent on the margined hinge stress from a given start; returns
// the best iterate seen under that margin.
Vector descend(const OrdinalConstraintSet& cs, Vector x, double margin, int max_iter,
               double step_initial, double step_final) {
    const int n = static_cast<int>(x.size());
    const double nc = static_cast<double>(cs.constraints.size());
    const double decay =
        max_iter > 1 ? std::pow(step_final / step_initial, 1.0 / static_cast<double>(max_iter - 1))
                     : 1.0;
    // mean-stress gradients carry a 1/n scale; undo it so steps are O(step)
    const double scale = static_cast<double>(n);

    Vector grad(n);
    Vector best_x = x;
    double best_stress = stress_of(x, cs, margin);
    int since_best = 0;
    double step = step_initial;
    for (int it = 0; it < max_iter; ++it, step *= decay) {
        grad.setZero();
        double stress = 0.0;
        for (const auto& c : cs.constraints) {
            const double dij = x[c.i] - x[c.j];
            const double dpq = x[c.p] - x[c.q];
            const double u = margin + std::abs(dij) - std::abs(dpq);
            if (u <= 0.0) continue;
            stress += u * u;
            const double gi = 2.0 * u * sgn(dij) / nc;
            const double gp = 2.0 * u * sgn(dpq) / nc;
            grad[c.i] += gi;
            grad[c.j] -= gi;
            grad[c.p] -= gp;
            grad[c.q] += gp;
        }
        stress /= nc;
        if (stress < best_stress * (1.0 - 1e-9)) {
            best_stress = stress;
            best_x = x;
            since_best = 0;
        } else if (++since_best > 200) {
            break;  // stalled
        }
        if (stress == 0.0) break;
        x -= (step * scale) * grad;
    }
    if (stress_of(x, cs, margin) <= best_stress) best_x = std::move(x);
    return best_x;
}

// Feasibility repair: sweeps over violated comparisons, applying the minimal
// pairwise moves that put each one strictly on the right side. On consistent
// systems (exact distances of a 1-D configuration) this drives the violation
// count to zero; on noisy data it keeps the best configuration seen, so it
// never degrades the descent result.
Vector repair_violations(const OrdinalConstraintSet& cs, Vector x) {
    const double span = std::max(x.maxCoeff() - x.minCoeff(), 1e-12);
    const double slack = 1e-9 * span;
    Vector best_x = x;
    std::size_t best_bad = cs.constraints.size() + 1;
    for (int sweep = 0; sweep < 100; ++sweep) {
        std::size_t bad = 0;
        for (const auto& c : cs.constraints)
            if (std::abs(x[c.i] - x[c.j]) >= std::abs(x[c.p] - x[c.q])) ++bad;
        if (bad < best_bad) {
            best_bad = bad;
            best_x = x;
        }
        if (bad == 0) break;
        for (const auto& c : cs.constraints) {
            const double dij = x[c.i] - x[c.j];
            const double dpq = x[c.p] - x[c.q];
            const double excess = std::abs(dij) - std::abs(dpq);
            if (excess < 0.0) continue;
            const double delta = 0.5 * (excess + slack);
            // shrink |x_i - x_j| by delta, grow |x_p - x_q| by delta
            const double si = dij >= 0.0 ? 1.0 : -1.0;
            x[c.i] -= si * 0.5 * delta;
            x[c.j] += si * 0.5 * delta;
            const double sp = dpq >= 0.0 ? 1.0 : -1.0;
            x[c.p] += sp * 0.5 * delta;
            x[c.q] -= sp * 0.5 * delta;
        }
    }
    return best_x;
}

// One restart: margined descent from a uniform-random start, then the
// violation repair pass. The working margin over-separates near-ties, which
// can leave a few strictly violated comparisons behind; the repair pass puts
// those back on the right side without re-distorting the configuration.
RestartResult run_restart(const OrdinalConstraintSet& cs, int n, double margin,
                          const EmbedOptions& opts, std::uint64_t restart_index) {
    RngStream rng(opts.seed, "embed-restart", restart_index);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform();
    x = descend(cs, std::move(x), margin, opts.max_iter, opts.step_initial, opts.step_final);
    x = repair_violations(cs, std::move(x));
    const double s = stress_of(x, cs, margin);
    return {std::move(x), s};
}

}  // namespace

Embedding embed_1d(const DistanceMatrix& d, const OrdinalConstraintSet& cs,
                   const EmbedOptions& opts) {
    const int n = d.n;
    Embedding out;
    if (cs.constraints.empty()) {
        out.positions = index_positions(n);
        out.stress = 0.0;
        out.restarts_used = 0;
        out.violated_fraction = 0.0;
        return out;
    }

    double margin = opts.margin;
    if (margin <= 0.0) {
        const double dmax = d.D.maxCoeff();
        std::vector<double> gaps;
        gaps.reserve(cs.constraints.size());
        for (const auto& c : cs.constraints) gaps.push_back(d.D(c.p, c.q) - d.D(c.i, c.j));
        margin = dmax > 0.0 ? quantile(gaps, 0.10) / dmax : 1e-3;
        if (margin <= 0.0) margin = 1e-6;
    }

    const int restarts = std::max(1, opts.restarts);
    std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
    parallel_for(restarts, [&](std::int64_t r) {
        results[static_cast<std::size_t>(r)] =
            run_restart(cs, n, margin, opts, static_cast<std::uint64_t>(r));
    });

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[static_cast<std::size_t>(r)].stress < results[static_cast<std::size_t>(best)].stress)
            best = r;

    out.stress = results[static_cast<std::size_t>(best)].stress;
    out.restarts_used = restarts;
    Vector pos = std::move(results[static_cast<std::size_t>(best)].positions);
    const double lo = pos.minCoeff(), hi = pos.maxCoeff();
    if (hi - lo < 1e-12) {
        out.positions = index_positions(n);  // degenerate: deterministic fallback
    } else {
        const double a = 1.0 / static_cast<double>(n + 1);
        const double b = static_cast<double>(n) / static_cast<double>(n + 1);
        out.positions = Vector(n);
        for (int i = 0; i < n; ++i) out.positions[i] = a + (b - a) * (pos[i] - lo) / (hi - lo);
    }
    out.violated_fraction = violated_fraction_of(out.positions, cs);
    return out;
}

Embedding embed_1d(const DistanceMatrix& d, const EmbedOptions& opts) {
    if (d.n < 2) throw std::invalid_argument("embed_1d: need n >= 2");
    return embed_1d(d, build_constraints(d), opts);
}

double spearman(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    const int n = static_cast<int>(a.size());
    if (n < 2) throw std::invalid_argument("spearman: need length >= 2");
    auto ranks = [&](const Vector& v) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int l, int r) { return v[l] < v[r]; });
        Vector rk(n);
        int t = 0;
        while (t < n) {
            int u = t;
            while (u + 1 < n && v[idx[static_cast<std::size_t>(u + 1)]] == v[idx[static_cast<std::size_t>(t)]]) ++u;
            const double avg = 0.5 * static_cast<double>(t + u) + 1.0;  // average rank, 1-based
            for (int k = t; k <= u; ++k) rk[idx[static_cast<std::size_t>(k)]] = avg;
            t = u + 1;
        }
        return rk;
    };
    const Vector ra = ranks(a), rb = ranks(b);
    const double ma = ra.mean(), mb = rb.mean();
    double num = 0.0, da = 0.0, db = 0.0;
    for (int i = 0; i < n; ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da == 0.0 || db == 0.0) return 0.0;  // constant ranks
    return num / std::sqrt(da * db);
}

}  // namespace mgraphon
