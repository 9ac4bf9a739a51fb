#include "mgraphon/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mgraphon/rng.hpp"

namespace mgraphon {

DistanceMatrix distance_matrix(const GraphCollection& g, LayerSplit split, int e) {
    if (g.n < 3) throw std::invalid_argument("distance_matrix: need n >= 3");
    if (g.m < 2) throw std::invalid_argument("needs-multiple-layers: m must be >= 2");
    if (e < 1) throw std::invalid_argument("distance_matrix: e must be >= 1");
    const double rho = estimate_density(g);
    if (rho <= 0.0) throw std::invalid_argument("empty-collection: estimated density is zero");

    const int n = g.n;
    const int m = g.m;
    const int half = m / 2;

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::string split_desc = "first_half";
    if (split.kind == LayerSplit::Kind::SeededRandom) {
        RngStream r(split.seed, "layer-split");
        for (int i = m - 1; i > 0; --i) {
            const int j = static_cast<int>(r.below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        split_desc = "seeded_random(" + std::to_string(split.seed) + ")";
    }

    const double power_norm = std::pow(static_cast<double>(n) * rho, static_cast<double>(e - 1));
    auto layer_term = [&](int l) -> Matrix {
        const Matrix& a = g.layer(l);
        if (e == 1) return a;
        Matrix p = a;
        for (int t = 1; t < e; ++t) p = p * a;
        return p / power_norm;
    };

    Matrix s_first = Matrix::Zero(n, n);   // average over S
    Matrix s_second = Matrix::Zero(n, n);  // average over the complement
    for (int t = 0; t < m; ++t) {
        const int l = order[static_cast<std::size_t>(t)];
        if (t < half)
            s_first += layer_term(l);
        else
            s_second += layer_term(l);
    }
    s_first /= static_cast<double>(half);
    s_second /= static_cast<double>(m - half);

    // full k-sums, then remove the k = i and k = j terms
    const Matrix full = s_first * s_second.transpose();
    Matrix r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = full(i, j) - s_first(i, i) * s_second(j, i);
            int count = n - 1;
            if (i != j) {
                v -= s_first(i, j) * s_second(j, j);
                count = n - 2;
            }
            r(i, j) = v / static_cast<double>(count);
        }
    }

    const double denom = std::pow(rho, 2.0 * static_cast<double>(e));
    DistanceMatrix out;
    out.n = n;
    out.path_exponent = e;
    out.split = split_desc;
    out.D = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = std::max(0.0, r(i, i) + r(j, j) - r(i, j) - r(j, i)) / denom;
            out.D(i, j) = v;
            out.D(j, i) = v;
        }
    }
    return out;
}

}  // namespace mgraphon
