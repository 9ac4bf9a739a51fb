#pragma once

#include <cstdint>

#include "mgraphon/model.hpp"
#include "mgraphon/smoother.hpp"

namespace mgraphon {

// Undirected simple graph stored as bitset rows.
struct SimpleGraph {
    int n = 0;
    int words_per_row = 0;
    std::vector<std::uint64_t> bits;

    explicit SimpleGraph(int n_nodes = 0);
    bool edge(int i, int j) const;
    void set_edge(int i, int j);
    static SimpleGraph from_matrix(const Matrix& adjacency);  // entries must be 0/1
};

double density(const SimpleGraph& g);          // 2E / (n(n-1))
long long triangles(const SimpleGraph& g);     // number of triangles
double transitivity(const SimpleGraph& g);     // 3*triangles / #paths-of-length-2
// mean shortest-path distance over connected pairs of the largest connected
// component; throws undefined-statistic on graphs whose largest component has
// fewer than two nodes
double avg_path_length(const SimpleGraph& g);

struct StatSummary {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int skipped = 0;  // draws where the statistic was undefined
};

struct ResampleStats {
    StatSummary density;
    StatSummary triangles;
    StatSummary transitivity;
    StatSummary avg_path_length;
    int draws = 0;
    double level = 0.95;
};

// Draws B graphs with independent Bernoulli edges from the given probability
// matrix (clamped to [0,1]) and summarizes the four statistics with means and
// percentile intervals. Edgeless draws skip avg_path_length and are counted.
ResampleStats resample_stats(const Matrix& edge_prob, int B, double level, std::uint64_t seed);

// Convenience overload: edge probabilities are the fitted smoother evaluated
// at the fit's node positions and the given network position.
ResampleStats resample_stats(const FitResult& fit, double zvalue, int B, double level,
                             std::uint64_t seed);

}  // namespace mgraphon
