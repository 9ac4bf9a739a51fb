#pragma once

#include <cstdint>
#include <string>

#include "mgraphon/model.hpp"

namespace mgraphon {

// Choice of the half-size layer subset S used by the distance estimator.
// The estimator is valid for any such subset; the seeded variant is intended
// for exchangeable (replicated) collections.
struct LayerSplit {
    enum class Kind { FirstHalf, SeededRandom };
    Kind kind = Kind::FirstHalf;
    std::uint64_t seed = 0;

    static LayerSplit first_half() { return {Kind::FirstHalf, 0}; }
    static LayerSplit seeded_random(std::uint64_t seed) { return {Kind::SeededRandom, seed}; }
};

struct DistanceMatrix {
    int n = 0;
    Matrix D;              // symmetric, zero diagonal, nonnegative
    int path_exponent = 1; // e
    std::string split;     // description of the layer subset used
};

// Estimated pairwise node distances.
//
// With S the chosen floor(m/2)-subset, per-layer matrices M_l are the raw
// adjacencies (e = 1) or their e-th powers divided by (n * rho-hat)^(e-1)
// (e > 1). Row averages over S form the s-side, averages over the complement
// the s'-side, and
//
//   r[i][j] = sum_{k not in {i,j}} s[i][k] * s'[j][k] / count,
//
// where count is the actual number of summands (n-2 off the diagonal, n-1 on
// it). The distance is D[i][j] = (r[i][i]+r[j][j]-r[i][j]-r[j][i])_+ /
// rho-hat^(2e), with rho-hat recomputed from the data.
DistanceMatrix distance_matrix(const GraphCollection& g,
                               LayerSplit split = LayerSplit::first_half(), int e = 1);

}  // namespace mgraphon
