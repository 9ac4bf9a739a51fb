#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgraphon/distance.hpp"

namespace mgraphon {

// A quadruple (i,j,p,q) asserting D[i][j] < D[p][q] (strict; ties are never
// emitted).
struct OrdinalConstraint {
    int i, j, p, q;
};

struct OrdinalConstraintSet {
    std::vector<OrdinalConstraint> constraints;
    std::string scheme;
};

struct ConstraintScheme {
    enum class Kind { WithinRow, SampledQuadruples };
    Kind kind = Kind::WithinRow;
    int count = 0;           // sampled scheme only
    std::uint64_t seed = 0;  // sampled scheme only

    static ConstraintScheme within_row() { return {}; }
    static ConstraintScheme sampled(int count, std::uint64_t seed) {
        return {Kind::SampledQuadruples, count, seed};
    }
};

// within_row: per row, one constraint between each consecutive pair of the
// strictly increasing sorted off-diagonal distances (O(n^2) constraints).
// sampled: uniform quadruples with distinct distance values.
OrdinalConstraintSet build_constraints(const DistanceMatrix& d,
                                       ConstraintScheme scheme = ConstraintScheme::within_row());

struct EmbedOptions {
    int restarts = 10;
    int max_iter = 2000;
    double margin = 0.0;        // <= 0 resolves to the 10th percentile of
                                // positive constraint gaps, rescaled by max(D)
    double step_initial = 0.25; // geometric step decay from step_initial
    double step_final = 1e-3;   // down to step_final over max_iter
    std::uint64_t seed = 0;
};

struct Embedding {
    Vector positions;  // n values in [1/(n+1), n/(n+1)]
    double stress = 0.0;
    int restarts_used = 0;
    double violated_fraction = 0.0;
};

// Mean squared hinge stress of the given positions.
double stress_of(const Vector& positions, const OrdinalConstraintSet& cs, double margin);
double violated_fraction_of(const Vector& positions, const OrdinalConstraintSet& cs);

// Minimizes the hinge stress over 1-D positions by gradient descent from
// uniform-random starts; the lowest-stress restart wins and its positions are
// min-max rescaled to [1/(n+1), n/(n+1)]. Ties and empty constraint sets fall
// back to index order i -> i/(n+1). Never throws on non-convergence: quality
// is reported through stress and violated_fraction.
Embedding embed_1d(const DistanceMatrix& d, const EmbedOptions& opts = {});
Embedding embed_1d(const DistanceMatrix& d, const OrdinalConstraintSet& cs,
                   const EmbedOptions& opts);

// Spearman rank correlation with average ranks on ties.
double spearman(const Vector& a, const Vector& b);

}  // namespace mgraphon
