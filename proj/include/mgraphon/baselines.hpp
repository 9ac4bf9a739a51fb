#pragma once

#include "mgraphon/model.hpp"

namespace mgraphon {

// Spectral threshold eta * sqrt(n * vhat / m_eff) with vhat =
// mean(M)(1 - mean(M)). m_eff rescales the threshold to the noise level of an
// average over m_eff layers; the default m_eff = 1 is the published method,
// which treats the input as a single matrix. Hollow adjacency averages shift
// the noise bulk by the missing diagonal, so the single-matrix threshold is
// also the one that clears it.
double usvt_threshold(const Matrix& m, double eta = 1.0, int m_eff = 1);

// Eigenvalue thresholding at a fixed cutoff: eigenvalues with |lambda| < tau
// are zeroed, the matrix is reconstructed, clamped entrywise to [0,1] and
// symmetrized.
Matrix usvt_with_threshold(const Matrix& m, double tau);

// Universal singular value thresholding for a symmetric matrix with entries
// in [0,1].
Matrix usvt(const Matrix& m, double eta = 1.0, int m_eff = 1);

// Neighborhood smoothing. Row distances
//   dhat^2(i,j) = max_{k not in {i,j}} |<M_i. - M_j., M_k.>| / n,
// neighborhoods cut at the within-row quantile of level h = sqrt(log n / n)
// (at least one neighbor by construction), row means over neighborhoods,
// then symmetrize and clamp.
Matrix nbs(const Matrix& m);

}  // namespace mgraphon
