#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mgraphon/model.hpp"

namespace mgraphon {

enum class SmoothMethod { NadarayaWatson, LocalLinear };
enum class KernelType { Uniform, Epanechnikov, Gaussian };
enum class LinkType { Identity, Logit };

struct SmootherConfig {
    SmoothMethod method = SmoothMethod::NadarayaWatson;
    KernelType kernel = KernelType::Epanechnikov;
    std::optional<double> bandwidth_x;  // unset: sd(design) * N^(-1/(d+4))
    std::optional<double> bandwidth_z;
    LinkType link = LinkType::Identity;
    bool cross_validate = false;  // 5-fold CV over a x{0.5,1,2} bandwidth grid
};

// Configuration actually used by a fit, after auto-resolution, optional CV
// and any bandwidth widening.
struct ResolvedSmoother {
    SmoothMethod method = SmoothMethod::NadarayaWatson;
    KernelType kernel = KernelType::Epanechnikov;
    LinkType link = LinkType::Identity;
    double bandwidth_x = 0.0;
    double bandwidth_z = 0.0;
    double cv_mult_x = 1.0;
    double cv_mult_z = 1.0;
    int widenings = 0;  // max number of local bandwidth doublings needed
};

enum class FitKind { Standard, Replicated, PerEdge, PerNetwork };

struct FitResult {
    FitKind kind = FitKind::Standard;
    int n = 0, m = 0;
    std::vector<Matrix> P_layers;  // m layers, or a single one when constant
    bool constant_in_layers = false;
    double rho_hat = 0.0;
    Vector positions;  // node positions used (empty for per-edge fits)
    Vector netpos;     // network positions / covariates used (empty when 2-D)
    ResolvedSmoother config;
    // link-transformed responses with zero diagonal, retained so predict and
    // the bootstrap can re-evaluate the smoother (Standard/Replicated only)
    std::vector<Matrix> design_responses;

    const Matrix& p_hat_layer(int l) const {
        return P_layers[static_cast<std::size_t>(constant_in_layers ? 0 : l)];
    }
    double p_hat(int i, int j, int l) const { return p_hat_layer(l)(i, j); }
    double f_hat(int i, int j, int l) const {
        return rho_hat > 0.0 ? p_hat(i, j, l) / rho_hat : 0.0;
    }
    Matrix f_hat_layer(int l) const {
        return rho_hat > 0.0 ? Matrix(p_hat_layer(l) / rho_hat) : Matrix::Zero(n, n);
    }
};

// Oracle nodal positions (1/(n+1), ..., n/(n+1)).
Vector oracle_positions(int n);

// Kernel regression of the responses A[i][j][l], i != j (both orderings, so
// the fit is symmetric) on (positions_i, positions_j, netpos_l) with a
// product kernel, evaluated at every design triple. Diagonal entries hold the
// local fit but are not part of the design and are excluded from scoring.
FitResult fit_multigraphon(const GraphCollection& g, const Vector& positions,
                           const Vector& netpos, const SmootherConfig& config = {});

// Replicated case: regresses the aggregated adjacency on (positions_i,
// positions_j); the result is constant across layers.
FitResult fit_replicated(const GraphCollection& g, const Vector& positions,
                         const SmootherConfig& config = {});

// Pointwise evaluation of the fitted smoother, symmetrized over (x,y) and
// clamped to [0,1]. Empty neighborhoods widen the bandwidth by doubling.
// Requires a fit that retains kernel design points (Standard or Replicated).
double predict(const FitResult& fit, double x, double y, double z);

// All-pairs evaluation at the fit's node positions and a fixed z.
Matrix predict_layer(const FitResult& fit, double z);

enum class Regime { Standard, PerEdge, PerNetwork };

// PerEdge iff m > n^2; PerNetwork iff m < (n * rho_hat^2)^(-1/2); PerEdge
// wins when both trigger.
Regime select_regime(int n, int m, double rho_hat);

// One 1-D regression per node pair of A[i][j][.] on netpos.
FitResult fit_per_edge(const GraphCollection& g, const Vector& netpos,
                       const SmootherConfig& config = {});

// Neighborhood-smoothing estimate per layer, then per-pair 1-D regression of
// the layer intensities on netpos.
FitResult fit_per_network(const GraphCollection& g, const Vector& netpos,
                          const SmootherConfig& config = {});

struct BootstrapBands {
    Vector zgrid;
    Vector curve;  // full-data fit at (positions_i, positions_j, zgrid)
    Vector lower;
    Vector upper;
};

// Subsampling bootstrap for the pair (i,j): B half-size layer subsamples
// without replacement, refit with positions and bandwidths held fixed,
// percentile bands at the given level.
BootstrapBands bootstrap_ci(const GraphCollection& g, const Vector& positions,
                            const Vector& netpos, const SmootherConfig& config, int i, int j,
                            const Vector& zgrid, int B = 200, double level = 0.95,
                            std::uint64_t seed = 0);

}  // namespace mgraphon
