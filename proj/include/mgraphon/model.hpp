#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mgraphon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Multi-graphon kernels f(x,y;z)
// ---------------------------------------------------------------------------

enum class GraphonKind { F1, F2, F3, Grid };

// Regular lattice over [0,1]^3 with trilinear interpolation. Symmetry in the
// first two axes is enforced by canonicalizing lookups to i <= j, so only the
// upper wedge of the stored values is ever read.
struct GridKernel {
    int nx = 0, ny = 0, nz = 0;
    std::vector<double> values;  // x index fastest, then y, then z

    double value_at(int i, int j, int k) const;
    double interpolate(double x, double y, double z) const;
};

struct MultiGraphonSpec {
    GraphonKind kind = GraphonKind::F1;
    double beta = 0.0;  // heterogeneity coefficient, >= 0
    std::shared_ptr<const GridKernel> grid;

    static MultiGraphonSpec f1(double beta = 0.0) { return {GraphonKind::F1, beta, nullptr}; }
    static MultiGraphonSpec f2(double beta = 0.0) { return {GraphonKind::F2, beta, nullptr}; }
    static MultiGraphonSpec f3(double beta = 0.0) { return {GraphonKind::F3, beta, nullptr}; }
    static MultiGraphonSpec from_grid(GridKernel g);
};

// f(x,y;z); symmetric in (x,y), nonnegative.
double evaluate(const MultiGraphonSpec& spec, double x, double y, double z);

// max of f over a regular resolution^3 grid on [0,1]^3 (exact at the corners
// and block extremes of all built-ins).
double sup_on_grid(const MultiGraphonSpec& spec, int resolution = 101);

// ---------------------------------------------------------------------------
// Flattened kernel  fbar(u,v) = \int_0^1 f(u,v;z) dz  (composite midpoint)
// ---------------------------------------------------------------------------

class FlattenedKernel {
  public:
    FlattenedKernel(MultiGraphonSpec spec, int quad_points);

    double operator()(double u, double v) const;

    // fbar(u, v_q) over the midpoint nodes v_q = (q+0.5)/Q; one row of the
    // profile table used by the distance oracle.
    Vector profile(double u) const;

    int quad_points() const { return quad_points_; }

  private:
    MultiGraphonSpec spec_;
    int quad_points_;
};

FlattenedKernel flatten(const MultiGraphonSpec& spec, int quad_points = 501);

// \int_0^1 (fbar(xi,v) - fbar(xj,v))^2 dv by composite midpoint quadrature
// with quad_points nodes for the v integral and quad_points_z nodes inside
// the flattening integral (0: same as quad_points). Ground-truth oracle for
// the distance estimator.
double true_distance(const MultiGraphonSpec& spec, double xi, double xj,
                     int quad_points = 501, int quad_points_z = 0);

// Precomputed pairwise true distances for a set of latent positions; shares
// the flattened profiles so large test grids stay cheap.
Matrix true_distance_table(const MultiGraphonSpec& spec, const Vector& xs,
                           int quad_points = 501);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

enum class SamplingMode { Replicated, Dynamic, CrossSection };

struct LatentDraw {
    Vector x;        // n node positions in [0,1]
    Vector z;        // m network positions in [0,1]
    Vector z_check;  // m covariates (cross-section mode; empty otherwise)
    SamplingMode mode = SamplingMode::Replicated;
};

struct GraphCollection {
    int n = 0;
    int m = 0;
    std::vector<Matrix> layers;  // each n x n, symmetric, zero diagonal
    bool binary = true;
    std::optional<double> rho;  // sampling sparsity, if synthetic

    const Matrix& layer(int l) const { return layers[static_cast<std::size_t>(l)]; }
    Matrix aggregated() const;  // mean over layers
};

struct SampleResult {
    GraphCollection graphs;
    LatentDraw latents;
};

// Draws x_i iid U(0,1), z per mode (dynamic: z_l = l/m exactly; otherwise iid
// U(0,1)), cross-section covariates z_check = z + N(0, sigma_cov^2), and
// A[i][j][l] ~ Bernoulli(rho * f(x_i,x_j;z_l)) independently for i < j.
// Requires rho * sup f <= 1 (checked on a 101^3 grid). Deterministic given
// seed; layer streams are independent so sampling can be parallelized.
SampleResult sample(const MultiGraphonSpec& spec, int n, int m, double rho,
                    double sigma_cov, SamplingMode mode, std::uint64_t seed);

// rho-hat: mean off-diagonal entry over all layers (edge proportion for
// binary data, mean edge weight for counts).
double estimate_density(const GraphCollection& g);

}  // namespace mgraphon
