#include "mgraphon/model.hpp"

#include <cmath>
#include <stdexcept>

#include "mgraphon/parallel.hpp"
#include "mgraphon/rng.hpp"

namespace mgraphon {

// ---------------------------------------------------------------------------
// GridKernel
// ---------------------------------------------------------------------------

double GridKernel::value_at(int i, int j, int k) const {
    if (i > j) std::swap(i, j);  // canonical wedge
    const std::size_t idx = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(nx) *
                                (static_cast<std::size_t>(j) +
                                 static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
    return values[idx];
}

namespace {
// axis position -> (lower cell index, fraction); a single-node axis is constant
inline void axis_locate(double t, int count, int& i0, double& frac) {
    if (count <= 1) {
        i0 = 0;
        frac = 0.0;
        return;
    }
    double pos = t * static_cast<double>(count - 1);
    if (pos <= 0.0) { i0 = 0; frac = 0.0; return; }
    if (pos >= static_cast<double>(count - 1)) { i0 = count - 2; frac = 1.0; return; }
    i0 = static_cast<int>(pos);
    frac = pos - static_cast<double>(i0);
}
}  // namespace

double GridKernel::interpolate(double x, double y, double z) const {
    if (x > y) std::swap(x, y);  // bit-exact symmetry in (x,y)
    int ix, iy, iz;
    double fx, fy, fz;
    axis_locate(x, nx, ix, fx);
    axis_locate(y, ny, iy, fy);
    axis_locate(z, nz, iz, fz);
    const int ix1 = nx > 1 ? ix + 1 : ix;
    const int iy1 = ny > 1 ? iy + 1 : iy;
    const int iz1 = nz > 1 ? iz + 1 : iz;
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz) {
        const double wz = dz == 0 ? 1.0 - fz : fz;
        if (wz == 0.0) continue;
        const int k = dz == 0 ? iz : iz1;
        for (int dy = 0; dy < 2; ++dy) {
            const double wy = dy == 0 ? 1.0 - fy : fy;
            if (wy == 0.0) continue;
            const int j = dy == 0 ? iy : iy1;
            for (int dx = 0; dx < 2; ++dx) {
                const double wx = dx == 0 ? 1.0 - fx : fx;
                if (wx == 0.0) continue;
                const int i = dx == 0 ? ix : ix1;
                acc += wx * wy * wz * value_at(i, j, k);
            }
        }
    }
    return acc;
}

MultiGraphonSpec MultiGraphonSpec::from_grid(GridKernel g) {
    if (g.nx <= 0 || g.ny <= 0 || g.nz <= 0 ||
        g.values.size() != static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny) *
                               static_cast<std::size_t>(g.nz))
        throw std::invalid_argument("invalid-spec: grid lattice is empty or malformed");
    if (g.nx != g.ny)
        throw std::invalid_argument("invalid-spec: grid must have nx == ny for symmetry");
    for (double v : g.values)
        if (!(v >= 0.0)) throw std::invalid_argument("invalid-spec: grid values must be >= 0");
    MultiGraphonSpec s;
    s.kind = GraphonKind::Grid;
    s.grid = std::make_shared<const GridKernel>(std::move(g));
    return s;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

double evaluate(const MultiGraphonSpec& spec, double x, double y, double z) {
    if (x > y) std::swap(x, y);  // symmetric in (x,y), bit-exact
    const double b = spec.beta;
    switch (spec.kind) {
        case GraphonKind::F1:
            return (x * y + b * z * z) / (0.25 + b * z * z);
        case GraphonKind::F2:
            return (std::exp(-std::abs(x - y) / 2.0) + b * z) / (0.8522 + b * z);
        case GraphonKind::F3: {
            // k = 2 blocks; the measure-zero boundary x = 0 maps to block 1
            const int a = std::max(1, static_cast<int>(std::ceil(2.0 * x)));
            const int bb = std::max(1, static_cast<int>(std::ceil(2.0 * y)));
            const double v = (a == bb) ? 0.7 - 0.0938 * b * z : 0.3 + b * x * y * z;
            return std::max(0.0, v);
        }
        case GraphonKind::Grid:
            if (!spec.grid) throw std::invalid_argument("invalid-spec: grid variant without lattice");
            return spec.grid->interpolate(x, y, z);
    }
    throw std::invalid_argument("invalid-spec: unknown kind");
}

double sup_on_grid(const MultiGraphonSpec& spec, int resolution) {
    if (resolution < 2) throw std::invalid_argument("sup_on_grid: resolution must be >= 2");
    const double step = 1.0 / static_cast<double>(resolution - 1);
    double best = 0.0;
    for (int k = 0; k < resolution; ++k) {
        const double z = k * step;
        for (int j = 0; j < resolution; ++j) {
            const double y = j * step;
            for (int i = j; i < resolution; ++i) {  // symmetric: i >= j suffices
                best = std::max(best, evaluate(spec, i * step, y, z));
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// FlattenedKernel / true_distance
// ---------------------------------------------------------------------------

FlattenedKernel::FlattenedKernel(MultiGraphonSpec spec, int quad_points)
    : spec_(std::move(spec)), quad_points_(quad_points) {
    if (quad_points_ < 2) throw std::invalid_argument("flatten: quad_points must be >= 2");
}

double FlattenedKernel::operator()(double u, double v) const {
    const int q = quad_points_;
    double acc = 0.0;
    for (int k = 0; k < q; ++k) {
        const double z = (static_cast<double>(k) + 0.5) / static_cast<double>(q);
        acc += evaluate(spec_, u, v, z);
    }
    return acc / static_cast<double>(q);
}

Vector FlattenedKernel::profile(double u) const {
    const int q = quad_points_;
    Vector out(q);
    for (int t = 0; t < q; ++t) {
        const double v = (static_cast<double>(t) + 0.5) / static_cast<double>(q);
        out[t] = (*this)(u, v);
    }
    return out;
}

FlattenedKernel flatten(const MultiGraphonSpec& spec, int quad_points) {
    return FlattenedKernel(spec, quad_points);
}

double true_distance(const MultiGraphonSpec& spec, double xi, double xj,
                     int quad_points, int quad_points_z) {
    if (quad_points < 2) throw std::invalid_argument("true_distance: quad_points must be >= 2");
    const FlattenedKernel fb(spec, quad_points_z > 0 ? quad_points_z : quad_points);
    double acc = 0.0;
    for (int t = 0; t < quad_points; ++t) {
        const double v = (static_cast<double>(t) + 0.5) / static_cast<double>(quad_points);
        const double d = fb(xi, v) - fb(xj, v);
        acc += d * d;
    }
    return acc / static_cast<double>(quad_points);
}

Matrix true_distance_table(const MultiGraphonSpec& spec, const Vector& xs, int quad_points) {
    const int n = static_cast<int>(xs.size());
    const FlattenedKernel fb(spec, quad_points);
    std::vector<Vector> prof(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::int64_t i) { prof[static_cast<std::size_t>(i)] = fb.profile(xs[i]); });
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v =
                (prof[static_cast<std::size_t>(i)] - prof[static_cast<std::size_t>(j)])
                    .squaredNorm() /
                static_cast<double>(quad_points);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// sample / estimate_density
// ---------------------------------------------------------------------------

Matrix GraphCollection::aggregated() const {
    Matrix acc = Matrix::Zero(n, n);
    for (const auto& a : layers) acc += a;
    if (m > 0) acc /= static_cast<double>(m);
    return acc;
}

SampleResult sample(const MultiGraphonSpec& spec, int n, int m, double rho,
                    double sigma_cov, SamplingMode mode, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample: n must be >= 2");
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    if (!(rho > 0.0)) throw std::invalid_argument("sample: rho must be positive");
    if (sigma_cov < 0.0) throw std::invalid_argument("sample: sigma_cov must be >= 0");
    const double sup = sup_on_grid(spec);
    if (rho * sup > 1.0 + 1e-12)
        throw std::domain_error("probability-overflow: rho * sup f = " +
                                std::to_string(rho * sup) + " exceeds 1");

    LatentDraw lat;
    lat.mode = mode;
    lat.x.resize(n);
    {
        RngStream rx(seed, "latent-x");
        for (int i = 0; i < n; ++i) lat.x[i] = rx.uniform();
    }
    lat.z.resize(m);
    if (mode == SamplingMode::Dynamic) {
        for (int l = 0; l < m; ++l) lat.z[l] = static_cast<double>(l + 1) / static_cast<double>(m);
    } else {
        RngStream rz(seed, "latent-z");
        for (int l = 0; l < m; ++l) lat.z[l] = rz.uniform();
    }
    if (mode == SamplingMode::CrossSection) {
        RngStream rc(seed, "covariate");
        lat.z_check.resize(m);
        for (int l = 0; l < m; ++l) lat.z_check[l] = lat.z[l] + rc.normal(0.0, sigma_cov);
    }

    GraphCollection g;
    g.n = n;
    g.m = m;
    g.binary = true;
    g.rho = rho;
    g.layers.assign(static_cast<std::size_t>(m), Matrix());
    parallel_for(m, [&](std::int64_t l) {
        RngStream re(seed, "edges", static_cast<std::uint64_t>(l));
        Matrix a = Matrix::Zero(n, n);
        const double z = lat.z[static_cast<int>(l)];
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double p =
                    std::clamp(rho * evaluate(spec, lat.x[i], lat.x[j], z), 0.0, 1.0);
                if (re.bernoulli(p)) {
                    a(i, j) = 1.0;
                    a(j, i) = 1.0;
                }
            }
        }
        g.layers[static_cast<std::size_t>(l)] = std::move(a);
    });
    return {std::move(g), std::move(lat)};
}

double estimate_density(const GraphCollection& g) {
    if (g.n < 2) throw std::invalid_argument("estimate_density: need n >= 2");
    if (g.m < 1) throw std::invalid_argument("estimate_density: need m >= 1");
    double acc = 0.0;
    for (const auto& a : g.layers) {
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j) acc += a(i, j);
    }
    const double pairs = 0.5 * static_cast<double>(g.n) * static_cast<double>(g.n - 1);
    return acc / (static_cast<double>(g.m) * pairs);
}

}  // namespace mgraphon
