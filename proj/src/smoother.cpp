#include "mgraphon/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mgraphon/baselines.hpp"
#include "mgraphon/parallel.hpp"
#include "mgraphon/rng.hpp"
#include "mgraphon/stats.hpp"

namespace mgraphon {

namespace {

constexpr double kLogitEps = 1e-6;
constexpr int kMaxWiden = 60;

double kern(KernelType k, double u) {
    switch (k) {
        case KernelType::Uniform:
            return std::abs(u) <= 1.0 ? 0.5 : 0.0;
        case KernelType::Epanechnikov: {
            const double t = 1.0 - u * u;
            return t > 0.0 ? 0.75 * t : 0.0;
        }
        case KernelType::Gaussian:
            return 0.3989422804014327 * std::exp(-0.5 * u * u);
    }
    return 0.0;
}

bool compact_support(KernelType k) { return k != KernelType::Gaussian; }

double link_transform(LinkType link, double y) {
    if (link == LinkType::Identity) return y;
    const double t = std::clamp(y, kLogitEps, 1.0 - kLogitEps);
    return std::log(t / (1.0 - t));
}

double link_invert(LinkType link, double v) {
    if (link == LinkType::Identity) return v;
    return 1.0 / (1.0 + std::exp(-v));
}

// responses with the link applied and a zeroed diagonal (the diagonal is not
// part of the design)
Matrix transform_matrix(const Matrix& a, LinkType link) {
    const int n = static_cast<int>(a.rows());
    Matrix y(n, n);
    for (int i = 0; i < n; ++i) {
        y(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = link_transform(link, a(i, j));
            y(i, j) = v;
            y(j, i) = link_transform(link, a(j, i));
        }
    }
    return y;
}

std::vector<Matrix> transform_layers(const GraphCollection& g, LinkType link) {
    std::vector<Matrix> y(static_cast<std::size_t>(g.m));
    parallel_for(g.m, [&](std::int64_t l) {
        y[static_cast<std::size_t>(l)] = transform_matrix(g.layer(static_cast<int>(l)), link);
    });
    return y;
}

double auto_bandwidth(double sd, double n_points, int d) {
    const double h = sd * std::pow(std::max(n_points, 1.0), -1.0 / static_cast<double>(d + 4));
    return h > 0.0 ? h : 1.0;
}

double pop_sd_vec(const Vector& v) {
    if (v.size() == 0) return 0.0;
    const double m = v.mean();
    return std::sqrt((v.array() - m).square().mean());
}

// layer indices sorted by netpos, for compact-kernel windows
struct ZOrder {
    std::vector<int> idx;
    std::vector<double> val;

    explicit ZOrder(const Vector& netpos) {
        const int m = static_cast<int>(netpos.size());
        idx.resize(static_cast<std::size_t>(m));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return netpos[a] != netpos[b] ? netpos[a] < netpos[b] : a < b; });
        val.resize(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) val[static_cast<std::size_t>(t)] = netpos[idx[static_cast<std::size_t>(t)]];
    }

    // fn(layer, weight, dz) over layers with nonzero kernel weight; mask (when
    // nonempty) restricts to layers with mask[l] != 0
    template <class F>
    void for_each(const Vector& netpos, KernelType k, double h, double z,
                  const std::vector<char>& mask, F&& fn) const {
        const int m = static_cast<int>(netpos.size());
        int lo = 0, hi = m;
        if (compact_support(k)) {
            lo = static_cast<int>(std::lower_bound(val.begin(), val.end(), z - h) - val.begin());
            hi = static_cast<int>(std::upper_bound(val.begin(), val.end(), z + h) - val.begin());
        }
        for (int t = lo; t < hi; ++t) {
            const int l = idx[static_cast<std::size_t>(t)];
            if (!mask.empty() && !mask[static_cast<std::size_t>(l)]) continue;
            const double dz = netpos[l] - z;
            const double w = kern(k, dz / h);
            if (w > 0.0) fn(l, w, dz);
        }
    }
};

// x-side kernel caches at the design positions
struct XSide {
    bool ll = false;
    Matrix W0, W1, W2;
    Vector s0, s1, s2;
    Matrix H00, H10, H11, H20;  // Wa Wb^T; H01 = H10^T, H02 = H20^T
};

// rows index evaluation points, columns design nodes; a nonempty design mask
// zeroes the columns of excluded nodes
XSide build_xside(const Vector& eval_pos, const Vector& design_pos, KernelType k, double hx,
                  bool ll, const std::vector<char>& design_mask) {
    const int ne = static_cast<int>(eval_pos.size());
    const int nd = static_cast<int>(design_pos.size());
    XSide xs;
    xs.ll = ll;
    xs.W0.resize(ne, nd);
    if (ll) {
        xs.W1.resize(ne, nd);
        xs.W2.resize(ne, nd);
    }
    for (int p = 0; p < ne; ++p) {
        for (int i = 0; i < nd; ++i) {
            double w = 0.0;
            const double dx = design_pos[i] - eval_pos[p];
            if (design_mask.empty() || design_mask[static_cast<std::size_t>(i)])
                w = kern(k, dx / hx);
            xs.W0(p, i) = w;
            if (ll) {
                xs.W1(p, i) = w * dx;
                xs.W2(p, i) = w * dx * dx;
            }
        }
    }
    xs.s0 = xs.W0.rowwise().sum();
    xs.H00 = xs.W0 * xs.W0.transpose();
    if (ll) {
        xs.s1 = xs.W1.rowwise().sum();
        xs.s2 = xs.W2.rowwise().sum();
        xs.H10 = xs.W1 * xs.W0.transpose();
        xs.H11 = xs.W1 * xs.W1.transpose();
        xs.H20 = xs.W2 * xs.W0.transpose();
    }
    return xs;
}

// single-entry NW evaluation with locally widened x-bandwidth; returns the
// number of doublings used
int widened_entry_nw(const Vector& design_pos, const std::vector<Matrix>& y,
                     const Vector& netpos, const ZOrder* zorder, const std::vector<char>& mask,
                     KernelType k, double hx, double hz, double xp, double xq, double z,
                     double& value) {
    const int n = static_cast<int>(design_pos.size());
    for (int widen = 1; widen <= kMaxWiden; ++widen) {
        const double h = hx * std::pow(2.0, widen);
        Vector wp(n), wq(n);
        for (int i = 0; i < n; ++i) {
            wp[i] = kern(k, (design_pos[i] - xp) / h);
            wq[i] = kern(k, (design_pos[i] - xq) / h);
        }
        double num = 0.0, v = 0.0;
        if (zorder) {
            zorder->for_each(netpos, k, hz, z, mask, [&](int l, double w, double) {
                num += w * wp.dot(y[static_cast<std::size_t>(l)] * wq);
                v += w;
            });
        } else {
            num = wp.dot(y[0] * wq);
            v = 1.0;
        }
        const double den = v * (wp.sum() * wq.sum() - wp.dot(wq));
        if (den > 0.0) {
            value = num / den;
            return widen;
        }
    }
    value = 0.0;
    return kMaxWiden;
}

// all-pairs P-scale evaluation at fixed z over a subset of layers;
// zorder == nullptr means the replicated (2-D) case with y = {Abar}.
// Returns the max number of local widenings used.
int eval_slice(const XSide& xs, const Vector& design_pos, const std::vector<Matrix>& y,
               const Vector& netpos, const ZOrder* zorder, const std::vector<char>& layer_mask,
               KernelType kt, LinkType link, double hx, double hz, double z, Matrix& out) {
    const int ne = static_cast<int>(xs.W0.rows());
    int widen = 0;

    Matrix b;          // z-weighted response sum
    Matrix b1;         // dz-weighted (local linear only)
    double v0 = 1.0, v1 = 0.0, v2 = 0.0;
    if (zorder) {
        const int n = static_cast<int>(y[0].rows());
        b = Matrix::Zero(n, n);
        if (xs.ll) b1 = Matrix::Zero(n, n);
        double used_hz = hz;
        for (int attempt = 0;; ++attempt) {
            v0 = v1 = v2 = 0.0;
            b.setZero();
            if (xs.ll) b1.setZero();
            zorder->for_each(netpos, kt, used_hz, z, layer_mask, [&](int l, double w, double dz) {
                b += w * y[static_cast<std::size_t>(l)];
                v0 += w;
                if (xs.ll) {
                    b1 += (w * dz) * y[static_cast<std::size_t>(l)];
                    v1 += w * dz;
                    v2 += w * dz * dz;
                }
            });
            if (v0 > 0.0 || attempt >= kMaxWiden) break;
            used_hz *= 2.0;
            widen = std::max(widen, attempt + 1);
        }
    } else {
        b = y[0];
        if (xs.ll) b1 = Matrix::Zero(b.rows(), b.cols());
    }

    const Matrix u0 = xs.W0 * b;
    const Matrix g00 = u0 * xs.W0.transpose();
    Matrix g10, g01, g0z;
    if (xs.ll) {
        g10 = (xs.W1 * b) * xs.W0.transpose();
        g01 = u0 * xs.W1.transpose();
        if (zorder) g0z = (xs.W0 * b1) * xs.W0.transpose();
    }

    out.resize(ne, ne);
    for (int p = 0; p < ne; ++p) {
        for (int q = p; q < ne; ++q) {
            const double m00 = xs.s0[p] * xs.s0[q] - xs.H00(p, q);
            const double den = v0 * m00;
            double val;
            bool solved = false;
            if (xs.ll && den > 0.0) {
                const double m10 = xs.s1[p] * xs.s0[q] - xs.H10(p, q);
                const double m01 = xs.s0[p] * xs.s1[q] - xs.H10(q, p);
                const double m11 = xs.s1[p] * xs.s1[q] - xs.H11(p, q);
                const double m20 = xs.s2[p] * xs.s0[q] - xs.H20(p, q);
                const double m02 = xs.s0[p] * xs.s2[q] - xs.H20(q, p);
                if (zorder) {
                    Eigen::Matrix4d mm;
                    mm << m00 * v0, m10 * v0, m01 * v0, m00 * v1,
                          m10 * v0, m20 * v0, m11 * v0, m10 * v1,
                          m01 * v0, m11 * v0, m02 * v0, m01 * v1,
                          m00 * v1, m10 * v1, m01 * v1, m00 * v2;
                    Eigen::Vector4d rr(g00(p, q), g10(p, q), g01(p, q), g0z(p, q));
                    Eigen::FullPivLU<Eigen::Matrix4d> lu(mm);
                    if (lu.isInvertible()) {
                        const Eigen::Vector4d beta = lu.solve(rr);
                        if (std::isfinite(beta[0])) {
                            val = beta[0];
                            solved = true;
                        }
                    }
                } else {
                    Eigen::Matrix3d mm;
                    mm << m00, m10, m01,
                          m10, m20, m11,
                          m01, m11, m02;
                    Eigen::Vector3d rr(g00(p, q), g10(p, q), g01(p, q));
                    Eigen::FullPivLU<Eigen::Matrix3d> lu(mm);
                    if (lu.isInvertible()) {
                        const Eigen::Vector3d beta = lu.solve(rr);
                        if (std::isfinite(beta[0])) {
                            val = beta[0];
                            solved = true;
                        }
                    }
                }
            }
            if (!solved) {
                if (den > 0.0) {
                    val = g00(p, q) / den;
                } else {
                    // empty neighborhood (possible on the diagonal with tiny
                    // bandwidths): widen locally
                    widen = std::max(
                        widen, widened_entry_nw(design_pos, y, netpos, zorder, layer_mask, kt,
                                                hx, hz, design_pos[p], design_pos[q], z, val));
                }
            }
            out(p, q) = val;
            out(q, p) = val;
        }
    }
    for (int p = 0; p < ne; ++p)
        for (int q = 0; q < ne; ++q)
            out(p, q) = std::clamp(link_invert(link, out(p, q)), 0.0, 1.0);
    out = 0.5 * (out + out.transpose());
    return widen;
}

void check_user_bandwidths(const SmootherConfig& cfg) {
    if (cfg.bandwidth_x && *cfg.bandwidth_x <= 0.0)
        throw std::invalid_argument("smoother: bandwidth_x must be positive");
    if (cfg.bandwidth_z && *cfg.bandwidth_z <= 0.0)
        throw std::invalid_argument("smoother: bandwidth_z must be positive");
}

ResolvedSmoother base_resolve(const SmootherConfig& cfg) {
    ResolvedSmoother r;
    r.method = cfg.method;
    r.kernel = cfg.kernel;
    r.link = cfg.link;
    return r;
}

// squared error of predictions vs raw responses over the off-diagonal
double slice_sse(const Matrix& pred, const Matrix& raw) {
    double acc = 0.0;
    const int n = static_cast<int>(pred.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                const double d = pred(i, j) - raw(i, j);
                acc += d * d;
            }
    return acc;
}

const double kCvMults[3] = {1.0, 0.5, 2.0};  // scan order; ties keep the first

}  // namespace

Vector oracle_positions(int n) {
    if (n < 1) throw std::invalid_argument("oracle_positions: need n >= 1");
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    return p;
}

Regime select_regime(int n, int m, double rho_hat) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    if (static_cast<double>(m) > n2) return Regime::PerEdge;
    const double scale = static_cast<double>(n) * rho_hat * rho_hat;
    const double threshold = scale > 0.0 ? 1.0 / std::sqrt(scale)
                                         : std::numeric_limits<double>::infinity();
    if (static_cast<double>(m) < threshold) return Regime::PerNetwork;
    return Regime::Standard;
}

// ---------------------------------------------------------------------------
// Standard (3-D) fit
// ---------------------------------------------------------------------------

FitResult fit_multigraphon(const GraphCollection& g, const Vector& positions,
                           const Vector& netpos, const SmootherConfig& config) {
    if (static_cast<int>(positions.size()) != g.n)
        throw std::invalid_argument("fit_multigraphon: positions length must equal n");
    if (static_cast<int>(netpos.size()) != g.m)
        throw std::invalid_argument("fit_multigraphon: netpos length must equal m");
    if (g.n < 2) throw std::invalid_argument("fit_multigraphon: need n >= 2");
    check_user_bandwidths(config);

    const double n_points = static_cast<double>(g.n) * static_cast<double>(g.n - 1) *
                            static_cast<double>(g.m);
    ResolvedSmoother res = base_resolve(config);
    res.bandwidth_x = config.bandwidth_x.value_or(auto_bandwidth(pop_sd_vec(positions), n_points, 3));
    res.bandwidth_z = config.bandwidth_z.value_or(auto_bandwidth(pop_sd_vec(netpos), n_points, 3));

    const std::vector<Matrix> y = transform_layers(g, config.link);
    const ZOrder zorder(netpos);
    const bool ll = config.method == SmoothMethod::LocalLinear;

    if (config.cross_validate && g.m >= 2) {
        const int folds = std::min(5, g.m);
        double best_err = std::numeric_limits<double>::infinity();
        for (double mx : kCvMults) {
            const XSide xs = build_xside(positions, positions, res.kernel, res.bandwidth_x * mx,
                                         ll, {});
            for (double mz : kCvMults) {
                double err = 0.0;
                for (int f = 0; f < folds; ++f) {
                    std::vector<char> train(static_cast<std::size_t>(g.m));
                    for (int l = 0; l < g.m; ++l) train[static_cast<std::size_t>(l)] = l % folds != f;
                    for (int r = 0; r < g.m; ++r) {
                        if (r % folds != f) continue;
                        Matrix pred;
                        eval_slice(xs, positions, y, netpos, &zorder, train, res.kernel, res.link,
                                   res.bandwidth_x * mx, res.bandwidth_z * mz, netpos[r], pred);
                        err += slice_sse(pred, g.layer(r));
                    }
                }
                if (err < best_err) {
                    best_err = err;
                    res.cv_mult_x = mx;
                    res.cv_mult_z = mz;
                }
            }
        }
        res.bandwidth_x *= res.cv_mult_x;
        res.bandwidth_z *= res.cv_mult_z;
    }

    const XSide xs = build_xside(positions, positions, res.kernel, res.bandwidth_x, ll, {});
    FitResult fit;
    fit.kind = FitKind::Standard;
    fit.n = g.n;
    fit.m = g.m;
    fit.rho_hat = estimate_density(g);
    fit.positions = positions;
    fit.netpos = netpos;
    fit.P_layers.assign(static_cast<std::size_t>(g.m), Matrix());
    std::vector<int> widen(static_cast<std::size_t>(g.m), 0);
    parallel_for(g.m, [&](std::int64_t r) {
        widen[static_cast<std::size_t>(r)] =
            eval_slice(xs, positions, y, netpos, &zorder, {}, res.kernel, res.link,
                       res.bandwidth_x, res.bandwidth_z, netpos[static_cast<int>(r)],
                       fit.P_layers[static_cast<std::size_t>(r)]);
    });
    res.widenings = *std::max_element(widen.begin(), widen.end());
    fit.config = res;
    fit.design_responses = y;
    return fit;
}

// ---------------------------------------------------------------------------
// Replicated (2-D) fit
// ---------------------------------------------------------------------------

FitResult fit_replicated(const GraphCollection& g, const Vector& positions,
                         const SmootherConfig& config) {
    if (static_cast<int>(positions.size()) != g.n)
        throw std::invalid_argument("fit_replicated: positions length must equal n");
    if (g.n < 2) throw std::invalid_argument("fit_replicated: need n >= 2");
    check_user_bandwidths(config);

    const double n_points = static_cast<double>(g.n) * static_cast<double>(g.n - 1);
    ResolvedSmoother res = base_resolve(config);
    res.bandwidth_x = config.bandwidth_x.value_or(auto_bandwidth(pop_sd_vec(positions), n_points, 2));
    res.bandwidth_z = config.bandwidth_z.value_or(1.0);  // unused in 2-D

    const std::vector<Matrix> y{transform_matrix(g.aggregated(), config.link)};
    const bool ll = config.method == SmoothMethod::LocalLinear;
    const Vector no_netpos;

    if (config.cross_validate && g.n >= 2) {
        const int folds = std::min(5, g.n);
        double best_err = std::numeric_limits<double>::infinity();
        const Matrix abar = g.aggregated();
        for (double mx : kCvMults) {
            double err = 0.0;
            for (int f = 0; f < folds; ++f) {
                std::vector<char> train(static_cast<std::size_t>(g.n));
                for (int i = 0; i < g.n; ++i) train[static_cast<std::size_t>(i)] = i % folds != f;
                const XSide xs = build_xside(positions, positions, res.kernel,
                                             res.bandwidth_x * mx, ll, train);
                Matrix pred;
                eval_slice(xs, positions, y, no_netpos, nullptr, {}, res.kernel, res.link,
                           res.bandwidth_x * mx, res.bandwidth_z, 0.0, pred);
                for (int p = 0; p < g.n; ++p)
                    for (int q = 0; q < g.n; ++q) {
                        if (p == q) continue;
                        if (train[static_cast<std::size_t>(p)] && train[static_cast<std::size_t>(q)])
                            continue;  // held-in pairs are not test responses
                        const double d = pred(p, q) - abar(p, q);
                        err += d * d;
                    }
            }
            if (err < best_err) {
                best_err = err;
                res.cv_mult_x = mx;
            }
        }
        res.bandwidth_x *= res.cv_mult_x;
    }

    const XSide xs = build_xside(positions, positions, res.kernel, res.bandwidth_x, ll, {});
    FitResult fit;
    fit.kind = FitKind::Replicated;
    fit.n = g.n;
    fit.m = g.m;
    fit.rho_hat = estimate_density(g);
    fit.positions = positions;
    fit.constant_in_layers = true;
    fit.P_layers.resize(1);
    res.widenings = eval_slice(xs, positions, y, no_netpos, nullptr, {}, res.kernel, res.link,
                               res.bandwidth_x, res.bandwidth_z, 0.0, fit.P_layers[0]);
    fit.config = res;
    fit.design_responses = y;
    return fit;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

namespace {

// one-sided point evaluation (not yet symmetrized); widens both bandwidths on
// empty neighborhoods
double predict_one(const FitResult& fit, double x, double yv, double z) {
    const int n = fit.n;
    const Vector& pos = fit.positions;
    const KernelType kt = fit.config.kernel;
    const LinkType link = fit.config.link;
    const bool ll = fit.config.method == SmoothMethod::LocalLinear;
    const bool has_z = fit.kind == FitKind::Standard;

    for (int attempt = 0; attempt <= kMaxWiden; ++attempt) {
        const double scale = std::pow(2.0, attempt);
        const double hx = fit.config.bandwidth_x * scale;
        const double hz = fit.config.bandwidth_z * scale;
        Vector wx0(n), wy0(n), wx1(n), wy1(n), wx2(n), wy2(n);
        for (int i = 0; i < n; ++i) {
            const double dxi = pos[i] - x;
            const double dyi = pos[i] - yv;
            wx0[i] = kern(kt, dxi / hx);
            wy0[i] = kern(kt, dyi / hx);
            if (ll) {
                wx1[i] = wx0[i] * dxi;
                wy1[i] = wy0[i] * dyi;
                wx2[i] = wx0[i] * dxi * dxi;
                wy2[i] = wy0[i] * dyi * dyi;
            }
        }
        // x-side pair moments over i != j
        auto pair_moment = [&](const Vector& a, const Vector& b) {
            return a.sum() * b.sum() - a.dot(b);
        };
        const double m00 = pair_moment(wx0, wy0);

        double v0 = 1.0, v1 = 0.0, v2 = 0.0;
        double c00 = 0.0, c10 = 0.0, c01 = 0.0, c0z = 0.0;
        if (has_z) {
            v0 = 0.0;
            for (int l = 0; l < fit.m; ++l) {
                const double dz = fit.netpos[l] - z;
                const double w = kern(kt, dz / hz);
                if (w <= 0.0) continue;
                const Matrix& yl = fit.design_responses[static_cast<std::size_t>(l)];
                const double qf = wx0.dot(yl * wy0);
                c00 += w * qf;
                v0 += w;
                if (ll) {
                    c10 += w * wx1.dot(yl * wy0);
                    c01 += w * wx0.dot(yl * wy1);
                    c0z += w * dz * qf;
                    v1 += w * dz;
                    v2 += w * dz * dz;
                }
            }
        } else {
            const Matrix& yl = fit.design_responses[0];
            c00 = wx0.dot(yl * wy0);
            if (ll) {
                c10 = wx1.dot(yl * wy0);
                c01 = wx0.dot(yl * wy1);
            }
        }

        const double den = v0 * m00;
        if (den <= 0.0) continue;  // widen and retry

        double val;
        bool solved = false;
        if (ll) {
            const double m10 = pair_moment(wx1, wy0);
            const double m01 = pair_moment(wx0, wy1);
            const double m11 = pair_moment(wx1, wy1);
            const double m20 = pair_moment(wx2, wy0);
            const double m02 = pair_moment(wx0, wy2);
            if (has_z) {
                Eigen::Matrix4d mm;
                mm << m00 * v0, m10 * v0, m01 * v0, m00 * v1,
                      m10 * v0, m20 * v0, m11 * v0, m10 * v1,
                      m01 * v0, m11 * v0, m02 * v0, m01 * v1,
                      m00 * v1, m10 * v1, m01 * v1, m00 * v2;
                Eigen::FullPivLU<Eigen::Matrix4d> lu(mm);
                if (lu.isInvertible()) {
                    const Eigen::Vector4d beta = lu.solve(Eigen::Vector4d(c00, c10, c01, c0z));
                    if (std::isfinite(beta[0])) {
                        val = beta[0];
                        solved = true;
                    }
                }
            } else {
                Eigen::Matrix3d mm;
                mm << m00, m10, m01,
                      m10, m20, m11,
                      m01, m11, m02;
                Eigen::FullPivLU<Eigen::Matrix3d> lu(mm);
                if (lu.isInvertible()) {
                    const Eigen::Vector3d beta = lu.solve(Eigen::Vector3d(c00, c10, c01));
                    if (std::isfinite(beta[0])) {
                        val = beta[0];
                        solved = true;
                    }
                }
            }
        }
        if (!solved) val = c00 / den;
        return std::clamp(link_invert(link, val), 0.0, 1.0);
    }
    return 0.0;
}

}  // namespace

double predict(const FitResult& fit, double x, double y, double z) {
    if (fit.kind != FitKind::Standard && fit.kind != FitKind::Replicated)
        throw std::invalid_argument("predict: fit does not retain kernel design points");
    if (fit.design_responses.empty())
        throw std::invalid_argument("predict: fit does not retain design responses");
    const double a = predict_one(fit, x, y, z);
    const double b = predict_one(fit, y, x, z);
    return 0.5 * (a + b);
}

Matrix predict_layer(const FitResult& fit, double z) {
    if (fit.kind != FitKind::Standard && fit.kind != FitKind::Replicated)
        throw std::invalid_argument("predict_layer: fit does not retain kernel design points");
    if (fit.kind == FitKind::Replicated) return fit.P_layers[0];
    const ZOrder zorder(fit.netpos);
    const bool ll = fit.config.method == SmoothMethod::LocalLinear;
    const XSide xs = build_xside(fit.positions, fit.positions, fit.config.kernel,
                                 fit.config.bandwidth_x, ll, {});
    Matrix out;
    eval_slice(xs, fit.positions, fit.design_responses, fit.netpos, &zorder, {},
               fit.config.kernel, fit.config.link, fit.config.bandwidth_x,
               fit.config.bandwidth_z, z, out);
    return out;
}

// ---------------------------------------------------------------------------
// Per-edge and per-network fits (shared 1-D z-weights)
// ---------------------------------------------------------------------------

namespace {

struct ZWeights {
    std::vector<std::pair<int, double>> terms;  // (layer, weight); sums to the estimate
};

// weights such that fitted(z_eval) = sum_l w_l * y_l for any response series;
// NW or 1-D local linear, with local doubling when the window is empty
ZWeights one_d_weights(const Vector& netpos, const ZOrder& zorder, KernelType kt,
                       SmoothMethod method, double hz, double z_eval,
                       const std::vector<char>& mask, int& widenings) {
    ZWeights out;
    double h = hz;
    for (int attempt = 0; attempt <= kMaxWiden; ++attempt, h *= 2.0) {
        if (attempt > 0) widenings = std::max(widenings, attempt);
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        std::vector<std::pair<int, double>> raw;  // (layer, kernel weight)
        std::vector<double> dzs;
        zorder.for_each(netpos, kt, h, z_eval, mask, [&](int l, double w, double dz) {
            raw.emplace_back(l, w);
            dzs.push_back(dz);
            s0 += w;
            s1 += w * dz;
            s2 += w * dz * dz;
        });
        if (s0 <= 0.0) continue;
        if (method == SmoothMethod::LocalLinear) {
            const double den = s0 * s2 - s1 * s1;
            if (den > 1e-300) {
                for (std::size_t t = 0; t < raw.size(); ++t)
                    out.terms.emplace_back(raw[t].first, raw[t].second * (s2 - dzs[t] * s1) / den);
                return out;
            }
            // degenerate design (single point / identical z): fall back to NW
        }
        for (auto& [l, w] : raw) out.terms.emplace_back(l, w / s0);
        return out;
    }
    return out;
}

FitResult fit_series_on_netpos(const GraphCollection& g, const std::vector<Matrix>& series,
                               const Vector& netpos, const SmootherConfig& config,
                               FitKind kind) {
    ResolvedSmoother res = base_resolve(config);
    res.bandwidth_x = 0.0;  // no x-kernel in these fits
    res.bandwidth_z =
        config.bandwidth_z.value_or(auto_bandwidth(pop_sd_vec(netpos), static_cast<double>(g.m), 1));

    std::vector<Matrix> y(series.size());
    for (std::size_t l = 0; l < series.size(); ++l)
        y[l] = transform_matrix(series[l], config.link);
    const ZOrder zorder(netpos);

    if (config.cross_validate && g.m >= 2) {
        const int folds = std::min(5, g.m);
        double best_err = std::numeric_limits<double>::infinity();
        for (double mz : kCvMults) {
            double err = 0.0;
            int widen_tmp = 0;
            for (int f = 0; f < folds; ++f) {
                std::vector<char> train(static_cast<std::size_t>(g.m));
                for (int l = 0; l < g.m; ++l) train[static_cast<std::size_t>(l)] = l % folds != f;
                for (int r = 0; r < g.m; ++r) {
                    if (r % folds != f) continue;
                    const ZWeights w = one_d_weights(netpos, zorder, res.kernel, res.method,
                                                     res.bandwidth_z * mz, netpos[r], train,
                                                     widen_tmp);
                    Matrix pred = Matrix::Zero(g.n, g.n);
                    for (const auto& [l, wl] : w.terms) pred += wl * y[static_cast<std::size_t>(l)];
                    for (int i = 0; i < g.n; ++i)
                        for (int j = 0; j < g.n; ++j)
                            if (i != j) {
                                const double d =
                                    std::clamp(link_invert(res.link, pred(i, j)), 0.0, 1.0) -
                                    series[static_cast<std::size_t>(r)](i, j);
                                err += d * d;
                            }
                }
            }
            if (err < best_err) {
                best_err = err;
                res.cv_mult_z = mz;
            }
        }
        res.bandwidth_z *= res.cv_mult_z;
    }

    FitResult fit;
    fit.kind = kind;
    fit.n = g.n;
    fit.m = g.m;
    fit.rho_hat = estimate_density(g);
    fit.netpos = netpos;
    fit.P_layers.assign(static_cast<std::size_t>(g.m), Matrix());
    const double diag_value = std::clamp(link_invert(res.link, link_transform(res.link, 0.0)), 0.0, 1.0);
    std::vector<int> widen(static_cast<std::size_t>(g.m), 0);
    parallel_for(g.m, [&](std::int64_t r) {
        int w_cnt = 0;
        const ZWeights w = one_d_weights(netpos, zorder, res.kernel, res.method, res.bandwidth_z,
                                         netpos[static_cast<int>(r)], {}, w_cnt);
        widen[static_cast<std::size_t>(r)] = w_cnt;
        Matrix acc = Matrix::Zero(g.n, g.n);
        for (const auto& [l, wl] : w.terms) acc += wl * y[static_cast<std::size_t>(l)];
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                acc(i, j) = i == j ? diag_value : std::clamp(link_invert(res.link, acc(i, j)), 0.0, 1.0);
        fit.P_layers[static_cast<std::size_t>(r)] = 0.5 * (acc + acc.transpose());
    });
    res.widenings = *std::max_element(widen.begin(), widen.end());
    fit.config = res;
    return fit;
}

}  // namespace

FitResult fit_per_edge(const GraphCollection& g, const Vector& netpos,
                       const SmootherConfig& config) {
    if (g.m < 2) throw std::invalid_argument("fit_per_edge: need m >= 2");
    if (static_cast<int>(netpos.size()) != g.m)
        throw std::invalid_argument("fit_per_edge: netpos length must equal m");
    check_user_bandwidths(config);
    return fit_series_on_netpos(g, g.layers, netpos, config, FitKind::PerEdge);
}

FitResult fit_per_network(const GraphCollection& g, const Vector& netpos,
                          const SmootherConfig& config) {
    if (g.n < 10) throw std::invalid_argument("fit_per_network: need n >= 10");
    if (g.m < 1) throw std::invalid_argument("fit_per_network: need m >= 1");
    if (static_cast<int>(netpos.size()) != g.m)
        throw std::invalid_argument("fit_per_network: netpos length must equal m");
    check_user_bandwidths(config);
    std::vector<Matrix> intensities(static_cast<std::size_t>(g.m));
    parallel_for(g.m, [&](std::int64_t l) {
        intensities[static_cast<std::size_t>(l)] = nbs(g.layer(static_cast<int>(l)));
    });
    return fit_series_on_netpos(g, intensities, netpos, config, FitKind::PerNetwork);
}

// ---------------------------------------------------------------------------
// Subsampling bootstrap
// ---------------------------------------------------------------------------

BootstrapBands bootstrap_ci(const GraphCollection& g, const Vector& positions,
                            const Vector& netpos, const SmootherConfig& config, int i, int j,
                            const Vector& zgrid, int B, double level, std::uint64_t seed) {
    if (g.m < 4) throw std::invalid_argument("bootstrap_ci: need m >= 4");
    if (B < 10) throw std::invalid_argument("bootstrap_ci: need B >= 10");
    if (level < 0.0 || level > 1.0) throw std::invalid_argument("bootstrap_ci: level in [0,1]");
    if (i < 0 || j < 0 || i >= g.n || j >= g.n || i == j)
        throw std::invalid_argument("bootstrap_ci: invalid node pair");
    if (zgrid.size() == 0) throw std::invalid_argument("bootstrap_ci: empty z grid");

    // bandwidths and positions are resolved once on the full data and held
    // fixed across replicates
    FitResult fit = fit_multigraphon(g, positions, netpos, config);
    const KernelType kt = fit.config.kernel;
    const LinkType link = fit.config.link;
    const double hz = fit.config.bandwidth_z;
    const bool ll = fit.config.method == SmoothMethod::LocalLinear;
    const int n = g.n, m = g.m;
    const int nz = static_cast<int>(zgrid.size());

    // pair-level x-weighted response summaries; fixed across replicates
    Vector wx0(n), wy0(n), wx1(n), wy1(n), wx2(n), wy2(n);
    const double hx = fit.config.bandwidth_x;
    for (int a = 0; a < n; ++a) {
        const double dxa = positions[a] - positions[i];
        const double dya = positions[a] - positions[j];
        wx0[a] = kern(kt, dxa / hx);
        wy0[a] = kern(kt, dya / hx);
        wx1[a] = wx0[a] * dxa;
        wy1[a] = wy0[a] * dya;
        wx2[a] = wx0[a] * dxa * dxa;
        wy2[a] = wy0[a] * dya * dya;
    }
    Vector c00(m), c10(m), c01(m);
    for (int l = 0; l < m; ++l) {
        const Matrix& yl = fit.design_responses[static_cast<std::size_t>(l)];
        c00[l] = wx0.dot(yl * wy0);
        if (ll) {
            c10[l] = wx1.dot(yl * wy0);
            c01[l] = wx0.dot(yl * wy1);
        }
    }
    auto pair_moment = [&](const Vector& a, const Vector& b) {
        return a.sum() * b.sum() - a.dot(b);
    };
    const double m00 = pair_moment(wx0, wy0);
    const double m10 = pair_moment(wx1, wy0);
    const double m01 = pair_moment(wx0, wy1);
    const double m11 = pair_moment(wx1, wy1);
    const double m20 = pair_moment(wx2, wy0);
    const double m02 = pair_moment(wx0, wy2);

    // evaluate the pair smoother at z over the given layer subset
    auto eval_at = [&](const std::vector<int>& layers, double z) -> double {
        double h = hz;
        for (int attempt = 0; attempt <= kMaxWiden; ++attempt, h *= 2.0) {
            double v0 = 0.0, v1 = 0.0, v2 = 0.0, r0 = 0.0, r1 = 0.0, r2 = 0.0, rz = 0.0;
            for (int l : layers) {
                const double dz = netpos[l] - z;
                const double w = kern(kt, dz / h);
                if (w <= 0.0) continue;
                v0 += w;
                r0 += w * c00[l];
                if (ll) {
                    v1 += w * dz;
                    v2 += w * dz * dz;
                    r1 += w * c10[l];
                    r2 += w * c01[l];
                    rz += w * dz * c00[l];
                }
            }
            const double den = v0 * m00;
            if (den <= 0.0) continue;
            double val;
            bool solved = false;
            if (ll) {
                Eigen::Matrix4d mm;
                mm << m00 * v0, m10 * v0, m01 * v0, m00 * v1,
                      m10 * v0, m20 * v0, m11 * v0, m10 * v1,
                      m01 * v0, m11 * v0, m02 * v0, m01 * v1,
                      m00 * v1, m10 * v1, m01 * v1, m00 * v2;
                Eigen::FullPivLU<Eigen::Matrix4d> lu(mm);
                if (lu.isInvertible()) {
                    const Eigen::Vector4d beta = lu.solve(Eigen::Vector4d(r0, r1, r2, rz));
                    if (std::isfinite(beta[0])) {
                        val = beta[0];
                        solved = true;
                    }
                }
            }
            if (!solved) val = r0 / den;
            return std::clamp(link_invert(link, val), 0.0, 1.0);
        }
        return 0.0;
    };

    std::vector<int> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);

    BootstrapBands out;
    out.zgrid = zgrid;
    out.curve.resize(nz);
    for (int t = 0; t < nz; ++t) out.curve[t] = eval_at(all, zgrid[t]);

    const int sub_size = (m + 1) / 2;  // ceil(m/2), without replacement
    Matrix replicate(B, nz);
    parallel_for(B, [&](std::int64_t b) {
        RngStream r(seed, "bootstrap", static_cast<std::uint64_t>(b));
        std::vector<int> pool(static_cast<std::size_t>(m));
        std::iota(pool.begin(), pool.end(), 0);
        for (int t = 0; t < sub_size; ++t) {
            const int u = t + static_cast<int>(r.below(static_cast<std::uint64_t>(m - t)));
            std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(u)]);
        }
        std::vector<int> sub(pool.begin(), pool.begin() + sub_size);
        std::sort(sub.begin(), sub.end());
        for (int t = 0; t < nz; ++t) replicate(static_cast<int>(b), t) = eval_at(sub, zgrid[t]);
    });

    out.lower.resize(nz);
    out.upper.resize(nz);
    const double lo_p = (1.0 - level) / 2.0;
    const double hi_p = (1.0 + level) / 2.0;
    std::vector<double> column(static_cast<std::size_t>(B));
    for (int t = 0; t < nz; ++t) {
        for (int b = 0; b < B; ++b) column[static_cast<std::size_t>(b)] = replicate(b, t);
        out.lower[t] = quantile(column, lo_p);
        out.upper[t] = quantile(column, hi_p);
    }
    return out;
}

}  // namespace mgraphon
