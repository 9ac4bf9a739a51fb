#include "mgraphon/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mgraphon {

namespace {

void require_symmetric(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

void require_unit_range(const Matrix& m, const char* who) {
    if (m.minCoeff() < -1e-12 || m.maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument(std::string(who) + ": entries must lie in [0,1]");
}

}  // namespace

double usvt_threshold(const Matrix& m, double eta, int m_eff) {
    if (eta <= 0.0) throw std::invalid_argument("usvt: eta must be positive");
    if (m_eff < 1) throw std::invalid_argument("usvt: m_eff must be >= 1");
    const double n = static_cast<double>(m.rows());
    const double mean = m.mean();
    const double vhat = mean * (1.0 - mean);
    return eta * std::sqrt(n * vhat / static_cast<double>(m_eff));
}

Matrix usvt_with_threshold(const Matrix& m, double tau) {
    require_symmetric(m, "usvt");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (eig.info() != Eigen::Success) throw std::runtime_error("usvt: eigendecomposition failed");
    const Vector& lambda = eig.eigenvalues();
    const Matrix& vecs = eig.eigenvectors();
    const int n = static_cast<int>(m.rows());
    Vector kept = lambda;
    for (int i = 0; i < n; ++i)
        if (std::abs(kept[i]) < tau) kept[i] = 0.0;
    Matrix out = vecs * kept.asDiagonal() * vecs.transpose();
    out = out.cwiseMax(0.0).cwiseMin(1.0);
    out = 0.5 * (out + out.transpose());
    return out;
}

Matrix usvt(const Matrix& m, double eta, int m_eff) {
    if (m.rows() < 2) throw std::invalid_argument("usvt: need n >= 2");
    require_symmetric(m, "usvt");
    require_unit_range(m, "usvt");
    return usvt_with_threshold(m, usvt_threshold(m, eta, m_eff));
}

Matrix nbs(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    if (n < 3) throw std::invalid_argument("nbs: need n >= 3");
    require_symmetric(m, "nbs");
    require_unit_range(m, "nbs");

    // dhat^2(i,j) = max_k |<M_i - M_j, M_k>| / n over k outside {i,j}.
    // Each inner product is summed in sorted order: the summand multiset is
    // relabeling-invariant, so the neighborhoods below come out identical for
    // permuted inputs even when distances are exactly tied.
    Matrix gram(n, n);
    {
        std::vector<double> terms(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int k = i; k < n; ++k) {
                for (int t = 0; t < n; ++t)
                    terms[static_cast<std::size_t>(t)] = m(i, t) * m(k, t);
                std::sort(terms.begin(), terms.end());
                double acc = 0.0;
                for (double v : terms) acc += v;
                gram(i, k) = acc;
                gram(k, i) = acc;
            }
        }
    }
    Matrix d2 = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double best = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                best = std::max(best, std::abs(gram(i, k) - gram(j, k)));
            }
            d2(i, j) = best / static_cast<double>(n);
            d2(j, i) = d2(i, j);
        }
    }

    const double h = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
    const int k_cnt = std::max(1, static_cast<int>(std::floor(h * static_cast<double>(n - 1))));

    // neighborhoods: rows within the level-h quantile of each row's distances
    std::vector<std::vector<int>> nbhd(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        int t = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) row[static_cast<std::size_t>(t++)] = d2(i, j);
        std::vector<double> sorted = row;
        std::nth_element(sorted.begin(), sorted.begin() + (k_cnt - 1), sorted.end());
        const double q = sorted[static_cast<std::size_t>(k_cnt - 1)];
        for (int j = 0; j < n; ++j)
            if (j != i && d2(i, j) <= q) nbhd[static_cast<std::size_t>(i)].push_back(j);
    }

    Matrix p(n, n);
    for (int j = 0; j < n; ++j) {
        const auto& nb = nbhd[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int jj : nb) acc += m(i, jj);
            p(i, j) = acc / static_cast<double>(nb.size());
        }
    }
    Matrix out = 0.5 * (p + p.transpose());
    out = out.cwiseMax(0.0).cwiseMin(1.0);
    return out;
}

}  // namespace mgraphon
