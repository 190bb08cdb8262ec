#ifndef ELN_PDF_MATCH_HPP
#define ELN_PDF_MATCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "eln/kernels.hpp"
#include "eln/model.hpp"
#include "eln/random.hpp"

namespace eln {

enum class CenterStrategy { AllSamples, RandomSample, KMeans };

struct ElnFitConfig {
    int node_count = 50;      // M
    double sigma_ref = 1.0;   // reference kernel width
    double epsilon = 0.0;     // perturbation variance, doubles as width floor
    double gamma1 = 1e-3;     // Gram ridge parameter
    CenterStrategy strategy = CenterStrategy::RandomSample;
    std::uint64_t seed = 0;

    void validate() const {
        if (node_count < 1) throw std::invalid_argument("node count must be >= 1");
        if (!(sigma_ref > 0.0)) throw std::invalid_argument("sigma_ref must be positive");
        if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
        if (gamma1 < 0.0) throw std::invalid_argument("gamma1 must be non-negative");
    }
};

namespace detail {

// Lloyd's iteration on 1-D data, seed-initialized from distinct sample draws.
inline std::vector<double> kmeans_1d(const std::vector<double>& data, int k, Rng& rng,
                                     int max_iters = 100) {
    const std::size_t n = data.size();
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < kk; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    std::vector<double> centers(kk);
    for (std::size_t i = 0; i < kk; ++i) centers[i] = data[idx[i]];

    std::vector<double> sums(kk);
    std::vector<std::size_t> counts(kk);
    for (int it = 0; it < max_iters; ++it) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (double x : data) {
            std::size_t best = 0;
            double best_d = std::abs(x - centers[0]);
            for (std::size_t c = 1; c < kk; ++c) {
                const double d = std::abs(x - centers[c]);
                if (d < best_d) { best_d = d; best = c; }
            }
            sums[best] += x;
            counts[best] += 1;
        }
        bool moved = false;
        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] == 0) continue;
            const double next = sums[c] / static_cast<double>(counts[c]);
            if (next != centers[c]) { centers[c] = next; moved = true; }
        }
        if (!moved) break;
    }
    return centers;
}

} // namespace detail

inline std::vector<double> select_centers(const std::vector<double>& errors, int m,
                                          CenterStrategy strategy, Rng& rng) {
    if (errors.empty()) throw std::invalid_argument("empty error sample");
    if (m < 1) throw std::invalid_argument("node count must be >= 1");
    switch (strategy) {
    case CenterStrategy::AllSamples:
        return errors;
    case CenterStrategy::RandomSample: {
        // without replacement; AllSamples is the M = N limit
        const std::size_t n = errors.size();
        const std::size_t mm = std::min<std::size_t>(static_cast<std::size_t>(m), n);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < mm; ++i) std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
        std::vector<double> out(mm);
        for (std::size_t i = 0; i < mm; ++i) out[i] = errors[idx[i]];
        return out;
    }
    case CenterStrategy::KMeans:
        return detail::kmeans_1d(errors, m, rng);
    }
    throw std::logic_error("unknown center strategy");
}

inline std::vector<double> select_centers(const std::vector<double>& errors, int m,
                                          CenterStrategy strategy, std::uint64_t seed) {
    Rng rng(seed);
    return select_centers(errors, m, strategy, rng);
}

// sigma_i = max(sigma_ref + n_i, floor) with n_i ~ N(0, epsilon) and floor
// max(epsilon, sigma_ref * 1e-3) so widths stay strictly positive.
inline std::vector<double> draw_widths(int m, double sigma_ref, double epsilon, Rng& rng) {
    if (!(sigma_ref > 0.0)) throw std::invalid_argument("sigma_ref must be positive");
    if (m < 1) throw std::invalid_argument("node count must be >= 1");
    const double floor = std::max(epsilon, sigma_ref * 1e-3);
    std::vector<double> widths(static_cast<std::size_t>(m));
    for (auto& w : widths) {
        const double noise = (epsilon > 0.0) ? rng.normal(0.0, std::sqrt(epsilon)) : 0.0;
        w = std::max(sigma_ref + noise, floor);
    }
    return widths;
}

inline std::vector<double> draw_widths(int m, double sigma_ref, double epsilon, std::uint64_t seed) {
    Rng rng(seed);
    return draw_widths(m, sigma_ref, epsilon, rng);
}

// K_ij = G_sqrt(sigma_i^2 + sigma_j^2)(c_i - c_j); the closed form of the
// Gaussian product integral.
inline Eigen::MatrixXd gram_matrix(const std::vector<double>& centers,
                                   const std::vector<double>& widths) {
    if (centers.size() != widths.size())
        throw std::invalid_argument("centers/widths size mismatch");
    const Eigen::Index m = static_cast<Eigen::Index>(centers.size());
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            const double s = std::sqrt(widths[i] * widths[i] + widths[j] * widths[j]);
            const double v = gauss(centers[i] - centers[j], s);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

// xi_hat_m = (1/N) sum_i G_{sigma_m}(e_i - c_m)
inline Eigen::VectorXd xi_hat(const std::vector<double>& centers,
                              const std::vector<double>& widths,
                              const std::vector<double>& errors) {
    if (centers.size() != widths.size())
        throw std::invalid_argument("centers/widths size mismatch");
    if (errors.empty()) throw std::invalid_argument("empty error sample");
    const Eigen::Index m = static_cast<Eigen::Index>(centers.size());
    Eigen::VectorXd xi(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        double acc = 0.0;
        for (double e : errors) acc += gauss(e - centers[j], widths[j]);
        xi(j) = acc / static_cast<double>(errors.size());
    }
    return xi;
}

// theta* = -(K + gamma1 I)^-1 xi_hat via an SPD factorization
inline Eigen::VectorXd solve_theta(const Eigen::MatrixXd& k, const Eigen::VectorXd& xi,
                                   double gamma1) {
    if (k.rows() != k.cols() || k.rows() != xi.size())
        throw std::invalid_argument("Gram system dimension mismatch");
    if (gamma1 < 0.0) throw std::invalid_argument("gamma1 must be non-negative");
    Eigen::MatrixXd a = k;
    a.diagonal().array() += gamma1;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("singular Gram system; increase gamma1");
    Eigen::VectorXd theta = llt.solve(-xi);
    const double resid = (a * theta + xi).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-8 * (1.0 + xi.lpNorm<Eigen::Infinity>())))
        throw std::runtime_error("singular Gram system; increase gamma1");
    return theta;
}

namespace detail {

// Exact duplicate centers make K singular at gamma1 = 0; keep first occurrence.
inline std::vector<double> dedup_centers(std::vector<double> centers) {
    std::vector<double> out;
    out.reserve(centers.size());
    for (double c : centers)
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    return out;
}

} // namespace detail

inline ElnModel fit_eln(const std::vector<double>& errors, const ElnFitConfig& cfg, Rng& rng) {
    cfg.validate();
    if (errors.empty()) throw std::invalid_argument("empty error sample");
    std::vector<double> centers =
        detail::dedup_centers(select_centers(errors, cfg.node_count, cfg.strategy, rng));
    const int m = static_cast<int>(centers.size());
    std::vector<double> widths = draw_widths(m, cfg.sigma_ref, cfg.epsilon, rng);
    const Eigen::MatrixXd k = gram_matrix(centers, widths);
    const Eigen::VectorXd xi = xi_hat(centers, widths, errors);
    const Eigen::VectorXd theta = solve_theta(k, xi, cfg.gamma1);
    std::vector<ElnNode> nodes;
    nodes.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        nodes.push_back({RadialBasis::gaussian(centers[static_cast<std::size_t>(j)],
                                               widths[static_cast<std::size_t>(j)]),
                         theta(j)});
    return ElnModel(std::move(nodes));
}

inline ElnModel fit_eln(const std::vector<double>& errors, const ElnFitConfig& cfg) {
    Rng rng(cfg.seed);
    return fit_eln(errors, cfg, rng);
}

} // namespace eln

#endif
