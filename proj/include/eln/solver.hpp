#ifndef ELN_SOLVER_HPP
#define ELN_SOLVER_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "eln/feature_map.hpp"
#include "eln/model.hpp"
#include "eln/pdf_match.hpp"
#include "eln/random.hpp"

namespace eln {

enum class LossMode {
    RidgeMse,    // closed-form ridge, single step
    FixedEln,    // all-Gaussian ELN, psi/xi fixed point
    AdaptiveEln, // ELN refit from the current errors every iteration
    Irls         // reweighting via l'(e)/e, for non-Gaussian losses
};

struct SolverConfig {
    LossMode mode = LossMode::RidgeMse;
    std::optional<ElnModel> eln;  // FixedEln / Irls
    ElnFitConfig eln_fit;         // AdaptiveEln
    double gamma2_scaled = 1e-3;  // gamma2' = N * gamma2
    int max_iterations = 50;
    double tolerance = 1e-7;
    bool bias_correction = false; // mean-of-training-errors output shift
    std::uint64_t seed = 0;

    static SolverConfig ridge(double gamma) {
        SolverConfig c;
        c.mode = LossMode::RidgeMse;
        c.gamma2_scaled = gamma;
        return c;
    }
    static SolverConfig fixed_eln(ElnModel model, double gamma2_scaled,
                                  bool bias_correction = false) {
        SolverConfig c;
        c.mode = LossMode::FixedEln;
        c.eln = std::move(model);
        c.gamma2_scaled = gamma2_scaled;
        c.bias_correction = bias_correction;
        return c;
    }
    static SolverConfig adaptive_eln(ElnFitConfig fit, double gamma2_scaled) {
        SolverConfig c;
        c.mode = LossMode::AdaptiveEln;
        c.eln_fit = fit;
        c.gamma2_scaled = gamma2_scaled;
        c.bias_correction = true;
        c.seed = fit.seed;
        return c;
    }
    static SolverConfig irls(ElnModel model, double gamma2_scaled) {
        SolverConfig c;
        c.mode = LossMode::Irls;
        c.eln = std::move(model);
        c.gamma2_scaled = gamma2_scaled;
        return c;
    }

    void validate() const {
        if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
        if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
        if (gamma2_scaled < 0.0) throw std::invalid_argument("gamma2' must be non-negative");
        if ((mode == LossMode::FixedEln || mode == LossMode::Irls) && !eln)
            throw std::invalid_argument("loss mode requires an ELN model");
        if (mode == LossMode::FixedEln && !eln->all_gaussian())
            throw std::invalid_argument("FixedEln requires an all-Gaussian ELN; use Irls");
    }
};

struct TrainedModel {
    FeatureMap map;
    Eigen::MatrixXd beta;      // K_out x m
    Eigen::RowVectorXd bias;   // 1 x m
    int iterations_used = 0;
    bool converged = false;
    std::optional<ElnModel> final_eln; // AdaptiveEln diagnostics

    Eigen::RowVectorXd predict(const Eigen::VectorXd& x) const {
        return map.map_row(x) * beta + bias;
    }

    Eigen::MatrixXd predict_all(const Eigen::MatrixXd& x) const {
        Eigen::MatrixXd y = map.design_matrix(x) * beta;
        y.rowwise() += bias;
        return y;
    }
};

// beta = (H^T H + gamma I)^-1 H^T D
inline Eigen::MatrixXd ridge_fit(const Eigen::MatrixXd& h, const Eigen::MatrixXd& d,
                                 double gamma) {
    if (h.rows() != d.rows()) throw std::invalid_argument("H/d row mismatch");
    Eigen::MatrixXd a = h.transpose() * h;
    a.diagonal().array() += gamma;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("singular ridge system; increase gamma");
    return ldlt.solve(h.transpose() * d);
}

namespace detail {

// Solve (H^T Lambda H - gamma2' I) beta = rhs. The matrix is negative
// definite under the Table-1 sign convention (Lambda <= 0), which LDLT
// factors without pivoting trouble.
inline Eigen::VectorXd solve_weighted_system(const Eigen::MatrixXd& h,
                                             const Eigen::VectorXd& lambda_diag,
                                             const Eigen::VectorXd& rhs,
                                             double gamma2_scaled) {
    Eigen::MatrixXd a = h.transpose() * lambda_diag.asDiagonal() * h;
    a.diagonal().array() -= gamma2_scaled;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    Eigen::VectorXd beta = ldlt.solve(rhs);
    const double resid = (a * beta - rhs).lpNorm<Eigen::Infinity>();
    if (ldlt.info() != Eigen::Success ||
        !(resid <= 1e-6 * (1.0 + rhs.lpNorm<Eigen::Infinity>())))
        throw std::runtime_error("fixed-point system singular; adjust gamma2' or sigma");
    return beta;
}

} // namespace detail

// One fixed-point update: beta = (H^T Lambda H - gamma2' I)^-1 (H^T Lambda d - H^T vartheta)
// with Lambda_ii = psi(e_i) and vartheta_i = xi(e_i).
inline Eigen::VectorXd assemble_step(const Eigen::MatrixXd& h, const Eigen::VectorXd& d,
                                     const ElnModel& model, const Eigen::VectorXd& errors,
                                     double gamma2_scaled) {
    if (!model.all_gaussian())
        throw std::invalid_argument("assemble_step requires an all-Gaussian ELN");
    if (h.rows() != d.size() || h.rows() != errors.size())
        throw std::invalid_argument("inconsistent system dimensions");
    const Eigen::Index n = h.rows();
    Eigen::VectorXd lambda(n), vartheta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lambda(i) = model.psi(errors(i));
        vartheta(i) = model.xi_weight(errors(i));
    }
    const Eigen::VectorXd rhs =
        h.transpose() * (lambda.asDiagonal() * d) - h.transpose() * vartheta;
    return detail::solve_weighted_system(h, lambda, rhs, gamma2_scaled);
}

// IRLS weight w(e) = l'(e)/e; at e = 0 the limit l''(0) is taken by a
// symmetric difference of the analytic derivative.
inline double irls_weight(const ElnModel& model, double e) {
    if (e == 0.0) {
        for (const auto& n : model.nodes())
            if (n.basis.kind == BasisKind::Laplacian && n.basis.center() == 0.0)
                throw std::domain_error("derivative undefined at center");
        const double h = 1e-7;
        return (model.loss_deriv(h) - model.loss_deriv(-h)) / (2.0 * h);
    }
    return model.loss_deriv(e) / e;
}

namespace detail {

inline Eigen::VectorXd irls_step(const Eigen::MatrixXd& h, const Eigen::VectorXd& d,
                                 const ElnModel& model, const Eigen::VectorXd& errors,
                                 double gamma2_scaled) {
    const Eigen::Index n = h.rows();
    Eigen::VectorXd lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) lambda(i) = -irls_weight(model, errors(i));
    const Eigen::VectorXd rhs = h.transpose() * (lambda.asDiagonal() * d);
    return solve_weighted_system(h, lambda, rhs, gamma2_scaled);
}

} // namespace detail

// Fixed-point training of a linear-in-parameter model. Multi-output
// targets are handled per output column with a shared ELN; in adaptive
// mode the ELN is refit each iteration on the pooled scalar errors.
inline TrainedModel fixed_point_fit(const FeatureMap& fm, const Eigen::MatrixXd& x,
                                    const Eigen::MatrixXd& d, const SolverConfig& cfg) {
    cfg.validate();
    if (x.rows() == 0 || x.rows() != d.rows())
        throw std::invalid_argument("empty or inconsistent training set");

    const Eigen::MatrixXd h = fm.design_matrix(x);
    const Eigen::Index k_out = h.cols();
    const Eigen::Index m_out = d.cols();

    TrainedModel tm;
    tm.map = fm;
    tm.bias = Eigen::RowVectorXd::Zero(m_out);

    if (cfg.mode == LossMode::RidgeMse) {
        tm.beta = ridge_fit(h, d, cfg.gamma2_scaled);
        tm.iterations_used = 1;
        tm.converged = true;
        return tm;
    }

    Rng rng(cfg.seed);
    Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(k_out, m_out);
    std::optional<ElnModel> adaptive_model;
    bool converged = false;
    int used = 0;

    for (int t = 1; t <= cfg.max_iterations; ++t) {
        const Eigen::MatrixXd errors = d - h * beta;

        const ElnModel* model = nullptr;
        if (cfg.mode == LossMode::AdaptiveEln) {
            std::vector<double> pooled(errors.data(), errors.data() + errors.size());
            adaptive_model = fit_eln(pooled, cfg.eln_fit, rng);
            model = &*adaptive_model;
        } else {
            model = &*cfg.eln;
        }

        Eigen::MatrixXd next(k_out, m_out);
        for (Eigen::Index j = 0; j < m_out; ++j) {
            if (cfg.mode == LossMode::Irls)
                next.col(j) = detail::irls_step(h, d.col(j), *model, errors.col(j),
                                                cfg.gamma2_scaled);
            else
                next.col(j) =
                    assemble_step(h, d.col(j), *model, errors.col(j), cfg.gamma2_scaled);
        }

        const double denom = beta.squaredNorm();
        const double change = (next - beta).squaredNorm();
        beta = next;
        used = t;
        if (denom > 0.0 && change / denom < cfg.tolerance) {
            converged = true;
            break;
        }
    }

    tm.beta = beta;
    tm.iterations_used = used;
    tm.converged = converged;
    tm.final_eln = adaptive_model;
    if (cfg.bias_correction) {
        const Eigen::MatrixXd errors = d - h * beta;
        tm.bias = errors.colwise().mean();
    }
    return tm;
}

} // namespace eln

#endif
