#ifndef ELN_FEATURE_MAP_HPP
#define ELN_FEATURE_MAP_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "eln/random.hpp"

namespace eln {

inline double sigmoid(double x) { return 1.0 / (std::exp(-x) + 1.0); }

// Nonlinear input map of a linear-in-parameter model. Linear passes the
// input through, Rvflnn appends a random sigmoid hidden layer to the
// direct link, RbfMap evaluates unnormalized Gaussian kernels against a
// fixed anchor set.
class FeatureMap {
public:
    enum class Kind { Linear, Rvflnn, RbfMap };

    FeatureMap() = default; // zero-dimensional linear map

    static FeatureMap linear(int dim) {
        FeatureMap fm;
        fm.kind_ = Kind::Linear;
        fm.input_dim_ = dim;
        fm.output_dim_ = dim;
        return fm;
    }

    // W ~ U[-1,1]^{K x d}, b ~ U[0,1]^K, deterministic per seed
    static FeatureMap rvflnn(int dim, int hidden, std::uint64_t seed) {
        if (dim < 1 || hidden < 0) throw std::invalid_argument("bad RVFLNN dimensions");
        FeatureMap fm;
        fm.kind_ = Kind::Rvflnn;
        fm.input_dim_ = dim;
        fm.output_dim_ = dim + hidden;
        fm.weights_.resize(hidden, dim);
        fm.biases_.resize(hidden);
        Rng rng(seed);
        for (int k = 0; k < hidden; ++k)
            for (int j = 0; j < dim; ++j) fm.weights_(k, j) = rng.uniform(-1.0, 1.0);
        for (int k = 0; k < hidden; ++k) fm.biases_(k) = rng.uniform(0.0, 1.0);
        return fm;
    }

    // h_k(x) = exp(-||x - x_k||^2 / (2 sigma^2)); the 1/(sqrt(2 pi) sigma)
    // column scaling is absorbed by beta, unnormalized conditions better
    static FeatureMap rbf(Eigen::MatrixXd anchors, double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("RBF width must be positive");
        if (anchors.rows() < 1) throw std::invalid_argument("RBF map needs anchors");
        FeatureMap fm;
        fm.kind_ = Kind::RbfMap;
        fm.input_dim_ = static_cast<int>(anchors.cols());
        fm.output_dim_ = static_cast<int>(anchors.rows());
        fm.anchors_ = std::move(anchors);
        fm.sigma_ = sigma;
        return fm;
    }

    Kind kind() const { return kind_; }
    int input_dim() const { return input_dim_; }
    int output_dim() const { return output_dim_; }
    const Eigen::MatrixXd& weights() const { return weights_; }
    const Eigen::VectorXd& biases() const { return biases_; }
    const Eigen::MatrixXd& anchors() const { return anchors_; }
    double rbf_sigma() const { return sigma_; }

    Eigen::RowVectorXd map_row(const Eigen::VectorXd& x) const {
        if (x.size() != input_dim_) throw std::invalid_argument("input dimension mismatch");
        if (!x.allFinite()) throw std::invalid_argument("non-finite input");
        switch (kind_) {
        case Kind::Linear:
            return x.transpose();
        case Kind::Rvflnn: {
            Eigen::RowVectorXd h(output_dim_);
            h.head(input_dim_) = x.transpose();
            const Eigen::VectorXd z = weights_ * x + biases_;
            for (int k = 0; k < z.size(); ++k) h(input_dim_ + k) = sigmoid(z(k));
            return h;
        }
        case Kind::RbfMap: {
            Eigen::RowVectorXd h(output_dim_);
            const double denom = 2.0 * sigma_ * sigma_;
            for (int k = 0; k < anchors_.rows(); ++k) {
                const double d2 = (x.transpose() - anchors_.row(k)).squaredNorm();
                h(k) = std::exp(-d2 / denom);
            }
            return h;
        }
        }
        throw std::logic_error("unknown feature map kind");
    }

    // H = [h_1; h_2; ...; h_N]
    Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& x) const {
        Eigen::MatrixXd h(x.rows(), output_dim_);
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            h.row(i) = map_row(x.row(i).transpose());
        return h;
    }

private:
    Kind kind_ = Kind::Linear;
    int input_dim_ = 0;
    int output_dim_ = 0;
    Eigen::MatrixXd weights_;
    Eigen::VectorXd biases_;
    Eigen::MatrixXd anchors_;
    double sigma_ = 1.0;
};

} // namespace eln

#endif
