#ifndef ELN_MODEL_HPP
#define ELN_MODEL_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eln/kernels.hpp"

namespace eln {

struct ElnNode {
    RadialBasis basis;
    double theta;
};

// The error loss network: l(e) = sum_j theta_j phi_j(e). Immutable after
// construction, so instances can be shared freely across threads.
class ElnModel {
public:
    explicit ElnModel(std::vector<ElnNode> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.empty()) throw std::invalid_argument("ELN needs at least one node");
        for (const auto& n : nodes_)
            if (!std::isfinite(n.theta)) throw std::invalid_argument("non-finite node weight");
    }

    const std::vector<ElnNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

    bool all_gaussian() const {
        for (const auto& n : nodes_)
            if (n.basis.kind != BasisKind::Gaussian) return false;
        return true;
    }

    // Every supported basis kind has a finite supremum (the risk-sensitive
    // kernel is capped at exp(lambda)), so the boundedness certificate of
    // loss_bound() applies to all of them.
    bool bounded() const { return true; }

    double loss(double e) const {
        if (!std::isfinite(e)) throw std::invalid_argument("non-finite input");
        double acc = 0.0;
        for (const auto& n : nodes_) acc += n.theta * basis_eval(n.basis, e);
        return acc;
    }

    double loss_deriv(double e) const {
        double acc = 0.0;
        for (const auto& n : nodes_) acc += n.theta * basis_deriv(n.basis, e);
        return acc;
    }

    double empirical_loss(std::span<const double> errors) const {
        if (errors.empty()) throw std::invalid_argument("empty error sample");
        double acc = 0.0;
        for (double e : errors) acc += loss(e);
        return acc / static_cast<double>(errors.size());
    }

    // sum_j |theta_j| b_j, an upper bound on |l(e)| over the reals
    double loss_bound() const {
        double acc = 0.0;
        for (const auto& n : nodes_) acc += std::abs(n.theta) * basis_upper_bound(n.basis);
        return acc;
    }

    // psi(e) = sum_j theta_j / sigma_j^2 G_{sigma_j}(e - c_j), the diagonal
    // reweighting term of the fixed-point update. Gaussian-only.
    double psi(double e) const {
        double acc = 0.0;
        for (const auto& n : nodes_) {
            require_gaussian(n);
            const double s2 = n.basis.width() * n.basis.width();
            acc += n.theta / s2 * gauss(e - n.basis.center(), n.basis.width());
        }
        return acc;
    }

    // xi(e) = sum_j c_j theta_j / sigma_j^2 G_{sigma_j}(e - c_j)
    double xi_weight(double e) const {
        double acc = 0.0;
        for (const auto& n : nodes_) {
            require_gaussian(n);
            const double s2 = n.basis.width() * n.basis.width();
            acc += n.basis.center() * n.theta / s2 * gauss(e - n.basis.center(), n.basis.width());
        }
        return acc;
    }

private:
    static void require_gaussian(const ElnNode& n) {
        if (n.basis.kind != BasisKind::Gaussian)
            throw std::domain_error("psi requires all-Gaussian ELN");
    }

    std::vector<ElnNode> nodes_;
};

// Node-list concatenation; the loss is linear in the nodes.
inline ElnModel combine(const std::vector<ElnModel>& models, const std::vector<double>& weights) {
    if (models.size() != weights.size())
        throw std::invalid_argument("combine: models/weights size mismatch");
    if (models.empty()) throw std::invalid_argument("combine: empty model list");
    std::vector<ElnNode> nodes;
    for (std::size_t k = 0; k < models.size(); ++k)
        for (const auto& n : models[k].nodes())
            nodes.push_back({n.basis, weights[k] * n.theta});
    return ElnModel(std::move(nodes));
}

} // namespace eln

#endif
