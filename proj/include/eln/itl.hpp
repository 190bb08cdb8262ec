#ifndef ELN_ITL_HPP
#define ELN_ITL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "eln/kernels.hpp"
#include "eln/model.hpp"

namespace eln {

// Constructors for the classical ITL losses expressed as ELN instances.

// Maximum correntropy criterion: l(e) = -G_sigma(e)
inline ElnModel make_mcc(double sigma) {
    return ElnModel({{RadialBasis::gaussian(0.0, sigma), -1.0}});
}

// MCC with variable center: l(e) = -G_sigma(e - c)
inline ElnModel make_mcc_vc(double sigma, double c) {
    return ElnModel({{RadialBasis::gaussian(c, sigma), -1.0}});
}

// Generalized MCC: l(e) = -exp(-lambda |e|^alpha)
inline ElnModel make_gmcc(double alpha, double lambda) {
    return ElnModel({{RadialBasis::generalized_gaussian(alpha, lambda), -1.0}});
}

// Kernel risk-sensitive loss: l(e) = (1/lambda) exp(lambda (1 - G_sigma(e)))
inline ElnModel make_krsl(double lambda, double sigma) {
    return ElnModel({{RadialBasis::risk_sensitive(lambda, sigma), 1.0 / lambda}});
}

// Kernel mean p-power error: l(e) = (1 - G_sigma(e))^(p/2)
inline ElnModel make_kmpe(double p, double sigma) {
    return ElnModel({{RadialBasis::kernel_p_power(p, sigma), 1.0}});
}

// Maximum mixture correntropy, type 1 (two Gaussians) or type 2
// (Gaussian + Laplacian): (theta1, theta2) = (-alpha, alpha - 1)
inline ElnModel make_mmcc(double sigma1, double sigma2, double alpha_mix, int type) {
    if (type != 1 && type != 2) throw std::invalid_argument("MMCC type must be 1 or 2");
    RadialBasis second = (type == 1) ? RadialBasis::gaussian(0.0, sigma2)
                                     : RadialBasis::laplacian(0.0, sigma2);
    return ElnModel({{RadialBasis::gaussian(0.0, sigma1), -alpha_mix},
                     {second, alpha_mix - 1.0}});
}

// Minimum error entropy: N Gaussian nodes at the error samples with width
// sqrt(2) sigma and theta_j = -1/N, so the empirical loss equals the
// quadratic-entropy double sum.
inline ElnModel make_mee(const std::vector<double>& errors, double sigma) {
    if (errors.empty()) throw std::invalid_argument("empty error sample");
    const double n = static_cast<double>(errors.size());
    const double w = std::sqrt(2.0) * sigma;
    std::vector<ElnNode> nodes;
    nodes.reserve(errors.size());
    for (double e : errors) nodes.push_back({RadialBasis::gaussian(e, w), -1.0 / n});
    return ElnModel(std::move(nodes));
}

struct QuantizerState {
    std::vector<double> codebook;
    std::vector<std::size_t> counts;
};

// Online vector quantization over the error stream: a sample within
// delta of the nearest existing center merges into it, otherwise it seeds
// a new center. Equidistant ties go to the earlier center.
inline QuantizerState ovq_quantize(const std::vector<double>& errors, double delta) {
    if (delta < 0.0) throw std::invalid_argument("quantization threshold must be >= 0");
    QuantizerState state;
    for (double e : errors) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < state.codebook.size(); ++c) {
            const double d = std::abs(e - state.codebook[c]);
            if (d < best_d) { best_d = d; best = c; }
        }
        if (!state.codebook.empty() && best_d <= delta) {
            state.counts[best] += 1;
        } else {
            state.codebook.push_back(e);
            state.counts.push_back(1);
        }
    }
    return state;
}

// Quantized MEE: nodes at the quantized centers, theta_i = -M_i/N
inline ElnModel make_qmee(const std::vector<double>& errors, double sigma, double delta) {
    if (errors.empty()) throw std::invalid_argument("empty error sample");
    const QuantizerState q = ovq_quantize(errors, delta);
    const double n = static_cast<double>(errors.size());
    std::vector<ElnNode> nodes;
    nodes.reserve(q.codebook.size());
    for (std::size_t i = 0; i < q.codebook.size(); ++i)
        nodes.push_back({RadialBasis::gaussian(q.codebook[i], sigma),
                         -static_cast<double>(q.counts[i]) / n});
    return ElnModel(std::move(nodes));
}

// Restricted MEE: three Gaussian nodes at {0, -1, +1}
inline ElnModel make_rmee(double sigma, double m1, double m2, double m3, double n) {
    if (!(n > 0.0)) throw std::invalid_argument("sample count must be positive");
    return ElnModel({{RadialBasis::gaussian(0.0, sigma), -m1 / n},
                     {RadialBasis::gaussian(-1.0, sigma), -m2 / n},
                     {RadialBasis::gaussian(1.0, sigma), -m3 / n}});
}

// Maximum multi-kernel correntropy: M >= 2 Gaussian nodes, theta_i = -lambda_i
inline ElnModel make_mmkcc(const std::vector<double>& centers,
                           const std::vector<double>& widths,
                           const std::vector<double>& lambdas) {
    if (centers.size() < 2) throw std::invalid_argument("MMKCC needs at least two nodes");
    if (centers.size() != widths.size() || centers.size() != lambdas.size())
        throw std::invalid_argument("MMKCC parameter size mismatch");
    std::vector<ElnNode> nodes;
    nodes.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i)
        nodes.push_back({RadialBasis::gaussian(centers[i], widths[i]), -lambdas[i]});
    return ElnModel(std::move(nodes));
}

} // namespace eln

#endif
