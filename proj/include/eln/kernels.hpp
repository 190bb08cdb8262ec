#ifndef ELN_KERNELS_HPP
#define ELN_KERNELS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace eln {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;

// Normalized Gaussian kernel G_sigma(e) = exp(-e^2 / 2 sigma^2) / (sqrt(2 pi) sigma).
inline double gauss(double e, double sigma) {
    return std::exp(-e * e / (2.0 * sigma * sigma)) / (kSqrt2Pi * sigma);
}

enum class BasisKind {
    Gaussian,            // G_sigma(e - c)
    Laplacian,           // exp(-|e - c| / sigma) / (2 sigma)
    GeneralizedGaussian, // exp(-lambda |e|^alpha)
    RiskSensitive,       // exp(lambda (1 - G_sigma(e)))
    KernelPPower         // (1 - G_sigma(e))^(p/2)
};

// One loss node. Immutable after construction; parameters are validated by
// the factories below.
struct RadialBasis {
    BasisKind kind;
    double p0; // center c (Gaussian/Laplacian), alpha (GenGaussian), lambda (RiskSensitive), p (KernelPPower)
    double p1; // width sigma, or scale lambda for GenGaussian

    double center() const { return p0; }
    double width() const { return p1; }
    double shape() const { return p0; }
    double scale() const { return p1; }
    double risk() const { return p0; }
    double power() const { return p0; }

    static RadialBasis gaussian(double c, double sigma) {
        require_positive(sigma, "gaussian width");
        return {BasisKind::Gaussian, c, sigma};
    }
    static RadialBasis laplacian(double c, double sigma) {
        require_positive(sigma, "laplacian width");
        return {BasisKind::Laplacian, c, sigma};
    }
    static RadialBasis generalized_gaussian(double alpha, double lambda) {
        require_positive(alpha, "generalized gaussian shape");
        require_positive(lambda, "generalized gaussian scale");
        return {BasisKind::GeneralizedGaussian, alpha, lambda};
    }
    static RadialBasis risk_sensitive(double lambda, double sigma) {
        require_positive(lambda, "risk parameter");
        require_positive(sigma, "risk-sensitive width");
        return {BasisKind::RiskSensitive, lambda, sigma};
    }
    static RadialBasis kernel_p_power(double p, double sigma) {
        require_positive(p, "kernel power");
        require_positive(sigma, "kernel-p-power width");
        return {BasisKind::KernelPPower, p, sigma};
    }

private:
    static void require_positive(double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(what) + " must be strictly positive");
    }
};

inline double basis_eval(const RadialBasis& b, double e) {
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite input");
    switch (b.kind) {
    case BasisKind::Gaussian:
        return gauss(e - b.p0, b.p1);
    case BasisKind::Laplacian:
        return std::exp(-std::abs(e - b.p0) / b.p1) / (2.0 * b.p1);
    case BasisKind::GeneralizedGaussian:
        return std::exp(-b.p1 * std::pow(std::abs(e), b.p0));
    case BasisKind::RiskSensitive:
        return std::exp(b.p0 * (1.0 - gauss(e, b.p1)));
    case BasisKind::KernelPPower:
        return std::pow(1.0 - gauss(e, b.p1), b.p0 / 2.0);
    }
    throw std::logic_error("unknown basis kind");
}

inline double basis_deriv(const RadialBasis& b, double e) {
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite input");
    switch (b.kind) {
    case BasisKind::Gaussian: {
        const double s2 = b.p1 * b.p1;
        return -gauss(e - b.p0, b.p1) * (e - b.p0) / s2;
    }
    case BasisKind::Laplacian: {
        if (e == b.p0) throw std::domain_error("derivative undefined at center");
        const double sgn = (e > b.p0) ? 1.0 : -1.0;
        return -sgn * std::exp(-std::abs(e - b.p0) / b.p1) / (2.0 * b.p1 * b.p1);
    }
    case BasisKind::GeneralizedGaussian: {
        if (e == 0.0) {
            // d/de exp(-lambda |e|^alpha) at 0: zero for alpha > 1, -lambda*sgn for alpha = 1
            if (b.p0 > 1.0) return 0.0;
            if (b.p0 == 1.0) throw std::domain_error("derivative undefined at center");
            throw std::domain_error("derivative unbounded at center");
        }
        const double sgn = (e > 0.0) ? 1.0 : -1.0;
        const double ae = std::abs(e);
        return -b.p1 * b.p0 * std::pow(ae, b.p0 - 1.0) * sgn *
               std::exp(-b.p1 * std::pow(ae, b.p0));
    }
    case BasisKind::RiskSensitive: {
        const double g = gauss(e, b.p1);
        return std::exp(b.p0 * (1.0 - g)) * b.p0 * g * e / (b.p1 * b.p1);
    }
    case BasisKind::KernelPPower: {
        const double g = gauss(e, b.p1);
        return (b.p0 / 2.0) * std::pow(1.0 - g, b.p0 / 2.0 - 1.0) * g * e / (b.p1 * b.p1);
    }
    }
    throw std::logic_error("unknown basis kind");
}

// Supremum of the basis over the reals. Every supported kind is bounded;
// the risk-sensitive sup exp(lambda) is approached as |e| -> infinity.
inline double basis_upper_bound(const RadialBasis& b) {
    switch (b.kind) {
    case BasisKind::Gaussian:
        return 1.0 / (kSqrt2Pi * b.p1);
    case BasisKind::Laplacian:
        return 1.0 / (2.0 * b.p1);
    case BasisKind::GeneralizedGaussian:
        return 1.0;
    case BasisKind::RiskSensitive:
        return std::exp(b.p0);
    case BasisKind::KernelPPower:
        return 1.0;
    }
    throw std::logic_error("unknown basis kind");
}

} // namespace eln

#endif
