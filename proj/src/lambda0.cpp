#include "kac/lambda0.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kac {

Lambda0Stationary::Lambda0Stationary(const ModelParams& p) : T_(p.T) {
    if (p.lambda != 0.0)
        throw std::invalid_argument("Lambda0Stationary: requires lambda = 0");
    if (!(p.mu > 0.0))
        throw std::invalid_argument("Lambda0Stationary: requires mu > 0");
    c_ = (p.E - p.T) / (2.0 * p.E);
}

double Lambda0Stationary::density_at(double v) const {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * T_);
    if (c_ == 0.0) return norm * std::exp(-v * v / (2.0 * T_));

    if (v == 0.0 && 1.0 + c_ <= 0.0) return std::numeric_limits<double>::infinity();
    // Work in log space: for T > E the prefactor grows while the Gaussian
    // factor collapses doubly exponentially, and the naive product is 0*inf.
    auto integrand = [&](double s) {
        double expo = -(1.0 + c_) * s;
        if (v != 0.0) {
            const double grow = -2.0 * c_ * s;
            if (grow > 1400.0) return 0.0; // Gaussian factor underflows first
            expo -= v * v * std::exp(grow) / (2.0 * T_);
        }
        return expo < -745.0 ? 0.0 : norm * std::exp(expo);
    };
    boost::math::quadrature::exp_sinh<double> quad;
    double err = 0.0;
    return quad.integrate(integrand, 1e-12, &err);
}

double Lambda0Stationary::sample(RandomStream& rng) const {
    const double x = rng.normal(std::sqrt(T_));
    const double tau = rng.exponential(1.0);
    return x * std::exp(c_ * tau);
}

double Lambda0Stationary::abs_moment(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("abs_moment: r must be > 0");
    if (r * c_ >= 1.0) return std::numeric_limits<double>::infinity();
    // E|X|^r for X ~ N(0,T): T^{r/2} 2^{r/2} Γ((r+1)/2)/√π
    const double gauss = std::pow(2.0 * T_, 0.5 * r) *
                         std::exp(std::lgamma(0.5 * (r + 1.0))) /
                         std::sqrt(std::numbers::pi);
    return gauss / (1.0 - r * c_);
}

} // namespace kac
