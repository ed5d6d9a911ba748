#include "kac/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kac {

ModelParams::ModelParams(double lambda, double mu, double E, double T)
    : lambda(lambda), mu(mu), E(E), T(T) {
    validate();
}

void ModelParams::validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("ModelParams: lambda must be >= 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("ModelParams: mu must be >= 0");
    if (!(E > 0.0)) throw std::invalid_argument("ModelParams: E must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("ModelParams: T must be > 0");
    if (!(2.0 * lambda + mu > 0.0))
        throw std::invalid_argument("ModelParams: need 2*lambda + mu > 0");
}

DerivedConstants derived_constants(const ModelParams& p) {
    return {p.mu * (p.E - p.T) / (2.0 * p.E), 2.0 * p.lambda + p.mu};
}

double c_r(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("c_r: r must be > 0");
    // ∫₀^{2π} |cos θ|^r dθ/(2π) = Γ((r+1)/2) / (√π Γ(r/2+1))
    const double log_avg = std::lgamma(0.5 * (r + 1.0)) - std::lgamma(0.5 * r + 1.0)
                           - 0.5 * std::log(std::numbers::pi);
    return 1.0 - 2.0 * std::exp(log_avg);
}

bool moment_condition_holds(const ModelParams& p, double r) {
    if (!(r > 2.0)) throw std::invalid_argument("moment_condition_holds: r must be > 2");
    const auto [A, D] = derived_constants(p);
    return r * A < 2.0 * p.lambda * c_r(r) + p.mu;
}

double critical_moment(const ModelParams& p) {
    const auto [A, D] = derived_constants(p);
    if (A <= 0.0) return std::numeric_limits<double>::infinity();

    auto excess = [&](double r) { return r * A - (2.0 * p.lambda * c_r(r) + p.mu); };

    double lo = 2.0 + 1e-6;
    double hi = 1e6;
    if (excess(lo) >= 0.0) return lo;
    if (excess(hi) < 0.0) return hi; // off the supported bracket; r* >= 1e6

    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SmoothnessClass smoothness_class(const ModelParams& p) {
    // μ = 0 removes both the drift and the Gaussian source: the equilibrium
    // keeps the analytic branch.
    if (p.mu == 0.0 || p.E >= p.T)
        return {SmoothnessClass::Tag::Analytic};

    const double ratio = p.T / p.E;
    const double K = (2.0 * p.lambda + p.mu) / p.mu;
    if (ratio >= 1.0 + 2.0 * K)
        return {SmoothnessClass::Tag::BlowUpAtOrigin};

    // Largest integer p with T/E < 1 + 2K/(p+1); equivalently p+1 < 2K/(T/E-1),
    // strict at the boundary.
    const double x = 2.0 * K / (ratio - 1.0);
    int p_max = static_cast<int>(std::ceil(x)) - 2;
    while (ratio < 1.0 + 2.0 * K / (p_max + 2.0)) ++p_max;   // guard fp edges
    while (p_max >= 0 && !(ratio < 1.0 + 2.0 * K / (p_max + 1.0))) --p_max;
    if (p_max < 0) return {SmoothnessClass::Tag::BlowUpAtOrigin};
    return {SmoothnessClass::Tag::FinitelyDifferentiable, p_max};
}

std::string SmoothnessClass::str() const {
    switch (tag) {
        case Tag::Analytic: return "analytic";
        case Tag::BlowUpAtOrigin: return "blowup";
        case Tag::FinitelyDifferentiable: return "C" + std::to_string(p_max);
    }
    return "?";
}

} // namespace kac
