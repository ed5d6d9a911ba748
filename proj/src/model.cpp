#include "kac/model.hpp"

#include "kac/errors.hpp"
#include "kac/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace kac {

namespace {

double check_converged(const char* what, double coarse, double fine) {
    const double scale = std::max(1.0, std::abs(fine));
    const double residual = std::abs(fine - coarse) / scale;
    if (residual > 1e-10)
        throw NumericFailure(std::string(what) + ": quadrature did not converge", residual);
    return fine;
}

} // namespace

double g_n(const ModelParams& p, std::int64_t N) {
    if (N < 2) throw std::invalid_argument("g_n: N must be >= 2");
    // Stable form w²/(E − E/N + w²/N) avoids overflow for huge N.
    const double invN = 1.0 / static_cast<double>(N);
    auto integrand = [&](double w) {
        return w * w / (p.E - p.E * invN + w * w * invN);
    };
    const double coarse = gaussian_expectation(integrand, p.T, 200);
    const double fine = gaussian_expectation(integrand, p.T, 400);
    return check_converged("g_n", coarse, fine);
}

double KbarConstants::weighted_sum() const {
    return k1 + k2 + std::abs(k3);
}

KbarConstants kbar_constants(const ModelParams& p, std::int64_t N) {
    return kbar_constants(p, N, NuMoments{p.T, 3.0 * p.T * p.T});
}

KbarConstants kbar_constants(const ModelParams& p, std::int64_t N, NuMoments nu) {
    // β_N(w) − 1 = (1+x)^{-1/2} − 1 with x = (w²−E)/(NE), evaluated through
    // log1p/expm1 so the O(1/N) difference keeps full precision.
    const double invNE = 1.0 / (static_cast<double>(N) * p.E);
    auto beta_m1 = [invNE, E = p.E](double w) {
        return std::expm1(-0.5 * std::log1p((w * w - E) * invNE));
    };
    return kbar_constants_with_beta(p, N, nu, beta_m1);
}

KbarConstants kbar_constants_with_beta(const ModelParams& p, std::int64_t N, NuMoments nu,
                                       const std::function<double(double)>& beta_minus_one) {
    if (N < 2) throw std::invalid_argument("kbar_constants: N must be >= 2");
    if (!(nu.second > 0.0)) throw std::invalid_argument("kbar_constants: second moment <= 0");

    auto integrate = [&](const std::function<double(double)>& f, const char* what) {
        const double coarse = gaussian_expectation(f, nu.second, 200);
        const double fine = gaussian_expectation(f, nu.second, 400);
        return check_converged(what, coarse, fine);
    };

    const double n1 = static_cast<double>(N - 1);
    KbarConstants out;
    out.k1 = n1 * integrate([&](double w) {
        const double d = beta_minus_one(w);
        return d * d;
    }, "kbar k1");
    out.k2 = integrate([&](double w) {
        const double d = beta_minus_one(w);
        return d * d * w * w;
    }, "kbar k2");
    // β(1−β) = −(β−1) − (β−1)²
    out.k3 = 2.0 * n1 * integrate([&](double w) {
        const double d = beta_minus_one(w);
        return d + d * d;
    }, "kbar k3") - (p.E - p.T) / p.E;
    return out;
}

} // namespace kac
