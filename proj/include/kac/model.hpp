#pragma once

#include "kac/params.hpp"

#include <cstdint>
#include <functional>

namespace kac {

// Contraction rate constant of the rescaled particle system,
// G_N = ∫ N w² γ(dw) / (NE − E + w²), with γ the Gaussian of variance T.
// G_N → T/E as N → ∞.
double g_n(const ModelParams& p, std::int64_t N);

// Moments of the thermostat law ν used by kbar_constants. Default is the
// Gaussian at temperature T, for which the fourth moment is 3T².
struct NuMoments {
    double second;
    double fourth;
};

struct KbarConstants {
    double k1; // (N−1) ∫ (1−β_N(w))² ν(dw)
    double k2; // ∫ (β_N(w)−1)² w² ν(dw)
    double k3; // −2(N−1) ∫ β_N(w)(1−β_N(w)) ν(dw) − (E−T)/E
    double weighted_sum() const;
};

KbarConstants kbar_constants(const ModelParams& p, std::int64_t N);
KbarConstants kbar_constants(const ModelParams& p, std::int64_t N, NuMoments nu);

// Same integrals with an arbitrary rescaling factor in place of β_N; used to
// exercise the integrand path (beta ≡ 1 must give k1 = k2 = 0).
KbarConstants kbar_constants_with_beta(const ModelParams& p, std::int64_t N, NuMoments nu,
                                       const std::function<double(double)>& beta_minus_one);

} // namespace kac
