#pragma once

#include "kac/params.hpp"
#include "kac/rng.hpp"

namespace kac {

// Closed-form equilibrium for λ = 0: the law of X e^{cτ} with X ~ γ(T),
// τ ~ Exp(1) and c = (E−T)/(2E). Heavy-tailed with Pareto exponent 1/c when
// E > T; blows up at the origin when T ≥ 3E.
class Lambda0Stationary {
public:
    explicit Lambda0Stationary(const ModelParams& p);

    double density_at(double v) const;
    double sample(RandomStream& rng) const;

    // E|V|^r = E|X|^r / (1 − r c), finite iff r c < 1.
    double abs_moment(double r) const;

    double drift_exponent() const { return c_; }

private:
    double T_;
    double c_;
};

} // namespace kac
