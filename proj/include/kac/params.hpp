#pragma once

#include <limits>
#include <string>

namespace kac {

// Physical parameters of the model: Kac collision rate λ (total rate Nλ,
// i.e. 2λ collisions per particle per unit time), thermostat rate μ per
// particle, target per-particle energy E, thermostat temperature T.
struct ModelParams {
    double lambda = 1.0;
    double mu = 1.0;
    double E = 1.0;
    double T = 1.0;

    ModelParams() = default;
    ModelParams(double lambda, double mu, double E, double T);

    void validate() const;
};

// A = μ(E−T)/(2E) is the drift coefficient of the limiting equation; D is
// the total per-particle jump rate 2λ+μ.
struct DerivedConstants {
    double A;
    double D;
};

DerivedConstants derived_constants(const ModelParams& p);

// C_r = 1 − 2 ∫₀^{2π} |cos θ|^r dθ/(2π). Strictly increasing in r, zero at
// r = 2, negative below, approaching 1 from below as r → ∞.
double c_r(double r);

// Whether the r-th moment of the solution stays bounded uniformly in time:
// true iff r·A < 2λ·C_r + μ. Only meaningful for r > 2.
bool moment_condition_holds(const ModelParams& p, double r);

// Supremum of the r > 2 for which the moment condition holds. +inf when
// A <= 0 (every moment propagates); otherwise the unique root of
// r·A = 2λ·C_r + μ, found by bisection.
double critical_moment(const ModelParams& p);

// Behaviour of the equilibrium density at the origin.
struct SmoothnessClass {
    enum class Tag { Analytic, FinitelyDifferentiable, BlowUpAtOrigin };
    Tag tag;
    int p_max = -1; // valid only for FinitelyDifferentiable

    bool operator==(const SmoothnessClass&) const = default;
    std::string str() const;
};

SmoothnessClass smoothness_class(const ModelParams& p);

} // namespace kac
