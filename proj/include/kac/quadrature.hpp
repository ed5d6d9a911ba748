#pragma once

#include <functional>
#include <vector>

namespace kac {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Hermite rule for integrals of the form ∫ f(x) e^{-x²} dx.
const QuadratureRule& gauss_hermite(int n);

// Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

// Gauss-Laguerre rule for integrals of the form ∫₀^∞ f(x) e^{-x} dx.
const QuadratureRule& gauss_laguerre(int n);

// E[f(W)] for W ~ N(0, variance), using an n-node Gauss-Hermite rule.
double gaussian_expectation(const std::function<double(double)>& f,
                            double variance, int n = 200);

// ∫_a^b f(x) dx with an n-node Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f,
                    double a, double b, int n = 32);

} // namespace kac
