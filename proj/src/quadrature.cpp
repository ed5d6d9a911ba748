#include "kac/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace kac {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
// polynomial recurrence, weights are mu0 * (first eigenvector component)².
QuadratureRule golub_welsch(const std::vector<double>& diag,
                            const std::vector<double>& offdiag, double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = diag[i];
        if (i + 1 < n) {
            jacobi(i, i + 1) = offdiag[i];
            jacobi(i + 1, i) = offdiag[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("quadrature: Jacobi eigensolve failed");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule make_hermite(int n) {
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(i / 2.0);
    return golub_welsch(diag, off, std::sqrt(std::numbers::pi));
}

QuadratureRule make_legendre(int n) {
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (int i = 1; i < n; ++i) {
        const double k = i;
        off[i - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    }
    return golub_welsch(diag, off, 2.0);
}

QuadratureRule make_laguerre(int n) {
    std::vector<double> diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
    for (int i = 1; i < n; ++i) off[i - 1] = static_cast<double>(i);
    return golub_welsch(diag, off, 1.0);
}

const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mtx,
                             int n, QuadratureRule (*maker)(int)) {
    if (n < 1) throw std::invalid_argument("quadrature: need n >= 1");
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, maker(n)).first;
    return it->second;
}

} // namespace

const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_hermite);
}

const QuadratureRule& gauss_legendre(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_legendre);
}

const QuadratureRule& gauss_laguerre(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_laguerre);
}

double gaussian_expectation(const std::function<double(double)>& f,
                            double variance, int n) {
    if (variance <= 0.0) throw std::invalid_argument("gaussian_expectation: variance <= 0");
    const QuadratureRule& rule = gauss_hermite(n);
    const double scale = std::sqrt(2.0 * variance);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(scale * rule.nodes[i]);
    return sum / std::sqrt(std::numbers::pi);
}

double integrate_gl(const std::function<double(double)>& f,
                    double a, double b, int n) {
    const QuadratureRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

} // namespace kac
