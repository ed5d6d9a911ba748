#pragma once

#include "kac/density.hpp"
#include "kac/experiments.hpp"
#include "kac/rng.hpp"
#include "kac/spectral.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace kac::detail {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    if (n == 1) { out[0] = a; return out; }
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

inline Sampler gaussian_sampler(double variance) {
    const double sd = std::sqrt(variance);
    return [sd](RandomStream& rng) { return rng.normal(sd); };
}

class WallClock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_).count();
    }
private:
    std::chrono::steady_clock::time_point start_;
};

inline void add_check(RunRecord& rec, bool ok, const std::string& text) {
    rec.checks.push_back(std::string(ok ? "PASS " : "FAIL ") + text);
    rec.pass = rec.pass && ok;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// Grid for transient solves; xi_max covers the slowest-decaying Gaussian
// component in play.
inline GridSpec transient_grid(const ExperimentConfig& cfg, double min_variance) {
    GridSpec g;
    g.xi_max = cfg.xi_max > 0.0 ? cfg.xi_max : 1.5 / std::sqrt(min_variance);
    g.n_xi = cfg.n_xi;
    g.n_theta = cfg.n_theta;
    return g;
}

// Grid for stationary solves: Gaussian-dominated spectra for A >= 0, wide
// grid for the algebraically decaying A < 0 regime.
inline GridSpec stationary_grid(const ExperimentConfig& cfg) {
    const auto [A, D] = derived_constants(cfg.params);
    GridSpec g;
    if (A >= 0.0) {
        g.xi_max = cfg.xi_max > 0.0 ? cfg.xi_max
                                    : 1.5 / std::sqrt(std::min(cfg.params.T, cfg.params.E));
        g.n_xi = std::max(cfg.n_xi, 4097);
    } else {
        g.xi_max = cfg.xi_max > 0.0 ? cfg.xi_max : 64.0 / std::sqrt(cfg.params.T);
        g.n_xi = std::max(cfg.n_xi, 32769);
    }
    g.n_theta = cfg.n_theta;
    return g;
}

inline VGrid velocity_grid(const ExperimentConfig& cfg, double max_variance) {
    VGrid g;
    g.v_max = cfg.v_max > 0.0 ? cfg.v_max : 10.0 * std::sqrt(max_variance);
    g.n_v = cfg.n_v;
    return g;
}

// OLS over the middle 80% of checkpoints (burn-in and noise-floor tails
// excluded from rate fits).
std::pair<std::vector<double>, std::vector<double>> middle80(
    const std::vector<double>& x, const std::vector<double>& y);

} // namespace kac::detail
