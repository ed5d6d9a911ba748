#include "kac/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kac {

EnsembleState::EnsembleState(std::vector<double> values, double time)
    : values_(std::move(values)), time_(time) {
    if (values_.size() < 2) throw std::invalid_argument("EnsembleState: need M >= 2");
}

double EnsembleState::second_moment() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return acc / static_cast<double>(values_.size());
}

EmpiricalSample EnsembleState::empirical() const {
    return EmpiricalSample(values_);
}

EnsembleState ensemble_init_iid(const std::function<double(RandomStream&)>& sampler,
                                std::size_t M, RandomStream& rng) {
    std::vector<double> vals(M);
    for (double& v : vals) v = sampler(rng);
    return EnsembleState(std::move(vals));
}

void ensemble_advance(EnsembleState& ensemble, const ModelParams& p, double duration,
                      RandomStream& rng) {
    if (duration < 0.0) throw std::invalid_argument("ensemble_advance: negative duration");
    const auto [A, D] = derived_constants(p);
    const std::size_t M = ensemble.values_.size();
    const double rate = static_cast<double>(M) * (2.0 * p.lambda + p.mu);
    const double t_end = ensemble.time_ + duration;
    const double sqrtT = std::sqrt(p.T);

    auto drift_all = [&](double dt) {
        if (A == 0.0 || dt == 0.0) return;
        const double factor = std::exp(A * dt);
        for (double& v : ensemble.values_) v *= factor;
    };

    if (rate <= 0.0) {
        drift_all(t_end - ensemble.time_);
        ensemble.time_ = t_end;
        return;
    }

    for (;;) {
        const double dt = rng.exponential(rate);
        if (ensemble.time_ + dt > t_end) {
            drift_all(t_end - ensemble.time_);
            ensemble.time_ = t_end;
            return;
        }
        drift_all(dt);
        ensemble.time_ += dt;

        const std::size_t i = rng.index(M);
        if (rng.uniform() < 2.0 * p.lambda / (2.0 * p.lambda + p.mu)) {
            // Kac jump against a partner from the other members
            std::size_t j = rng.index(M - 1);
            if (j >= i) ++j;
            const double theta = 2.0 * std::numbers::pi * rng.uniform();
            ensemble.values_[i] = ensemble.values_[i] * std::cos(theta) -
                                  ensemble.values_[j] * std::sin(theta);
        } else {
            ensemble.values_[i] = rng.normal(sqrtT);
        }
    }
}

} // namespace kac
