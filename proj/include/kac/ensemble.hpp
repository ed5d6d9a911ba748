#pragma once

#include "kac/params.hpp"
#include "kac/rng.hpp"
#include "kac/sample.hpp"

#include <functional>
#include <vector>

namespace kac {

// Nanbu-style ensemble approximation of the nonlinear single-particle
// process: members jump at rate 2λ (collision against a partner drawn from
// the other members) and μ (thermostat refresh); between jumps every value
// carries the exact drift factor e^{AΔt}.
class EnsembleState {
public:
    EnsembleState(std::vector<double> values, double time = 0.0);

    std::size_t size() const { return values_.size(); }
    double time() const { return time_; }
    const std::vector<double>& values() const { return values_; }

    double second_moment() const;
    EmpiricalSample empirical() const;

private:
    friend void ensemble_advance(EnsembleState&, const ModelParams&, double, RandomStream&);
    std::vector<double> values_;
    double time_;
};

EnsembleState ensemble_init_iid(const std::function<double(RandomStream&)>& sampler,
                                std::size_t M, RandomStream& rng);

void ensemble_advance(EnsembleState& ensemble, const ModelParams& p, double duration,
                      RandomStream& rng);

} // namespace kac
