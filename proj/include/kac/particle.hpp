#pragma once

#include "kac/params.hpp"
#include "kac/rng.hpp"
#include "kac/sample.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kac {

enum class RescalingMode { NoRescale, AlphaExact, BetaMeanField };

std::string to_string(RescalingMode mode);

// One event of the jump process. Waiting times are Exp(N(λ+μ)); the event is
// a Kac collision with probability λ/(λ+μ), otherwise a thermostat refresh.
struct EventDraw {
    enum class Kind { Kac, Thermostat };
    Kind kind;
    double dt;
    int i = -1;
    int j = -1;         // Kac only
    double theta = 0.0; // Kac only
    double w = 0.0;     // thermostat only
};

EventDraw draw_event(const ModelParams& p, int N, RandomStream& rng);

class ParticleState {
public:
    ParticleState(std::vector<double> velocities, RescalingMode mode, double time = 0.0);

    int size() const { return static_cast<int>(v_.size()); }
    double time() const { return time_; }
    RescalingMode mode() const { return mode_; }
    std::span<const double> velocities() const { return v_; }

    double total_energy() const;
    double particle_moment(double r) const; // (1/N) Σ |v_i|^r
    EmpiricalSample empirical() const;

    // Apply one event. AlphaExact reads the pre-thermostat velocity, swaps in
    // the fresh sample, then rescales every velocity so Σv² returns to NE;
    // off the sphere this can make the radicand nonpositive, which is a
    // domain error rather than a silent clamp.
    void apply(const EventDraw& e, const ModelParams& p);

    void set_time(double t) { time_ = t; }

private:
    std::vector<double> v_;
    double time_;
    RescalingMode mode_;
};

using Sampler = std::function<double(RandomStream&)>;

ParticleState init_iid(const Sampler& sampler_of_f0, int N, RescalingMode mode,
                       RandomStream& rng);

// Draw X ~ f^{⊗N} and scale onto the sphere of radius sqrt(NE):
// Y_i = sqrt(E/Q) X_i with Q = (1/N) Σ X_j². On the null event Q = 0 the
// state falls back to alternating ±sqrt(E).
ParticleState init_sphere_scaled(const Sampler& sampler_of_f, int N, double energy,
                                 RescalingMode mode, RandomStream& rng);

void advance(ParticleState& state, const ModelParams& p, double duration,
             RandomStream& rng);

// Two states driven by one event stream (same clocks, pairs, angles and
// thermostat samples) — the synchronous coupling.
struct CoupledPair {
    ParticleState a;
    ParticleState b;
};

void advance_coupled(CoupledPair& pair, const ModelParams& p, double duration,
                     RandomStream& rng);

// Monte Carlo pairing ⟨L[f^N], h⟩ of the generator with a test function of
// the first l coordinates, via the adjoint: states are sampled from f^N and
// the conditional expectations over (θ, pair) and w are quadratures.
double generator_pairing(const std::function<ParticleState(RandomStream&)>& sphere_sampler,
                         int N, RescalingMode mode,
                         const std::function<double(std::span<const double>)>& h, int l,
                         int m_samples, const ModelParams& p, RandomStream& rng,
                         int n_theta = 64, int n_w = 64);

// Snapshot exports: CSV rows (time, v1..vN) and little-endian f64 with an
// 8-byte count header.
void append_snapshot_csv(std::ostream& out, const ParticleState& state);
void write_snapshot_binary(const std::string& path, const ParticleState& state);
std::vector<double> read_snapshot_binary(const std::string& path);

} // namespace kac
