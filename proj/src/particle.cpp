#include "kac/particle.hpp"

#include "kac/quadrature.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace kac {

std::string to_string(RescalingMode mode) {
    switch (mode) {
        case RescalingMode::NoRescale: return "none";
        case RescalingMode::AlphaExact: return "alpha";
        case RescalingMode::BetaMeanField: return "beta";
    }
    return "?";
}

EventDraw draw_event(const ModelParams& p, int N, RandomStream& rng) {
    EventDraw e;
    e.dt = rng.exponential(N * (p.lambda + p.mu));
    if (rng.uniform() < p.lambda / (p.lambda + p.mu)) {
        e.kind = EventDraw::Kind::Kac;
        e.i = static_cast<int>(rng.index(N));
        int j = static_cast<int>(rng.index(N - 1));
        if (j >= e.i) ++j;
        e.j = j;
        e.theta = 2.0 * std::numbers::pi * rng.uniform();
    } else {
        e.kind = EventDraw::Kind::Thermostat;
        e.i = static_cast<int>(rng.index(N));
        e.w = rng.normal(std::sqrt(p.T));
    }
    return e;
}

ParticleState::ParticleState(std::vector<double> velocities, RescalingMode mode, double time)
    : v_(std::move(velocities)), time_(time), mode_(mode) {
    if (v_.size() < 2) throw std::invalid_argument("ParticleState: need N >= 2");
}

double ParticleState::total_energy() const {
    double acc = 0.0;
    for (double v : v_) acc += v * v;
    return acc;
}

double ParticleState::particle_moment(double r) const {
    double acc = 0.0;
    for (double v : v_) acc += std::pow(std::abs(v), r);
    return acc / static_cast<double>(v_.size());
}

EmpiricalSample ParticleState::empirical() const {
    return EmpiricalSample(v_);
}

void ParticleState::apply(const EventDraw& e, const ModelParams& p) {
    time_ += e.dt;
    if (e.kind == EventDraw::Kind::Kac) {
        const double c = std::cos(e.theta), s = std::sin(e.theta);
        const double vi = v_[e.i], vj = v_[e.j];
        v_[e.i] = vi * c - vj * s;
        v_[e.j] = vi * s + vj * c;
        return;
    }

    const double old = v_[e.i];
    v_[e.i] = e.w;
    if (mode_ == RescalingMode::NoRescale) return;

    const double ne = static_cast<double>(size()) * p.E;
    double factor;
    if (mode_ == RescalingMode::AlphaExact) {
        const double radicand = ne - old * old + e.w * e.w;
        if (radicand <= 0.0)
            throw std::domain_error(
                "AlphaExact rescaling undefined: N*E - v_i^2 + w^2 = " +
                std::to_string(radicand) + " at t = " + std::to_string(time_) +
                " (state is off the sphere)");
        factor = std::sqrt(ne / radicand);
    } else {
        factor = std::sqrt(ne / (ne - p.E + e.w * e.w));
    }
    for (double& v : v_) v *= factor;
}

ParticleState init_iid(const Sampler& sampler_of_f0, int N, RescalingMode mode,
                       RandomStream& rng) {
    std::vector<double> v(N);
    for (double& x : v) x = sampler_of_f0(rng);
    return ParticleState(std::move(v), mode);
}

ParticleState init_sphere_scaled(const Sampler& sampler_of_f, int N, double energy,
                                 RescalingMode mode, RandomStream& rng) {
    if (!(energy > 0.0)) throw std::invalid_argument("init_sphere_scaled: energy must be > 0");
    std::vector<double> v(N);
    double q = 0.0;
    for (double& x : v) {
        x = sampler_of_f(rng);
        q += x * x;
    }
    q /= static_cast<double>(N);
    if (q == 0.0) {
        // exchangeable fallback on the sphere: alternating signs
        for (int i = 0; i < N; ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) * std::sqrt(energy);
    } else {
        const double scale = std::sqrt(energy / q);
        for (double& x : v) x *= scale;
    }
    return ParticleState(std::move(v), mode);
}

void advance(ParticleState& state, const ModelParams& p, double duration,
             RandomStream& rng) {
    if (duration < 0.0) throw std::invalid_argument("advance: negative duration");
    const double t_end = state.time() + duration;
    const double rate = state.size() * (p.lambda + p.mu);
    if (rate <= 0.0) {
        state.set_time(t_end);
        return;
    }
    for (;;) {
        EventDraw e = draw_event(p, state.size(), rng);
        if (state.time() + e.dt > t_end) {
            state.set_time(t_end);
            return;
        }
        state.apply(e, p);
    }
}

void advance_coupled(CoupledPair& pair, const ModelParams& p, double duration,
                     RandomStream& rng) {
    if (pair.a.size() != pair.b.size())
        throw std::invalid_argument("advance_coupled: states must share N");
    if (pair.a.mode() != pair.b.mode())
        throw std::invalid_argument("advance_coupled: states must share the rescaling mode");
    if (duration < 0.0) throw std::invalid_argument("advance_coupled: negative duration");

    const double t_end = pair.a.time() + duration;
    const double rate = pair.a.size() * (p.lambda + p.mu);
    if (rate <= 0.0) {
        pair.a.set_time(t_end);
        pair.b.set_time(t_end);
        return;
    }
    for (;;) {
        EventDraw e = draw_event(p, pair.a.size(), rng);
        if (pair.a.time() + e.dt > t_end) {
            pair.a.set_time(t_end);
            pair.b.set_time(t_end);
            return;
        }
        pair.a.apply(e, p);
        pair.b.apply(e, p);
    }
}

namespace {

// Velocity vector after a thermostat event at slot j with sample w:
// substitute, then rescale per the mode.
double rescale_factor(RescalingMode mode, double ne, double E, double old_vj, double w) {
    switch (mode) {
        case RescalingMode::NoRescale: return 1.0;
        case RescalingMode::AlphaExact: {
            const double radicand = ne - old_vj * old_vj + w * w;
            if (radicand <= 0.0)
                throw std::domain_error("generator_pairing: alpha radicand nonpositive");
            return std::sqrt(ne / radicand);
        }
        case RescalingMode::BetaMeanField: return std::sqrt(ne / (ne - E + w * w));
    }
    return 1.0;
}

} // namespace

double generator_pairing(const std::function<ParticleState(RandomStream&)>& sphere_sampler,
                         int N, RescalingMode mode,
                         const std::function<double(std::span<const double>)>& h, int l,
                         int m_samples, const ModelParams& p, RandomStream& rng,
                         int n_theta, int n_w) {
    if (l < 1 || l > N) throw std::invalid_argument("generator_pairing: need 1 <= l <= N");
    const QuadratureRule& theta_rule = gauss_legendre(n_theta);
    const QuadratureRule& w_rule = gauss_hermite(n_w);
    const double w_scale = std::sqrt(2.0 * p.T);
    const double ne = static_cast<double>(N) * p.E;

    std::vector<double> head(l);
    double total = 0.0;
    for (int m = 0; m < m_samples; ++m) {
        const ParticleState state = sphere_sampler(rng);
        if (state.size() != N) throw std::invalid_argument("generator_pairing: sampler N mismatch");
        const std::span<const double> v = state.velocities();
        for (int k = 0; k < l; ++k) head[k] = v[k];
        const double h0 = h(head);
        double acc = 0.0;

        if (p.lambda > 0.0) {
            // Kac part: total rate Nλ over ordered pairs (first, second) with
            // first ≠ second; only pairs touching the first l coordinates move
            // h. Enumerate (a,b) for a < l, plus (b,a) for b outside the head.
            auto theta_avg_minus_h0 = [&](int first, int second) {
                double avg = 0.0;
                for (int q = 0; q < n_theta; ++q) {
                    const double theta = std::numbers::pi * (1.0 + theta_rule.nodes[q]);
                    const double c = std::cos(theta), s = std::sin(theta);
                    for (int k = 0; k < l; ++k) head[k] = v[k];
                    const double vf = v[first], vs = v[second];
                    if (first < l) head[first] = vf * c - vs * s;
                    if (second < l) head[second] = vf * s + vs * c;
                    avg += theta_rule.weights[q] * 0.5 * h(head);
                }
                return avg - h0;
            };
            double pair_sum = 0.0;
            for (int a = 0; a < l; ++a) {
                for (int b = 0; b < N; ++b) {
                    if (b == a) continue;
                    pair_sum += theta_avg_minus_h0(a, b);
                    if (b >= l) pair_sum += theta_avg_minus_h0(b, a);
                }
            }
            const double n_ordered = static_cast<double>(N) * (N - 1);
            acc += static_cast<double>(N) * p.lambda * pair_sum / n_ordered;
        }

        if (p.mu > 0.0) {
            // thermostat + rescale at every slot j, w-averaged by quadrature
            double therm_sum = 0.0;
            for (int j = 0; j < N; ++j) {
                double w_avg = 0.0;
                for (int q = 0; q < n_w; ++q) {
                    const double w = w_scale * w_rule.nodes[q];
                    const double factor = rescale_factor(mode, ne, p.E, v[j], w);
                    for (int k = 0; k < l; ++k) head[k] = factor * v[k];
                    if (j < l) head[j] = factor * w;
                    w_avg += w_rule.weights[q] * h(head);
                }
                therm_sum += w_avg / std::sqrt(std::numbers::pi) - h0;
            }
            acc += p.mu * therm_sum;
        }
        total += acc;
    }
    return total / static_cast<double>(m_samples);
}

void append_snapshot_csv(std::ostream& out, const ParticleState& state) {
    out << state.time();
    for (double v : state.velocities()) out << "," << v;
    out << "\n";
}

void write_snapshot_binary(const std::string& path, const ParticleState& state) {
    static_assert(std::endian::native == std::endian::little,
                  "snapshot format is little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    const std::uint64_t n = state.velocities().size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(state.velocities().data()),
              static_cast<std::streamsize>(n * sizeof(double)));
}

std::vector<double> read_snapshot_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("truncated snapshot " + path);
    return v;
}

} // namespace kac
