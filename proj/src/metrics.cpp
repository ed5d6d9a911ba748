#include "kac/metrics.hpp"

#include "kac/density.hpp"
#include "kac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kac {

double w2_empirical(const EmpiricalSample& a, const EmpiricalSample& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("w2_empirical: samples must have equal size");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

double w2_vs_quantile(const EmpiricalSample& a,
                      const std::function<double(double)>& quantile) {
    const std::size_t k = a.size();
    const QuadratureRule& gl = gauss_legendre(8);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double u0 = static_cast<double>(i) / k;
        const double u1 = static_cast<double>(i + 1) / k;
        const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
        double cell = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double d = a[i] - quantile(mid + half * gl.nodes[q]);
            cell += gl.weights[q] * d * d;
        }
        acc += half * cell;
    }
    return std::sqrt(acc);
}

W2TableResult w2_vs_table(const EmpiricalSample& a, const DensityTable& table) {
    const double tm = table.truncated_mass();
    const double lo = 0.5 * tm, hi = 1.0 - 0.5 * tm;
    const double eps = 1e-12;
    auto clamped = [&](double u) {
        return table.quantile(std::clamp(u, lo + eps, hi - eps));
    };
    return {w2_vs_quantile(a, clamped), tm > 1e-3};
}

double w2_tables(const DensityTable& a, const DensityTable& b, int n_cells) {
    // quantile coupling restricted to the u-range both grids resolve
    const double lo = 0.5 * std::max(a.truncated_mass(), b.truncated_mass()) + 1e-12;
    const double hi = 1.0 - lo;
    if (!(hi > lo)) throw std::invalid_argument("w2_tables: empty common support");
    const QuadratureRule& gl = gauss_legendre(8);
    const double du = (hi - lo) / n_cells;
    double acc = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        const double mid = lo + (i + 0.5) * du, half = 0.5 * du;
        double cell = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double u = mid + half * gl.nodes[q];
            const double d = a.quantile(u) - b.quantile(u);
            cell += gl.weights[q] * d * d;
        }
        acc += half * cell;
    }
    return std::sqrt(acc);
}

double epsilon_n(const std::function<double(RandomStream&)>& sampler,
                 const std::function<double(double)>& quantile_of_f,
                 int N, int replicas, RandomStream& rng) {
    if (N < 1 || replicas < 1) throw std::invalid_argument("epsilon_n: bad sizes");
    double acc = 0.0;
    std::vector<double> draw(N);
    for (int r = 0; r < replicas; ++r) {
        for (double& x : draw) x = sampler(rng);
        const double w2 = w2_vs_quantile(EmpiricalSample(draw), quantile_of_f);
        acc += w2 * w2;
    }
    return acc / replicas;
}

double empirical_moment(const EmpiricalSample& a, double r) {
    return a.moment(r);
}

double tail_index(const EmpiricalSample& a, double fraction) {
    if (a.size() < 50) throw std::invalid_argument("tail_index: need k >= 50");
    if (!(fraction > 0.0 && fraction < 0.5))
        throw std::invalid_argument("tail_index: fraction must be in (0, 0.5)");

    std::vector<double> mags;
    mags.reserve(a.size());
    for (double x : a.values()) mags.push_back(std::abs(x));
    std::sort(mags.begin(), mags.end());

    const std::size_t k = std::max<std::size_t>(5, static_cast<std::size_t>(fraction * mags.size()));
    const double floor_mag = mags[mags.size() - 1 - k];
    if (!(floor_mag > 0.0) || mags.back() == floor_mag)
        throw std::invalid_argument("tail_index: degenerate sample");

    double acc = 0.0;
    for (std::size_t i = mags.size() - k; i < mags.size(); ++i)
        acc += std::log(mags[i] / floor_mag);
    return static_cast<double>(k) / acc;
}

TailIndexSweep tail_index_sweep(const EmpiricalSample& a) {
    return {tail_index(a, 0.02), tail_index(a, 0.05), tail_index(a, 0.10)};
}

} // namespace kac
