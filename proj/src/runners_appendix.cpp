#include "kac/errors.hpp"
#include "kac/experiments.hpp"
#include "kac/model.hpp"
#include "kac/parallel.hpp"
#include "kac/quadrature.hpp"
#include "kac/stats.hpp"
#include "run_util.hpp"

#include <cmath>

namespace kac {

using namespace detail;

namespace {

// Limit of the paired generator for h depending on the first coordinate:
// ∫ f0(v) [ mu (E_gamma h - h(v)) + A v h'(v) ] dv, with f0 Gaussian of
// variance E.
double generator_limit_h1(const ModelParams& p,
                          const std::function<double(double)>& h,
                          const std::function<double(double)>& hprime) {
    const auto [A, D] = derived_constants(p);
    const double gamma_avg = gaussian_expectation(h, p.T);
    const double f0_avg = gaussian_expectation(h, p.E);
    const double drift = gaussian_expectation([&](double v) { return v * hprime(v); }, p.E);
    return p.mu * (gamma_avg - f0_avg) + A * drift;
}

} // namespace

RunRecord run_generator_check(const ExperimentConfig& cfg) {
    WallClock clock;
    RunRecord rec{.experiment = "genchk", .config = cfg};
    const ModelParams& p = cfg.params;

    auto h_head = [](std::span<const double> v) { return std::exp(-v[0] * v[0]); };
    auto h = [](double v) { return std::exp(-v * v); };
    auto hprime = [](double v) { return -2.0 * v * std::exp(-v * v); };
    const double limit = generator_limit_h1(p, h, hprime);
    rec.scalars["limit"] = limit;

    const int batches = 8;
    std::vector<double> errs, lnN;
    for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
        const int N = static_cast<int>(cfg.N_list[ni]);
        const int per_batch = std::max(1, cfg.m_samples / batches);
        std::vector<double> batch_vals(batches);
        parallel_for(batches, [&](int b) {
            RandomStream rng(cfg.seed, (ni + 1) * 6000101ULL + static_cast<std::uint64_t>(b));
            auto sampler = [&](RandomStream& r) {
                return init_sphere_scaled(gaussian_sampler(p.E), N, p.E, cfg.mode, r);
            };
            batch_vals[b] = generator_pairing(sampler, N, cfg.mode, h_head, 1, per_batch,
                                              p, rng);
        });
        const auto stat = mean_se(batch_vals);
        for (int b = 0; b < batches; ++b)
            rec.rows.push_back({b, N, 0, 0.0, batch_vals[b]});
        rec.series.push_back({N, 0, 0.0, stat.mean, stat.se, limit});
        errs.push_back(std::abs(stat.mean - limit));
        lnN.push_back(std::log(static_cast<double>(N)));
        rec.scalars["estimate_N" + std::to_string(N)] = stat.mean;
    }

    std::vector<double> lnerr;
    for (double e : errs) lnerr.push_back(std::log(std::max(e, 1e-12)));
    const double trend = ols(lnN, lnerr).slope;
    rec.scalars["error_trend_slope"] = trend;
    add_check(rec, trend < 0.0,
              "generator pairing error trends down in N (log-log slope " + fmt(trend) + ")");
    const double final_tol = std::max(0.1 * std::abs(limit), 4.0 * rec.series.back().se);
    add_check(rec, errs.back() <= final_tol,
              "largest-N estimate within tolerance of the limit (err " + fmt(errs.back()) +
                  " <= " + fmt(final_tol) + ")");
    rec.wall_ms = clock.ms();
    return rec;
}

RunRecord run_kbar_check(const ExperimentConfig& cfg) {
    WallClock clock;
    RunRecord rec{.experiment = "kbar", .config = cfg};
    const ModelParams& p = cfg.params;

    std::vector<std::int64_t> ns;
    for (double x = 1.0; x <= 5.0 + 1e-9; x += 0.25)
        ns.push_back(static_cast<std::int64_t>(std::llround(std::pow(10.0, x))));

    double worst = 0.0;
    double at_1000 = 0.0, at_max = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const KbarConstants k = kbar_constants(p, ns[i]);
        const double scaled = static_cast<double>(ns[i]) * k.weighted_sum();
        rec.rows.push_back({0, ns[i], 0, static_cast<double>(ns[i]), scaled});
        worst = std::max(worst, scaled);
        if (ns[i] == 1000) at_1000 = scaled;
        if (i + 1 == ns.size()) at_max = scaled;
    }
    rec.series = aggregate_rows(rec.rows);
    rec.scalars["max_scaled_sum"] = worst;
    rec.scalars["scaled_sum_at_1000"] = at_1000;
    rec.scalars["scaled_sum_at_max"] = at_max;

    add_check(rec, std::isfinite(worst),
              "N * (K1 + K2 + |K3|) finite over N in [10, 1e5]: max " + fmt(worst));
    add_check(rec, at_max <= 1.5 * at_1000 + 1e-12,
              "N * (K1 + K2 + |K3|) shows no growth at large N (" + fmt(at_max) + " vs " +
                  fmt(at_1000) + " at N = 1000)");
    rec.wall_ms = clock.ms();
    return rec;
}

} // namespace kac
