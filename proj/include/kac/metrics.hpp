#pragma once

#include "kac/rng.hpp"
#include "kac/sample.hpp"

#include <functional>
#include <optional>

namespace kac {

class DensityTable;

// W2 between two equal-size empirical measures: the sorted pairing is the
// optimal coupling on the line, and with the 1/k normalization it equals the
// vector-normalized W2.
double w2_empirical(const EmpiricalSample& a, const EmpiricalSample& b);

// W2 between a sorted k-sample and an analytic law given by its quantile
// function: sqrt( Σ_i ∫_{(i-1)/k}^{i/k} (a_(i) − Q(u))² du ), with 8-point
// Gauss-Legendre in each cell.
double w2_vs_quantile(const EmpiricalSample& a,
                      const std::function<double(double)>& quantile);

struct W2TableResult {
    double value;
    bool truncation_warning; // table truncated mass exceeded 1e-3
};

W2TableResult w2_vs_table(const EmpiricalSample& a, const DensityTable& table);

// W2 between two density tables by quantile coupling on a u-grid.
double w2_tables(const DensityTable& a, const DensityTable& b, int n_cells = 2048);

// Monte Carlo estimate of ε_N(f) = E[W2²(empirical of N iid draws, f)].
double epsilon_n(const std::function<double(RandomStream&)>& sampler,
                 const std::function<double(double)>& quantile_of_f,
                 int N, int replicas, RandomStream& rng);

double empirical_moment(const EmpiricalSample& a, double r);

// Hill estimator of the Pareto tail exponent on |values|, using the top
// `fraction` order statistics (default 5%). Samples with no power tail come
// out large; anything above 20 should be read as "no heavy tail detected".
double tail_index(const EmpiricalSample& a, double fraction = 0.05);

struct TailIndexSweep {
    double at_2pct;
    double at_5pct;
    double at_10pct;
};

TailIndexSweep tail_index_sweep(const EmpiricalSample& a);

} // namespace kac
