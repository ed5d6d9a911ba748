#pragma once

#include <span>
#include <vector>

namespace kac {

double normal_cdf(double x);

// Inverse standard normal CDF (Acklam's rational approximation refined with
// one Halley step; accurate to ~1e-15 on (0,1)).
double normal_quantile(double u);

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(std::span<const double> xs);

struct LineFit {
    double slope;
    double intercept;
    double slope_se;
};

// Ordinary least squares of y against x.
LineFit ols(std::span<const double> x, std::span<const double> y);

} // namespace kac
