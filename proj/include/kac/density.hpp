#pragma once

#include "kac/spectral.hpp"

#include <string>
#include <vector>

namespace kac {

// Velocity-space density on a uniform grid [-v_max, v_max] with its CDF.
// Probability mass outside the grid is carried as truncated_mass, split
// evenly between the two tails: cdf(-v_max) = truncated_mass/2.
class DensityTable {
public:
    DensityTable(double v_max, std::vector<double> density, double clipped_mass);

    int size() const { return static_cast<int>(density_.size()); }
    double v_max() const { return v_max_; }
    double step() const { return step_; }
    double v(int i) const { return -v_max_ + step_ * i; }

    const std::vector<double>& density() const { return density_; }
    const std::vector<double>& cdf() const { return cdf_; }
    double density_at(double v) const; // linear interpolation, 0 outside

    double truncated_mass() const { return truncated_mass_; }
    double clipped_mass() const { return clipped_mass_; }

    // Piecewise-linear inverse of the CDF. Valid for
    // u in (truncated_mass/2, 1 - truncated_mass/2); throws outside.
    double quantile(double u) const;

    double mean() const;
    double second_moment() const;

private:
    double v_max_;
    double step_;
    std::vector<double> density_;
    std::vector<double> cdf_;
    double truncated_mass_;
    double clipped_mass_;
};

struct VGrid {
    double v_max;
    int n_v = 4001;
};

// Inverse transform of a physical characteristic function by trapezoid sum,
// optionally with the Fejér factor (1 - |ξ|/Ξ) for slowly decaying fields.
// Negative ringing is clipped to zero; the clipped mass is recorded.
DensityTable invert_to_density(const SpectralField& field, const VGrid& grid,
                               bool fejer = false);

// CSV (v,density,cdf) plus a JSON metadata sidecar at path + ".meta.json".
void write_density_csv(const DensityTable& table, const std::string& path,
                       const std::string& params_json = "{}");

// CSV (xi,re,im) plus a JSON metadata sidecar.
void write_field_csv(const SpectralField& field, const std::string& path,
                     const std::string& params_json = "{}");

} // namespace kac
