#include "kac/density.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace kac {

DensityTable::DensityTable(double v_max, std::vector<double> density, double clipped_mass)
    : v_max_(v_max), density_(std::move(density)), clipped_mass_(clipped_mass) {
    if (!(v_max > 0.0) || density_.size() < 9 || density_.size() % 2 == 0)
        throw std::invalid_argument("DensityTable: need v_max > 0 and an odd grid of >= 9 points");
    step_ = 2.0 * v_max_ / (density_.size() - 1);
    for (double& d : density_)
        if (d < 0.0) throw std::invalid_argument("DensityTable: negative density");

    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < density_.size(); ++i)
        mass += 0.5 * (density_[i] + density_[i + 1]) * step_;
    if (mass > 1.0) {
        // ringing inflated the grid mass; renormalize and carry no tail
        for (double& d : density_) d /= mass;
        mass = 1.0;
    }
    truncated_mass_ = 1.0 - mass;

    cdf_.resize(density_.size());
    cdf_[0] = 0.5 * truncated_mass_;
    for (std::size_t i = 1; i < density_.size(); ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * (density_[i - 1] + density_[i]) * step_;
}

double DensityTable::density_at(double v) const {
    if (std::abs(v) >= v_max_) return 0.0;
    const double pos = (v + v_max_) / step_;
    const int k = std::min(static_cast<int>(pos), size() - 2);
    const double t = pos - k;
    return (1.0 - t) * density_[k] + t * density_[k + 1];
}

double DensityTable::quantile(double u) const {
    const double lo = 0.5 * truncated_mass_;
    const double hi = 1.0 - 0.5 * truncated_mass_;
    if (!(u > lo && u < hi))
        throw std::domain_error("DensityTable::quantile: u outside grid support");
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    int k = static_cast<int>(it - cdf_.begin());
    if (k == 0) return v(0);
    --k;
    const double span = cdf_[k + 1] - cdf_[k];
    if (span <= 0.0) return v(k); // flat stretch of the CDF
    const double t = (u - cdf_[k]) / span;
    return v(k) + t * step_;
}

double DensityTable::mean() const {
    double acc = 0.0;
    for (int i = 0; i + 1 < size(); ++i) {
        const double vm = v(i) + 0.5 * step_;
        acc += vm * 0.5 * (density_[i] + density_[i + 1]) * step_;
    }
    return acc;
}

double DensityTable::second_moment() const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) {
        const double wgt = (i == 0 || i == size() - 1) ? 0.5 : 1.0;
        acc += wgt * v(i) * v(i) * density_[i] * step_;
    }
    return acc;
}

DensityTable invert_to_density(const SpectralField& field, const VGrid& grid, bool fejer) {
    if (field.gauge_time != 0.0)
        throw std::invalid_argument("invert_to_density: field must be physical (gauge_time 0)");
    if (!field.real_even(1e-7))
        throw std::invalid_argument("invert_to_density: field must be real and even");

    const int n_xi = field.size();
    const int c = field.center();
    const double h = field.step();
    const double xi_max = field.xi_max();

    std::vector<double> density(grid.n_v);
    double clipped = 0.0;
    const double dv = 2.0 * grid.v_max / (grid.n_v - 1);
    // f(v) = 2 ∫₀^Ξ (fejér) y(ξ) cos(2πvξ) dξ, trapezoid on the half grid
    for (int j = 0; j < grid.n_v; ++j) {
        const double v = -grid.v_max + dv * j;
        double acc = 0.0;
        for (int i = c; i < n_xi; ++i) {
            const double xi = field.xi(i);
            double y = field.real_at(i);
            if (fejer) y *= 1.0 - std::abs(xi) / xi_max;
            const double wgt = (i == c || i == n_xi - 1) ? 0.5 : 1.0;
            acc += wgt * y * std::cos(2.0 * std::numbers::pi * v * xi);
        }
        density[j] = 2.0 * acc * h;
    }
    for (int j = 0; j < grid.n_v; ++j) {
        if (density[j] < 0.0) {
            clipped += -density[j] * dv;
            density[j] = 0.0;
        }
    }
    return DensityTable(grid.v_max, std::move(density), clipped);
}

namespace {

void write_sidecar(const std::string& path, nlohmann::json meta) {
    meta["convention"] = "e^{-2 pi i v xi}";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << meta.dump(2) << "\n";
}

} // namespace

void write_density_csv(const DensityTable& table, const std::string& path,
                       const std::string& params_json) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "v,density,cdf\n";
    out.precision(17);
    for (int i = 0; i < table.size(); ++i)
        out << table.v(i) << "," << table.density()[i] << "," << table.cdf()[i] << "\n";

    nlohmann::json meta;
    meta["params"] = nlohmann::json::parse(params_json);
    meta["grid"] = {{"v_max", table.v_max()}, {"n_v", table.size()}};
    meta["truncated_mass"] = table.truncated_mass();
    meta["clipped_mass"] = table.clipped_mass();
    write_sidecar(path + ".meta.json", std::move(meta));
}

void write_field_csv(const SpectralField& field, const std::string& path,
                     const std::string& params_json) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "xi,re,im\n";
    out.precision(17);
    for (int i = 0; i < field.size(); ++i)
        out << field.xi(i) << "," << field[i].real() << "," << field[i].imag() << "\n";

    nlohmann::json meta;
    meta["params"] = nlohmann::json::parse(params_json);
    meta["grid"] = {{"xi_max", field.xi_max()}, {"n_xi", field.size()}};
    meta["gauge_time"] = field.gauge_time;
    write_sidecar(path + ".meta.json", std::move(meta));
}

} // namespace kac
