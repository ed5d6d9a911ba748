#pragma once

#include "kac/params.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace kac {

// Characteristic-function values on a uniform symmetric grid [-xi_max, xi_max].
// Convention throughout: f̂(ξ) = ∫ e^{-2πivξ} f(dv), so the Gaussian of
// variance T transforms to exp(-2π²Tξ²).
class SpectralField {
public:
    SpectralField(double xi_max, int n_xi);

    int size() const { return static_cast<int>(values_.size()); }
    double xi_max() const { return xi_max_; }
    double step() const { return step_; }
    double xi(int i) const { return -xi_max_ + step_ * i; }
    int center() const { return (size() - 1) / 2; }

    std::complex<double>& operator[](int i) { return values_[i]; }
    const std::complex<double>& operator[](int i) const { return values_[i]; }
    double real_at(int i) const { return values_[i].real(); }

    double gauge_time = 0.0; // 0 means a physical characteristic function

    // Lagrange interpolation of the real part at an off-grid argument;
    // |x| must not exceed xi_max.
    double interp(double x) const;
    std::complex<double> interp_complex(double x) const;

    bool real_even(double tol = 1e-9) const;

private:
    double xi_max_;
    double step_;
    std::vector<std::complex<double>> values_;
};

// Grid parameters for the solvers.
struct GridSpec {
    double xi_max;
    int n_xi = 4097;
    int n_theta = 128; // Gauss-Legendre nodes over [0,2π); even fields fold to a quarter
};

// Default grid: xi_max = 1.5/sqrt(scale) places the Gaussian factor below
// 1e-12 at the boundary; `scale` should be the smallest variance in play.
GridSpec default_grid(double scale);

double gamma_hat(double xi, double T);

SpectralField gamma_hat_field(const GridSpec& grid, double T);

// Fill a field from an arbitrary characteristic function.
SpectralField field_from(const GridSpec& grid, const std::function<double(double)>& chf);

// Wild collision kernel in Fourier variables:
// B̂₂[z,w](ξ) = ∫₀^{2π} z(ξcosθ) w(ξsinθ) dθ/(2π).
SpectralField b2_hat(const SpectralField& z, const SpectralField& w, int n_theta = 128);

struct EvolveOptions {
    int n_steps = 4000;
    // When > 0, re-run with doubled steps and require sup-norm agreement.
    double step_doubling_tol = 0.0;
    int n_theta = 128;
};

// Integrate the drift-stripped (gauge) mild form of the kinetic equation up
// to t_end and return the physical characteristic function f̂_{t_end}.
SpectralField evolve_gauge(const SpectralField& f0_hat, const ModelParams& p,
                           double t_end, const EvolveOptions& opts = {});

// One integration pass with the physical field captured at each requested
// time (times non-decreasing; opts.n_steps covers the whole span).
std::vector<SpectralField> evolve_gauge_path(const SpectralField& f0_hat,
                                             const ModelParams& p,
                                             const std::vector<double>& times,
                                             const EvolveOptions& opts = {});

struct StationaryOptions {
    double tol = 1e-10;
    int max_iter = 500;
    int n_theta = 128;
    int n_laguerre = 96;
};

// Equilibrium characteristic function y = f̂_∞, by fixed-point iteration on
// q = 2λ B̂₂[y,y] + μ γ̂ with the linear part −Aξy' + Dy = q solved exactly.
SpectralField stationary_fourier(const ModelParams& p, const GridSpec& grid,
                                 const StationaryOptions& opts = {});

struct FieldDiagnostics {
    double second_moment;    // −y''(0)/(4π²), fourth-order stencil
    bool property_p;         // values in [0,1], even, non-increasing on [0,Ξ]
    double ode_residual;     // sup-norm residual of the stationary ODE
    double mass_defect;      // |y(0) − 1|
};

FieldDiagnostics field_diagnostics(const SpectralField& y, const ModelParams& p,
                                   int n_theta = 128);

struct TailIntegral {
    double value;        // trapezoid of |ξ|^p y over the grid
    bool tail_divergent; // fitted algebraic tail decays too slowly for the integral to converge
};

TailIntegral tail_integral(const SpectralField& y, double p);

} // namespace kac
