#pragma once

#include "fracwave/fracture.hpp"
#include "fracwave/model.hpp"

#include <vector>

namespace fracwave {

struct RiemannPair {
    double jr; // right-going invariant (m/s)
    double jl; // left-going invariant (m/s)
};

/// J^R = (v - sigma/(rho c))/2, J^L = (v + sigma/(rho c))/2.
RiemannPair riemann_decompose(const MaterialParams& medium, double v, double sigma);
Vec2 riemann_recompose(const MaterialParams& medium, const RiemannPair& pair);

/// g(t) = 2 J0^R(alpha - c0 (t - t0), t0) for the right-going wavelet data.
double forcing_g(const WaveletSpec& spec, const MaterialParams& left, double alpha, double t);

/// Right side of the interface ODE for y = v(alpha^+, t):
///   f = (K/Z1) (1 + Z1 y/(K d))^2 (g - (1 + Z1/Z0) y).
double ode_rhs(const FractureParams& params, const MaterialParams& left,
               const MaterialParams& right, double g_value, double y);

/// RK4 samples of y(t) on a uniform grid with cubic-Hermite dense output.
class OdeSolution {
public:
    OdeSolution(double t0, double dt, std::vector<double> y, std::vector<double> slope);

    double t0() const { return t0_; }
    double t_end() const { return t0_ + dt_ * static_cast<double>(y_.size() - 1); }
    double dt() const { return dt_; }
    const std::vector<double>& samples() const { return y_; }

    double eval(double t) const;

private:
    double t0_;
    double dt_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

OdeSolution integrate_interface_ode(const FractureParams& params, const MaterialParams& left,
                                    const MaterialParams& right, const WaveletSpec& spec,
                                    double t_end, double dt_ode);

struct InterfaceTraces {
    double v_minus;
    double v_plus;
    double sigma; // sigma(alpha^-, t) = sigma(alpha^+, t)
};

/// Bundles the interface ODE solution with the characteristic reconstruction
/// of U(x, t) for the compactly supported initial-value problem.
class ReferenceSolution {
public:
    ReferenceSolution(MaterialParams left, MaterialParams right, FractureParams frac,
                      WaveletSpec spec, double t_end, double dt_ode);

    double y(double t) const { return ode_.eval(t); }
    double g(double t) const;
    InterfaceTraces traces(double t) const;
    Vec2 at(double x, double t) const;

    /// E(t): bulk integral by per-cell Gauss-Legendre quadrature on a grid
    /// `refine` times finer than `cells` over [x_lo, x_hi], split at alpha,
    /// plus the fracture potential energy.
    double energy(double t, double x_lo, double x_hi, std::size_t cells,
                  std::size_t refine = 8) const;

    const OdeSolution& ode() const { return ode_; }

private:
    MaterialParams left_;
    MaterialParams right_;
    FractureParams frac_;
    WaveletSpec spec_;
    OdeSolution ode_;
};

} // namespace fracwave
