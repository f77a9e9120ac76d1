#include "fracwave/analytic.hpp"

#include "fracwave/errors.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>

namespace fracwave {

RiemannPair riemann_decompose(const MaterialParams& medium, double v, double sigma) {
    const double z = medium.impedance();
    return {0.5 * (v - sigma / z), 0.5 * (v + sigma / z)};
}

Vec2 riemann_recompose(const MaterialParams& medium, const RiemannPair& pair) {
    const double z = medium.impedance();
    return {pair.jr + pair.jl, z * (pair.jl - pair.jr)};
}

double forcing_g(const WaveletSpec& spec, const MaterialParams& left, double alpha, double t) {
    // Initial data U0 = (-1/c0, rho0) h(t0 - x/c0) gives J0^R(x, t0) = -h(t0 - x/c0)/c0.
    const double foot = alpha - left.c * (t - spec.t0);
    return -2.0 * wavelet_eval(spec, spec.t0 - foot / left.c) / left.c;
}

double ode_rhs(const FractureParams& params, const MaterialParams& left,
               const MaterialParams& right, double g_value, double y) {
    const double z0 = left.impedance();
    const double z1 = right.impedance();
    const double kd = params.K * params.d;
    const double u = 1.0 + z1 * y / kd; // equals 1 - sigma^-/(K d)
    if (!(u > kAdmissibilityMargin))
        throw AdmissibilityError(
            fmt::format("interface ODE reached the inadmissible branch (y = {})", y));
    return params.K / z1 * u * u * (g_value - (1.0 + z1 / z0) * y);
}

OdeSolution::OdeSolution(double t0, double dt, std::vector<double> y, std::vector<double> slope)
    : t0_(t0), dt_(dt), y_(std::move(y)), slope_(std::move(slope)) {}

double OdeSolution::eval(double t) const {
    if (t <= t0_) return y_.front();
    const double s = (t - t0_) / dt_;
    auto i = static_cast<std::size_t>(s);
    if (i >= y_.size() - 1) return y_.back();
    const double u = s - static_cast<double>(i);
    // Cubic Hermite with the stored RK slopes.
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return h00 * y_[i] + h10 * dt_ * slope_[i] + h01 * y_[i + 1] + h11 * dt_ * slope_[i + 1];
}

OdeSolution integrate_interface_ode(const FractureParams& params, const MaterialParams& left,
                                    const MaterialParams& right, const WaveletSpec& spec,
                                    double t_end, double dt_ode) {
    if (!(dt_ode > 0.0)) throw ConfigError("ODE step must be positive");
    if (!(t_end > spec.t0)) throw ConfigError("ODE end time must exceed t0");
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - spec.t0) / dt_ode));
    const double dt = (t_end - spec.t0) / static_cast<double>(steps);

    const auto rhs = [&](double t, double y) {
        return ode_rhs(params, left, right, forcing_g(spec, left, params.alpha, t), y);
    };

    std::vector<double> y(steps + 1), slope(steps + 1);
    y[0] = 0.0;
    slope[0] = rhs(spec.t0, 0.0);
    double yn = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = spec.t0 + dt * static_cast<double>(n);
        try {
            const double k1 = rhs(t, yn);
            const double k2 = rhs(t + 0.5 * dt, yn + 0.5 * dt * k1);
            const double k3 = rhs(t + 0.5 * dt, yn + 0.5 * dt * k2);
            const double k4 = rhs(t + dt, yn + dt * k3);
            yn += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const AdmissibilityError& e) {
            throw AdmissibilityError(
                fmt::format("{} while integrating near t = {:.6g}", e.what(), t));
        }
        y[n + 1] = yn;
        slope[n + 1] = rhs(t + dt, yn);
    }
    return OdeSolution(spec.t0, dt, std::move(y), std::move(slope));
}

ReferenceSolution::ReferenceSolution(MaterialParams left, MaterialParams right,
                                     FractureParams frac, WaveletSpec spec, double t_end,
                                     double dt_ode)
    : left_(left),
      right_(right),
      frac_(frac),
      spec_(spec),
      ode_(integrate_interface_ode(frac, left, right, spec, t_end, dt_ode)) {}

double ReferenceSolution::g(double t) const {
    return forcing_g(spec_, left_, frac_.alpha, t);
}

InterfaceTraces ReferenceSolution::traces(double t) const {
    const double yv = y(t);
    const double z0 = left_.impedance();
    const double z1 = right_.impedance();
    return {-z1 / z0 * yv + g(t), yv, -z1 * yv};
}

Vec2 ReferenceSolution::at(double x, double t) const {
    const double alpha = frac_.alpha;
    if (x < alpha) {
        const double z0 = left_.impedance();
        const double t_a = t - (alpha - x) / left_.c;
        const double jr = -wavelet_eval(spec_, spec_.t0 - (x - left_.c * (t - spec_.t0)) / left_.c) /
                          left_.c;
        double delta_a = 0.0;
        if (t_a >= spec_.t0) {
            delta_a = -right_.impedance() / z0 * y(t_a) +
                      -wavelet_eval(spec_, spec_.t0 - (alpha - left_.c * (t_a - spec_.t0)) / left_.c) /
                          left_.c;
        }
        // J0^L of the right-going initial data vanishes, so the t_A < t0 branch is zero.
        return {jr + delta_a, z0 * (delta_a - jr)};
    }
    const double t_b = t - (x - alpha) / right_.c;
    const double delta_b = t_b >= spec_.t0 ? y(t_b) : 0.0;
    return {delta_b, -right_.impedance() * delta_b};
}

double ReferenceSolution::energy(double t, double x_lo, double x_hi, std::size_t cells,
                                 std::size_t refine) const {
    // 5-point Gauss-Legendre nodes on (-1, 1).
    static constexpr std::array<double, 5> gx{-0.906179845938663993, -0.538469310105683091, 0.0,
                                              0.538469310105683091, 0.906179845938663993};
    static constexpr std::array<double, 5> gw{0.236926885056189088, 0.478628670499366468,
                                              0.568888888888888889, 0.478628670499366468,
                                              0.236926885056189088};

    const auto density = [&](double x) {
        const MaterialParams& medium = x < frac_.alpha ? left_ : right_;
        const Vec2 u = at(x, t);
        return 0.5 * (medium.rho * u.v * u.v +
                      u.sigma * u.sigma / (medium.rho * medium.c * medium.c));
    };
    const auto integrate = [&](double a, double b) {
        const auto n = static_cast<std::size_t>(
            std::ceil((b - a) / (x_hi - x_lo) * static_cast<double>(cells * refine)));
        const double h = (b - a) / static_cast<double>(std::max<std::size_t>(n, 1));
        double acc = 0.0;
        for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
            const double mid = a + (static_cast<double>(i) + 0.5) * h;
            for (std::size_t q = 0; q < 5; ++q) acc += gw[q] * density(mid + 0.5 * h * gx[q]);
        }
        return 0.5 * h * acc;
    };

    double e = integrate(x_lo, frac_.alpha) + integrate(frac_.alpha, x_hi);
    e += fracture_potential_energy(frac_, traces(t).sigma);
    return e;
}

} // namespace fracwave
