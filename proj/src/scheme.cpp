#include "fracwave/scheme.hpp"

#include "fracwave/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace fracwave {

SchemeSpec SchemeSpec::ader(int order) {
    SchemeSpec spec;
    spec.r_ = order;
    spec.s_ = order / 2;
    if (order == 2) {
        spec.dcoef_[0] = {-0.5, 0.0, 0.5};
        spec.dcoef_[1] = {1.0, -2.0, 1.0};
    } else if (order == 4) {
        spec.dcoef_[0] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
        spec.dcoef_[1] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
        spec.dcoef_[2] = {-0.5, 1.0, 0.0, -1.0, 0.5};
        spec.dcoef_[3] = {1.0, -4.0, 6.0, -4.0, 1.0};
    } else {
        throw ConfigError(fmt::format("unsupported scheme order {} (use 2 or 4)", order));
    }
    return spec;
}

double SchemeSpec::apply_stencil(int m, const double* center) const {
    const auto& c = dcoef_[m - 1];
    double acc = 0.0;
    for (int j = 0; j < 2 * s_ + 1; ++j) acc += c[j] * center[j - s_];
    return acc;
}

Vec2 regular_step(const SchemeSpec& spec, const MaterialParams& medium, double dx, double dt,
                  const double* v_center, const double* sigma_center) {
    // (-A) = [[0, 1/rho], [rho c^2, 0]]; powers alternate between c^m I (even)
    // and c^(m-1) (-A) (odd).
    const double inv_rho = 1.0 / medium.rho;
    const double rho_c2 = medium.rho * medium.c * medium.c;

    double acc_v = 0.0, acc_s = 0.0;
    double dt_pow = 1.0, fact = 1.0, inv_dx_pow = 1.0;
    for (int m = 1; m <= spec.r(); ++m) {
        dt_pow *= dt;
        fact *= m;
        inv_dx_pow /= dx;
        const double dv = spec.apply_stencil(m, v_center) * inv_dx_pow;
        const double ds = spec.apply_stencil(m, sigma_center) * inv_dx_pow;
        const double c_even = std::pow(medium.c, m % 2 == 0 ? m : m - 1);
        const double w = dt_pow / fact * c_even;
        if (m % 2 == 0) {
            acc_v += w * dv;
            acc_s += w * ds;
        } else {
            acc_v += w * inv_rho * ds;
            acc_s += w * rho_c2 * dv;
        }
    }
    // U^{n+1} = U^n - sum dt^m/m! A^m Dx^m U = U^n + sum dt^m/m! (-A)^m Dx^m U
    return {acc_v, acc_s};
}

FieldState full_sweep(const SchemeSpec& spec, const MaterialParams& medium0,
                      const MaterialParams& medium1, const Grid& grid,
                      std::optional<std::size_t> J, const FieldState& state) {
    if (const auto bad = state.first_non_finite(); bad != FieldState::npos)
        throw NumericError(fmt::format("non-finite field value at index {} (t = {})", bad, state.t));

    const std::size_t s = static_cast<std::size_t>(spec.s());
    FieldState next = state;
    next.t = state.t + grid.dt;
    for (std::size_t i = s; i + s < grid.n; ++i) {
        if (J && i + s > *J && i <= *J + s) continue; // irregular: J-s+1..J+s
        const MaterialParams& medium = (!J || i <= *J) ? medium0 : medium1;
        const Vec2 inc =
            regular_step(spec, medium, grid.dx, grid.dt, state.v.data() + i, state.sigma.data() + i);
        next.v[i] = state.v[i] + inc.v;
        next.sigma[i] = state.sigma[i] + inc.sigma;
    }
    return next;
}

} // namespace fracwave
