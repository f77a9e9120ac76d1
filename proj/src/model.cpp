#include "fracwave/model.hpp"

#include "fracwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracwave {

void MaterialParams::validate() const {
    if (!(rho > 0.0)) throw ConfigError("material density must be positive");
    if (!(c > 0.0)) throw ConfigError("material wave speed must be positive");
}

void FractureParams::validate() const {
    if (!(K > 0.0)) throw ConfigError("fracture stiffness K must be positive");
    if (!(d > 0.0)) throw ConfigError("maximum allowable closure d must be positive");
    if (has_sigma_bar() && !(sigma_bar > 0.0 && sigma_bar < K * d))
        throw ConfigError("static prestress must satisfy 0 < sigma_bar < K*d");
    if (has_h_bar() && !(h_bar > d))
        throw ConfigError("rest thickness h_bar must exceed the maximum closure d");
}

Grid make_grid(double x_min, double x_max, std::size_t n, double cfl, double c_max) {
    if (!(x_max > x_min)) throw ConfigError("grid needs x_max > x_min");
    if (n < 8) throw ConfigError("grid needs at least 8 points");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL must lie in (0, 1]");
    if (!(c_max > 0.0)) throw ConfigError("wave speed must be positive");
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.dx = (x_max - x_min) / static_cast<double>(n - 1);
    g.cfl = cfl;
    g.dt = cfl * g.dx / c_max;
    return g;
}

FieldState FieldState::zeros(std::size_t n, double t) {
    FieldState s;
    s.t = t;
    s.v.assign(n, 0.0);
    s.sigma.assign(n, 0.0);
    return s;
}

std::size_t FieldState::first_non_finite() const {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]) || !std::isfinite(sigma[i])) return i;
    return npos;
}

double WaveletSpec::omega_c() const { return 2.0 * std::numbers::pi * f_c; }

void WaveletSpec::validate() const {
    if (!(f_c > 0.0)) throw ConfigError("wavelet central frequency must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("wavelet amplitude must be non-negative");
}

void SourceSpec::validate() const {
    if (!(epsilon >= 0.0)) throw ConfigError("source amplitude must be non-negative");
    if (!(omega_c > 0.0)) throw ConfigError("source frequency must be positive");
}

double wavelet_eval(const WaveletSpec& spec, double xi) {
    if (!(xi > 0.0) || !(xi < 1.0 / spec.f_c)) return 0.0;
    const double w = spec.omega_c();
    double acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        acc += WaveletSpec::a[m] * std::sin(WaveletSpec::beta[m] * w * xi);
    return spec.epsilon * acc;
}

namespace {

double sinusoid_sum(double phi) {
    double acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        acc += WaveletSpec::a[m] * std::sin(WaveletSpec::beta[m] * phi);
    return acc;
}

} // namespace

double wavelet_peak_factor() {
    // Coarse scan over one support period, then golden-section refinement.
    static const double peak = [] {
        const double two_pi = 2.0 * std::numbers::pi;
        const int samples = 1 << 14;
        double best = 0.0, best_phi = 0.0;
        for (int i = 1; i < samples; ++i) {
            const double phi = two_pi * i / samples;
            const double f = std::abs(sinusoid_sum(phi));
            if (f > best) {
                best = f;
                best_phi = phi;
            }
        }
        double a = best_phi - two_pi / samples;
        double b = best_phi + two_pi / samples;
        const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_golden * (b - a);
        double d = a + inv_golden * (b - a);
        double fc = std::abs(sinusoid_sum(c));
        double fd = std::abs(sinusoid_sum(d));
        while (b - a > 1e-10) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_golden * (b - a);
                fc = std::abs(sinusoid_sum(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_golden * (b - a);
                fd = std::abs(sinusoid_sum(d));
            }
        }
        return std::abs(sinusoid_sum(0.5 * (a + b)));
    }();
    return peak;
}

double calibrate_epsilon(double v0, double c0) {
    return v0 * c0 / wavelet_peak_factor();
}

FieldState initial_condition(const Grid& grid, const WaveletSpec& spec,
                             const MaterialParams& medium, double alpha) {
    spec.validate();
    medium.validate();
    if (spec.epsilon > 0.0) {
        // Support of h(t0 - x/c0) in x is (c0*(t0 - 1/f_c), c0*t0).
        const double lo = medium.c * (spec.t0 - 1.0 / spec.f_c);
        const double hi = medium.c * spec.t0;
        if (hi > alpha)
            throw ConfigError("initial pulse support overlaps the fracture");
        if (lo < grid.x_min || hi > grid.x_max)
            throw ConfigError("initial pulse support extends outside the domain");
    }
    FieldState s = FieldState::zeros(grid.n, spec.t0);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double h = wavelet_eval(spec, spec.t0 - grid.x(i) / medium.c);
        s.v[i] = -h / medium.c;
        s.sigma[i] = medium.rho * h;
    }
    return s;
}

double peak_velocity(const FieldState& state) {
    double peak = 0.0;
    for (double vi : state.v) peak = std::max(peak, std::abs(vi));
    return peak;
}

} // namespace fracwave
