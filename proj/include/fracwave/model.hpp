#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace fracwave {

/// One half-space: density and compressional wave speed.
struct MaterialParams {
    double rho; // kg/m^3
    double c;   // m/s

    double impedance() const { return rho * c; } // Z = rho*c
    void validate() const;
};

/// Fracture at x = alpha with hyperbolic stress-closure law of stiffness K
/// and maximum allowable closure d. sigma_bar / h_bar are optional static
/// metadata; they never enter the dynamics.
struct FractureParams {
    double alpha;            // m
    double K;                // Pa/m
    double d;                // m
    double sigma_bar = -1.0; // Pa, < 0 means unset
    double h_bar = -1.0;     // m,  < 0 means unset

    bool has_sigma_bar() const { return sigma_bar >= 0.0; }
    bool has_h_bar() const { return h_bar >= 0.0; }
    void validate() const;
};

/// Uniform node-centered grid: x_i = x_min + i*dx, i = 0..n-1,
/// dx = (x_max - x_min)/(n - 1), dt = cfl*dx/max(c0, c1).
struct Grid {
    double x_min;
    double x_max;
    std::size_t n;
    double dx;
    double cfl;
    double dt;

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
};

Grid make_grid(double x_min, double x_max, std::size_t n, double cfl, double c_max);

/// Velocity-stress field at one time level.
struct FieldState {
    double t = 0.0;
    std::vector<double> v;     // m/s
    std::vector<double> sigma; // Pa

    std::size_t size() const { return v.size(); }
    static FieldState zeros(std::size_t n, double t = 0.0);
    /// Index of the first non-finite entry, or npos if all are finite.
    std::size_t first_non_finite() const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// C^6 compactly supported combination of sinusoids, support (0, 1/f_c).
struct WaveletSpec {
    double epsilon; // amplitude scale
    double f_c;     // Hz
    double t0;      // s

    static constexpr std::array<double, 4> a{1.0, -21.0 / 32.0, 63.0 / 768.0, -1.0 / 512.0};
    static constexpr std::array<double, 4> beta{1.0, 2.0, 4.0, 8.0};

    double omega_c() const;
    void validate() const;
};

/// Time-harmonic mass source at x_s, S(t) = (0, epsilon*sin(omega_c*t)).
struct SourceSpec {
    double x_s;     // m
    double epsilon; // Pa*m/s
    double omega_c; // rad/s

    void validate() const;
};

///// h(xi): epsilon * sum a_m sin(beta_m * omega_c * xi) on (0, 1/f_c), else 0.
double wavelet_eval(const WaveletSpec& spec, double xi);

/// max over xi of |sum a_m sin(beta_m * omega_c * xi)| / epsilon; a pure number,
/// independent of f_c. Found numerically to 1e-10.
double wavelet_peak_factor();

/// epsilon such that the initial velocity peak equals v0 (v = -h/c0).
double calibrate_epsilon(double v0, double c0);

/// Purely right-going initial pulse U0 = (-1/c0, rho0)^T h(t0 - x/c0).
/// Rejects configurations whose support touches the fracture or leaves the domain.
FieldState initial_condition(const Grid& grid, const WaveletSpec& spec,
                             const MaterialParams& medium, double alpha);

double peak_velocity(const FieldState& state);

} // namespace fracwave
