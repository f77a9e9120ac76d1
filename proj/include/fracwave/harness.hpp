#pragma once

#include "fracwave/analytic.hpp"
#include "fracwave/esim.hpp"
#include "fracwave/model.hpp"
#include "fracwave/scheme.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace fracwave {

enum class ExperimentKind { Ivp, Convergence, Harmonic, Reference };

/// Full experiment description. Defaults reproduce the fractured-granite
/// setup the test battery is built around.
struct SimConfig {
    MaterialParams left{1200.0, 2800.0};
    MaterialParams right{1200.0, 2800.0};
    FractureParams frac{200.67, 1.3e9, 6.1e-4};

    double x_min = 0.0;
    double x_max = 400.0;
    std::size_t n = 400;
    double cfl = 0.9;

    int order = 4;          // scheme order r
    EsimConfig esim;        // k filled from select_k at run time
    int regularity_p = 6;   // smoothness of the initial data

    ExperimentKind kind = ExperimentKind::Ivp;

    // Wavelet experiments (ivp / convergence / reference).
    double f_c = 50.0;   // Hz
    double t0 = 0.052;   // s
    double v0 = 0.1;     // m/s, velocity amplitude; sets epsilon unless given
    double epsilon = -1.0; // < 0: calibrate from v0
    double t_end = 0.11629;

    // Source experiments (harmonic).
    double x_s = 40.0;
    double station = 220.0;
    int transient_periods = 15;
    int record_periods = 8;
    int n_harmonics = 8;

    std::vector<std::size_t> grids{200, 400, 800, 1600};

    std::string out_dir = ".";

    WaveletSpec wavelet() const;
    SourceSpec source() const;
    void validate() const;
};

SimConfig parse_config(const std::string& path);

struct InterfaceSample {
    double t;
    double sigma_minus;
    double v_minus;
    double v_plus;
    double jump_u;
    int newton_iters;
    double residual;
};

struct IvpResult {
    Grid grid;
    std::size_t J = 0;
    FieldState state; // at t_end
    std::vector<InterfaceSample> series;
    std::vector<double> energy_t;
    std::vector<double> energy;
};

/// Time-march the initial-value problem with scheme + esim. When a reference
/// is supplied, the converged v^- trace is cross-checked against it and a
/// wrong-root warning goes to stderr.
IvpResult run_ivp(const SimConfig& config, const ReferenceSolution* reference = nullptr);

struct ErrorRow {
    std::size_t n;
    double dx;
    double l1_error;
    double observed_order; // NaN on the first row
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
    double least_squares_order() const;
};

ErrorTable run_convergence(const SimConfig& config);

struct HarmonicSpectrum {
    double fundamental_hz = 0.0;
    std::vector<double> normalized; // amplitudes of harmonics 1..H, first = 1
};

struct HarmonicResult {
    HarmonicSpectrum spectrum;      // empty normalized => zero signal
    std::vector<double> waveform;   // sigma at the station over the last period
    double periodicity_error = 0.0; // L-inf mismatch between successive periods
};

HarmonicResult run_harmonic(const SimConfig& config);

/// E = split trapezoid quadrature of (rho v^2 + sigma^2/(rho c^2))/2 over the
/// grid, with the partial cells [x_J, alpha] and [alpha, x_{J+1}] closed by
/// the interface traces, plus the fracture potential energy.
double total_energy(const FieldState& state, const Grid& grid, std::size_t J,
                    const MaterialParams& medium0, const MaterialParams& medium1,
                    const FractureParams& frac, const InterfaceTraces& at_alpha);

/// sum_i |sigma_i - sigma_ref_i| * dx over all nodes.
double l1_error(const FieldState& numeric, const std::vector<double>& sigma_ref, double dx);

/// Discrete-delta mass source: adds dt * epsilon * sin(omega_c * t) * w_i / dx
/// to sigma near x_s, with w the 4-point cubic Lagrange kernel.
void inject_source(FieldState& state, const SourceSpec& source, const Grid& grid, double dt,
                   double t);

/// Kernel weights and first node index for x_s; sum of weights is exactly 1.
std::pair<std::size_t, std::array<double, 4>> delta_weights(const Grid& grid, double x_s);

/// DFT amplitudes at multiples of the fundamental; `samples` must hold an
/// integer number of periods of `spp` samples each. Normalized by harmonic 1.
HarmonicSpectrum fourier_harmonics(const std::vector<double>& samples, std::size_t spp,
                                   int n_harmonics, double fundamental_hz);

// CSV emission (17 significant digits; written atomically via a temp file).
void write_snapshot_csv(const std::string& path, const Grid& grid, const FieldState& state);
void write_reference_snapshot_csv(const std::string& path, const Grid& grid,
                                  const ReferenceSolution& ref, double t);
void write_series_csv(const std::string& path, const std::vector<InterfaceSample>& series);

} // namespace fracwave
