#include "fracwave/harness.hpp"

#include "fracwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace fracwave {

WaveletSpec SimConfig::wavelet() const {
    WaveletSpec w;
    w.f_c = f_c;
    w.t0 = t0;
    w.epsilon = epsilon >= 0.0 ? epsilon : calibrate_epsilon(v0, left.c);
    return w;
}

SourceSpec SimConfig::source() const {
    SourceSpec s;
    s.x_s = x_s;
    s.omega_c = 2.0 * std::numbers::pi * f_c;
    // A sigma-rate point source radiates a right-going wave of velocity
    // amplitude epsilon / (2 rho0 c0^2).
    s.epsilon = epsilon >= 0.0 ? epsilon : 2.0 * left.rho * left.c * left.c * v0;
    return s;
}

void SimConfig::validate() const {
    left.validate();
    right.validate();
    frac.validate();
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL must lie in (0, 1]");
    if (order != 2 && order != 4) throw ConfigError("scheme order must be 2 or 4");
    if (!(frac.alpha > x_min && frac.alpha < x_max))
        throw ConfigError("fracture must lie strictly inside the domain");
    if (kind == ExperimentKind::Harmonic) {
        if (!(x_s < frac.alpha)) throw ConfigError("source must lie left of the fracture");
        if (!(x_s > x_min && x_s < x_max)) throw ConfigError("source outside the domain");
        if (!(station > x_min && station < x_max)) throw ConfigError("station outside the domain");
    } else {
        if (!(t_end > t0)) throw ConfigError("final time must exceed t0");
    }
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("bad numeric value '{}' for key '{}'", value, key));
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

} // namespace

SimConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", path, lineno));
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    SimConfig cfg;
    bool wavelet_amp = false, source_amp = false;
    for (const auto& [key, value] : kv) {
        if (key == "medium.left.rho") cfg.left.rho = to_double(key, value);
        else if (key == "medium.left.c") cfg.left.c = to_double(key, value);
        else if (key == "medium.right.rho") cfg.right.rho = to_double(key, value);
        else if (key == "medium.right.c") cfg.right.c = to_double(key, value);
        else if (key == "fracture.alpha") cfg.frac.alpha = to_double(key, value);
        else if (key == "fracture.K") cfg.frac.K = to_double(key, value);
        else if (key == "fracture.d") cfg.frac.d = to_double(key, value);
        else if (key == "fracture.sigma_bar") cfg.frac.sigma_bar = to_double(key, value);
        else if (key == "fracture.h_bar") cfg.frac.h_bar = to_double(key, value);
        else if (key == "grid.x_min") cfg.x_min = to_double(key, value);
        else if (key == "grid.x_max") cfg.x_max = to_double(key, value);
        else if (key == "grid.n") cfg.n = static_cast<std::size_t>(to_double(key, value));
        else if (key == "grid.cfl") cfg.cfl = to_double(key, value);
        else if (key == "scheme.order") cfg.order = static_cast<int>(to_double(key, value));
        else if (key == "esim.newton_tol") cfg.esim.newton_tol = to_double(key, value);
        else if (key == "esim.newton_max_iter")
            cfg.esim.newton_max_iter = static_cast<int>(to_double(key, value));
        else if (key == "wavelet.f_c" || key == "source.f_c") cfg.f_c = to_double(key, value);
        else if (key == "wavelet.t0") cfg.t0 = to_double(key, value);
        else if (key == "wavelet.v0" || key == "source.v0") {
            cfg.v0 = to_double(key, value);
            (key[0] == 'w' ? wavelet_amp : source_amp) = true;
        } else if (key == "wavelet.epsilon" || key == "source.epsilon") {
            cfg.epsilon = to_double(key, value);
            (key[0] == 'w' ? wavelet_amp : source_amp) = true;
        } else if (key == "wavelet.p") cfg.regularity_p = static_cast<int>(to_double(key, value));
        else if (key == "source.x_s") cfg.x_s = to_double(key, value);
        else if (key == "run.kind") {
            if (value == "ivp") cfg.kind = ExperimentKind::Ivp;
            else if (value == "convergence") cfg.kind = ExperimentKind::Convergence;
            else if (value == "harmonic") cfg.kind = ExperimentKind::Harmonic;
            else if (value == "reference") cfg.kind = ExperimentKind::Reference;
            else throw ConfigError(fmt::format("unknown run.kind '{}'", value));
        } else if (key == "run.t_end") cfg.t_end = to_double(key, value);
        else if (key == "run.out_dir") cfg.out_dir = value;
        else if (key == "convergence.grids") {
            cfg.grids.clear();
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ','))
                cfg.grids.push_back(static_cast<std::size_t>(to_double(key, trim(tok))));
            if (cfg.grids.empty()) throw ConfigError("convergence.grids is empty");
        } else if (key == "harmonic.station") cfg.station = to_double(key, value);
        else if (key == "harmonic.transient_periods")
            cfg.transient_periods = static_cast<int>(to_double(key, value));
        else if (key == "harmonic.record_periods")
            cfg.record_periods = static_cast<int>(to_double(key, value));
        else if (key == "harmonic.n_harmonics")
            cfg.n_harmonics = static_cast<int>(to_double(key, value));
        else throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
    if (cfg.kind == ExperimentKind::Harmonic && wavelet_amp && !source_amp)
        throw ConfigError("harmonic runs take source.* amplitude keys, not wavelet.*");
    cfg.validate();
    return cfg;
}

double total_energy(const FieldState& state, const Grid& grid, std::size_t J,
                    const MaterialParams& medium0, const MaterialParams& medium1,
                    const FractureParams& frac, const InterfaceTraces& at_alpha) {
    const auto density = [](const MaterialParams& medium, double v, double sigma) {
        return 0.5 * (medium.rho * v * v + sigma * sigma / (medium.rho * medium.c * medium.c));
    };

    double e = 0.0;
    for (std::size_t i = 0; i + 1 < grid.n; ++i) {
        if (i == J) continue; // the fractured cell is split below
        const MaterialParams& medium = i <= J ? medium0 : medium1;
        e += 0.5 * grid.dx *
             (density(medium, state.v[i], state.sigma[i]) +
              density(medium, state.v[i + 1], state.sigma[i + 1]));
    }
    e += 0.5 * (frac.alpha - grid.x(J)) *
         (density(medium0, state.v[J], state.sigma[J]) +
          density(medium0, at_alpha.v_minus, at_alpha.sigma));
    e += 0.5 * (grid.x(J + 1) - frac.alpha) *
         (density(medium1, at_alpha.v_plus, at_alpha.sigma) +
          density(medium1, state.v[J + 1], state.sigma[J + 1]));
    e += fracture_potential_energy(frac, at_alpha.sigma);
    return e;
}

double l1_error(const FieldState& numeric, const std::vector<double>& sigma_ref, double dx) {
    if (numeric.sigma.size() != sigma_ref.size())
        throw ConfigError("l1_error: grid size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < sigma_ref.size(); ++i)
        acc += std::abs(numeric.sigma[i] - sigma_ref[i]);
    return acc * dx;
}

std::pair<std::size_t, std::array<double, 4>> delta_weights(const Grid& grid, double x_s) {
    const double s = (x_s - grid.x_min) / grid.dx;
    auto j0 = static_cast<std::ptrdiff_t>(std::floor(s));
    if (j0 < 1 || j0 + 2 >= static_cast<std::ptrdiff_t>(grid.n))
        throw ConfigError("source too close to a domain boundary for the delta kernel");
    const double u = s - static_cast<double>(j0); // in [0, 1) between j0 and j0+1
    // Cubic Lagrange basis on nodes {-1, 0, 1, 2}: partition of unity,
    // reproduces moments up to order 3.
    std::array<double, 4> w{-u * (u - 1.0) * (u - 2.0) / 6.0,
                            (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
                            -(u + 1.0) * u * (u - 2.0) / 2.0,
                            (u + 1.0) * u * (u - 1.0) / 6.0};
    return {static_cast<std::size_t>(j0 - 1), w};
}

void inject_source(FieldState& state, const SourceSpec& source, const Grid& grid, double dt,
                   double t) {
    const auto [first, w] = delta_weights(grid, source.x_s);
    const double amp = dt * source.epsilon * std::sin(source.omega_c * t) / grid.dx;
    for (std::size_t j = 0; j < 4; ++j) state.sigma[first + j] += amp * w[j];
}

namespace {

struct Engine {
    SimConfig cfg;
    SchemeSpec scheme;
    int k;
    Grid grid;
    std::size_t J;
    JumpOperatorSet ops;
    EsimConfig esim;

    explicit Engine(const SimConfig& config)
        : cfg(config),
          scheme(SchemeSpec::ader(config.order)),
          k(select_k(config.order, config.order / 2, config.regularity_p)),
          grid(make_grid(config.x_min, config.x_max, config.n, config.cfl,
                         std::max(config.left.c, config.right.c))),
          J(locate_interface(grid, config.frac.alpha, config.order / 2)),
          ops(config.frac, config.left, config.right, 2 * k - 1),
          esim(config.esim) {
        esim.k = k;
    }

    InterfaceSample sample(const InterfaceSolution& sol, double t) const {
        const double s_minus = sol.traces.dsigma[0];
        const Vec2 d0 = ops.apply(0, sol.traces);
        return {t,
                s_minus,
                sol.traces.dv[0],
                d0.v,
                displacement_jump(cfg.frac, s_minus),
                sol.iterations,
                sol.residual};
    }

    InterfaceSolution solve(const FieldState& state, const LeftTraces& guess) const {
        return solve_interface_system(ops, grid, J, k, state, guess, esim);
    }

    /// One esim-coupled step from an already converged interface solution:
    /// regular sweep plus irregular update with the modified values.
    void advance(FieldState& state, const InterfaceSolution& sol) const {
        const ModifiedValues mv = modified_values(ops, grid, J, k, scheme.s(), sol);
        FieldState next = full_sweep(scheme, cfg.left, cfg.right, grid, J, state);
        step_irregular(scheme, cfg.left, cfg.right, grid, J, state, mv, next);
        state = std::move(next);
    }
};

} // namespace

IvpResult run_ivp(const SimConfig& config, const ReferenceSolution* reference) {
    config.validate();
    Engine eng(config);
    // Land exactly on t_end with a uniform, slightly reduced step.
    const auto steps =
        static_cast<std::size_t>(std::ceil((config.t_end - config.t0) / eng.grid.dt));
    eng.grid.dt = (config.t_end - config.t0) / static_cast<double>(steps);

    const WaveletSpec wavelet = config.wavelet();
    IvpResult out;
    out.state = initial_condition(eng.grid, wavelet, config.left, config.frac.alpha);
    out.grid = eng.grid;
    out.J = eng.J;

    LeftTraces guess = LeftTraces::zeros(2 * eng.k - 1);
    const auto record = [&](const InterfaceSolution& sol, double t) {
        const InterfaceSample s = eng.sample(sol, t);
        out.series.push_back(s);
        out.energy_t.push_back(t);
        out.energy.push_back(total_energy(out.state, eng.grid, eng.J, config.left, config.right,
                                          config.frac, {s.v_minus, s.v_plus, s.sigma_minus}));
    };

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = config.t0 + eng.grid.dt * static_cast<double>(n);
        // Solve, record, then step: the sample and the energy quadrature both
        // pair the grid state with the traces of the same time level.
        const InterfaceSolution sol = eng.solve(out.state, guess);
        record(sol, t);
        eng.advance(out.state, sol);
        guess = sol.traces;
    }
    const InterfaceSolution final_sol = eng.solve(out.state, guess);
    record(final_sol, config.t_end);

    if (reference) {
        double dev = 0.0, peak = 0.0;
        for (const InterfaceSample& s : out.series) {
            dev = std::max(dev, std::abs(s.v_minus - reference->traces(s.t).v_minus));
            peak = std::max(peak, std::abs(reference->traces(s.t).v_minus));
        }
        if (peak > 0.0 && dev > 0.5 * peak)
            std::cerr << fmt::format(
                "warning: interface trace deviates from the semi-analytical reference "
                "({:.3e} vs peak {:.3e}); the Newton solve may have picked a wrong root — "
                "consider a finer mesh\n",
                dev, peak);
    }
    return out;
}

double ErrorTable::least_squares_order() const {
    // Slope of log(error) against log(dx).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(rows.size());
    for (const ErrorRow& r : rows) {
        const double x = std::log(r.dx), y = std::log(r.l1_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ErrorTable run_convergence(const SimConfig& config) {
    config.validate();
    if (config.grids.size() < 2) throw ConfigError("convergence study needs at least two grids");

    const std::size_t n_max = *std::max_element(config.grids.begin(), config.grids.end());
    const double dx_min = (config.x_max - config.x_min) / static_cast<double>(n_max - 1);
    const double dt_ode =
        config.cfl * dx_min / std::max(config.left.c, config.right.c) / 20.0;
    const ReferenceSolution ref(config.left, config.right, config.frac, config.wavelet(),
                                config.t_end, dt_ode);

    ErrorTable table;
    for (const std::size_t n : config.grids) {
        SimConfig run_cfg = config;
        run_cfg.n = n;
        const IvpResult res = run_ivp(run_cfg, &ref);
        std::vector<double> sigma_ref(res.grid.n);
        for (std::size_t i = 0; i < res.grid.n; ++i)
            sigma_ref[i] = ref.at(res.grid.x(i), config.t_end).sigma;
        ErrorRow row;
        row.n = n;
        row.dx = res.grid.dx;
        row.l1_error = l1_error(res.state, sigma_ref, res.grid.dx);
        row.observed_order = std::numeric_limits<double>::quiet_NaN();
        if (!table.rows.empty()) {
            const ErrorRow& prev = table.rows.back();
            row.observed_order =
                std::log(prev.l1_error / row.l1_error) / std::log(prev.dx / row.dx);
        }
        table.rows.push_back(row);
    }
    return table;
}

HarmonicSpectrum fourier_harmonics(const std::vector<double>& samples, std::size_t spp,
                                   int n_harmonics, double fundamental_hz) {
    if (spp == 0 || samples.size() % spp != 0)
        throw ConfigError("sample count must be an integer multiple of samples-per-period");
    const std::size_t N = samples.size();
    const std::size_t periods = N / spp;
    HarmonicSpectrum spec;
    spec.fundamental_hz = fundamental_hz;
    std::vector<double> amps(static_cast<std::size_t>(n_harmonics));
    for (int h = 1; h <= n_harmonics; ++h) {
        std::complex<double> acc = 0.0;
        const double w = -2.0 * std::numbers::pi * static_cast<double>(h) *
                         static_cast<double>(periods) / static_cast<double>(N);
        for (std::size_t n = 0; n < N; ++n)
            acc += samples[n] * std::polar(1.0, w * static_cast<double>(n));
        amps[static_cast<std::size_t>(h - 1)] = 2.0 / static_cast<double>(N) * std::abs(acc);
    }
    if (!(amps[0] > 0.0)) return spec; // undefined spectrum, left empty
    spec.normalized.resize(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) spec.normalized[i] = amps[i] / amps[0];
    return spec;
}

HarmonicResult run_harmonic(const SimConfig& config) {
    config.validate();
    Engine eng(config);
    const SourceSpec source = config.source();

    // Integer number of steps per forcing period, so the DFT needs no
    // resampling; shrinking dt keeps CFL below the configured value.
    const double period = 2.0 * std::numbers::pi / source.omega_c;
    const auto spp = static_cast<std::size_t>(std::ceil(period / eng.grid.dt));
    eng.grid.dt = period / static_cast<double>(spp);

    const auto station_idx = static_cast<std::size_t>(
        std::llround((config.station - eng.grid.x_min) / eng.grid.dx));
    const auto [kernel_first, kernel_w] = delta_weights(eng.grid, source.x_s);
    if (station_idx >= kernel_first && station_idx < kernel_first + 4)
        throw ConfigError("station lies inside the source kernel");
    const std::size_t s = static_cast<std::size_t>(eng.scheme.s());
    if (station_idx + s > eng.J && station_idx <= eng.J + 2 * s)
        throw ConfigError("station lies inside the fracture stencil");

    // Boundary reflections must not reach the station during the recording:
    // the domain edges hold zero and reflect, they do not absorb.
    const double t_total =
        period * static_cast<double>(config.transient_periods + config.record_periods);
    const double c0 = config.left.c;
    const double t_left = ((source.x_s - eng.grid.x_min) + (config.station - eng.grid.x_min)) / c0;
    const double t_right =
        ((eng.grid.x_max - source.x_s) + (eng.grid.x_max - config.station)) /
        std::max(config.left.c, config.right.c);
    if (std::min(t_left, t_right) < t_total)
        throw ConfigError(fmt::format(
            "domain too small: boundary reflections reach the station after {:.3g} s but the "
            "run lasts {:.3g} s; widen grid.x_min/x_max",
            std::min(t_left, t_right), t_total));

    FieldState state = FieldState::zeros(eng.grid.n, 0.0);
    LeftTraces guess = LeftTraces::zeros(2 * eng.k - 1);

    const std::size_t transient_steps = static_cast<std::size_t>(config.transient_periods) * spp;
    const std::size_t record_steps = static_cast<std::size_t>(config.record_periods) * spp;
    std::vector<double> recorded;
    recorded.reserve(record_steps);

    for (std::size_t n = 0; n < transient_steps + record_steps; ++n) {
        if (n >= transient_steps) recorded.push_back(state.sigma[station_idx]);
        const double t = eng.grid.dt * static_cast<double>(n);
        const InterfaceSolution sol = eng.solve(state, guess);
        eng.advance(state, sol);
        guess = sol.traces;
        // Midpoint evaluation of the source time factor.
        inject_source(state, source, eng.grid, eng.grid.dt, t + 0.5 * eng.grid.dt);
    }

    HarmonicResult out;
    out.waveform.assign(recorded.end() - static_cast<std::ptrdiff_t>(spp), recorded.end());

    double peak = 0.0;
    for (double v : recorded) peak = std::max(peak, std::abs(v));
    if (peak < 1e-30) {
        std::cerr << "warning: station signal is identically zero; spectrum undefined\n";
        return out;
    }
    for (std::size_t i = recorded.size() - spp; i < recorded.size(); ++i)
        out.periodicity_error =
            std::max(out.periodicity_error, std::abs(recorded[i] - recorded[i - spp]) / peak);

    out.spectrum = fourier_harmonics(recorded, spp, config.n_harmonics,
                                     source.omega_c / (2.0 * std::numbers::pi));
    return out;
}

namespace {

class AtomicCsv {
public:
    explicit AtomicCsv(const std::string& path) : path_(path), tmp_(path + ".tmp"), out_(tmp_) {
        if (!out_) throw ConfigError(fmt::format("cannot write '{}'", tmp_));
    }
    template <typename... Args>
    void line(fmt::format_string<Args...> fmt, Args&&... args) {
        out_ << fmt::format(fmt, std::forward<Args>(args)...) << '\n';
    }
    ~AtomicCsv() {
        out_.close();
        std::error_code ec;
        std::filesystem::rename(tmp_, path_, ec);
    }

private:
    std::string path_, tmp_;
    std::ofstream out_;
};

} // namespace

void write_snapshot_csv(const std::string& path, const Grid& grid, const FieldState& state) {
    AtomicCsv csv(path);
    csv.line("x,v,sigma");
    for (std::size_t i = 0; i < grid.n; ++i)
        csv.line("{:.17g},{:.17g},{:.17g}", grid.x(i), state.v[i], state.sigma[i]);
}

void write_reference_snapshot_csv(const std::string& path, const Grid& grid,
                                  const ReferenceSolution& ref, double t) {
    AtomicCsv csv(path);
    csv.line("x,v,sigma");
    for (std::size_t i = 0; i < grid.n; ++i) {
        const Vec2 u = ref.at(grid.x(i), t);
        csv.line("{:.17g},{:.17g},{:.17g}", grid.x(i), u.v, u.sigma);
    }
}

void write_series_csv(const std::string& path, const std::vector<InterfaceSample>& series) {
    AtomicCsv csv(path);
    csv.line("t,sigma_minus,v_minus,v_plus,jump_u,newton_iters,residual");
    for (const InterfaceSample& s : series)
        csv.line("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g}", s.t, s.sigma_minus,
                 s.v_minus, s.v_plus, s.jump_u, s.newton_iters, s.residual);
}

} // namespace fracwave
