#include "fracwave/errors.hpp"
#include "fracwave/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace fracwave;

struct Overrides {
    std::optional<std::string> out;
    std::optional<int> order;
    std::optional<std::size_t> n;
    std::optional<double> v0;
};

void add_overrides(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--out", ov.out, "output directory (overrides run.out_dir)");
    cmd->add_option("--order", ov.order, "scheme order, 2 or 4")->check(CLI::IsMember({2, 4}));
    cmd->add_option("--n", ov.n, "grid point count");
    cmd->add_option("--v0", ov.v0, "velocity amplitude (m/s)");
}

SimConfig load(const std::string& path, const Overrides& ov) {
    SimConfig cfg = parse_config(path);
    if (ov.out) cfg.out_dir = *ov.out;
    if (ov.order) cfg.order = *ov.order;
    if (ov.n) cfg.n = *ov.n;
    if (ov.v0) {
        cfg.v0 = *ov.v0;
        cfg.epsilon = -1.0;
    }
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

std::string out_path(const SimConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_run(const SimConfig& cfg) {
    // The semi-analytical reference doubles as the wrong-root diagnostic.
    const double dt_ode = cfg.cfl * (cfg.x_max - cfg.x_min) /
                          static_cast<double>(cfg.n - 1) / std::max(cfg.left.c, cfg.right.c) / 20.0;
    const ReferenceSolution ref(cfg.left, cfg.right, cfg.frac, cfg.wavelet(), cfg.t_end, dt_ode);
    const IvpResult res = run_ivp(cfg, &ref);
    write_snapshot_csv(out_path(cfg, "snapshot.csv"), res.grid, res.state);
    write_series_csv(out_path(cfg, "interface.csv"), res.series);
    std::cout << fmt::format("wrote {} and {} (t = {:.6g} s, {} steps)\n",
                             out_path(cfg, "snapshot.csv"), out_path(cfg, "interface.csv"),
                             res.state.t, res.series.size() - 1);
    const double drift =
        std::abs(res.energy.back() / res.energy.front() - 1.0);
    std::cout << fmt::format("energy drift |E(t_end)/E(t0) - 1| = {:.3e}\n", drift);
    return 0;
}

int cmd_converge(const SimConfig& cfg) {
    const ErrorTable table = run_convergence(cfg);
    std::ofstream out(out_path(cfg, "convergence.csv"));
    out << "n,dx,l1_error,observed_order\n";
    std::cout << fmt::format("{:>8} {:>12} {:>14} {:>10}\n", "n", "dx", "l1_error", "order");
    for (const ErrorRow& r : table.rows) {
        out << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.n, r.dx, r.l1_error,
                           r.observed_order);
        std::cout << fmt::format("{:>8} {:>12.5g} {:>14.6e} {:>10.3f}\n", r.n, r.dx, r.l1_error,
                                 r.observed_order);
    }
    std::cout << fmt::format("least-squares order: {:.3f}\n", table.least_squares_order());
    return 0;
}

int cmd_harmonic(const SimConfig& cfg) {
    const HarmonicResult res = run_harmonic(cfg);
    {
        std::ofstream out(out_path(cfg, "harmonics.csv"));
        out << "harmonic,normalized_amplitude\n";
        for (std::size_t h = 0; h < res.spectrum.normalized.size(); ++h)
            out << fmt::format("{},{:.17g}\n", h + 1, res.spectrum.normalized[h]);
    }
    {
        std::ofstream out(out_path(cfg, "waveform.csv"));
        out << "t,sigma\n";
        const double period = 1.0 / cfg.f_c;
        for (std::size_t i = 0; i < res.waveform.size(); ++i)
            out << fmt::format("{:.17g},{:.17g}\n",
                               period * static_cast<double>(i) /
                                   static_cast<double>(res.waveform.size()),
                               res.waveform[i]);
    }
    std::cout << fmt::format("periodicity error {:.3e}; normalized harmonics:",
                             res.periodicity_error);
    for (double a : res.spectrum.normalized) std::cout << fmt::format(" {:.4g}", a);
    std::cout << '\n';
    return 0;
}

int cmd_reference(const SimConfig& cfg) {
    const Grid grid = make_grid(cfg.x_min, cfg.x_max, cfg.n, cfg.cfl,
                                std::max(cfg.left.c, cfg.right.c));
    const double dt_ode = grid.dt / 20.0;
    const ReferenceSolution ref(cfg.left, cfg.right, cfg.frac, cfg.wavelet(), cfg.t_end, dt_ode);
    write_reference_snapshot_csv(out_path(cfg, "reference_snapshot.csv"), grid, ref, cfg.t_end);
    std::vector<InterfaceSample> series;
    const auto steps = static_cast<std::size_t>((cfg.t_end - cfg.t0) / grid.dt);
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = cfg.t0 + (cfg.t_end - cfg.t0) * static_cast<double>(n) /
                                      static_cast<double>(steps);
        const InterfaceTraces tr = ref.traces(t);
        series.push_back({t, tr.sigma, tr.v_minus, tr.v_plus,
                          displacement_jump(cfg.frac, tr.sigma), 0, 0.0});
    }
    write_series_csv(out_path(cfg, "reference_interface.csv"), series);
    std::cout << fmt::format("wrote {} and {}\n", out_path(cfg, "reference_snapshot.csv"),
                             out_path(cfg, "reference_interface.csv"));
    return 0;
}

int cmd_dump_ops(const SimConfig& cfg, int m_max, const std::string& file) {
    const JumpOperatorSet ops = build_jump_operators(cfg.frac, cfg.left, cfg.right, m_max);
    if (file.empty()) {
        std::cout << ops.dump();
    } else {
        std::ofstream out(file);
        out << ops.dump();
        std::cout << fmt::format("wrote {}\n", file);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D elastic P-waves across a nonlinear fracture"};
    app.require_subcommand(1);

    std::string config_path, dump_file;
    int dump_m_max = 5;
    Overrides ov;

    auto* run = app.add_subcommand("run", "time-march the initial-value problem");
    auto* converge = app.add_subcommand("converge", "convergence study over a grid sequence");
    auto* harmonic = app.add_subcommand("harmonic", "forced time-harmonic experiment");
    auto* reference = app.add_subcommand("reference", "semi-analytical solution only");
    auto* dump_ops = app.add_subcommand("dump-ops", "print the generated jump operators");
    for (auto* cmd : {run, converge, harmonic, reference, dump_ops}) {
        cmd->add_option("config", config_path, "config file")->required();
        add_overrides(cmd, ov);
    }
    dump_ops->add_option("--m-max", dump_m_max, "highest operator order");
    dump_ops->add_option("--file", dump_file, "write to file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        const fracwave::SimConfig cfg = load(config_path, ov);
        if (run->parsed()) return cmd_run(cfg);
        if (converge->parsed()) return cmd_converge(cfg);
        if (harmonic->parsed()) return cmd_harmonic(cfg);
        if (reference->parsed()) return cmd_reference(cfg);
        if (dump_ops->parsed()) return cmd_dump_ops(cfg, dump_m_max, dump_file);
    } catch (const fracwave::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const fracwave::NewtonError& e) {
        std::cerr << "newton failure: " << e.what() << '\n';
        return 3;
    } catch (const fracwave::AdmissibilityError& e) {
        std::cerr << "admissibility failure: " << e.what() << '\n';
        return 3;
    } catch (const fracwave::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 4;
    }
    return 1;
}
