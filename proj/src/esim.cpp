#include "fracwave/esim.hpp"

#include "fracwave/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fmt/format.h>

namespace fracwave {

int select_k(int r, int s, int p) {
    if (p < 1) throw ConfigError("initial data regularity p must be at least 1");
    const int k = std::max(s, (r + 2) / 2); // smallest k with 2k-1 >= r and k >= s
    if (2 * k - 1 > p)
        throw ConfigError(fmt::format(
            "initial data not smooth enough: order {} needs 2k-1 = {} derivatives, data has p = {}",
            r, 2 * k - 1, p));
    return k;
}

std::size_t locate_interface(const Grid& grid, double alpha, int s) {
    if (!(alpha > grid.x_min && alpha < grid.x_max))
        throw ConfigError("interface position outside the domain");
    auto J = static_cast<std::ptrdiff_t>(std::floor((alpha - grid.x_min) / grid.dx));
    // Guard against rounding at a node: enforce x_J <= alpha < x_{J+1}.
    while (J > 0 && grid.x(static_cast<std::size_t>(J)) > alpha) --J;
    while (grid.x(static_cast<std::size_t>(J + 1)) <= alpha) ++J;
    const auto Ju = static_cast<std::size_t>(J);
    if (J < 2 * s || Ju + 2 * static_cast<std::size_t>(s) >= grid.n)
        throw ConfigError("interface too close to a domain boundary for the stencil");
    return Ju;
}

namespace {

struct SystemGeometry {
    std::size_t first_node; // J - k + 1
    int k;
    double alpha;

    // Taylor weight (x_i - alpha)^m / m! for the t-th node of the system.
    double weight(const Grid& grid, int t, int m) const {
        double w = 1.0;
        const double h = grid.x(first_node + static_cast<std::size_t>(t)) - alpha;
        for (int j = 1; j <= m; ++j) w *= h / j;
        return w;
    }
};

std::vector<double> raw_residual(const JumpOperatorSet& ops, const Grid& grid,
                                 const SystemGeometry& geo, const FieldState& state,
                                 const LeftTraces& candidate) {
    const int k = geo.k;
    std::vector<double> res(4 * k);
    // Left nodes: plain Taylor expansion in the candidate traces.
    for (int t = 0; t < k; ++t) {
        double fv = 0.0, fs = 0.0;
        for (int m = 0; m < 2 * k; ++m) {
            const double w = geo.weight(grid, t, m);
            fv += w * candidate.dv[m];
            fs += w * candidate.dsigma[m];
        }
        const std::size_t i = geo.first_node + static_cast<std::size_t>(t);
        res[2 * t] = fv - state.v[i];
        res[2 * t + 1] = fs - state.sigma[i];
    }
    // Right nodes: expansion through the jump operators.
    std::vector<Vec2> plus(2 * k);
    for (int m = 0; m < 2 * k; ++m) plus[m] = ops.apply(m, candidate);
    for (int t = k; t < 2 * k; ++t) {
        double fv = 0.0, fs = 0.0;
        for (int m = 0; m < 2 * k; ++m) {
            const double w = geo.weight(grid, t, m);
            fv += w * plus[m].v;
            fs += w * plus[m].sigma;
        }
        const std::size_t i = geo.first_node + static_cast<std::size_t>(t);
        res[2 * t] = fv - state.v[i];
        res[2 * t + 1] = fs - state.sigma[i];
    }
    return res;
}

} // namespace

std::vector<double> interface_residual(const JumpOperatorSet& ops, const Grid& grid,
                                       std::size_t J, int k, const FieldState& state,
                                       const LeftTraces& candidate) {
    return raw_residual(ops, grid, {J - static_cast<std::size_t>(k) + 1, k, ops.fracture().alpha},
                        state, candidate);
}

InterfaceSolution solve_interface_system(const JumpOperatorSet& ops, const Grid& grid,
                                         std::size_t J, int k, const FieldState& state,
                                         const LeftTraces& guess, const EsimConfig& config) {
    const SystemGeometry geo{J - static_cast<std::size_t>(k) + 1, k, ops.fracture().alpha};
    const int n = 4 * k;
    const double z0 = ops.left_medium().impedance();
    const double pole = ops.fracture().K * ops.fracture().d * (1.0 - kAdmissibilityMargin);

    // Residual rows are mixed-unit; scale velocity rows by 1/vmax and stress
    // rows by 1/(Z0 vmax) so the tolerance is meaningful for all amplitudes.
    double vmax = 1.0;
    for (int t = 0; t < 2 * k; ++t)
        vmax = std::max(vmax, std::abs(state.v[geo.first_node + static_cast<std::size_t>(t)]));
    std::vector<double> row_scale(n);
    for (int t = 0; t < 2 * k; ++t) {
        row_scale[2 * t] = 1.0 / vmax;
        row_scale[2 * t + 1] = 1.0 / (z0 * vmax);
    }
    // Column scaling keeps the Jacobian O(1): dv[m] columns by dx^m/m!,
    // dsigma[m] additionally by Z0.
    std::vector<double> col_scale(n);
    {
        double w = 1.0;
        for (int m = 0; m < 2 * k; ++m) {
            col_scale[2 * m] = w;
            col_scale[2 * m + 1] = w * z0;
            w *= grid.dx / (m + 1);
        }
    }

    const auto scaled_norm = [&](const std::vector<double>& res) {
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm = std::max(nrm, std::abs(res[i] * row_scale[i]));
        return nrm;
    };

    InterfaceSolution sol;
    sol.traces = guess;
    if (sol.traces.order() != 2 * k - 1)
        throw ConfigError("Newton guess has the wrong trace order");

    std::vector<double> res = raw_residual(ops, grid, geo, state, sol.traces);
    double norm = scaled_norm(res);

    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd rhs(n), step(n);

    for (int iter = 0; norm > config.newton_tol; ++iter) {
        if (iter >= config.newton_max_iter)
            throw NewtonError(fmt::format(
                "interface system did not converge after {} iterations (residual {:.3e}, "
                "t = {:.6g}); a finer mesh is usually required",
                config.newton_max_iter, norm, state.t));

        jac.setZero();
        for (int t = 0; t < k; ++t)
            for (int m = 0; m < 2 * k; ++m) {
                const double w = geo.weight(grid, t, m);
                jac(2 * t, 2 * m) = w;
                jac(2 * t + 1, 2 * m + 1) = w;
            }
        std::vector<std::vector<Vec2>> dj(2 * k);
        for (int m = 0; m < 2 * k; ++m) {
            const int n_atoms = std::min(ops.atom_count(m), n);
            dj[m].resize(n_atoms);
            for (int a = 0; a < n_atoms; ++a) dj[m][a] = ops.apply_jacobian(m, a, sol.traces);
        }
        for (int t = k; t < 2 * k; ++t)
            for (int m = 0; m < 2 * k; ++m) {
                const double w = geo.weight(grid, t, m);
                for (std::size_t a = 0; a < dj[m].size(); ++a) {
                    jac(2 * t, static_cast<int>(a)) += w * dj[m][a].v;
                    jac(2 * t + 1, static_cast<int>(a)) += w * dj[m][a].sigma;
                }
            }
        for (int i = 0; i < n; ++i) rhs(i) = -res[i] * row_scale[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) jac(i, j) *= row_scale[i] * col_scale[j];
        step = jac.partialPivLu().solve(rhs);
        if (!step.allFinite())
            throw NewtonError(fmt::format("singular interface Jacobian at t = {:.6g}", state.t));

        std::vector<double> delta(n);
        for (int j = 0; j < n; ++j) delta[j] = step(j) * col_scale[j];

        // Clamp any step that would cross the sigma^- pole to half the
        // remaining distance.
        double f = 1.0;
        const double s0 = sol.traces.dsigma[0];
        if (delta[1] > 0.0 && s0 + delta[1] >= pole) f = 0.5 * (pole - s0) / delta[1];

        LeftTraces trial = sol.traces;
        std::vector<double> trial_res;
        double trial_norm = 0.0;
        for (int h = 0;; ++h) {
            for (int m = 0; m < 2 * k; ++m) {
                trial.dv[m] = sol.traces.dv[m] + f * delta[2 * m];
                trial.dsigma[m] = sol.traces.dsigma[m] + f * delta[2 * m + 1];
            }
            trial_res = raw_residual(ops, grid, geo, state, trial);
            trial_norm = scaled_norm(trial_res);
            if (trial_norm < norm || h >= config.damping_max_halvings) break;
            f *= 0.5;
        }
        if (!(trial_norm < norm))
            throw NewtonError(fmt::format(
                "interface Newton stalled at residual {:.3e} (t = {:.6g}); "
                "a finer mesh is usually required",
                norm, state.t));
        sol.traces = trial;
        res = std::move(trial_res);
        norm = trial_norm;
        sol.iterations = iter + 1;
    }
    sol.converged = true;
    sol.residual = norm;
    return sol;
}

ModifiedValues modified_values(const JumpOperatorSet& ops, const Grid& grid, std::size_t J,
                               int k, int s, const InterfaceSolution& solution) {
    if (!solution.converged) throw NewtonError("modified values require a converged solution");
    const double alpha = ops.fracture().alpha;
    const LeftTraces& tr = solution.traces;

    std::vector<Vec2> plus(2 * k); // D_m(solution), m = 0..2k-1
    for (int m = 0; m < 2 * k; ++m) plus[m] = ops.apply(m, tr);

    ModifiedValues mv;
    for (int j = 1; j <= s; ++j) { // left extension pushed rightward
        const double h = grid.x(J + static_cast<std::size_t>(j)) - alpha;
        double uv = 0.0, us = 0.0, w = 1.0;
        for (int m = 0; m < 2 * k; ++m) {
            uv += w * tr.dv[m];
            us += w * tr.dsigma[m];
            w *= h / (m + 1);
        }
        mv.right_of_alpha.push_back({uv, us});
    }
    for (int j = s - 1; j >= 0; --j) { // right extension pushed leftward
        const double h = grid.x(J - static_cast<std::size_t>(j)) - alpha;
        double uv = 0.0, us = 0.0, w = 1.0;
        for (int m = 0; m < 2 * k; ++m) {
            uv += w * plus[m].v;
            us += w * plus[m].sigma;
            w *= h / (m + 1);
        }
        mv.left_of_alpha.push_back({uv, us});
    }
    return mv;
}

void step_irregular(const SchemeSpec& spec, const MaterialParams& medium0,
                    const MaterialParams& medium1, const Grid& grid, std::size_t J,
                    const FieldState& state, const ModifiedValues& modified, FieldState& next) {
    const int s = spec.s();
    const int width = 2 * s + 1;
    std::vector<double> wv(width), ws(width);

    const auto fill = [&](std::ptrdiff_t i, bool left_side) {
        for (int o = -s; o <= s; ++o) {
            const std::ptrdiff_t j = i + o;
            const bool own = left_side ? j <= static_cast<std::ptrdiff_t>(J)
                                       : j > static_cast<std::ptrdiff_t>(J);
            Vec2 u;
            if (own) {
                u = {state.v[static_cast<std::size_t>(j)], state.sigma[static_cast<std::size_t>(j)]};
            } else if (left_side) {
                u = modified.right_of_alpha[static_cast<std::size_t>(j - (static_cast<std::ptrdiff_t>(J) + 1))];
            } else {
                u = modified.left_of_alpha[static_cast<std::size_t>(j - (static_cast<std::ptrdiff_t>(J) - s + 1))];
            }
            wv[static_cast<std::size_t>(o + s)] = u.v;
            ws[static_cast<std::size_t>(o + s)] = u.sigma;
        }
    };

    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(J) - s + 1;
         i <= static_cast<std::ptrdiff_t>(J) + s; ++i) {
        const bool left_side = i <= static_cast<std::ptrdiff_t>(J);
        fill(i, left_side);
        const Vec2 inc = regular_step(spec, left_side ? medium0 : medium1, grid.dx, grid.dt,
                                      wv.data() + s, ws.data() + s);
        const auto iu = static_cast<std::size_t>(i);
        next.v[iu] = state.v[iu] + inc.v;
        next.sigma[iu] = state.sigma[iu] + inc.sigma;
    }
}

} // namespace fracwave
