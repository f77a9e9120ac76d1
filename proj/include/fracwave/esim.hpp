#pragma once

#include "fracwave/fracture.hpp"
#include "fracwave/model.hpp"
#include "fracwave/scheme.hpp"

#include <cstddef>
#include <vector>

namespace fracwave {

struct EsimConfig {
    int k = 0;                     // half-width of the Taylor system
    double newton_tol = 1e-10;     // on the scaled residual, infinity norm
    int newton_max_iter = 50;
    int damping_max_halvings = 30;
};

/// Smallest k with k >= s, 2k-1 >= r, 2k-1 <= p. Throws ConfigError when the
/// initial data is not smooth enough to satisfy all three.
int select_k(int r, int s, int p);

/// Unique J with x_J <= alpha < x_{J+1}; requires the irregular set and the
/// Taylor nodes to stay clear of the domain edges.
std::size_t locate_interface(const Grid& grid, double alpha, int s);

struct InterfaceSolution {
    LeftTraces traces;      // order 2k-1
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // final scaled norm
};

/// Residual of the 4k x 4k Taylor system: left nodes J-k+1..J fitted by the
/// left expansion, right nodes J+1..J+k by the expansion through D_m, minus
/// the grid data. Components ordered (v, sigma) per node.
std::vector<double> interface_residual(const JumpOperatorSet& ops, const Grid& grid,
                                       std::size_t J, int k, const FieldState& state,
                                       const LeftTraces& candidate);

/// Damped Newton with the assembled analytic Jacobian; steps are clamped so
/// the sigma^- trace never crosses the admissibility pole. Throws NewtonError
/// on non-convergence.
InterfaceSolution solve_interface_system(const JumpOperatorSet& ops, const Grid& grid,
                                         std::size_t J, int k, const FieldState& state,
                                         const LeftTraces& guess, const EsimConfig& config);

/// Modified values: smooth one-sided extensions evaluated at the irregular
/// points of the opposite side.
struct ModifiedValues {
    std::vector<Vec2> right_of_alpha; // U*_{J+1..J+s}, from the left traces
    std::vector<Vec2> left_of_alpha;  // U*_{J-s+1..J}, from D_m(solution)
};

ModifiedValues modified_values(const JumpOperatorSet& ops, const Grid& grid, std::size_t J,
                               int k, int s, const InterfaceSolution& solution);

/// Time-step the 2s irregular points into `next`, mixing own-side numerical
/// values with opposite-side modified values.
void step_irregular(const SchemeSpec& spec, const MaterialParams& medium0,
                    const MaterialParams& medium1, const Grid& grid, std::size_t J,
                    const FieldState& state, const ModifiedValues& modified, FieldState& next);

} // namespace fracwave
