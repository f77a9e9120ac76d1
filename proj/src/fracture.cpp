#include "fracwave/fracture.hpp"

#include "fracwave/errors.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>
#include <utility>

namespace fracwave {

LeftTraces LeftTraces::zeros(int order) {
    LeftTraces t;
    t.dv.assign(order + 1, 0.0);
    t.dsigma.assign(order + 1, 0.0);
    return t;
}

double LeftTraces::atom_value(int id) const {
    const int j = id / 2;
    if (j >= static_cast<int>(dv.size())) return 0.0;
    return id % 2 == 0 ? dv[j] : dsigma[j];
}

void require_admissible(const FractureParams& params, double sigma_minus) {
    const double limit = params.K * params.d * (1.0 - kAdmissibilityMargin);
    if (!(sigma_minus < limit))
        throw AdmissibilityError(
            fmt::format("stress trace {} reached the inadmissible branch (K*d = {})",
                        sigma_minus, params.K * params.d));
}

double displacement_jump(const FractureParams& params, double sigma_minus) {
    require_admissible(params, sigma_minus);
    return sigma_minus / (params.K * (1.0 - sigma_minus / (params.K * params.d)));
}

Vec2 apply_D0(const FractureParams& params, const MaterialParams& left_medium,
              double v_minus, double sigma_minus, double dv_dx_minus) {
    require_admissible(params, sigma_minus);
    const double theta = 1.0 - sigma_minus / (params.K * params.d);
    const double coef = left_medium.rho * left_medium.c * left_medium.c / params.K;
    return {v_minus + coef / (theta * theta) * dv_dx_minus, sigma_minus};
}

double fracture_potential_energy(const FractureParams& params, double sigma_minus) {
    require_admissible(params, sigma_minus);
    const double theta = 1.0 - sigma_minus / (params.K * params.d);
    return params.K * params.d * params.d * (std::log(theta) + 1.0 / theta - 1.0);
}

JumpOperatorSet::JumpOperatorSet(FractureParams frac, MaterialParams left, MaterialParams right,
                                 int m_max)
    : frac_(frac), left_(left), right_(right), m_max_(m_max) {
    frac_.validate();
    left_.validate();
    right_.validate();
    if (m_max < 0) throw ConfigError("jump operator order must be non-negative");

    using namespace cas;
    // D_0 from the closed form; time derivatives of (v+, sigma+) follow by the
    // substitution rules of the left-medium PDE, and the m-th spatial
    // derivatives on the + side by ((-A1)^-1)^m applied to the m-th time
    // derivatives.
    const double inv_kd = 1.0 / (frac_.K * frac_.d);
    const Expr theta = sum({constant(1.0), scale(-inv_kd, atom(atom_sigma(0)))});
    const double coef = left_.rho * left_.c * left_.c / frac_.K;
    Expr tv = sum({atom(atom_v(0)),
                   product({constant(coef), power(theta, -2), atom(atom_v(1))})});
    Expr ts = atom(atom_sigma(0));

    // inv(-A1) = [[0, 1/(rho1 c1^2)], [rho1, 0]]
    const double b01 = 1.0 / (right_.rho * right_.c * right_.c);
    const double b10 = right_.rho;

    // M = (inv(-A1))^m, accumulated as a plain 2x2.
    std::array<double, 4> M{1.0, 0.0, 0.0, 1.0};

    ops_.reserve(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
        if (m > 0) {
            tv = diff_time(tv, left_.rho, left_.c);
            ts = diff_time(ts, left_.rho, left_.c);
            const std::array<double, 4> prev = M;
            M = {b01 * prev[2], b01 * prev[3], b10 * prev[0], b10 * prev[1]};
        }
        OperatorExpr op;
        op.v = sum({scale(M[0], tv), scale(M[1], ts)});
        op.sigma = sum({scale(M[2], tv), scale(M[3], ts)});
        const int n_atoms = atom_count(m);
        op.jac_v.reserve(n_atoms);
        op.jac_sigma.reserve(n_atoms);
        for (int a = 0; a < n_atoms; ++a) {
            op.jac_v.push_back(diff_atom(op.v, a));
            op.jac_sigma.push_back(diff_atom(op.sigma, a));
        }
        ops_.push_back(std::move(op));
    }
}

std::vector<double> JumpOperatorSet::gather_atoms(int m, const LeftTraces& traces) const {
    const int n = atom_count(m);
    std::vector<double> atoms(n);
    for (int a = 0; a < n; ++a) atoms[a] = traces.atom_value(a);
    return atoms;
}

Vec2 JumpOperatorSet::apply(int m, const LeftTraces& traces) const {
    require_admissible(frac_, traces.dsigma.at(0));
    const auto atoms = gather_atoms(m, traces);
    return {cas::eval(ops_.at(m).v, atoms), cas::eval(ops_.at(m).sigma, atoms)};
}

Vec2 JumpOperatorSet::apply_jacobian(int m, int atom_id, const LeftTraces& traces) const {
    const auto atoms = gather_atoms(m, traces);
    return {cas::eval(ops_.at(m).jac_v.at(atom_id), atoms),
            cas::eval(ops_.at(m).jac_sigma.at(atom_id), atoms)};
}

std::string JumpOperatorSet::dump() const {
    std::string out;
    for (int m = 0; m <= m_max_; ++m) {
        out += fmt::format("D{} v     {}\n", m, cas::to_prefix(ops_[m].v));
        out += fmt::format("D{} sigma {}\n", m, cas::to_prefix(ops_[m].sigma));
    }
    return out;
}

JumpOperatorSet build_jump_operators(const FractureParams& params, const MaterialParams& left,
                                     const MaterialParams& right, int m_max) {
    return JumpOperatorSet(params, left, right, m_max);
}

} // namespace fracwave
