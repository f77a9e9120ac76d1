#pragma once

#include "fracwave/expr.hpp"
#include "fracwave/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace fracwave {

/// Relative safety margin below the pole sigma = K*d of the hyperbola.
inline constexpr double kAdmissibilityMargin = 1e-12;

/// One-sided spatial derivatives of (v, sigma) at alpha^-, orders 0..order().
struct LeftTraces {
    std::vector<double> dv;     // dv[j] = d^j v/dx^j (alpha^-)
    std::vector<double> dsigma; // dsigma[j] = d^j sigma/dx^j (alpha^-)

    static LeftTraces zeros(int order);
    int order() const { return static_cast<int>(dv.size()) - 1; }
    /// Atom value by CAS id; orders beyond the stored ones evaluate to zero
    /// (the truncation used for the top-order jump operator).
    double atom_value(int id) const;
};

struct Vec2 {
    double v;
    double sigma;
};

/// Throws AdmissibilityError unless sigma_minus < K*d*(1 - margin).
void require_admissible(const FractureParams& params, double sigma_minus);

/// [u](sigma^-) = (1/K) sigma^- / (1 - sigma^-/(K d)); always > -d.
double displacement_jump(const FractureParams& params, double sigma_minus);

/// Zeroth-order jump operator in closed form:
///   sigma^+ = sigma^-,
///   v^+ = v^- + (rho0 c0^2 / K) (1 - sigma^-/(K d))^-2 dv/dx(alpha^-).
Vec2 apply_D0(const FractureParams& params, const MaterialParams& left_medium,
              double v_minus, double sigma_minus, double dv_dx_minus);

/// Potential energy per unit fracture area: K d^2 (ln(theta) + 1/theta - 1),
/// theta = 1 - sigma^-/(K d). Non-negative, zero only at sigma^- = 0.
double fracture_potential_energy(const FractureParams& params, double sigma_minus);

/// The m-th order jump operators D_m mapping left traces to
/// (d^m v/dx^m, d^m sigma/dx^m)(alpha^+), with their partial derivatives,
/// generated once as expression trees and evaluated per Newton iteration.
class JumpOperatorSet {
public:
    JumpOperatorSet(FractureParams frac, MaterialParams left, MaterialParams right, int m_max);

    int m_max() const { return m_max_; }
    const FractureParams& fracture() const { return frac_; }
    const MaterialParams& left_medium() const { return left_; }
    const MaterialParams& right_medium() const { return right_; }

    /// D_m(traces). Checks admissibility of traces.dsigma[0].
    Vec2 apply(int m, const LeftTraces& traces) const;
    /// Partial derivatives of D_m with respect to atom id (0 <= id < 2(m+2)).
    Vec2 apply_jacobian(int m, int atom_id, const LeftTraces& traces) const;

    int atom_count(int m) const { return 2 * (m + 2); }

    /// Generated expressions in prefix notation, for inspection / goldens.
    std::string dump() const;

private:
    std::vector<double> gather_atoms(int m, const LeftTraces& traces) const;

    FractureParams frac_;
    MaterialParams left_;
    MaterialParams right_;
    int m_max_;
    struct OperatorExpr {
        cas::Expr v;
        cas::Expr sigma;
        std::vector<cas::Expr> jac_v;     // d v-component / d atom
        std::vector<cas::Expr> jac_sigma; // d sigma-component / d atom
    };
    std::vector<OperatorExpr> ops_;
};

JumpOperatorSet build_jump_operators(const FractureParams& params, const MaterialParams& left,
                                     const MaterialParams& right, int m_max);

} // namespace fracwave
