#pragma once

#include "fracwave/fracture.hpp"
#include "fracwave/model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace fracwave {

/// Explicit one-step (2s+1)-point scheme of order r obtained from the
/// Cauchy-Kowalewski procedure: the update increment is
///   H = sum_{m=1..r} dt^m/m! (-A)^m Dx^m[window],
/// with Dx^m the stored central-difference tables. r = 2 is classical
/// Lax-Wendroff.
class SchemeSpec {
public:
    static SchemeSpec ader(int order);

    int r() const { return r_; }
    int s() const { return s_; }

    /// Dx^m (m = 1..r) applied to the 2s+1 window values around the center,
    /// before division by dx^m.
    double apply_stencil(int m, const double* center) const;

private:
    SchemeSpec() = default;
    int r_ = 0;
    int s_ = 0;
    // dcoef_[m-1][j] multiplies f_{center-s+j}.
    std::array<std::vector<double>, 4> dcoef_;
};

/// Update increment at the center of a regular window. The window pointers
/// address the center; offsets -s..s must be valid.
Vec2 regular_step(const SchemeSpec& spec, const MaterialParams& medium, double dx, double dt,
                  const double* v_center, const double* sigma_center);

/// One full regular sweep: every point whose stencil stays clear of the
/// domain edge buffer and of the irregular set {J-s+1..J+s} is updated with
/// its own medium's matrix. Irregular points are copied unchanged (the esim
/// module owns them). Points with i <= J belong to medium 0.
/// Pass an empty J for a homogeneous, fracture-free sweep.
FieldState full_sweep(const SchemeSpec& spec, const MaterialParams& medium0,
                      const MaterialParams& medium1, const Grid& grid,
                      std::optional<std::size_t> J, const FieldState& state);

} // namespace fracwave
