#include "fracwave/errors.hpp"
#include "fracwave/fracture.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fracwave;

namespace {

const MaterialParams kRock{1200.0, 2800.0};
const FractureParams kFrac{200.67, 1.3e9, 6.1e-4};

LeftTraces random_traces(std::mt19937& rng, int order, double v_scale, double s_scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LeftTraces t = LeftTraces::zeros(order);
    for (int m = 0; m <= order; ++m) {
        t.dv[m] = v_scale * u(rng);
        t.dsigma[m] = s_scale * u(rng);
    }
    // Keep sigma^- comfortably admissible.
    t.dsigma[0] = -std::abs(t.dsigma[0]);
    return t;
}

} // namespace

TEST_CASE("displacement jump closed-form values") {
    const double kd = kFrac.K * kFrac.d;
    CHECK(displacement_jump(kFrac, 0.0) == 0.0);
    CHECK(displacement_jump(kFrac, -kd) == doctest::Approx(-kFrac.d / 2.0).epsilon(1e-14));
    CHECK(displacement_jump(kFrac, kd / 2.0) == doctest::Approx(kFrac.d).epsilon(1e-14));
    CHECK_THROWS_AS(displacement_jump(kFrac, kd), AdmissibilityError);
    CHECK_THROWS_AS(displacement_jump(kFrac, 2.0 * kd), AdmissibilityError);
}

TEST_CASE("non-penetration and monotonicity down to huge compressions") {
    const double kd = kFrac.K * kFrac.d;
    double prev = -kFrac.d;
    for (double factor = 1e6; factor >= 1e-6; factor /= 2.0) {
        const double jump = displacement_jump(kFrac, -factor * kd);
        CHECK(jump > -kFrac.d);
        CHECK(jump > prev);
        prev = jump;
    }
}

TEST_CASE("tangency: slope 1/K at the origin") {
    const double h = kFrac.K * kFrac.d * 1e-7;
    const double slope =
        (displacement_jump(kFrac, h) - displacement_jump(kFrac, -h)) / (2.0 * h);
    CHECK(slope == doctest::Approx(1.0 / kFrac.K).epsilon(1e-7));
}

TEST_CASE("apply_D0 closed-form cases") {
    SUBCASE("no velocity gradient leaves the state unchanged") {
        const Vec2 u = apply_D0(kFrac, kRock, 0.3, -1e5, 0.0);
        CHECK(u.v == 0.3);
        CHECK(u.sigma == -1e5);
    }
    SUBCASE("coefficient rho0 c0^2 / K at zero stress") {
        const double coef = kRock.rho * kRock.c * kRock.c / kFrac.K;
        CHECK(coef == doctest::Approx(9.408e9 / 1.3e9).epsilon(1e-12));
        const Vec2 u = apply_D0(kFrac, kRock, 0.1, 0.0, 1e-3);
        CHECK(u.v == doctest::Approx(0.1 + coef * 1e-3).epsilon(1e-14));
    }
    SUBCASE("factor 1/4 at sigma = -K d") {
        const double kd = kFrac.K * kFrac.d;
        const double coef = kRock.rho * kRock.c * kRock.c / (4.0 * kFrac.K);
        const Vec2 u = apply_D0(kFrac, kRock, 0.0, -kd, 2e-3);
        CHECK(u.v == doctest::Approx(coef * 2e-3).epsilon(1e-14));
        CHECK(u.sigma == -kd);
    }
}

TEST_CASE("fracture potential energy") {
    const double kd = kFrac.K * kFrac.d;
    CHECK(fracture_potential_energy(kFrac, 0.0) == 0.0);
    CHECK(fracture_potential_energy(kFrac, kd / 2.0) ==
          doctest::Approx(kFrac.K * kFrac.d * kFrac.d * (1.0 - std::log(2.0))).epsilon(1e-13));
    // Positivity on both branches.
    for (const double s : {-3.0 * kd, -0.2 * kd, 0.3 * kd, 0.9 * kd})
        CHECK(fracture_potential_energy(kFrac, s) > 0.0);
    // Small-stress limit: the linear-spring energy sigma^2/(2K).
    const double s_small = 1e-4 * kd;
    const double e = fracture_potential_energy(kFrac, s_small);
    CHECK(e == doctest::Approx(s_small * s_small / (2.0 * kFrac.K)).epsilon(1e-3));
}

TEST_CASE("D_0 from the operator set matches the closed form on random inputs") {
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, kRock, 1);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const LeftTraces t = random_traces(rng, 2, 0.5, 0.5 * kFrac.K * kFrac.d);
        const Vec2 got = ops.apply(0, t);
        const Vec2 want = apply_D0(kFrac, kRock, t.dv[0], t.dsigma[0], t.dv[1]);
        CHECK(got.v == doctest::Approx(want.v).epsilon(1e-13));
        CHECK(got.sigma == doctest::Approx(want.sigma).epsilon(1e-13));
    }
}

TEST_CASE("linear limit of D_1 matches the hand-derived linear operator") {
    // Differentiating the linear conditions once and converting to spatial
    // derivatives on the + side gives
    //   dv+/dx    = (rho0 c0^2 / (rho1 c1^2)) dv-/dx
    //   dsig+/dx  = (rho1/rho0) dsig-/dx + (rho1/rho0)(rho0 c0^2/K) d2sig-/dx2.
    const MaterialParams other{2000.0, 3200.0};
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, other, 1);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        LeftTraces t = random_traces(rng, 2, 1.0, 1.0);
        // Shrink both fields: the law carries terms quadratic in the velocity
        // derivatives, so the linear operator only emerges when those are
        // negligible against the linear stress terms.
        for (double& v : t.dv) v *= 1e-8;
        for (double& s : t.dsigma) s *= 1e-3;
        const Vec2 d1 = ops.apply(1, t);
        const double kappa = kRock.rho * kRock.c * kRock.c / kFrac.K;
        const double want_v = kRock.rho * kRock.c * kRock.c /
                              (other.rho * other.c * other.c) * t.dv[1];
        const double want_s =
            other.rho / kRock.rho * (t.dsigma[1] + kappa * t.dsigma[2]);
        CHECK(d1.v == doctest::Approx(want_v).epsilon(1e-6));
        CHECK(d1.sigma == doctest::Approx(want_s).epsilon(1e-6));
    }
}

TEST_CASE("time consistency: d/dt D_m along a manufactured path builds D_{m+1}") {
    // Left traces follow polynomials in t that satisfy the substitution rules
    //   d/dt dv_j = (1/rho0) dsig_{j+1},  d/dt dsig_j = rho0 c0^2 dv_{j+1}
    // exactly (orders beyond `top` frozen at zero). Then the finite-difference
    // time derivative of D_m must equal (-A1) D_{m+1}.
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, kRock, 5);
    const int top = 6;
    const int n_atoms = 2 * (top + 1);

    std::vector<double> base(static_cast<std::size_t>(n_atoms));
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j <= top; ++j) {
        base[static_cast<std::size_t>(2 * j)] = 0.2 * u(rng);
        base[static_cast<std::size_t>(2 * j + 1)] = 0.2 * kFrac.K * kFrac.d * u(rng);
    }
    base[1] = -std::abs(base[1]);

    const auto rule = [&](const std::vector<double>& a) {
        std::vector<double> d(a.size(), 0.0);
        for (int j = 0; j < top; ++j) {
            d[static_cast<std::size_t>(2 * j)] = a[static_cast<std::size_t>(2 * j + 3)] / kRock.rho;
            d[static_cast<std::size_t>(2 * j + 1)] =
                kRock.rho * kRock.c * kRock.c * a[static_cast<std::size_t>(2 * j + 2)];
        }
        return d;
    };
    const auto traces_at = [&](double t) {
        LeftTraces tr = LeftTraces::zeros(top);
        std::vector<double> term = base;
        std::vector<double> acc(base.size(), 0.0);
        double fact = 1.0;
        for (int i = 0; i <= top + 1; ++i) {
            for (std::size_t a = 0; a < acc.size(); ++a) acc[a] += term[a] / fact;
            term = rule(term);
            for (double& v : term) v *= t;
            fact *= (i + 1);
            if (t == 0.0) break;
        }
        for (int j = 0; j <= top; ++j) {
            tr.dv[j] = acc[static_cast<std::size_t>(2 * j)];
            tr.dsigma[j] = acc[static_cast<std::size_t>(2 * j + 1)];
        }
        return tr;
    };

    // The path varies on the acoustic time scale (~1/c), so the FD step must
    // sit well below it for the O(dt^2) truncation to clear the tolerance.
    const double dt = 1e-7;
    const LeftTraces t0 = traces_at(0.0);
    const LeftTraces tp = traces_at(dt);
    const LeftTraces tm = traces_at(-dt);
    for (int m = 0; m <= 4; ++m) {
        const Vec2 fd = {(ops.apply(m, tp).v - ops.apply(m, tm).v) / (2.0 * dt),
                         (ops.apply(m, tp).sigma - ops.apply(m, tm).sigma) / (2.0 * dt)};
        const Vec2 next = ops.apply(m + 1, t0);
        // (-A1) = [[0, 1/rho1], [rho1 c1^2, 0]] applied to D_{m+1}.
        const double want_v = next.sigma / kRock.rho;
        const double want_s = kRock.rho * kRock.c * kRock.c * next.v;
        CHECK(fd.v == doctest::Approx(want_v).epsilon(1e-6));
        CHECK(fd.sigma == doctest::Approx(want_s).epsilon(1e-6));
    }
}

TEST_CASE("operator jacobians match central finite differences") {
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, kRock, 5);
    std::mt19937 rng(23);
    for (int m = 0; m <= 5; ++m) {
        for (int trial = 0; trial < 20; ++trial) {
            const LeftTraces base = random_traces(rng, m + 1, 0.5, 0.3 * kFrac.K * kFrac.d);
            for (int a = 0; a < ops.atom_count(m); ++a) {
                const int j = a / 2;
                if (j > base.order()) continue; // truncated atom, derivative unused
                const double scale = a % 2 == 0 ? 1.0 : kFrac.K * kFrac.d;
                const double h = 1e-6 * scale;
                LeftTraces tp = base, tm = base;
                if (a % 2 == 0) {
                    tp.dv[j] += h;
                    tm.dv[j] -= h;
                } else {
                    tp.dsigma[j] += h;
                    tm.dsigma[j] -= h;
                }
                const Vec2 fd = {(ops.apply(m, tp).v - ops.apply(m, tm).v) / (2.0 * h),
                                 (ops.apply(m, tp).sigma - ops.apply(m, tm).sigma) / (2.0 * h)};
                const Vec2 an = ops.apply_jacobian(m, a, base);
                CHECK(an.v == doctest::Approx(fd.v).epsilon(5e-5));
                CHECK(an.sigma == doctest::Approx(fd.sigma).epsilon(5e-5));
            }
        }
    }
}

TEST_CASE("operator dump is stable for the trivial components") {
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, kRock, 1);
    const std::string text = ops.dump();
    CHECK(text.find("D0 sigma (s 0)") != std::string::npos);
    CHECK(text.find("D0 v") != std::string::npos);
    CHECK(text.find("D1") != std::string::npos);
}

TEST_CASE("admissibility margin rejects values at the pole") {
    const JumpOperatorSet ops = build_jump_operators(kFrac, kRock, kRock, 0);
    LeftTraces t = LeftTraces::zeros(1);
    t.dsigma[0] = kFrac.K * kFrac.d * (1.0 - 1e-13);
    CHECK_THROWS_AS(ops.apply(0, t), AdmissibilityError);
}
