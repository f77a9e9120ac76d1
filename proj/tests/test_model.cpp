#include "fracwave/errors.hpp"
#include "fracwave/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fracwave;

namespace {

WaveletSpec paper_wavelet(double epsilon = 1.0) {
    WaveletSpec w;
    w.epsilon = epsilon;
    w.f_c = 50.0;
    w.t0 = 0.052;
    return w;
}

} // namespace

TEST_CASE("wavelet vanishes outside and at special points of its support") {
    const WaveletSpec w = paper_wavelet();
    CHECK(wavelet_eval(w, 0.0) == 0.0);
    CHECK(wavelet_eval(w, -1e-3) == 0.0);
    CHECK(wavelet_eval(w, 1.0 / w.f_c) == 0.0);
    CHECK(wavelet_eval(w, 1.0 / w.f_c + 1e-6) == 0.0);
    // At xi = 1/(2 f_c) every sin(2^{m-1} pi) vanishes.
    CHECK(wavelet_eval(w, 0.5 / w.f_c) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("wavelet value at quarter support by direct summation") {
    const WaveletSpec w = paper_wavelet();
    // beta_m * omega_c * xi = 2^{m-1} pi/2 at xi = 1/(4 f_c):
    // sin -> {1, 0, -1(? sin(pi)=0), ...}; sum the terms independently.
    const double xi = 0.25 / w.f_c;
    double expected = 0.0;
    for (int m = 0; m < 4; ++m)
        expected += WaveletSpec::a[m] * std::sin(std::pow(2.0, m) * std::numbers::pi / 2.0);
    // sin(pi/2)=1, sin(pi)=0, sin(2pi)=0, sin(4pi)=0 -> expected = a_1 = 1.
    CHECK(expected == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wavelet_eval(w, xi) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("wavelet smoothness sums vanish") {
    double s1 = 0.0, s3 = 0.0, s5 = 0.0;
    for (int m = 0; m < 4; ++m) {
        const double b = WaveletSpec::beta[m];
        s1 += WaveletSpec::a[m] * b;
        s3 += WaveletSpec::a[m] * b * b * b;
        s5 += WaveletSpec::a[m] * b * b * b * b * b;
    }
    CHECK(std::abs(s1) <= 1e-12);
    CHECK(std::abs(s3) <= 1e-12);
    CHECK(std::abs(s5) <= 1e-12);
}

TEST_CASE("grid construction and node placement") {
    const Grid g = make_grid(0.0, 400.0, 400, 0.9, 2800.0);
    CHECK(g.dx == doctest::Approx(400.0 / 399.0).epsilon(1e-15));
    CHECK(g.x(0) == 0.0);
    CHECK(g.x(399) == doctest::Approx(400.0).epsilon(1e-15));
    CHECK(g.dt == doctest::Approx(0.9 * g.dx / 2800.0).epsilon(1e-15));
    CHECK_THROWS_AS(make_grid(0.0, 400.0, 400, 1.5, 2800.0), ConfigError);
    CHECK_THROWS_AS(make_grid(0.0, 400.0, 400, 0.9, -1.0), ConfigError);
}

TEST_CASE("initial condition: support interval and pure right-going structure") {
    const MaterialParams rock{1200.0, 2800.0};
    const Grid g = make_grid(0.0, 400.0, 400, 0.9, rock.c);
    const WaveletSpec w = paper_wavelet(calibrate_epsilon(0.1, rock.c));
    const FieldState s = initial_condition(g, w, rock, 200.67);
    CHECK(s.t == w.t0);

    // Support in x is (c0 (t0 - 1/f_c), c0 t0) = (89.6, 145.6) m.
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        if (x <= 89.6 || x >= 145.6) {
            CHECK(s.v[i] == 0.0);
            CHECK(s.sigma[i] == 0.0);
        }
        // sigma = -rho0 c0 v at every node.
        CHECK(s.sigma[i] == doctest::Approx(-rock.rho * rock.c * s.v[i]).epsilon(1e-13));
    }
    CHECK(peak_velocity(s) == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("initial condition rejects support overlapping the fracture") {
    const MaterialParams rock{1200.0, 2800.0};
    const Grid g = make_grid(0.0, 400.0, 400, 0.9, rock.c);
    WaveletSpec w = paper_wavelet(1.0);
    w.t0 = 0.08; // support reaches 224 m > alpha
    CHECK_THROWS_AS(initial_condition(g, w, rock, 200.67), ConfigError);
}

TEST_CASE("zero amplitude gives the zero field") {
    const MaterialParams rock{1200.0, 2800.0};
    const Grid g = make_grid(0.0, 400.0, 400, 0.9, rock.c);
    const FieldState s = initial_condition(g, paper_wavelet(0.0), rock, 200.67);
    CHECK(peak_velocity(s) == 0.0);
}

TEST_CASE("peak velocity definition") {
    FieldState s = FieldState::zeros(3, 0.0);
    CHECK(peak_velocity(s) == 0.0);
    s.v = {0.0, -0.3, 0.1};
    CHECK(peak_velocity(s) == doctest::Approx(0.3));
}

TEST_CASE("epsilon calibration reproduces the requested velocity amplitude") {
    const double c0 = 2800.0;
    for (const double v0 : {0.01, 0.1, 0.4}) {
        const WaveletSpec w = paper_wavelet(calibrate_epsilon(v0, c0));
        // scan |h|/c0 over the support
        double peak = 0.0;
        for (int i = 0; i <= 20000; ++i) {
            const double xi = (1.0 / w.f_c) * i / 20000.0;
            peak = std::max(peak, std::abs(wavelet_eval(w, xi)) / c0);
        }
        CHECK(peak == doctest::Approx(v0).epsilon(1e-7));
    }
}

TEST_CASE("parameter validation") {
    const MaterialParams bad{-1.0, 2800.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    FractureParams f{200.0, 1.3e9, 6.1e-4};
    CHECK_NOTHROW(f.validate());
    f.sigma_bar = f.K * f.d * 2.0;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.sigma_bar = 0.5 * f.K * f.d;
    CHECK_NOTHROW(f.validate());
    f.h_bar = f.d / 2.0;
    CHECK_THROWS_AS(f.validate(), ConfigError);
}
