#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/heat_kernel.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {

double closed_form_c1(double s) {
    return s * std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
}

// Integral of (1 + h^2)^{-1-s} over R via h = tan(v) and composite Simpson.
double transverse_integral(double s) {
    const int n = 20000;
    const double a = -std::numbers::pi / 2.0;
    const double b = std::numbers::pi / 2.0;
    const double step = (b - a) / n;
    auto g = [s](double v) { return std::pow(std::cos(v), 2.0 * s); };
    double sum = g(a) + g(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(a + i * step);
    return sum * step / 3.0;
}

Profile ramp_psi(double a1, double a2, double theta) {
    auto f = [=](double x) {
        if (x <= a1) return 1.0;
        if (x >= a2) return theta;
        return 1.0 - (1.0 - theta) * (x - a1) / (a2 - a1);
    };
    Profile p = Profile::line(f, Tail{1.0}, Tail{theta});
    p.with_kinks({a1, a2}).with_scales(a2 - a1, a2 - a1);
    return p;
}

}  // namespace

TEST_CASE("spectral_apply annihilates constants and scales single modes") {
    GridField c(1, 5.0, 64, 0.7);
    GridField out = spectral_apply(c, 0.3);
    for (double v : out.values()) CHECK(std::abs(v) < 1e-14);

    const double hw = 3.0;
    const double L = 2.0 * hw;
    for (double s : {0.2, 0.5, 0.75}) {
        for (int mode : {1, 3, 31}) {
            const double k = 2.0 * std::numbers::pi * mode / L;
            GridField g = GridField::sample(1, hw, 64, [k](double x, double) { return std::cos(k * x); });
            GridField r = spectral_apply(g, s);
            const double factor = std::pow(k, 2.0 * s);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(r[i] - factor * g[i]));
            CHECK(worst <= 1e-12 * factor);
        }
    }
}

TEST_CASE("spectral_apply composes: two quarter powers make a half power") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    const double hw = 4.0;
    const double k0 = std::numbers::pi / hw;
    std::vector<double> amp(10), phase(10);
    for (int m = 0; m < 10; ++m) {
        amp[m] = nd(rng);
        phase[m] = nd(rng);
    }
    GridField g = GridField::sample(2, hw, 32, [&](double x, double y) {
        double v = 0.0;
        for (int m = 0; m < 10; ++m) v += amp[m] * std::cos(k0 * (m % 4) * x + k0 * (m / 4) * y + phase[m]);
        return v;
    });
    GridField twice = spectral_apply(spectral_apply(g, 0.25), 0.25);
    GridField once = spectral_apply(g, 0.5);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        scale = std::max(scale, std::abs(once[i]));
        diff = std::max(diff, std::abs(once[i] - twice[i]));
    }
    CHECK(diff <= 1e-10 * scale);
}

TEST_CASE("spectral_apply rejects non-finite input") {
    GridField g(1, 1.0, 16, 0.0);
    g[3] = std::nan("");
    CHECK_THROWS_AS(spectral_apply(g, 0.5), DataError);
}

TEST_CASE("semigroup_step: constants, composition, order, contract") {
    GridField one(1, 10.0, 128, 1.0);
    GridField r = semigroup_step(one, 0.4, 3.0);
    for (double v : r.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    GridField bump = GridField::sample(1, 10.0, 256, [](double x, double) { return std::exp(-x * x); });
    GridField ab = semigroup_step(semigroup_step(bump, 0.3, 0.5), 0.3, 1.25);
    GridField direct = semigroup_step(bump, 0.3, 1.75);
    for (std::size_t i = 0; i < bump.size(); ++i)
        CHECK(std::abs(ab[i] - direct[i]) <= 1e-12 * std::max(1e-3, std::abs(direct[i])));

    GridField u = GridField::sample(1, 10.0, 256, [](double x, double) { return 0.3 * std::exp(-x * x / 4.0); });
    GridField v = GridField::sample(1, 10.0, 256, [](double x, double) { return 0.5 * std::exp(-x * x / 9.0); });
    GridField su = semigroup_step(u, 0.5, 0.7);
    GridField sv = semigroup_step(v, 0.5, 0.7);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(su[i] <= sv[i] + 1e-12);

    CHECK_THROWS_AS(semigroup_step(u, 0.5, 0.0), ContractError);
}

TEST_CASE("calibrate_constant reproduces the Gamma closed form") {
    for (double s : {0.25, 0.5, 0.75}) {
        const double c = calibrate_constant(s, 1);
        CHECK(std::abs(c / closed_form_c1(s) - 1.0) <= 1e-5);
    }
}

TEST_CASE("calibrate_constant in two dimensions matches the transverse integral") {
    const double c1 = calibrate_constant(0.5, 1);
    const double c2 = calibrate_constant(0.5, 2);
    const double inner = transverse_integral(0.5);
    CHECK(inner == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(c2 / (c1 / inner) - 1.0) <= 1e-4);
    for (double s : {0.2, 0.75}) {
        const double ratio = calibrate_constant(s, 1) / transverse_integral(s);
        CHECK(std::abs(calibrate_constant(s, 2) / ratio - 1.0) <= 1e-4);
    }
}

TEST_CASE("calibrate_constant is deterministic") {
    const double a = calibrate_constant(0.37, 1, 24);
    const double b = calibrate_constant(0.37, 1, 24);
    CHECK(a == b);
}

TEST_CASE("quadrature annihilates constants") {
    for (double s : {0.1, 0.5, 0.9}) {
        QuadratureScheme q1 = QuadratureScheme::make(s, 1);
        CHECK(std::abs(quadrature_apply_at(Profile::constant(1, 1.0), 0.37, q1).value) <= 1e-12);
        QuadratureScheme q2 = QuadratureScheme::make(s, 2);
        CHECK(std::abs(quadrature_apply_at(Profile::constant(2, 1.0), 1.5, q2).value) <= 1e-12);
    }
}

TEST_CASE("quadrature requires declared tails") {
    Profile p = Profile::line([](double) { return 0.0; }, Tail{}, Tail{0.0});
    CHECK_THROWS_AS(quadrature_apply_at(p, 0.0, QuadratureScheme::make(0.5, 1)), ContractError);
}

TEST_CASE("quadrature refuses kinks for s >= 1/2") {
    Profile p = ramp_psi(0.0, 1.0, 0.5);
    CHECK_THROWS_AS(quadrature_apply_at(p, 1.0, QuadratureScheme::make(0.6, 1)), ContractError);
}

TEST_CASE("kink exactness against the closed form at the lower kink") {
    for (double s : {0.1, 0.25, 0.4}) {
        const double theta = 0.5;
        QuadratureScheme q = QuadratureScheme::make(s, 1);
        const double value = quadrature_apply_at(ramp_psi(0.0, 1.0, theta), 1.0, q).value;
        const double cs = closed_form_c1(s);
        const double expected = -cs * (1.0 - theta) * (1.0 / (2.0 * s) + 1.0 / (1.0 - 2.0 * s));
        CHECK(std::abs(value / expected - 1.0) <= 1e-4);
    }
    // The documented example: A1=0, A2=1, theta=0.5, s=0.25 gives -2 c_s.
    QuadratureScheme q = QuadratureScheme::make(0.25, 1);
    const double v = quadrature_apply_at(ramp_psi(0.0, 1.0, 0.5), 1.0, q).value;
    CHECK(std::abs(v / (-2.0 * closed_form_c1(0.25)) - 1.0) <= 1e-4);
}

TEST_CASE("declared algebraic tails enter through the analytic remainder") {
    // u(x) = (1+x^2)^{-1/2} has a 1/|x| tail.
    const double s = 0.4;
    QuadratureScheme q = QuadratureScheme::make(s, 1);
    Profile p = Profile::line([](double x) { return 1.0 / std::sqrt(1.0 + x * x); }, Tail{0.0, 1.0, 1.0},
                              Tail{0.0, 1.0, 1.0});
    const double with_tail = quadrature_apply_at(p, 0.0, q).value;
    Profile cut = Profile::line([](double x) { return 1.0 / std::sqrt(1.0 + x * x); }, Tail{0.0}, Tail{0.0});
    const double without = quadrature_apply_at(cut, 0.0, q).value;
    // The declared tail changes the answer by the analytic remainder only.
    const double H = 1e6;
    const double remainder = -2.0 * std::pow(H, -1.0 - 2.0 * s) / (1.0 + 2.0 * s) * q.normalization_constant;
    CHECK(with_tail - without == doctest::Approx(remainder).epsilon(1e-6));
}

TEST_CASE("cross-validation against the spectral operator, one dimension") {
    std::mt19937_64 rng(11);
    for (double s : {0.2, 0.5, 0.75}) {
        const double hw = 1024.0;
        const std::size_t n = 1u << 15;
        auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
        GridField g = GridField::sample(1, hw, n, [&](double x, double) { return gauss(x); });
        GridField ref = spectral_apply(g, s);
        double scale = 0.0;
        for (double v : ref.values()) scale = std::max(scale, std::abs(v));
        QuadratureScheme q = QuadratureScheme::make(s, 1);
        Profile p = Profile::line(gauss, Tail{0.0}, Tail{0.0});
        std::uniform_int_distribution<std::size_t> pick(n / 2 - 128, n / 2 + 128);
        for (int i = 0; i < 5; ++i) {
            const std::size_t j = pick(rng);
            const double val = quadrature_apply_at(p, g.coordinate(j), q).value;
            CHECK(std::abs(val - ref[j]) <= 1e-3 * scale);
        }
    }
}

TEST_CASE("fractional heat kernel reproduces the Cauchy and Poisson kernels at s = 1/2") {
    for (double z : {0.0, 0.3, 2.0, 17.0}) {
        CHECK(fractional_heat_kernel(0.5, 1, z) == doctest::Approx(1.0 / (std::numbers::pi * (1.0 + z * z))).epsilon(1e-8));
        CHECK(fractional_heat_kernel(0.5, 2, z) ==
              doctest::Approx(std::pow(1.0 + z * z, -1.5) / (2.0 * std::numbers::pi)).epsilon(1e-7));
    }
}

TEST_CASE("semigroup far field dominates c t |x|^{-d-2s}") {
    const double s = 0.3;
    const double theta = 0.5;
    const double t = 4.0;
    const double hw = 512.0;
    const std::size_t n = 1u << 14;
    GridField ind = GridField::sample(1, hw, n, [&](double x, double) {
        // Indicator of B_1 smoothed over a few cells.
        const double w = 4.0 * 2.0 * hw / n;
        return theta * 0.5 * (std::erf((1.0 - std::abs(x)) / w) + 1.0);
    });
    GridField out = semigroup_step(ind, s, t);
    const double c = far_field_constant(s, 1, theta);
    CHECK(c > 0.0);
    const double r = std::pow(t, 1.0 / (2.0 * s)) + 2.0;
    const std::size_t j = static_cast<std::size_t>(std::lround((r + hw) / out.spacing()));
    const double xj = out.coordinate(j);
    CHECK(out[j] >= c * t * std::pow(std::abs(xj), -1.0 - 2.0 * s));
}
