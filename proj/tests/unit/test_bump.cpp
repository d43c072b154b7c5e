#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclab/bump.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/residual.hpp"

using namespace fraclab;

namespace {

const BumpProfile& bump_09() {
    static const BumpProfile b = build_bump(0.9, 0.25, make_ignition(0.25), 1);
    return b;
}

}  // namespace

TEST_CASE("staged slopes for theta = 0.9, theta0 = 0.25") {
    const BumpProfile& b = bump_09();
    CHECK(b.theta0_prime == doctest::Approx(0.4125).epsilon(1e-15));
    CHECK(b.N == 1);
    REQUIRE(b.slopes.size() == 1);
    CHECK(b.slopes[0] == doctest::Approx(0.24375).epsilon(1e-15));
    CHECK(b.intercepts[0] == doctest::Approx(0.65625).epsilon(1e-15));
    CHECK(b.R_prime == doctest::Approx(0.65625 / 0.24375).epsilon(1e-14));
    CHECK(b.phi(1.0) == doctest::Approx(0.4125).epsilon(1e-14));
    CHECK(b.phi(b.R_prime) <= 1e-14);
    CHECK(b.phi(0.0) == 0.9);
    // The smoothed segment is C^1 where it meets the plateau and the line.
    CHECK(std::abs(b.phi_prime(1e-9)) <= 1e-6);
    CHECK(b.phi_prime(0.5 + 1e-9) == doctest::Approx(-(0.9 - 0.4125)).epsilon(1e-6));
}

TEST_CASE("a second line is needed for theta = 0.8, theta0 = 0.3") {
    const BumpProfile b = build_bump(0.8, 0.5, make_ignition(0.3), 1);
    CHECK(b.theta0_prime == doctest::Approx(0.425).epsilon(1e-15));
    CHECK(b.N == 2);
    REQUIRE(b.breakpoints.size() == 3);
    CHECK(b.breakpoints[2] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(b.slopes[1] <= 0.5 * b.slopes[0]);
    // The second line starts at level theta - 2 (theta - theta0').
    CHECK(b.intercepts[1] - b.slopes[1] * 3.0 == doctest::Approx(0.8 - 2.0 * 0.375).epsilon(1e-12));
    CHECK(b.epsilon > 0.0);
}

TEST_CASE("bump stays between theta on the left half-line and zero past its support") {
    const BumpProfile& b = bump_09();
    CHECK(b.epsilon > 0.0);
    CHECK(b.line_margin > 0.0);
    CHECK(b.R_theta >= 1.0);
    CHECK(b.support_end == b.R_theta);
    double prev = b.theta;
    for (int i = 0; i <= 4000; ++i) {
        const double x = -0.1 * b.R_theta + 1.2 * b.R_theta * i / 4000.0;
        const double u = b.value(x);
        CHECK(u <= prev + 1e-14);
        prev = u;
        if (x <= b.lift_shift) CHECK(u == doctest::Approx(b.theta).epsilon(1e-12));
        if (x >= b.R_theta) CHECK(u == 0.0);
        CHECK(u >= b.phi((x - b.lift_shift) / b.scale_r) - 1e-12);
    }
}

TEST_CASE("tabulated and directly integrated profiles agree") {
    BumpProfile direct = bump_09();
    direct.table.reset();
    const BumpProfile& b = bump_09();
    double worst = 0.0;
    double worst_slope = 0.0;
    for (int i = 0; i <= 997; ++i) {
        const double xi = -0.1 + (b.R_prime + 0.2) * i / 997.0;
        worst = std::max(worst, std::abs(b.smooth(xi) - direct.smooth(xi)));
        worst_slope = std::max(worst_slope, std::abs(b.smooth_prime(xi) - direct.smooth_prime(xi)));
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_slope <= 1e-6);
}

TEST_CASE("bump margin is positive at fresh radii") {
    const BumpProfile& b = bump_09();
    const ReactionSpec f = make_ignition(0.25);
    const QuadratureScheme q = QuadratureScheme::make(0.25, 1);
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double rho = b.R_theta * U(rng);
        const QuadratureResult m = bump_margin(b, f, rho, q);
        CHECK(m.value > m.error);
    }
}

TEST_CASE("bump construction rejects bad inputs") {
    CHECK_THROWS_AS(build_bump(0.9, 0.25, make_kpp(), 1), ContractError);
    CHECK_THROWS_AS(build_bump(0.2, 0.25, make_ignition(0.25), 1), ContractError);
    CHECK_THROWS_AS(build_bump(0.9, 0.25, make_ignition(0.25), 3), ContractError);
}

TEST_CASE("self-similar rate") {
    CHECK(self_similar_rate(0.5, 0.1, 1.0, 2.0) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(self_similar_rate(0.25, 0.5, 1.0, 1.0) == doctest::Approx(16.0).epsilon(1e-14));
    CHECK_THROWS_AS(self_similar_rate(0.5, 0.0, 1.0, 2.0), ContractError);
}

TEST_CASE("self-similar subsolution") {
    const BumpProfile& b = bump_09();
    const SelfSimilarSub sub(b);
    const double s = 0.25;
    CHECK(sub.b() == doctest::Approx(self_similar_rate(s, b.epsilon, b.lipschitz, b.support_end)).epsilon(1e-15));
    const TimeWindow w = sub.window();
    CHECK(w.closed_lo);
    CHECK(w.lo == doctest::Approx(std::pow(sub.b(), 2.0 * s)).epsilon(1e-14));
    CHECK(w.contains(w.lo));

    const double t0 = w.lo;
    // At the window start Psi is the bump itself.
    for (double x : {0.0, 0.5 * b.R_theta, 0.99 * b.R_theta})
        CHECK(sub.value(t0, x) == doctest::Approx(b.value(x)).epsilon(1e-12));
    for (double t : {t0, 10.0 * t0, 1e3 * t0}) {
        CHECK(sub.value(t, 0.0) == b.theta);
        CHECK(sub.level(t, 0.5) / std::pow(t, 1.0 / (2.0 * s)) ==
              doctest::Approx(b.level(0.5) / sub.b()).epsilon(1e-12));
    }
    // Analytic time derivative against a centered difference.
    const double t = 7.0 * t0;
    for (double frac : {0.3, 0.8, 0.95}) {
        const double z = frac * sub.level(t, 1e-3);
        const double h = 1e-4 * t;
        const double fd = (sub.value(t + h, z) - sub.value(t - h, z)) / (2.0 * h);
        CHECK(sub.time_derivative(t, z) == doctest::Approx(fd).epsilon(1e-5).scale(1e-12));
        CHECK(sub.time_derivative(t, z) >= 0.0);
    }

    SamplingPlan plan;
    plan.time_samples = 3;
    plan.space_samples = 96;
    plan.junction_samples = 4;
    const ResidualReport rep = certify(sub, make_ignition(0.25), BarrierMode::sub, plan);
    CHECK(rep.verdict == Verdict::certified_sub);
    CHECK(rep.max_residual <= 0.0);
}
