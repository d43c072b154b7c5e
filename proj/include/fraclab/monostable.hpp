#pragma once

#include <string>
#include <vector>

#include "fraclab/barrier.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/reactions.hpp"

namespace fraclab {

/// Constants of the far-field bound
///   (-Delta)^s phi(x) <= -c X(theta1)^d |x|^{-d-2s} + C |x|^{-2s} phi(x)
/// for |x| >= X(tau0 theta1), found by a sampling sweep.
struct FarFieldConstants {
    double c_far = 0.0;
    double C_far = 0.0;
    double tau0 = 0.25;
    int halvings = 0;
    /// Smallest slack seen on the fresh re-sample.
    double resample_slack = 0.0;
    std::string provenance;
};

/// X(u) = (a^{-1}(u^{-nu} + b))^{1/beta}.
double far_field_X(double a, double b, double beta, double nu, double u);

/// The worst admissible profile: theta1 inside X(theta1), (a|x|^beta - b)^{-1/nu}
/// outside.
Profile far_field_profile(double a, double b, double beta, double nu, double theta1, int d);

/// Right-hand side minus left-hand side of the bound at radius r.
double far_field_slack(const FarFieldConstants& k, double s, double beta, double nu, double theta1, int d, double a,
                     double b, double r, const QuadratureScheme& scheme);

/// Sweeps a in [1e-3, 1], b in [1, 1e6] and 64 radii per case, then checks a
/// fresh random re-sample; tau0 is halved (up to 12 times) until it passes.
FarFieldConstants estimate_far_field_constants(double s, double beta, double nu, double theta1, int d);

/// phi_theta: y on [0, lo], theta on [hi, 1], concave C^2 cubic pieces between
/// with phi'' a hat of height -curvature centred at theta.
struct SmoothingSpline {
    double theta = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double curvature = 0.0;  ///< C_theta = max |phi''|

    double operator()(double y) const;
    double prime(double y) const;
    double second(double y) const;
    /// Smallest y with phi(y) = v, for v in [0, theta].
    double inverse(double v) const;
};

SmoothingSpline make_smoothing(double theta, double theta1, double theta2);

/// The expanding subsolution for alpha-monostable reactions:
/// theta inside X_t(theta2), phi_theta(psi_theta(t, |x|)) outside, with
/// psi_theta(t, r) = (a1^{-1} t^{1-kappa} (r^beta - a2 t^kappa))^{-1/(alpha-1)}.
class MonostableSub : public Barrier {
public:
    double alpha = 0.0;
    double s_value = 0.0;
    int d = 1;
    double theta = 0.0;
    double theta0 = 0.0;
    double gamma = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    double nu = 0.0;
    double tau = 0.0;
    double delta = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    FarFieldConstants far_field;
    SmoothingSpline smoothing;
    double T_theta = 1.0;
    bool T_certified = false;

    std::string id() const override;
    std::string kind() const override { return "monostable_sub"; }
    BarrierMode intended_mode() const override { return BarrierMode::sub; }
    double s() const override { return s_value; }
    int dimension() const override { return d; }
    bool radial() const override { return true; }
    /// [T_theta, inf); T_theta is 1 until find_T_theta runs.
    TimeWindow window() const override;

    double value(double t, double r) const override;
    double time_derivative(double t, double r) const override;
    Profile profile_at(double t) const override;
    std::vector<double> junctions(double t) const override;
    std::vector<double> sample_points(double t, int count) const override;

    /// psi_theta(t, r); +inf at or inside the pole (a2 t^kappa)^{1/beta}.
    double psi(double t, double r) const;
    double psi_t(double t, double r) const;
    /// X_t(u) = (u^{1-alpha} a1 t^{kappa-1} + a2 t^kappa)^{1/beta}.
    double X(double t, double u) const;
    /// Largest radius where the barrier is >= lambda, for lambda in (0, theta].
    double level(double t, double lambda) const;
};

/// Builds the barrier with every constant in order: theta1, theta2, the sweep
/// constants, tau, delta, a3, a1, a2 and the smoothing spline. Throws
/// ContractError unless f is alpha-monostable with alpha > 1 and
/// s < min{alpha / (2(alpha - 1)), 1}.
MonostableSub build_monostable_sub(double theta, const ReactionSpec& f, double s, int d);

/// Largest residual of the barrier over its certification radii at time t.
double monostable_max_residual(const MonostableSub& barrier, const ReactionSpec& f, double t,
                               const QuadratureScheme& scheme);

/// Smallest T on {1, 2, 4, ..., 2^30} such that the residual stays below
/// `tolerance` at three times per dyadic block of [T, 16 T). Records the result
/// in the barrier; throws ConstructionError when the ladder is exhausted.
double find_T_theta(MonostableSub& barrier, const ReactionSpec& f, double tolerance);

}  // namespace fraclab
