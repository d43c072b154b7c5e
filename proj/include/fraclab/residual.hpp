#pragma once

#include <string>
#include <vector>

#include "fraclab/barrier.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/reactions.hpp"

namespace fraclab {

/// d_t Phi + (-Delta)^s Phi - f(Phi) at one point, with the quadrature error.
struct Residual {
    double value = 0.0;
    double error = 0.0;
    double time_derivative = 0.0;
    double operator_value = 0.0;
    double reaction = 0.0;
};

/// Residual at local position z (radius for radial barriers).
Residual residual_at(const Barrier& barrier, const ReactionSpec& f, double t, double z, const QuadratureScheme& scheme);

struct SamplingPlan {
    int time_samples = 8;
    int space_samples = 512;
    int junction_samples = 32;       ///< per junction
    double junction_radius = 1e-3;   ///< relative to the adjacent piece length
    /// Used only for barriers whose window is unbounded above: certify on
    /// [lo, horizon_factor * lo].
    double horizon_factor = 1e3;
};

enum class Verdict { certified_super, certified_sub, failed };
const char* to_string(Verdict v);

struct ResidualSample {
    double t = 0.0;
    double z = 0.0;
    double residual = 0.0;
    double error = 0.0;
};

struct ResidualReport {
    std::string barrier_id;
    BarrierMode mode = BarrierMode::super;
    double tolerance = 0.0;
    std::vector<double> time_samples;
    std::vector<ResidualSample> samples;
    double min_residual = 0.0;
    double max_residual = 0.0;
    ResidualSample worst;
    /// Points where the quadrature error estimate exceeds the slack.
    int unresolved = 0;
    Verdict verdict = Verdict::failed;
};

/// The times a plan visits inside the barrier's window (log-spaced, interior).
std::vector<double> plan_times(const Barrier& barrier, const SamplingPlan& plan);

/// Certifies the barrier as a super- or subsolution on the plan. The
/// tolerance is 1e-2 max(1, |f|_inf); a point passes when its residual clears
/// the tolerance by more than the quadrature error estimate.
ResidualReport certify(const Barrier& barrier, const ReactionSpec& f, BarrierMode mode,
                       const SamplingPlan& plan = {}, const QuadratureScheme* scheme = nullptr);

/// The one-dimensional profile that is 1 left of A1, theta right of A2 and
/// linear between.
Profile ramp_profile(double A1, double A2, double theta);

/// Checks (-d_xx)^s phi(x) >= -C_s (1 - theta)(A2 - A1)^{-2s} - 1e-6 where
/// phi touches the profile above at x. Throws ContractError if phi is not
/// below that profile or does not touch it at x.
bool check_ramp_bound(double A1, double A2, double theta, double s, const Profile& phi, double x);

}  // namespace fraclab
