#pragma once

#include <vector>

#include "fraclab/barrier.hpp"
#include "fraclab/reactions.hpp"

namespace fraclab {

struct IgnitionSequences {
    std::vector<double> alphas;  ///< alpha_0 .. alpha_k
    std::vector<double> betas;   ///< beta_n = 2^{-alpha_n}
};

/// alpha_n = sum_{j=1}^n (k-n+j)(2s)^{j-1}. Verifies the product and sum
/// identities of the sequence before returning.
IgnitionSequences build_sequences(int k, double s);

/// (2^{k/(1-2s)}, 2^{(2s)^{-k}}); may be empty.
TimeWindow ignition_window(int k, double s);

/// log2 of beta_n t^{1/(2s)-(2s)^n} / (2 beta_{n-1} t^{1/(2s)-(2s)^{n-1}}).
/// Nonnegative for n >= 2 once t >= 2^{k/(1-2s)}; n = 1 needs
/// t >= 2^{(k+1)/(1-2s)}.
double sequence_gap_log2(const IgnitionSequences& seq, int n, double s, double t);

/// The travelling supersolution for ignition reactions: 1 behind
/// c_* t^{1/(2s)}, then k+1 linear pieces down to theta_*/2, then an
/// algebraic tail of order |x|^{-2s}.
class IgnitionSuperBarrier : public Barrier {
public:
    int k = 0;
    double s_value = 0.0;
    double theta0 = 0.0;
    double theta_star = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> thetas;  ///< theta_{-1} .. theta_k (size k + 2)
    double c_star = 0.0;
    double C_s = 0.0;
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    double f_sup = 0.0;
    TimeWindow validity;

    std::string id() const override;
    std::string kind() const override { return "ignition_super"; }
    BarrierMode intended_mode() const override { return BarrierMode::super; }
    double s() const override { return s_value; }
    int dimension() const override { return 1; }
    bool radial() const override { return false; }
    TimeWindow window() const override { return validity; }

    /// c_* t^{1/(2s)}.
    double origin(double t) const override;
    double value(double t, double z) const override;
    double time_derivative(double t, double z) const override;
    Profile profile_at(double t) const override;
    std::vector<double> junctions(double t) const override;
    std::vector<double> sample_points(double t, int count) const override;

    /// l_n(t) = sum_{j<=n} beta_j t^{1/(2s)-(2s)^j}; n = -1 gives 0.
    double l(int n, double t) const;
    double l_dot(int n, double t) const;
    /// Local position of the rightmost point where the barrier is >= lambda.
    double level_local(double t, double lambda) const;
    /// The bound (c_* + 2 + sqrt(c_*) lambda^{-1/(2s)}) t^{1/(2s)}.
    double level_bound(double t, double lambda) const;

private:
    void require_time(double t) const;
    double tail_a() const;
    double tail_b(double t) const;
};

/// Builds Phi^k for an ignition reaction. Throws WindowError when the
/// validity window is empty and ContractError unless 0 < s < 1/2.
IgnitionSuperBarrier build_supersolution(int k, double s, const ReactionSpec& f);

/// C_s = max{c_s / (2s(1-2s)), 1} with the calibrated c_s.
double ramp_constant(double s);

}  // namespace fraclab
