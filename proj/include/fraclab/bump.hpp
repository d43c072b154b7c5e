#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fraclab/barrier.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/reactions.hpp"

namespace fraclab {

/// Cubic Hermite table of the mollified unit-scale profile on [0, end].
struct BumpTable {
    double width = 0.0;  ///< mollifier width the table was built for
    double end = 0.0;
    double step = 0.0;
    std::vector<double> value;
    std::vector<double> slope;
};

/// A compactly supported, non-increasing profile u with
/// -(-Delta)^s u + f(u) >= epsilon > 0 on its support, together with its
/// radial version u(|x|) in dimension d.
///
/// The profile is built from a piecewise function phi on the unit scale
/// (theta on (-inf, 0], a smoothed segment, then ever flatter lines down to 0),
/// mollified with width mollify_width, stretched by scale_r and shifted right
/// by lift_shift.
struct BumpProfile {
    double theta = 0.0;
    double theta0 = 0.0;
    double theta0_prime = 0.0;
    double s = 0.0;
    int dimension = 1;
    int N = 1;
    /// 0, 1, x_2, ..., x_N: where successive pieces of phi start.
    std::vector<double> breakpoints;
    std::vector<double> slopes;      ///< k_1 .. k_N
    std::vector<double> intercepts;  ///< b_1 .. b_N
    double R_prime = 0.0;            ///< end of the support of phi
    double sup_operator = 0.0;       ///< C, an upper bound for (-d_xx)^s phi
    double delta = 0.0;              ///< lower bound of f on [theta0', theta]
    double scale_r = 1.0;
    double mollify_width = 0.0;      ///< on the unit scale of phi
    int mollify_retries = 0;
    double line_margin = 0.0;        ///< certified margin of the unshifted line profile
    double lift_shift = 0.0;         ///< 2R
    int lift_doublings = 0;
    double R_theta = 0.0;            ///< end of the support of u (after the shift)
    double support_end = 0.0;        ///< a
    double lipschitz = 0.0;          ///< L = sup |u'|
    double epsilon = 0.0;            ///< certified margin of the radial profile
    std::shared_ptr<const BumpTable> table;

    /// Rebuilds the table behind smooth(); call after the shape fields change.
    /// Without a matching table, smooth() integrates directly.
    void tabulate();

    /// phi and its derivative on the unit scale (before mollification).
    double phi(double xi) const;
    double phi_prime(double xi) const;
    /// The mollified phi and its derivative.
    double smooth(double xi) const;
    double smooth_prime(double xi) const;

    /// u on the line; theta for x <= lift_shift, 0 for x >= R_theta.
    double value(double x) const;
    double derivative(double x) const;
    /// Largest x with u(x) >= lambda.
    double level(double lambda) const;

    /// u as a line profile and u(|x|) as a radial profile in `dimension`.
    Profile line_profile() const;
    Profile radial_profile() const;
    /// Radial profile of x -> u(lambda |x|).
    Profile scaled_radial_profile(double lambda) const;
    /// Places where the profile changes character (mollified kinks).
    std::vector<double> feature_points() const;
};

/// Runs the staged construction. Throws ConstructionError when a slope
/// search or the final certification fails, ContractError on bad inputs.
BumpProfile build_bump(double theta, double s, const ReactionSpec& f, int dimension);

/// Residual margin -(-Delta)^s u + f(u) of the radial profile at radius rho.
QuadratureResult bump_margin(const BumpProfile& bump, const ReactionSpec& f, double rho, const QuadratureScheme& scheme);

/// b = ((2 s epsilon)^{-1} L a)^{1/(2s)}.
double self_similar_rate(double s, double epsilon, double lipschitz, double support_end);

/// Psi(t, x) = u(b t^{-1/(2s)} |x|), a subsolution for t >= b^{2s}.
class SelfSimilarSub : public Barrier {
public:
    explicit SelfSimilarSub(BumpProfile bump);

    std::string id() const override;
    std::string kind() const override { return "ignition_self_similar_sub"; }
    BarrierMode intended_mode() const override { return BarrierMode::sub; }
    double s() const override { return s_; }
    int dimension() const override { return bump_.dimension; }
    bool radial() const override { return true; }
    TimeWindow window() const override;

    double value(double t, double z) const override;
    double time_derivative(double t, double z) const override;
    Profile profile_at(double t) const override;
    std::vector<double> junctions(double t) const override;
    std::vector<double> sample_points(double t, int count) const override;

    double b() const { return b_; }
    const BumpProfile& bump() const { return bump_; }
    /// The radius where Psi(t, .) drops to lambda: C_lambda b^{-1} t^{1/(2s)}.
    double level(double t, double lambda) const;

private:
    double stretch(double t) const;

    BumpProfile bump_;
    double s_;
    double b_;
};

}  // namespace fraclab
