#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fraclab {

enum class ReactionKind { ignition, alpha_monostable, kpp, bistable };

const char* to_string(ReactionKind kind);
ReactionKind reaction_kind_from_string(const std::string& name);

/// A reaction term f on [0, 1] with its class data. Immutable once built.
class ReactionSpec {
public:
    ReactionKind kind() const { return kind_; }
    /// Ignition temperature, or the end of the power-law branch for monostable kinds.
    double theta0() const { return theta0_; }
    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }
    double gamma_prime() const { return gamma_prime_; }
    double lipschitz() const { return lipschitz_; }
    double sup_norm() const { return sup_norm_; }
    /// Shape tag used for serialization ("quadratic_cap", "hermite_glue", ...).
    const std::string& shape() const { return shape_; }

    /// f(u), with u clamped to [0, 1] first.
    double operator()(double u) const;
    /// out[i] = f(in[i]) for n entries; in and out may alias.
    void apply(const double* in, double* out, std::size_t n) const;

    /// Copy whose evaluator is replaced; the recorded constants are kept, so
    /// validate() can detect the mismatch.
    ReactionSpec with_evaluator(std::function<double(double)> f) const;

private:
    friend ReactionSpec make_ignition(double, const std::string&);
    friend ReactionSpec make_alpha_monostable(double, double, double, double);
    friend ReactionSpec make_kpp(double, double);
    friend ReactionSpec make_bistable(double);

    double raw(double u) const;
    void record_bounds();

    ReactionKind kind_ = ReactionKind::ignition;
    std::string shape_;
    double theta0_ = 0.0;
    double alpha_ = 1.0;
    double gamma_ = 0.0;
    double gamma_prime_ = 0.0;
    double lipschitz_ = 0.0;
    double sup_norm_ = 0.0;
    // Hermite glue for the monostable kind on [theta0, 1].
    double glue_y0_ = 0.0;
    double glue_m0_ = 0.0;
    double glue_m1_ = 0.0;
    std::function<double(double)> custom_;
};

/// Ignition reaction vanishing on [0, theta0]. Shapes: "quadratic_cap"
/// (4(u-theta0)(1-u)/(1-theta0)^2) and "cubic_cap" (C^1 at theta0).
ReactionSpec make_ignition(double theta0, const std::string& shape = "quadratic_cap");
/// f = gamma u^alpha on (0, theta0], cubic Hermite glue down to f(1) = 0.
ReactionSpec make_alpha_monostable(double alpha, double gamma, double gamma_prime, double theta0);
/// f = r u (1 - u); recorded with alpha = 1 and the power-law bounds on (0, theta0].
ReactionSpec make_kpp(double rate = 1.0, double theta0 = 0.5);
/// f = u (1 - u)(u - theta0) scaled to unit slope magnitude at 0; theta0 < 1/2.
ReactionSpec make_bistable(double theta0);

struct Violation {
    std::string invariant;
    double u = 0.0;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Re-checks the class invariants on 10^4 sample points.
ValidationReport validate(const ReactionSpec& spec);

/// 0.99 times the minimum of f over a 10^4-point sample of [lo, hi].
double positive_floor(const ReactionSpec& f, double lo, double hi);

}  // namespace fraclab
