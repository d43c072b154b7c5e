#include "fraclab/reactions.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

constexpr std::size_t kValidationSamples = 10000;
constexpr std::size_t kBoundSamples = 200000;

double int_power(double u, double alpha) {
    if (alpha == 1.0) return u;
    if (alpha == 2.0) return u * u;
    if (alpha == 3.0) return u * u * u;
    return std::pow(u, alpha);
}

}  // namespace

const char* to_string(ReactionKind kind) {
    switch (kind) {
        case ReactionKind::ignition: return "ignition";
        case ReactionKind::alpha_monostable: return "alpha_monostable";
        case ReactionKind::kpp: return "kpp";
        case ReactionKind::bistable: return "bistable";
    }
    return "?";
}

ReactionKind reaction_kind_from_string(const std::string& name) {
    if (name == "ignition") return ReactionKind::ignition;
    if (name == "alpha_monostable") return ReactionKind::alpha_monostable;
    if (name == "kpp") return ReactionKind::kpp;
    if (name == "bistable") return ReactionKind::bistable;
    throw ContractError("unknown reaction kind '" + name + "'");
}

double ReactionSpec::raw(double u) const {
    if (custom_) return custom_(u);
    switch (kind_) {
        case ReactionKind::ignition: {
            if (u <= theta0_) return 0.0;
            const double span = 1.0 - theta0_;
            if (shape_ == "cubic_cap") return 6.75 * (u - theta0_) * (u - theta0_) * (1.0 - u) / (span * span * span);
            return 4.0 * (u - theta0_) * (1.0 - u) / (span * span);
        }
        case ReactionKind::alpha_monostable: {
            if (u <= theta0_) return gamma_ * int_power(u, alpha_);
            const double h = 1.0 - theta0_;
            const double w = (u - theta0_) / h;
            const double w2 = w * w;
            const double w3 = w2 * w;
            return glue_y0_ * (2.0 * w3 - 3.0 * w2 + 1.0) + h * glue_m0_ * (w3 - 2.0 * w2 + w) +
                   h * glue_m1_ * (w3 - w2);
        }
        case ReactionKind::kpp: return gamma_prime_ * u * (1.0 - u);
        case ReactionKind::bistable: return u * (1.0 - u) * (u - theta0_) / theta0_;
    }
    return 0.0;
}

double ReactionSpec::operator()(double u) const { return raw(std::clamp(u, 0.0, 1.0)); }

void ReactionSpec::apply(const double* in, double* out, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) out[i] = raw(std::clamp(in[i], 0.0, 1.0));
}

ReactionSpec ReactionSpec::with_evaluator(std::function<double(double)> f) const {
    ReactionSpec copy = *this;
    copy.custom_ = std::move(f);
    return copy;
}

void ReactionSpec::record_bounds() {
    double slope = 0.0;
    double top = 0.0;
    const double du = 1.0 / kBoundSamples;
    double prev = raw(0.0);
    for (std::size_t i = 1; i <= kBoundSamples; ++i) {
        const double cur = raw(i * du);
        slope = std::max(slope, std::abs(cur - prev) / du);
        top = std::max(top, std::abs(cur));
        prev = cur;
    }
    lipschitz_ = 1.01 * slope;
    // The sampled maximum plus the largest excursion allowed between samples.
    sup_norm_ = top + 0.5 * lipschitz_ * du;
}

ReactionSpec make_ignition(double theta0, const std::string& shape) {
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw ContractError("make_ignition: theta0 must lie in (0,1)");
    if (shape != "quadratic_cap" && shape != "cubic_cap")
        throw ContractError("make_ignition: unknown shape '" + shape + "'");
    ReactionSpec f;
    f.kind_ = ReactionKind::ignition;
    f.shape_ = shape;
    f.theta0_ = theta0;
    f.record_bounds();
    f.gamma_ = f.gamma_prime_ = 0.0;
    return f;
}

ReactionSpec make_alpha_monostable(double alpha, double gamma, double gamma_prime, double theta0) {
    if (!(alpha >= 1.0)) throw ContractError("make_alpha_monostable: alpha must be >= 1");
    if (!(gamma > 0.0 && gamma <= gamma_prime)) throw ContractError("make_alpha_monostable: need 0 < gamma <= gamma_prime");
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw ContractError("make_alpha_monostable: theta0 must lie in (0,1)");
    ReactionSpec f;
    f.kind_ = ReactionKind::alpha_monostable;
    f.shape_ = "hermite_glue";
    f.theta0_ = theta0;
    f.alpha_ = alpha;
    f.gamma_ = gamma;
    f.gamma_prime_ = gamma_prime;
    f.glue_y0_ = gamma * std::pow(theta0, alpha);
    f.glue_m0_ = alpha * gamma * std::pow(theta0, alpha - 1.0);
    f.glue_m1_ = -2.0 * f.glue_y0_ / (1.0 - theta0);
    for (std::size_t i = 1; i < kValidationSamples; ++i) {
        const double u = theta0 + (1.0 - theta0) * static_cast<double>(i) / kValidationSamples;
        if (!(f.raw(u) > 0.0))
            throw ContractError("make_alpha_monostable: Hermite glue is not positive on (theta0, 1)");
    }
    f.record_bounds();
    return f;
}

ReactionSpec make_kpp(double rate, double theta0) {
    if (!(rate > 0.0)) throw ContractError("make_kpp: rate must be positive");
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw ContractError("make_kpp: theta0 must lie in (0,1)");
    ReactionSpec f;
    f.kind_ = ReactionKind::kpp;
    f.shape_ = "logistic";
    f.theta0_ = theta0;
    f.alpha_ = 1.0;
    f.gamma_ = rate * (1.0 - theta0);
    f.gamma_prime_ = rate;
    f.record_bounds();
    return f;
}

ReactionSpec make_bistable(double theta0) {
    if (!(theta0 > 0.0 && theta0 < 0.5)) throw ContractError("make_bistable: theta0 must lie in (0,1/2)");
    ReactionSpec f;
    f.kind_ = ReactionKind::bistable;
    f.shape_ = "cubic";
    f.theta0_ = theta0;
    f.record_bounds();
    return f;
}

ValidationReport validate(const ReactionSpec& f) {
    ValidationReport report;
    auto flag = [&](const char* what, double u, double v) { report.violations.push_back({what, u, v}); };
    const double f0 = f(0.0);
    const double f1 = f(1.0);
    if (std::abs(f0) > 1e-12) flag("f(0) = 0", 0.0, f0);
    if (std::abs(f1) > 1e-12) flag("f(1) = 0", 1.0, f1);

    const std::size_t n = kValidationSamples;
    double integral = 0.0;
    double prev_u = 0.0;
    double prev_f = f0;
    for (std::size_t i = 1; i < n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double v = f(u);
        integral += v / n;
        if (std::abs(v - prev_f) > f.lipschitz() * 1.0001 * (u - prev_u)) flag("Lipschitz bound", u, v);
        prev_u = u;
        prev_f = v;
        switch (f.kind()) {
            case ReactionKind::ignition:
                if (u <= f.theta0() && v != 0.0) flag("f = 0 on [0, theta0]", u, v);
                if (u > f.theta0() && !(v > 0.0)) flag("f > 0 on (theta0, 1)", u, v);
                break;
            case ReactionKind::alpha_monostable:
            case ReactionKind::kpp: {
                if (!(v > 0.0)) flag("f > 0 on (0, 1)", u, v);
                if (u <= f.theta0()) {
                    const double pw = std::pow(u, f.alpha());
                    if (v < f.gamma() * pw * (1.0 - 1e-12)) flag("gamma u^alpha <= f", u, v);
                    if (v > f.gamma_prime() * pw * (1.0 + 1e-12)) flag("f <= gamma' u^alpha", u, v);
                }
                break;
            }
            case ReactionKind::bistable:
                if (u < f.theta0() && !(v < 0.0)) flag("f < 0 on (0, theta0)", u, v);
                if (u > f.theta0() && !(v > 0.0)) flag("f > 0 on (theta0, 1)", u, v);
                break;
        }
    }
    if (std::abs(f1 - prev_f) > f.lipschitz() * 1.0001 * (1.0 - prev_u)) flag("Lipschitz bound", 1.0, f1);
    if (f.kind() == ReactionKind::bistable && !(integral > 0.0)) flag("integral of f > 0", 1.0, integral);
    return report;
}

double positive_floor(const ReactionSpec& f, double lo, double hi) {
    if (!(lo <= hi)) throw ContractError("positive_floor: empty interval");
    double m = f(lo);
    for (std::size_t i = 1; i <= kValidationSamples; ++i)
        m = std::min(m, f(lo + (hi - lo) * static_cast<double>(i) / kValidationSamples));
    return 0.99 * m;
}

}  // namespace fraclab
