#include "fraclab/residual.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fraclab/errors.hpp"
#include "fraclab/ignition.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_super: return "certified_super";
        case Verdict::certified_sub: return "certified_sub";
        case Verdict::failed: return "failed";
    }
    return "?";
}

namespace {

void require_in_window(const Barrier& b, double t) {
    if (!b.window().contains(t)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: t = %g outside the validity window", b.id().c_str(), t);
        throw ContractError(buf);
    }
}

Residual residual_with_profile(const Barrier& b, const Profile& p, const ReactionSpec& f, double t, double z,
                               const QuadratureScheme& scheme) {
    Residual r;
    const QuadratureResult op = quadrature_apply_at(p, z, 0.0, scheme);
    r.time_derivative = b.time_derivative(t, z);
    r.operator_value = op.value;
    r.reaction = f(b.value(t, z));
    r.value = r.time_derivative + r.operator_value - r.reaction;
    r.error = op.error;
    return r;
}

std::vector<double> junction_points(const std::vector<double>& js, const SamplingPlan& plan, bool radial) {
    std::vector<double> pts;
    for (std::size_t i = 0; i < js.size(); ++i) {
        double len = std::numeric_limits<double>::infinity();
        if (i > 0) len = std::min(len, js[i] - js[i - 1]);
        if (i + 1 < js.size()) len = std::min(len, js[i + 1] - js[i]);
        if (!std::isfinite(len)) len = std::max(1.0, std::abs(js[i]));
        const int half = plan.junction_samples / 2;
        for (int k = -half; k <= half; ++k) {
            const double z = js[i] + plan.junction_radius * len * k / std::max(1, half);
            if (radial && z < 0.0) continue;
            pts.push_back(z);
        }
    }
    return pts;
}

}  // namespace

Residual residual_at(const Barrier& barrier, const ReactionSpec& f, double t, double z, const QuadratureScheme& scheme) {
    require_in_window(barrier, t);
    return residual_with_profile(barrier, barrier.profile_at(t), f, t, z, scheme);
}

std::vector<double> plan_times(const Barrier& barrier, const SamplingPlan& plan) {
    const TimeWindow w = barrier.window();
    if (w.empty()) throw WindowError(barrier.id() + ": empty validity window", w.lo, w.hi);
    if (!(w.lo > 0.0)) throw ContractError("plan_times: window must start at a positive time");
    const int n = std::max(1, plan.time_samples);
    std::vector<double> ts;
    if (std::isfinite(w.hi)) {
        for (int i = 0; i < n; ++i) ts.push_back(w.lo * std::pow(w.hi / w.lo, (i + 0.5) / n));
    } else {
        const double hi = w.lo * plan.horizon_factor;
        for (int i = 0; i < n; ++i) {
            const double frac = w.closed_lo ? (n > 1 ? double(i) / (n - 1) : 0.0) : (i + 0.5) / n;
            ts.push_back(w.lo * std::pow(hi / w.lo, frac));
        }
    }
    return ts;
}

ResidualReport certify(const Barrier& barrier, const ReactionSpec& f, BarrierMode mode, const SamplingPlan& plan,
                       const QuadratureScheme* scheme_in) {
    const QuadratureScheme scheme = scheme_in ? *scheme_in : QuadratureScheme::make(barrier.s(), barrier.dimension());
    ResidualReport report;
    report.barrier_id = barrier.id();
    report.mode = mode;
    report.tolerance = 1e-2 * std::max(1.0, f.sup_norm());
    report.time_samples = plan_times(barrier, plan);

    for (double t : report.time_samples) {
        require_in_window(barrier, t);
        std::vector<double> zs = barrier.sample_points(t, plan.space_samples);
        std::vector<double> extra = junction_points(barrier.junctions(t), plan, barrier.radial());
        zs.insert(zs.end(), extra.begin(), extra.end());
        std::sort(zs.begin(), zs.end());
        zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
        const Profile p = barrier.profile_at(t);
        std::vector<ResidualSample> out(zs.size());
        parallel_for(zs.size(), [&](std::size_t i) {
            const Residual r = residual_with_profile(barrier, p, f, t, zs[i], scheme);
            out[i] = {t, zs[i], r.value, r.error};
        });
        report.samples.insert(report.samples.end(), out.begin(), out.end());
    }

    report.min_residual = std::numeric_limits<double>::infinity();
    report.max_residual = -std::numeric_limits<double>::infinity();
    const double tol = report.tolerance;
    for (const ResidualSample& r : report.samples) {
        report.min_residual = std::min(report.min_residual, r.residual);
        report.max_residual = std::max(report.max_residual, r.residual);
        const double slack = mode == BarrierMode::super ? r.residual + tol : tol - r.residual;
        if (slack >= 0.0 && slack <= r.error) ++report.unresolved;
    }
    const bool super = mode == BarrierMode::super;
    auto worse = [&](const ResidualSample& a, const ResidualSample& b) {
        return super ? a.residual < b.residual : a.residual > b.residual;
    };
    if (!report.samples.empty())
        report.worst = *std::min_element(report.samples.begin(), report.samples.end(), worse);
    const bool inside = super ? report.min_residual >= -tol : report.max_residual <= tol;
    if (inside && report.unresolved == 0)
        report.verdict = super ? Verdict::certified_super : Verdict::certified_sub;
    return report;
}

Profile ramp_profile(double A1, double A2, double theta) {
    if (!(A1 < A2)) throw ContractError("ramp_profile: need A1 < A2");
    auto f = [=](double x) {
        if (x <= A1) return 1.0;
        if (x >= A2) return theta;
        return 1.0 - (1.0 - theta) * (x - A1) / (A2 - A1);
    };
    Profile p = Profile::line(f, Tail{1.0}, Tail{theta});
    p.with_kinks({A1, A2}).with_scales(A2 - A1, A2 - A1);
    return p;
}

bool check_ramp_bound(double A1, double A2, double theta, double s, const Profile& phi, double x) {
    if (!(s > 0.0 && s < 0.5)) throw ContractError("check_ramp_bound: s must lie in (0, 1/2)");
    if (!(theta >= 0.0 && theta <= 1.0)) throw ContractError("check_ramp_bound: theta must lie in [0, 1]");
    const Profile psi = ramp_profile(A1, A2, theta);
    const double len = A2 - A1;
    if (std::abs(phi(x) - psi(x)) > 1e-12) throw ContractError("check_ramp_bound: phi does not touch psi at x");
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
        const double y = A1 - 10.0 * len + 21.0 * len * i / n;
        if (phi(y) > psi(y) + 1e-12) throw ContractError("check_ramp_bound: phi exceeds psi");
    }
    const QuadratureScheme q = QuadratureScheme::make(s, 1);
    const double value = quadrature_apply_at(phi, x, q).value;
    return value >= -ramp_constant(s) * (1.0 - theta) * std::pow(len, -2.0 * s) - 1e-6;
}

}  // namespace fraclab
