#include "fraclab/monostable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

namespace {

constexpr int kTauHalvings = 12;
constexpr int kSweepRadii = 64;
constexpr double kSweepRadialSpan = 1e4;
constexpr int kResample = 1000;
constexpr int kLadderTop = 30;
constexpr int kTimesPerBlock = 3;
constexpr int kBlocks = 4;

const std::vector<double> kSweepA{1e-3, 1e-2, 1e-1, 1.0};
const std::vector<double> kSweepB{1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};

struct SweepPoint {
    double a, b, r;
    double op;     // (-Delta)^s phi(r)
    double far;    // X(theta1)^d r^{-d-2s}
    double local;  // r^{-2s} phi(r)
};

double far_field_phi(double a, double b, double beta, double nu, double theta1, double r) {
    const double X1 = far_field_X(a, b, beta, nu, theta1);
    if (r <= X1) return theta1;
    return std::pow(a * std::pow(r, beta) - b, -1.0 / nu);
}

SweepPoint sweep_point(double s, double beta, double nu, double theta1, int d, double a, double b, double r,
                       const QuadratureScheme& q) {
    SweepPoint p{a, b, r, 0.0, 0.0, 0.0};
    const Profile prof = far_field_profile(a, b, beta, nu, theta1, d);
    p.op = quadrature_apply_at(prof, r, 0.0, q).value;
    p.far = std::pow(far_field_X(a, b, beta, nu, theta1), d) * std::pow(r, -d - 2.0 * s);
    p.local = std::pow(r, -2.0 * s) * far_field_phi(a, b, beta, nu, theta1, r);
    return p;
}

double C_needed(const std::vector<SweepPoint>& pts, double c) {
    double C = -std::numeric_limits<double>::infinity();
    for (const SweepPoint& p : pts) C = std::max(C, (p.op + c * p.far) / p.local);
    return C;
}

}  // namespace

double far_field_X(double a, double b, double beta, double nu, double u) {
    return std::pow((std::pow(u, -nu) + b) / a, 1.0 / beta);
}

Profile far_field_profile(double a, double b, double beta, double nu, double theta1, int d) {
    const double X1 = far_field_X(a, b, beta, nu, theta1);
    const double X4 = far_field_X(a, b, beta, nu, 0.25 * theta1);
    Profile p = Profile::radial(
        d, [=](double r) { return far_field_phi(a, b, beta, nu, theta1, std::abs(r)); },
        Tail{0.0, std::pow(a, -1.0 / nu), beta / nu});
    p.with_kinks({X1}).with_scales(X4 - X1, X4);
    return p;
}

double far_field_slack(const FarFieldConstants& k, double s, double beta, double nu, double theta1, int d, double a,
                     double b, double r, const QuadratureScheme& scheme) {
    const SweepPoint p = sweep_point(s, beta, nu, theta1, d, a, b, r, scheme);
    return -k.c_far * p.far + k.C_far * p.local - p.op;
}

FarFieldConstants estimate_far_field_constants(double s, double beta, double nu, double theta1, int d) {
    if (!(s > 0.0 && s < 1.0)) throw ContractError("estimate_far_field_constants: s must lie in (0, 1)");
    if (!(beta > nu && nu > 0.0)) throw ContractError("estimate_far_field_constants: need beta > nu > 0");
    if (d != 1 && d != 2) throw ContractError("estimate_far_field_constants: d must be 1 or 2");
    if (beta / nu < d - 2.0) throw ContractError("estimate_far_field_constants: need beta / nu >= d - 2");
    if (!(theta1 > 0.0 && theta1 <= 1.0)) throw ContractError("estimate_far_field_constants: theta1 must lie in (0, 1]");

    const QuadratureScheme q = QuadratureScheme::make(s, d);
    FarFieldConstants k;
    double worst_r = 0.0;
    double worst_slack = 0.0;
    for (k.halvings = 0; k.halvings <= kTauHalvings; ++k.halvings, k.tau0 *= 0.5) {
        struct Case {
            double a, b, r;
        };
        std::vector<Case> cases;
        for (double a : kSweepA)
            for (double b : kSweepB) {
                const double r0 = far_field_X(a, b, beta, nu, k.tau0 * theta1);
                for (int i = 0; i < kSweepRadii; ++i)
                    cases.push_back({a, b, r0 * std::pow(kSweepRadialSpan, double(i) / (kSweepRadii - 1))});
            }
        std::vector<SweepPoint> pts(cases.size());
        parallel_for(cases.size(), [&](std::size_t i) {
            pts[i] = sweep_point(s, beta, nu, theta1, d, cases[i].a, cases[i].b, cases[i].r, q);
        });

        // tau = min{tau0, c / (2^{(d+2s)/beta} C theta1)} saturates at tau0 once
        // c / C reaches `saturate`. Prefer the largest c that gets there after
        // the safety factors; otherwise maximize c / C.
        const double saturate = std::pow(2.0, (d + 2.0 * s) / beta) * theta1 * k.tau0;
        double sat_c = 0.0;
        double best_c = 0.0;
        double best_C = 0.0;
        double best_ratio = -1.0;
        for (int j = 0; j <= 320; ++j) {
            const double c = std::pow(10.0, -12.0 + 0.05 * j);
            const double C = C_needed(pts, c);
            if (C <= 0.25 * c / saturate) sat_c = c;
            if (C > 0.0 && c / C > best_ratio) {
                best_ratio = c / C;
                best_c = c;
                best_C = C;
            }
        }
        if (sat_c > 0.0) {
            k.c_far = 0.5 * sat_c;
            k.C_far = k.c_far / saturate;
        } else if (best_ratio > 0.0) {
            k.c_far = 0.5 * best_c;
            k.C_far = 2.0 * best_C;
        } else {
            continue;
        }

        std::mt19937_64 rng(81 + k.halvings);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::vector<Case> fresh(kResample);
        for (Case& c : fresh) {
            c.a = std::pow(10.0, -3.0 * U(rng));
            c.b = std::pow(10.0, 6.0 * U(rng));
            c.r = far_field_X(c.a, c.b, beta, nu, k.tau0 * theta1) * std::pow(kSweepRadialSpan, U(rng));
        }
        std::vector<double> slack(fresh.size());
        parallel_for(fresh.size(), [&](std::size_t i) {
            slack[i] = far_field_slack(k, s, beta, nu, theta1, d, fresh[i].a, fresh[i].b, fresh[i].r, q);
        });
        const auto it = std::min_element(slack.begin(), slack.end());
        k.resample_slack = *it;
        worst_slack = *it;
        worst_r = fresh[it - slack.begin()].r;
        if (k.resample_slack >= 0.0) {
            char buf[320];
            std::snprintf(buf, sizeof buf,
                          "sweep a in [1e-3, 1] (4 values) x b in [1, 1e6] (7 values) x %d radii log-spaced over "
                          "[X(tau0 theta1), %g X(tau0 theta1)], plateau theta1 inside X(theta1); largest c for which tau "
                          "saturates at tau0 (else c maximizing c/C); c halved and C doubled; %d-point re-sample, seed %d",
                          kSweepRadii, kSweepRadialSpan, kResample, 81 + k.halvings);
            k.provenance = buf;
            return k;
        }
    }
    throw ConstructionError("estimate_far_field_constants: no constants certified within the tau0 halving budget",
                            worst_r, worst_slack);
}

double SmoothingSpline::operator()(double y) const {
    if (y <= lo) return y;
    if (y >= hi) return theta;
    const double h = 0.5 * (hi - lo);
    if (y <= theta) {
        const double v = y - lo;
        return y - curvature * v * v * v / (6.0 * h);
    }
    const double v = hi - y;
    return theta - curvature * v * v * v / (6.0 * h);
}

double SmoothingSpline::prime(double y) const {
    if (y <= lo) return 1.0;
    if (y >= hi) return 0.0;
    const double h = 0.5 * (hi - lo);
    if (y <= theta) {
        const double v = y - lo;
        return 1.0 - curvature * v * v / (2.0 * h);
    }
    const double v = hi - y;
    return curvature * v * v / (2.0 * h);
}

double SmoothingSpline::second(double y) const {
    if (y <= lo || y >= hi) return 0.0;
    const double h = 0.5 * (hi - lo);
    return -curvature * (y <= theta ? y - lo : hi - y) / h;
}

double SmoothingSpline::inverse(double v) const {
    if (!(v >= 0.0 && v <= theta)) throw ContractError("SmoothingSpline::inverse: value outside [0, theta]");
    if (v <= lo) return v;
    double a = lo;
    double b = hi;
    for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
        const double m = 0.5 * (a + b);
        ((*this)(m) < v ? a : b) = m;
    }
    return b;
}

SmoothingSpline make_smoothing(double theta, double theta1, double theta2) {
    if (!(theta1 < theta && theta < theta2)) throw ContractError("make_smoothing: need theta1 < theta < theta2");
    // Concavity makes phi' fall from 1 to 0 with total curvature 1; phi(hi) = theta
    // forces the curvature's centre of mass to sit at theta.
    const double h = std::min(theta - theta1, theta2 - theta);
    SmoothingSpline sp;
    sp.theta = theta;
    sp.lo = theta - h;
    sp.hi = theta + h;
    sp.curvature = 1.0 / h;
    return sp;
}

std::string MonostableSub::id() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "monostable_sub_alpha%g_s%g_d%d_theta%g", alpha, s_value, d, theta);
    return buf;
}

TimeWindow MonostableSub::window() const {
    TimeWindow w;
    w.lo = T_theta;
    w.closed_lo = true;
    return w;
}

double MonostableSub::psi(double t, double r) const {
    r = std::abs(r);
    const double pole_beta = a2 * std::pow(t, kappa);
    const double pole = std::pow(pole_beta, 1.0 / beta);
    if (r <= pole) return std::numeric_limits<double>::infinity();
    const double gap = pole_beta * std::expm1(beta * std::log(r / pole));
    return std::pow(std::pow(t, 1.0 - kappa) * gap / a1, -1.0 / nu);
}

double MonostableSub::psi_t(double t, double r) const {
    const double p = psi(t, r);
    if (!std::isfinite(p)) return 0.0;
    return std::pow(p, alpha) / (a1 * nu) * ((kappa - 1.0) * std::pow(t, -kappa) * std::pow(std::abs(r), beta) + a2);
}

double MonostableSub::X(double t, double u) const {
    return std::pow(std::pow(u, 1.0 - alpha) * a1 * std::pow(t, kappa - 1.0) + a2 * std::pow(t, kappa), 1.0 / beta);
}

double MonostableSub::value(double t, double r) const {
    const double p = psi(t, r);
    if (p >= theta2) return theta;
    return smoothing(p);
}

double MonostableSub::time_derivative(double t, double r) const {
    const double p = psi(t, r);
    if (p >= smoothing.hi) return 0.0;
    return smoothing.prime(p) * psi_t(t, r);
}

double MonostableSub::level(double t, double lambda) const {
    if (!(lambda > 0.0 && lambda <= theta)) throw ContractError("MonostableSub::level: lambda must lie in (0, theta]");
    return X(t, smoothing.inverse(lambda));
}

Profile MonostableSub::profile_at(double t) const {
    const MonostableSub self = *this;
    Profile p = Profile::radial(d, [self, t](double r) { return self.value(t, r); },
                                Tail{0.0, std::pow(a1 * std::pow(t, kappa - 1.0), 1.0 / nu), beta / nu});
    p.with_breaks(junctions(t)).with_scales(X(t, smoothing.lo) - X(t, smoothing.hi), X(t, tau * theta1));
    return p;
}

std::vector<double> MonostableSub::junctions(double t) const {
    std::vector<double> js;
    for (double u : {smoothing.hi, theta, smoothing.lo, theta1, tau * theta1}) js.push_back(X(t, u));
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    return js;
}

std::vector<double> MonostableSub::sample_points(double t, int count) const {
    // A quarter on the plateau, half on levels between the plateau edge and
    // tau theta1, a quarter beyond.
    const int inner = std::max(1, count / 4);
    const int mid = std::max(1, count / 2);
    const int outer = std::max(1, count - inner - mid);
    const double edge = X(t, smoothing.hi);
    const double far = X(t, tau * theta1);
    std::vector<double> pts;
    for (int i = 0; i < inner; ++i) pts.push_back(edge * (i + 0.5) / inner);
    const double ratio = tau * theta1 / smoothing.hi;
    for (int i = 0; i < mid; ++i) pts.push_back(X(t, smoothing.hi * std::pow(ratio, (i + 0.5) / mid)));
    for (int i = 0; i < outer; ++i) pts.push_back(far * (1.0 + 3.0 * (i + 1.0) / outer));
    return pts;
}

MonostableSub build_monostable_sub(double theta, const ReactionSpec& f, double s, int d) {
    if (f.kind() != ReactionKind::alpha_monostable || !(f.alpha() > 1.0))
        throw ContractError("build_monostable_sub: needs an alpha-monostable reaction with alpha > 1");
    if (d != 1 && d != 2) throw ContractError("build_monostable_sub: d must be 1 or 2");
    if (!(theta > 0.0 && theta < 1.0)) throw ContractError("build_monostable_sub: theta must lie in (0, 1)");
    const double alpha = f.alpha();
    if (!(s > 0.0 && s < std::min(alpha / (2.0 * (alpha - 1.0)), 1.0)))
        throw ContractError("build_monostable_sub: need s < min{alpha / (2(alpha - 1)), 1}");

    MonostableSub m;
    m.alpha = alpha;
    m.s_value = s;
    m.d = d;
    m.theta = theta;
    m.theta0 = f.theta0();
    m.gamma = f.gamma();
    m.theta1 = std::min(m.theta0, 0.5 * theta);
    m.theta2 = 0.5 * (1.0 + theta);
    m.nu = alpha - 1.0;
    m.beta = (d + 2.0 * s) * m.nu;
    m.kappa = m.beta * alpha / (2.0 * s * m.nu);
    if (!(m.kappa > m.beta)) throw ConsistencyError("build_monostable_sub: kappa <= beta");

    m.far_field = estimate_far_field_constants(s, m.beta, m.nu, m.theta1, d);
    const double c = m.far_field.c_far;
    const double C = m.far_field.C_far;
    m.tau = std::min(m.far_field.tau0, c / (std::pow(2.0, (d + 2.0 * s) / m.beta) * C * m.theta1));
    m.delta = positive_floor(f, m.tau * m.theta1, theta);
    if (!(m.delta > 1e-12))
        throw ConstructionError("build_monostable_sub: inf of f on [tau theta1, theta] underflows", m.tau * m.theta1,
                                m.delta);
    m.a3 = std::min({1.0, (alpha - 1.0) * m.gamma / (2.0 * m.kappa - 1.0),
                     (alpha - 1.0) * m.delta / (4.0 * m.kappa * std::pow(m.theta2, alpha))});
    m.a1 = std::pow((alpha - 1.0) * c / (std::pow(2.0, 1.0 + (d + 2.0 * s) / m.beta) * (2.0 * m.kappa - 1.0)),
                    m.beta / (2.0 * s)) *
           std::pow(m.a3, d / (2.0 * s));
    m.a2 = m.a1 * m.a3;
    m.smoothing = make_smoothing(theta, m.theta1, m.theta2);
    return m;
}

double monostable_max_residual(const MonostableSub& barrier, const ReactionSpec& f, double t,
                               const QuadratureScheme& scheme) {
    const Profile p = barrier.profile_at(t);
    const std::vector<double> rs = barrier.sample_points(t, 256);
    std::vector<double> res(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
        const double op = quadrature_apply_at(p, rs[i], 0.0, scheme).value;
        res[i] = barrier.time_derivative(t, rs[i]) + op - f(barrier.value(t, rs[i]));
    });
    return *std::max_element(res.begin(), res.end());
}

double find_T_theta(MonostableSub& barrier, const ReactionSpec& f, double tolerance) {
    const QuadratureScheme q = QuadratureScheme::make(barrier.s_value, barrier.d);
    std::map<int, double> cache;  // lattice index 3 log2(t) -> max residual
    auto residual_at_index = [&](int idx) {
        auto it = cache.find(idx);
        if (it != cache.end()) return it->second;
        const double t = std::exp2(double(idx) / kTimesPerBlock);
        const double r = monostable_max_residual(barrier, f, t, q);
        cache.emplace(idx, r);
        return r;
    };
    std::string trace;
    for (int m = 0; m <= kLadderTop;) {
        int failed = -1;
        for (int j = 0; j < kTimesPerBlock * kBlocks; ++j) {
            const int idx = kTimesPerBlock * m + j;
            if (residual_at_index(idx) > tolerance) {
                failed = idx;
                break;
            }
        }
        if (failed < 0) {
            barrier.T_theta = std::exp2(m);
            barrier.T_certified = true;
            return barrier.T_theta;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, " t=%g:%.3g", std::exp2(double(failed) / kTimesPerBlock), cache[failed]);
        trace += buf;
        m = failed / kTimesPerBlock + 1;
    }
    throw ConstructionError("find_T_theta: ladder exhausted; residual trace" + trace, std::exp2(kLadderTop),
                            cache.rbegin()->second);
}

}  // namespace fraclab
