#include "fraclab/bump.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/quadrature_detail.hpp"

namespace fraclab {

namespace {

constexpr int kMollifierPanels = 8;
constexpr int kMaxSlopeHalvings = 60;
constexpr int kMaxMollifyRetries = 8;
constexpr int kMaxLiftDoublings = 10;
constexpr int kTableIntervals = 1 << 16;

// Transition polynomial on [0, 1]: q(0) = 0, q(1) = 1, q'(0) = 1, q'(1) = 0 and
// q''(0) = q''(1) = 0, so the glued segment is C^2 at both ends.
double q_poly(double w) { return w + w * w * w * (4.0 + w * (-7.0 + 3.0 * w)); }
double q_prime(double w) { return 1.0 + w * w * (12.0 + w * (-28.0 + 15.0 * w)); }

double kernel(double v) { return std::abs(v) < 1.0 ? std::exp(-1.0 / (1.0 - v * v)) : 0.0; }

double kernel_mass() {
    static const double mass = [] {
        double sum = 0.0;
        for (int i = 0; i < 2 * kMollifierPanels; ++i) {
            double err = 0.0;
            const double a = -1.0 + double(i) / kMollifierPanels;
            sum += detail::gk15_panel(kernel, a, a + 1.0 / kMollifierPanels, err);
        }
        return sum;
    }();
    return mass;
}

// Piece boundaries of phi on the unit scale.
std::vector<double> pieces(const BumpProfile& b) {
    std::vector<double> p{0.0, 0.5};
    p.insert(p.end(), b.breakpoints.begin() + 1, b.breakpoints.end());
    p.push_back(b.R_prime);
    return p;
}

// Unit-scale phi truncated to the first n lines (all of them when n < 0).
struct PhiEval {
    const BumpProfile* b;
    int n;

    int lines() const { return n < 0 ? static_cast<int>(b->slopes.size()) : n; }

    double segment(double xi, double* slope) const {
        const double theta = b->theta;
        const double width = theta - b->theta0_prime;
        const double m = 0.5 * (theta + b->theta0_prime);
        const double l0 = theta - width * xi;
        if (l0 <= m) {
            if (slope) *slope = -width;
            return l0;
        }
        const double w = std::min(1.0, (l0 - m) / (theta - m));
        if (slope) *slope = -width * q_prime(w);
        return m + (theta - m) * q_poly(w);
    }

    double value(double xi, double* slope = nullptr) const {
        if (xi <= 0.0) {
            if (slope) *slope = 0.0;
            return b->theta;
        }
        double ds = 0.0;
        double best = segment(xi, &ds);
        for (int i = 0; i < lines(); ++i) {
            const double v = b->intercepts[i] - b->slopes[i] * xi;
            if (v > best) {
                best = v;
                ds = -b->slopes[i];
            }
        }
        if (best <= 0.0) {
            best = 0.0;
            ds = 0.0;
        }
        if (slope) *slope = ds;
        return best;
    }
};

// (phi * rho)(xi) or (phi' * rho)(xi) for the one-sided kernel on [0, w].
double mollified(const BumpProfile& b, double xi, bool derivative) {
    const PhiEval phi{&b, -1};
    const double w = b.mollify_width;
    auto at = [&](double y) {
        double slope = 0.0;
        const double v = phi.value(y, &slope);
        return derivative ? slope : v;
    };
    const std::vector<double> ps = pieces(b);
    std::vector<double> cuts;
    for (double p : ps)
        if (p > xi - w && p < xi) cuts.push_back(xi - p);
    const bool curved = xi > 0.0 && xi - w < 0.5;
    if (cuts.empty() && !curved) return at(xi - 0.5 * w);

    for (int i = 0; i <= kMollifierPanels; ++i) cuts.push_back(w * i / kMollifierPanels);
    std::sort(cuts.begin(), cuts.end());
    const double mass = kernel_mass();
    auto integrand = [&](double y) { return at(xi - y) * kernel(2.0 * y / w - 1.0); };
    double sum = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] - cuts[i - 1] <= 0.0) continue;
        double err = 0.0;
        sum += detail::gk15_panel(integrand, cuts[i - 1], cuts[i], err);
    }
    return sum * 2.0 / (w * mass);
}

Profile unit_profile(const BumpProfile& b, int lines, double end) {
    auto self = std::make_shared<const BumpProfile>(b);
    Profile p = Profile::line([self, lines](double xi) { return PhiEval{self.get(), lines}.value(xi); },
                              Tail{b.theta}, Tail{0.0});
    std::vector<double> kinks;
    for (int i = 1; i <= lines; ++i) kinks.push_back(b.breakpoints[i]);
    kinks.push_back(end);
    p.with_kinks(kinks).with_breaks({0.0, 0.5}).with_scales(0.5, end);
    return p;
}

struct Worst {
    double min = std::numeric_limits<double>::infinity();
    double at = 0.0;
};

template <class F>
Worst minimum_over(const std::vector<double>& xs, F&& margin) {
    std::vector<double> vals(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { vals[i] = margin(xs[i]); });
    Worst w;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (vals[i] < w.min) {
            w.min = vals[i];
            w.at = xs[i];
        }
    }
    return w;
}

// Evenly spaced interior points of (a, b).
void interior(double a, double b, int n, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * (i + 0.5) / n);
}

std::vector<double> line_samples(const BumpProfile& b) {
    std::vector<double> xs;
    const double end = b.R_theta;
    for (int i = 0; i < 100; ++i) xs.push_back(-2.0 * end * std::pow(1e-3, i / 99.0));
    interior(0.0, end, 400, xs);
    const double w = b.scale_r * b.mollify_width;
    for (double f : b.feature_points())
        for (double d : {-0.25 * w, 0.25 * w, 0.5 * w, 0.75 * w}) xs.push_back(f + d);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return x > end; }), xs.end());
    return xs;
}

std::vector<double> radial_samples(const BumpProfile& b) {
    std::vector<double> xs;
    interior(0.0, b.lift_shift, 64, xs);
    interior(b.lift_shift, b.R_theta, 192, xs);
    const double w = b.scale_r * b.mollify_width;
    for (double f : b.feature_points())
        for (double d : {0.25 * w, 0.5 * w, 0.75 * w}) xs.push_back(f + d);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return x > b.R_theta; }), xs.end());
    return xs;
}

}  // namespace

double BumpProfile::phi(double xi) const { return PhiEval{this, -1}.value(xi); }

double BumpProfile::phi_prime(double xi) const {
    double slope = 0.0;
    PhiEval{this, -1}.value(xi, &slope);
    return slope;
}

void BumpProfile::tabulate() {
    auto t = std::make_shared<BumpTable>();
    t->width = mollify_width;
    t->end = R_prime + mollify_width;
    t->step = t->end / kTableIntervals;
    t->value.resize(kTableIntervals + 1);
    t->slope.resize(kTableIntervals + 1);
    for (int i = 0; i <= kTableIntervals; ++i) {
        t->value[i] = mollified(*this, i * t->step, false);
        t->slope[i] = mollified(*this, i * t->step, true);
    }
    table = std::move(t);
}

namespace {

bool table_matches(const BumpProfile& b) {
    return b.table && b.table->width == b.mollify_width && b.table->end == b.R_prime + b.mollify_width;
}

// Hermite interpolation of the table; derivative when `prime` is set.
double from_table(const BumpTable& t, double theta, double xi, bool prime) {
    if (xi <= 0.0) return prime ? 0.0 : theta;
    if (xi >= t.end) return 0.0;
    const double pos = xi / t.step;
    const int i = std::min(static_cast<int>(pos), kTableIntervals - 1);
    const double u = pos - i;
    const double h = t.step;
    const double y0 = t.value[i], y1 = t.value[i + 1];
    const double m0 = t.slope[i] * h, m1 = t.slope[i + 1] * h;
    if (prime) {
        const double d = (6.0 * u * u - 6.0 * u) * (y0 - y1) + (3.0 * u * u - 4.0 * u + 1.0) * m0 +
                         (3.0 * u * u - 2.0 * u) * m1;
        return d / h;
    }
    const double u2 = u * u, u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * y1 +
           (u3 - u2) * m1;
}

}  // namespace

double BumpProfile::smooth(double xi) const {
    return table_matches(*this) ? from_table(*table, theta, xi, false) : mollified(*this, xi, false);
}

double BumpProfile::smooth_prime(double xi) const {
    return table_matches(*this) ? from_table(*table, theta, xi, true) : mollified(*this, xi, true);
}

double BumpProfile::value(double x) const { return smooth((x - lift_shift) / scale_r); }
double BumpProfile::derivative(double x) const { return smooth_prime((x - lift_shift) / scale_r) / scale_r; }

double BumpProfile::level(double lambda) const {
    if (!(lambda > 0.0 && lambda <= theta)) throw ContractError("BumpProfile::level: lambda must lie in (0, theta]");
    double lo = lift_shift;
    double hi = R_theta;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) >= lambda ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> BumpProfile::feature_points() const {
    std::vector<double> out;
    for (double p : pieces(*this)) {
        out.push_back(lift_shift + scale_r * p);
        out.push_back(lift_shift + scale_r * (p + mollify_width));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Profile BumpProfile::line_profile() const {
    auto self = std::make_shared<const BumpProfile>(*this);
    Profile p = Profile::line([self](double x) { return self->value(x); }, Tail{theta}, Tail{0.0});
    p.with_breaks(feature_points()).with_scales(scale_r * mollify_width, R_theta);
    return p;
}

Profile BumpProfile::radial_profile() const { return scaled_radial_profile(1.0); }

Profile BumpProfile::scaled_radial_profile(double lambda) const {
    if (!(lambda > 0.0)) throw ContractError("scaled_radial_profile: lambda must be positive");
    auto self = std::make_shared<const BumpProfile>(*this);
    Profile p = Profile::radial(dimension, [self, lambda](double r) { return self->value(lambda * std::abs(r)); },
                                Tail{0.0});
    std::vector<double> breaks;
    for (double f : feature_points())
        if (f > 0.0) breaks.push_back(f / lambda);
    p.with_breaks(breaks).with_scales(scale_r * mollify_width / lambda, R_theta / lambda).with_support(R_theta / lambda);
    return p;
}

QuadratureResult bump_margin(const BumpProfile& bump, const ReactionSpec& f, double rho, const QuadratureScheme& scheme) {
    const QuadratureResult op = quadrature_apply_at(bump.radial_profile(), rho, 0.0, scheme);
    return {f(bump.value(rho)) - op.value, op.error};
}

BumpProfile build_bump(double theta, double s, const ReactionSpec& f, int dimension) {
    if (f.kind() != ReactionKind::ignition) throw ContractError("build_bump: needs an ignition reaction");
    if (!(s > 0.0 && s < 1.0)) throw ContractError("build_bump: s must lie in (0, 1)");
    if (dimension != 1 && dimension != 2) throw ContractError("build_bump: dimension must be 1 or 2");
    if (!(theta > f.theta0() && theta < 1.0)) throw ContractError("build_bump: theta must lie in (theta0, 1)");

    BumpProfile b;
    b.theta = theta;
    b.theta0 = f.theta0();
    b.s = s;
    b.dimension = dimension;
    b.theta0_prime = 0.25 * (3.0 * b.theta0 + theta);
    const double width = theta - b.theta0_prime;
    b.N = 1;
    while (width < std::ldexp(theta, -b.N)) ++b.N;
    b.delta = positive_floor(f, b.theta0_prime, theta);

    const QuadratureScheme line_q = QuadratureScheme::make(s, 1);
    b.breakpoints = {0.0, 1.0};
    b.slopes = {0.5 * width};
    b.intercepts = {0.5 * (theta + b.theta0_prime)};

    // Each new line starts where the previous one reaches the next level and
    // is flattened until the operator stays negative enough on [1, x_n].
    for (int n = 2; n <= b.N; ++n) {
        const double xn = 2.0 * b.breakpoints.back() + (theta - b.intercepts.back()) / b.slopes.back();
        const double level = theta - std::ldexp(width, n - 1);
        double k = 0.5 * b.slopes.back();
        Worst worst;
        bool ok = false;
        b.breakpoints.push_back(xn);
        for (int attempt = 0; attempt <= kMaxSlopeHalvings && !ok; ++attempt, k *= 0.5) {
            b.slopes.push_back(k);
            b.intercepts.push_back(k * xn + level);
            const Profile p = unit_profile(b, n, b.intercepts.back() / k);
            std::vector<double> xs;
            interior(1.0, xn, 128, xs);
            worst = minimum_over(xs, [&](double x) { return -quadrature_apply_at(p, x, line_q).value; });
            ok = worst.min >= 1e-3 * b.delta;
            if (!ok) {
                b.slopes.pop_back();
                b.intercepts.pop_back();
            }
        }
        if (!ok) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "build_bump: no slope for line %d after %d halvings", n, kMaxSlopeHalvings);
            throw ConstructionError(buf, worst.at, worst.min);
        }
    }
    b.R_prime = b.intercepts.back() / b.slopes.back();

    // The finished phi: the operator must be <= 0 where phi <= theta0', and its
    // supremum sets the stretch factor.
    const Profile unit = unit_profile(b, b.N, b.R_prime);
    {
        std::vector<double> xs;
        interior(1.0, 1.5 * b.R_prime, 256, xs);
        const Worst w = minimum_over(xs, [&](double x) { return -quadrature_apply_at(unit, x, line_q).value; });
        if (w.min < 0.0) throw ConstructionError("build_bump: operator positive below theta0'", w.at, w.min);
    }
    {
        std::vector<double> xs;
        interior(-4.0, 0.0, 64, xs);
        interior(0.0, 1.0, 256, xs);
        interior(1.0, b.R_prime, 128, xs);
        const Worst w = minimum_over(xs, [&](double x) { return -quadrature_apply_at(unit, x, line_q).value; });
        b.sup_operator = 1.05 * std::max(-w.min, 0.0);
    }
    b.scale_r = std::max(std::pow(2.0 * b.sup_operator / b.delta, 1.0 / (2.0 * s)), 1.0 / b.R_prime);

    double qmax = 1.0;
    for (int i = 0; i <= 10000; ++i) qmax = std::max(qmax, q_prime(i / 10000.0));
    b.lipschitz = width * qmax / b.scale_r;

    // Mollify; the one-sided kernel keeps u = theta on x <= 0 and u >= phi.
    double gap = std::numeric_limits<double>::infinity();
    const std::vector<double> ps = pieces(b);
    for (std::size_t i = 1; i < ps.size(); ++i) gap = std::min(gap, ps[i] - ps[i - 1]);
    b.mollify_width = std::min(0.05, 0.25 * gap);
    Worst line_worst;
    for (b.mollify_retries = 0;; ++b.mollify_retries) {
        b.tabulate();
        b.lift_shift = 0.0;
        b.R_theta = b.scale_r * (b.R_prime + b.mollify_width);
        const Profile p = b.line_profile();
        line_worst = minimum_over(line_samples(b), [&](double x) {
            return f(b.value(x)) - quadrature_apply_at(p, x, line_q).value;
        });
        if (line_worst.min > 0.0) break;
        if (b.mollify_retries == kMaxMollifyRetries)
            throw ConstructionError("build_bump: mollified profile does not certify", line_worst.at, line_worst.min);
        b.mollify_width *= 0.5;
    }
    b.line_margin = line_worst.min;

    // Radial lift: u(|x| - 2R) with R doubled until the margin recovers.
    const double line_end = b.R_theta;
    const QuadratureScheme radial_q = QuadratureScheme::make(s, dimension);
    double R = line_end;
    for (b.lift_doublings = 0;; ++b.lift_doublings, R *= 2.0) {
        b.lift_shift = 2.0 * R;
        b.R_theta = b.lift_shift + line_end;
        const Profile p = b.radial_profile();
        const Worst w = minimum_over(radial_samples(b), [&](double x) {
            return f(b.value(x)) - quadrature_apply_at(p, x, 0.0, radial_q).value;
        });
        if (w.min >= 0.5 * b.line_margin) {
            b.epsilon = w.min;
            break;
        }
        if (b.lift_doublings == kMaxLiftDoublings)
            throw ConstructionError("build_bump: radial lift does not certify", w.at, w.min);
    }
    b.support_end = b.R_theta;
    return b;
}

double self_similar_rate(double s, double epsilon, double lipschitz, double support_end) {
    if (!(s > 0.0 && s < 1.0) || !(epsilon > 0.0) || !(lipschitz > 0.0) || !(support_end > 0.0))
        throw ContractError("self_similar_rate: arguments must be positive with s in (0, 1)");
    return std::pow(lipschitz * support_end / (2.0 * s * epsilon), 1.0 / (2.0 * s));
}

SelfSimilarSub::SelfSimilarSub(BumpProfile bump)
    : bump_(std::move(bump)),
      s_(bump_.s),
      b_(self_similar_rate(bump_.s, bump_.epsilon, bump_.lipschitz, bump_.support_end)) {}

std::string SelfSimilarSub::id() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ignition_self_similar_sub_theta%g_s%g_d%d", bump_.theta, s_, bump_.dimension);
    return buf;
}

TimeWindow SelfSimilarSub::window() const {
    TimeWindow w;
    w.lo = std::pow(b_, 2.0 * s_);
    w.closed_lo = true;
    return w;
}

double SelfSimilarSub::stretch(double t) const { return b_ * std::pow(t, -1.0 / (2.0 * s_)); }

double SelfSimilarSub::value(double t, double z) const { return bump_.value(stretch(t) * std::abs(z)); }

double SelfSimilarSub::time_derivative(double t, double z) const {
    const double xi = stretch(t) * std::abs(z);
    return bump_.derivative(xi) * xi * (-1.0 / (2.0 * s_)) / t;
}

Profile SelfSimilarSub::profile_at(double t) const { return bump_.scaled_radial_profile(stretch(t)); }

std::vector<double> SelfSimilarSub::junctions(double t) const {
    const double lambda = stretch(t);
    std::vector<double> out;
    for (double f : bump_.feature_points())
        if (f > 0.0) out.push_back(f / lambda);
    return out;
}

std::vector<double> SelfSimilarSub::sample_points(double t, int count) const {
    const double end = bump_.R_theta / stretch(t);
    const int inner = std::max(1, 3 * count / 4);
    std::vector<double> out;
    interior(0.0, end, inner, out);
    const int outer = std::max(1, count - inner);
    for (int i = 1; i <= outer; ++i) out.push_back(end * std::pow(100.0, double(i) / outer));
    return out;
}

double SelfSimilarSub::level(double t, double lambda) const { return bump_.level(lambda) / stretch(t); }

}  // namespace fraclab
