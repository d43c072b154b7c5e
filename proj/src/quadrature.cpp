#include "fraclab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fraclab/errors.hpp"
#include "fraclab/quadrature_detail.hpp"

namespace fraclab {

namespace bq = boost::math::quadrature;

// ---------------------------------------------------------------- Profile

Profile Profile::line(std::function<double(double)> f, Tail left, Tail right) {
    Profile p;
    p.geometry_ = ProfileGeometry::line;
    p.dimension_ = 1;
    p.f1_ = std::move(f);
    p.left_ = left;
    p.right_ = right;
    return p;
}

Profile Profile::radial(int dimension, std::function<double(double)> of_radius, Tail far) {
    if (dimension != 1 && dimension != 2) throw ContractError("Profile::radial: dimension must be 1 or 2");
    Profile p;
    p.geometry_ = ProfileGeometry::radial;
    p.dimension_ = dimension;
    p.f1_ = std::move(of_radius);
    p.left_ = far;
    p.right_ = far;
    return p;
}

Profile Profile::planar(std::function<double(double, double)> f, Tail far) {
    Profile p;
    p.geometry_ = ProfileGeometry::planar;
    p.dimension_ = 2;
    p.f2_ = std::move(f);
    p.left_ = far;
    p.right_ = far;
    return p;
}

Profile Profile::constant(int dimension, double value) {
    Tail t{value, 0.0, 0.0};
    if (dimension == 1) return line([value](double) { return value; }, t, t);
    return radial(dimension, [value](double) { return value; }, t);
}

Profile& Profile::with_kinks(std::vector<double> kinks) {
    std::sort(kinks.begin(), kinks.end());
    kinks_ = std::move(kinks);
    return *this;
}

Profile& Profile::with_breaks(std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks_ = std::move(breaks);
    return *this;
}

Profile& Profile::with_scales(double inner, double outer) {
    if (!(inner > 0.0 && outer > 0.0)) throw ContractError("Profile: scales must be positive");
    inner_scale_ = inner;
    outer_scale_ = outer;
    return *this;
}

Profile& Profile::with_resolution(double max_panel, double zone) {
    if (!(max_panel > 0.0)) throw ContractError("Profile: max_panel must be positive");
    max_panel_ = max_panel;
    zone_ = zone;
    return *this;
}

Profile& Profile::with_period(double period) {
    if (!(period > 0.0)) throw ContractError("Profile: period must be positive");
    period_ = period;
    max_panel_ = std::min(max_panel_, period / 16.0);
    return *this;
}

Profile& Profile::with_support(double radius) {
    if (geometry_ == ProfileGeometry::line) throw ContractError("Profile: support applies to radial or planar profiles");
    if (!(radius > 0.0)) throw ContractError("Profile: support radius must be positive");
    support_ = radius;
    return *this;
}

double Profile::operator()(double x) const {
    switch (geometry_) {
        case ProfileGeometry::line: return f1_(x);
        case ProfileGeometry::radial: return f1_(std::abs(x));
        case ProfileGeometry::planar: return f2_(x, 0.0);
    }
    return 0.0;
}

double Profile::at(double x, double y) const {
    switch (geometry_) {
        case ProfileGeometry::line: return f1_(x);
        case ProfileGeometry::radial: return f1_(dimension_ == 1 ? std::abs(x) : std::hypot(x, y));
        case ProfileGeometry::planar: return f2_(x, y);
    }
    return 0.0;
}

// ---------------------------------------------------------------- scheme

void QuadratureScheme::validate() const {
    if (!(s > 0.0 && s < 1.0)) throw ContractError("QuadratureScheme: s must lie in (0,1)");
    if (dimension != 1 && dimension != 2) throw ContractError("QuadratureScheme: dimension must be 1 or 2");
    if (!(inner_cutoff > 0.0 && inner_cutoff < outer_cutoff))
        throw ContractError("QuadratureScheme: need 0 < inner_cutoff < outer_cutoff");
    if (nodes_per_decade < 16) throw ContractError("QuadratureScheme: nodes_per_decade must be >= 16");
    if (angular_panels < 1) throw ContractError("QuadratureScheme: angular_panels must be >= 1");
    if (!(normalization_constant > 0.0)) throw ContractError("QuadratureScheme: normalization must be positive");
}

QuadratureScheme QuadratureScheme::make(double s, int dimension) {
    QuadratureScheme q;
    q.s = s;
    q.dimension = dimension;
    q.normalization_constant = calibrate_constant(s, dimension, q.nodes_per_decade);
    return q;
}

QuadratureScheme QuadratureScheme::refined(double factor) const {
    if (!(factor >= 1.0)) throw ContractError("QuadratureScheme::refined: factor must be >= 1");
    QuadratureScheme q = *this;
    q.nodes_per_decade = static_cast<int>(std::lround(nodes_per_decade * factor));
    q.angular_panels = static_cast<int>(std::lround(angular_panels * factor));
    q.inner_cutoff = inner_cutoff / factor;
    q.normalization_constant = calibrate_constant(s, dimension, q.nodes_per_decade);
    return q;
}

// ---------------------------------------------------------------- kernels

namespace detail {

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
    return gk15_panel(f, a, b, err);
}

std::vector<double> graded_mesh(double lo, double hi, int nodes_per_decade, std::vector<double> splits,
                                double max_panel, double zone_end) {
    std::vector<double> nodes;
    const double decades = std::log10(hi / lo);
    const int count = std::max(1, static_cast<int>(std::ceil(decades * nodes_per_decade)));
    const double ratio = std::pow(hi / lo, 1.0 / count);
    double h = lo;
    nodes.reserve(static_cast<std::size_t>(count) + splits.size() + 2);
    for (int i = 0; i < count; ++i) {
        nodes.push_back(h);
        h *= ratio;
    }
    nodes.push_back(hi);
    for (double b : splits)
        if (b > lo && b < hi) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    std::vector<double> mesh;
    mesh.reserve(nodes.size());
    for (double v : nodes)
        if (mesh.empty() || v - mesh.back() > 1e-14 * v) mesh.push_back(v);
    mesh.back() = hi;

    if (!std::isfinite(max_panel)) return mesh;
    std::vector<double> capped;
    capped.reserve(mesh.size());
    capped.push_back(mesh.front());
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        const double a = mesh[i - 1];
        const double b = mesh[i];
        if (a < zone_end && b - a > max_panel) {
            const int pieces = static_cast<int>(std::ceil((b - a) / max_panel));
            for (int j = 1; j < pieces; ++j) capped.push_back(a + (b - a) * j / pieces);
        }
        capped.push_back(b);
    }
    return capped;
}

}  // namespace detail

namespace {

// Tail of the symmetrized integral beyond H for a line profile at x.
double line_tail(const Profile& p, double u0, double x, double H, double s) {
    const Tail& L = p.left_tail();
    const Tail& R = p.right_tail();
    double t = (2.0 * u0 - L.limit - R.limit) * std::pow(H, -2.0 * s) / (2.0 * s);
    if (R.coeff != 0.0) {
        const double q = R.decay;
        t -= R.coeff * (std::pow(H, -q - 2.0 * s) / (q + 2.0 * s) -
                        q * x * std::pow(H, -q - 2.0 * s - 1.0) / (q + 2.0 * s + 1.0));
    }
    if (L.coeff != 0.0) {
        const double q = L.decay;
        t -= L.coeff * (std::pow(H, -q - 2.0 * s) / (q + 2.0 * s) +
                        q * x * std::pow(H, -q - 2.0 * s - 1.0) / (q + 2.0 * s + 1.0));
    }
    return t;
}

double outer_cutoff_for(const Profile& p, double x, const QuadratureScheme& q) {
    if (std::isfinite(p.support()) && p.right_tail().coeff == 0.0) return std::abs(x) + p.support();
    double H = q.outer_cutoff * p.outer_scale();
    H = std::max(H, 1e3 * std::abs(x));
    if (p.period() > 0.0) {
        H = std::min(H, 1000.0 * p.period());
        H = p.period() * std::max(1.0, std::round(H / p.period()));
    }
    return H;
}

void require_tails(const Profile& p) {
    if (!std::isfinite(p.left_tail().limit) || !std::isfinite(p.right_tail().limit))
        throw ContractError("quadrature_apply_at: profile has no declared tail limits");
}

QuadratureResult apply_line(const Profile& p, double x, const QuadratureScheme& q) {
    const double s = q.s;
    const double u0 = p(x);
    const double tol = 1e-12 * std::max({1.0, std::abs(x), p.inner_scale()});
    bool kink = false;
    std::vector<double> splits;
    auto add_points = [&](const std::vector<double>& pts, bool are_kinks) {
        for (double k : pts) {
            // Radial profiles in one dimension have their features at +-k.
            const int copies = p.geometry() == ProfileGeometry::radial ? 2 : 1;
            for (int c = 0; c < copies; ++c) {
                const double pos = c == 0 ? k : -k;
                const double d = std::abs(pos - x);
                if (d <= tol) {
                    if (are_kinks) kink = true;
                } else {
                    splits.push_back(d);
                }
            }
        }
    };
    add_points(p.kinks(), true);
    add_points(p.breaks(), false);
    if (kink && s >= 0.5)
        throw ContractError("quadrature_apply_at: kink point requires s < 1/2");

    double h_floor = 1e-4 * q.inner_cutoff * p.inner_scale();
    for (double d : splits) h_floor = std::min(h_floor, 0.25 * d);
    const double H = outer_cutoff_for(p, x, q);
    const double zone_end = std::abs(x) + p.resolution_zone();

    auto w = [&](double h) { return (u0 - p(x + h)) + (u0 - p(x - h)); };
    QuadratureResult r = detail::singular_integral(w, s, h_floor, H, splits, kink, q.nodes_per_decade,
                                                   p.max_panel(), zone_end);
    const double tail = line_tail(p, u0, x, H, s);
    r.value += tail;
    r.error += std::abs(tail) * (x / H) * (x / H) + 1e-15 * std::abs(r.value);
    r.value *= q.normalization_constant;
    r.error *= q.normalization_constant;
    return r;
}

// Positive h with |c + h e| = rho, c the evaluation point and e a unit vector.
void ring_crossings(double ce, double c2, double rho, std::vector<double>& out) {
    const double disc = ce * ce - c2 + rho * rho;
    if (disc < 0.0) return;
    const double root = std::sqrt(disc);
    for (double h : {-ce - root, -ce + root, ce - root, ce + root})
        if (h > 0.0) out.push_back(h);
}

QuadratureResult apply_plane(const Profile& p, double x, double y, const QuadratureScheme& q) {
    const double s = q.s;
    const bool radial = p.geometry() == ProfileGeometry::radial;
    const double u0 = p.at(x, y);
    const double r0 = std::hypot(x, y);
    const double tol = 1e-12 * std::max({1.0, r0, p.inner_scale()});
    bool kink = false;
    if (radial)
        for (double rho : p.kinks())
            if (std::abs(r0 - rho) <= tol) kink = true;
    if (kink && s >= 0.5)
        throw ContractError("quadrature_apply_at: kink point requires s < 1/2");

    const double H = outer_cutoff_for(p, r0, q);
    const double zone_end = r0 + p.resolution_zone();
    const double h_base = 1e-4 * q.inner_cutoff * p.inner_scale();
    const Tail& far = p.right_tail();

    double tail = 2.0 * (u0 - far.limit) * std::pow(H, -2.0 * s) / (2.0 * s);
    if (far.coeff != 0.0)
        tail -= 2.0 * far.coeff * std::pow(H, -far.decay - 2.0 * s) / (far.decay + 2.0 * s);

    // Direction-resolved integral; the radial case is symmetric under w -> pi - w
    // once the point is rotated onto the first axis.
    const double px = radial ? r0 : x;
    const double py = radial ? 0.0 : y;
    auto direction = [&](double omega) {
        const double ex = std::cos(omega);
        const double ey = std::sin(omega);
        std::vector<double> splits;
        if (radial) {
            const double ce = px * ex;
            const double c2 = px * px;
            for (double rho : p.kinks()) ring_crossings(ce, c2, rho, splits);
            for (double rho : p.breaks()) ring_crossings(ce, c2, rho, splits);
        }
        double h_floor = h_base;
        for (double d : splits) h_floor = std::min(h_floor, 0.25 * d);
        auto w = [&](double h) {
            return (u0 - p.at(px + h * ex, py + h * ey)) + (u0 - p.at(px - h * ex, py - h * ey));
        };
        QuadratureResult r = detail::singular_integral(w, s, h_floor, H, splits, kink, q.nodes_per_decade,
                                                       p.max_panel(), zone_end);
        r.value += tail;
        return r;
    };

    // Angular panels, split where lines become tangent to a kink or break ring.
    const double span = radial ? std::numbers::pi / 2.0 : std::numbers::pi;
    std::vector<double> cuts{0.0, span};
    if (radial && r0 > 0.0) {
        for (const auto* rings : {&p.kinks(), &p.breaks()})
            for (double rho : *rings)
                if (rho > 0.0 && rho < r0) cuts.push_back(std::asin(rho / r0));
    }
    std::sort(cuts.begin(), cuts.end());
    const auto& gx = bq::gauss<double, 8>::abscissa();
    const auto& gw = bq::gauss<double, 8>::weights();

    QuadratureResult total;
    if (radial && r0 == 0.0) {
        total = direction(0.0);
        total.value *= std::numbers::pi;
        total.error *= std::numbers::pi;
    } else {
        for (std::size_t c = 1; c < cuts.size(); ++c) {
            const double a = cuts[c - 1];
            const double b = cuts[c];
            if (b - a <= 1e-15) continue;
            const int panels = std::max(1, static_cast<int>(std::ceil(q.angular_panels * (b - a) / std::numbers::pi)));
            for (int k = 0; k < panels; ++k) {
                const double pa = a + (b - a) * k / panels;
                const double pb = a + (b - a) * (k + 1) / panels;
                const double mid = 0.5 * (pa + pb);
                const double half = 0.5 * (pb - pa);
                for (std::size_t i = 0; i < gx.size(); ++i) {
                    for (int sign : {1, -1}) {
                        if (gx[i] == 0.0 && sign < 0) continue;
                        QuadratureResult d = direction(mid + sign * half * gx[i]);
                        total.value += half * gw[i] * d.value;
                        total.error += half * gw[i] * d.error;
                    }
                }
            }
        }
        if (radial) {
            total.value *= 2.0;
            total.error *= 2.0;
        }
    }
    total.error += 1e-15 * std::abs(total.value);
    total.value *= q.normalization_constant;
    total.error *= q.normalization_constant;
    return total;
}

}  // namespace

QuadratureResult quadrature_apply_at(const Profile& profile, double x, const QuadratureScheme& scheme) {
    return quadrature_apply_at(profile, x, 0.0, scheme);
}

QuadratureResult quadrature_apply_at(const Profile& profile, double x, double y, const QuadratureScheme& scheme) {
    scheme.validate();
    require_tails(profile);
    if (profile.dimension() != scheme.dimension)
        throw ContractError("quadrature_apply_at: profile and scheme dimensions differ");
    if (profile.dimension() == 1) return apply_line(profile, x, scheme);
    return apply_plane(profile, x, y, scheme);
}

// ---------------------------------------------------------------- calibration

namespace {

// Integral of (2 - 2cos h) h^{-1-2s} over (0, inf) with the line machinery.
double unit_mode_integral(double s, int nodes_per_decade) {
    QuadratureScheme q;
    q.s = s;
    q.dimension = 1;
    q.nodes_per_decade = nodes_per_decade;
    q.normalization_constant = 1.0;
    Profile mode = Profile::line([](double x) { return std::cos(x); }, Tail{0.0}, Tail{0.0});
    mode.with_period(2.0 * std::numbers::pi);
    return quadrature_apply_at(mode, 0.0, q).value;
}

// Integral of |cos w|^{2s} over (0, pi), graded toward the zero of cos.
double angular_factor(double s, int nodes_per_decade) {
    const double lo = 1e-12;
    const double hi = std::numbers::pi / 2.0;
    std::vector<double> mesh = detail::graded_mesh(lo, hi, nodes_per_decade, {}, hi / 8.0, hi);
    std::function<double(double)> f = [s](double v) { return std::pow(std::sin(v), 2.0 * s); };
    double sum = std::pow(lo, 2.0 * s + 1.0) / (2.0 * s + 1.0);
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        double err = 0.0;
        sum += detail::gk15(f, mesh[i - 1], mesh[i], err);
    }
    return 2.0 * sum;
}

double calibrate_uncached(double s, int d, int npd) {
    double previous = unit_mode_integral(s, npd);
    double current = previous;
    double residual = 0.0;
    bool converged = false;
    int level = npd;
    for (int attempt = 0; attempt < 3; ++attempt) {
        level *= 2;
        current = unit_mode_integral(s, level);
        residual = std::abs(current - previous) / std::abs(current);
        if (residual <= 1e-8) {
            converged = true;
            break;
        }
        previous = current;
    }
    if (!converged)
        throw CalibrationError("calibrate_constant: mode integral did not converge", residual);
    // Use the base-resolution value so the constant matches the scheme that consumes it.
    const double base = unit_mode_integral(s, npd);
    double c = 1.0 / base;
    if (d == 2) c /= angular_factor(s, npd);

    if (d == 1) {
        QuadratureScheme q;
        q.s = s;
        q.dimension = 1;
        q.nodes_per_decade = npd;
        q.normalization_constant = c;
        Profile mode = Profile::line([](double x) { return std::cos(x); }, Tail{0.0}, Tail{0.0});
        mode.with_period(2.0 * std::numbers::pi);
        const double x = 0.7;
        const double check = quadrature_apply_at(mode, x, q).value / std::cos(x);
        if (std::abs(check - 1.0) > 1e-6)
            throw CalibrationError("calibrate_constant: mode identity fails away from the origin",
                                   std::abs(check - 1.0));
    }
    return c;
}

}  // namespace

double calibrate_constant(double s, int dimension, int nodes_per_decade) {
    if (!(s > 0.0 && s < 1.0)) throw ContractError("calibrate_constant: s must lie in (0,1)");
    if (dimension != 1 && dimension != 2) throw ContractError("calibrate_constant: dimension must be 1 or 2");
    static std::mutex mutex;
    static std::map<std::tuple<double, int, int>, double> cache;
    const auto key = std::make_tuple(s, dimension, nodes_per_decade);
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double c = calibrate_uncached(s, dimension, nodes_per_decade);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, c);
    return c;
}

double calibrate_constant(double s, int dimension) { return calibrate_constant(s, dimension, 32); }

}  // namespace fraclab
