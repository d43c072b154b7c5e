#include "fraclab/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// u reduced to one coordinate: positions with the min and max over the
/// rest of the grid (columns for fronts, shells for radial data).
struct Reduced {
    std::vector<double> pos;
    std::vector<double> lo;
    std::vector<double> hi;
};

Reduced reduce(const GridField& u, Geometry g, const TrackWindow& w) {
    const std::size_t n = u.points_per_axis();
    const double dx = u.spacing();
    const double inf = std::numeric_limits<double>::infinity();
    Reduced r;
    if (g == Geometry::front) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = u.coordinate(i);
            if (x < w.lo || x > w.hi) continue;
            double a = inf, b = -inf;
            if (u.dimension() == 1) {
                a = b = u[i];
            } else {
                for (std::size_t j = 0; j < n; ++j) {
                    a = std::min(a, u[i * n + j]);
                    b = std::max(b, u[i * n + j]);
                }
            }
            r.pos.push_back(x);
            r.lo.push_back(a);
            r.hi.push_back(b);
        }
        return r;
    }
    const auto shells = static_cast<std::size_t>(std::floor(w.hi / dx)) + 1;
    std::vector<double> lo(shells, inf), hi(shells, -inf);
    auto visit = [&](double radius, double v) {
        const auto k = static_cast<std::size_t>(std::lround(radius / dx));
        if (k >= shells) return;
        lo[k] = std::min(lo[k], v);
        hi[k] = std::max(hi[k], v);
    };
    if (u.dimension() == 1) {
        for (std::size_t i = 0; i < n; ++i) visit(std::abs(u.coordinate(i)), u[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) visit(std::hypot(u.coordinate(i), u.coordinate(j)), u[i * n + j]);
    }
    for (std::size_t k = 0; k < shells; ++k) {
        const double radius = static_cast<double>(k) * dx;
        if (lo[k] == inf || radius < w.lo || radius > w.hi) continue;
        r.pos.push_back(radius);
        r.lo.push_back(lo[k]);
        r.hi.push_back(hi[k]);
    }
    return r;
}

double crossing(double p0, double v0, double p1, double v1, double lambda) {
    if (v0 == v1) return p0;
    return p0 + (v0 - lambda) / (v0 - v1) * (p1 - p0);
}

std::vector<std::size_t> in_window(const std::vector<double>& times, const std::vector<double>& x, FitWindow w) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= w.lo && times[i] <= w.hi && std::isfinite(x[i])) idx.push_back(i);
    if (idx.size() < 8) throw ContractError("fit: fewer than 8 samples in the window");
    return idx;
}

FitResult least_squares(const std::vector<double>& X, const std::vector<double>& Y) {
    const double n = static_cast<double>(X.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
    }
    if (!(sxx > 0.0)) throw ContractError("fit: the window holds a single abscissa");
    FitResult out;
    out.slope = sxy / sxx;
    const double intercept = my - out.slope * mx;
    out.amplitude = std::exp(intercept);
    for (std::size_t i = 0; i < X.size(); ++i)
        out.residual = std::max(out.residual, std::abs(intercept + out.slope * X[i] - Y[i]));
    out.samples = static_cast<int>(X.size());
    return out;
}

}  // namespace

LevelPositions level_positions(const GridField& u, double lambda, Geometry g, const TrackWindow& w) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ContractError("level_positions: lambda must lie in (0, 1)");
    const Reduced r = reduce(u, g, w);
    LevelPositions out;
    const std::size_t m = r.pos.size();
    for (std::size_t j = 0; j < m; ++j) {
        if (r.lo[j] <= lambda) {
            out.x_under = j == 0 ? r.pos[0] : crossing(r.pos[j - 1], r.lo[j - 1], r.pos[j], r.lo[j], lambda);
            break;
        }
    }
    for (std::size_t j = m; j-- > 0;) {
        if (r.hi[j] >= lambda) {
            out.x_over = j + 1 == m ? r.pos[j] : crossing(r.pos[j], r.hi[j], r.pos[j + 1], r.hi[j + 1], lambda);
            break;
        }
    }
    return out;
}

LevelSetRecorder::LevelSetRecorder(std::vector<double> lambdas, Geometry g, TrackWindow w) : window_(w) {
    for (double lambda : lambdas) {
        if (!(lambda > 0.0 && lambda < 1.0)) throw ContractError("tracking: lambda must lie in (0, 1)");
        LevelSetSeries s;
        s.lambda = lambda;
        s.geometry = g;
        series_.push_back(std::move(s));
    }
}

void LevelSetRecorder::operator()(double t, const GridField& u) {
    for (LevelSetSeries& s : series_) {
        const LevelPositions p = level_positions(u, s.lambda, s.geometry, window_);
        s.times.push_back(t);
        s.x_under.push_back(p.x_under.value_or(kNaN));
        s.x_over.push_back(p.x_over.value_or(kNaN));
    }
}

LevelSetSeries track(const Trajectory& trajectory, double lambda, Geometry g, const TrackWindow& w) {
    LevelSetRecorder rec({lambda}, g, w);
    for (const Snapshot& snap : trajectory.snapshots) {
        if (snap.field.size() == 0) throw ContractError("track: the trajectory kept no fields");
        rec(snap.t, snap.field);
    }
    return rec.series().front();
}

FitWindow late_window(double t_end) { return {0.1 * t_end, t_end}; }

FitResult fit_power(const std::vector<double>& times, const std::vector<double>& x, FitWindow w) {
    if (times.size() != x.size()) throw ContractError("fit_power: size mismatch");
    std::vector<double> X, Y;
    for (std::size_t i : in_window(times, x, w)) {
        if (!(x[i] > 0.0) || !(times[i] > 0.0)) throw ContractError("fit_power: nonpositive entry in the window");
        X.push_back(std::log(times[i]));
        Y.push_back(std::log(x[i]));
    }
    return least_squares(X, Y);
}

FitResult fit_exponential(const std::vector<double>& times, const std::vector<double>& x, FitWindow w) {
    if (times.size() != x.size()) throw ContractError("fit_exponential: size mismatch");
    std::vector<double> X, Y;
    for (std::size_t i : in_window(times, x, w)) {
        if (!(x[i] > 0.0)) throw ContractError("fit_exponential: nonpositive position in the window");
        X.push_back(times[i]);
        Y.push_back(std::log(x[i]));
    }
    return least_squares(X, Y);
}

bool sandwich_check(const LevelSetSeries& sub, const LevelSetSeries& sim, const LevelSetSeries& super) {
    const std::size_t n = sim.times.size();
    if (sub.times.size() != n || super.times.size() != n) throw ContractError("sandwich_check: time grids differ");
    for (std::size_t i = 0; i < n; ++i) {
        const double t = sim.times[i];
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        if (std::abs(sub.times[i] - t) > tol || std::abs(super.times[i] - t) > tol)
            throw ContractError("sandwich_check: time grids differ");
    }
    const double inf = std::numeric_limits<double>::infinity();
    auto under = [&](double v) { return std::isnan(v) ? inf : v; };
    auto over = [&](double v) { return std::isnan(v) ? -inf : v; };
    for (std::size_t i = 0; i < n; ++i) {
        if (under(sub.x_under[i]) > under(sim.x_under[i])) return false;
        if (over(sim.x_over[i]) > over(super.x_over[i])) return false;
    }
    return true;
}

}  // namespace fraclab
