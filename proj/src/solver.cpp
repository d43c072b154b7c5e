#include "fraclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "fraclab/errors.hpp"
#include "fraclab/front_tracking.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

namespace {

constexpr int kMaxHalvings = 8;
constexpr std::size_t kMultiplierCache = 4;

double bump_fn(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }

/// C-infinity step: 1 for z <= -1, 0 for z >= 1.
double smooth_drop(double z) {
    const double w = 0.5 * (z + 1.0);
    if (w <= 0.0) return 1.0;
    if (w >= 1.0) return 0.0;
    const double a = bump_fn(1.0 - w);
    const double b = bump_fn(w);
    return a / (a + b);
}

double slope_at_zero(const ReactionSpec& f) {
    const double h = 1e-7;
    return f(h) / h;
}

double growth(const SolverConfig& cfg, double t) {
    const ReactionSpec& f = cfg.reaction;
    const double s = cfg.s;
    auto algebraic = [&](double critical, double p) {
        if (s < critical) return std::pow(t, p);
        if (s == critical) return t * std::log(M_E + t);
        return t;
    };
    switch (f.kind()) {
        case ReactionKind::ignition:
            return algebraic(0.5, 1.0 / (2.0 * s));
        case ReactionKind::alpha_monostable: {
            const double a = f.alpha();
            return algebraic(a / (2.0 * (a - 1.0)), a / (2.0 * s * (a - 1.0)));
        }
        case ReactionKind::kpp: {
            const double rate = slope_at_zero(f);
            const double sigma = geometry_of(cfg) == Geometry::front ? rate / (2.0 * s) : rate / (cfg.dimension + 2.0 * s);
            return std::exp(sigma * t);
        }
        case ReactionKind::bistable:
            return t;
    }
    return t;
}

}  // namespace

const char* to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::front: return "front";
        case InitialKind::ball: return "ball";
        case InitialKind::bump: return "bump";
        case InitialKind::field: return "field";
    }
    return "?";
}

const char* to_string(Geometry g) { return g == Geometry::front ? "front" : "radial"; }

InitialCondition InitialCondition::front(double theta, double R) {
    InitialCondition ic;
    ic.kind = InitialKind::front;
    ic.theta = theta;
    ic.R = R;
    return ic;
}

InitialCondition InitialCondition::ball(double theta, double R_inner, double R) {
    InitialCondition ic;
    ic.kind = InitialKind::ball;
    ic.theta = theta;
    ic.R_inner = R_inner;
    ic.R = R;
    return ic;
}

InitialCondition InitialCondition::from_bump(BumpProfile bump) {
    InitialCondition ic;
    ic.kind = InitialKind::bump;
    ic.theta = bump.theta;
    ic.R = bump.R_theta;
    ic.bump = std::make_shared<const BumpProfile>(std::move(bump));
    return ic;
}

InitialCondition InitialCondition::from_field(GridField field) {
    InitialCondition ic;
    ic.kind = InitialKind::field;
    ic.field = std::make_shared<const GridField>(std::move(field));
    return ic;
}

double InitialCondition::extent() const { return kind == InitialKind::field ? 0.0 : R; }

Geometry geometry_of(const SolverConfig& cfg) {
    return cfg.initial.kind == InitialKind::front ? Geometry::front : Geometry::radial;
}

TrackWindow tracking_window(const SolverConfig& cfg) {
    const double L = cfg.half_width;
    if (geometry_of(cfg) == Geometry::radial) return {0.0, L};
    const double c = 0.5 * cfg.initial.R;
    return {0.5 * (c - L), 0.5 * (c + L)};
}

double predicted_front(const SolverConfig& cfg, double t) {
    return cfg.initial.extent() + cfg.front_amplitude * growth(cfg, t);
}

void validate(const SolverConfig& cfg) {
    if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ConfigError("s", "must lie in (0, 1)");
    if (cfg.dimension != 1 && cfg.dimension != 2) throw ConfigError("dimension", "must be 1 or 2");
    if (!(cfg.half_width > 0.0)) throw ConfigError("half_width", "must be positive");
    if (cfg.points_per_axis < 8 || cfg.points_per_axis % 2 != 0)
        throw ConfigError("points_per_axis", "must be even and at least 8");
    if (!(cfg.t_final > 0.0)) throw ConfigError("t_final", "must be positive");
    if (!(cfg.dt_initial > 0.0)) throw ConfigError("dt_initial", "must be positive");
    const double K = cfg.reaction.lipschitz();
    if (K > 0.0 && cfg.dt_initial > 0.5 / K)
        throw ConfigError("dt_initial", "exceeds 0.5 / K = " + std::to_string(0.5 / K));
    if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end()))
        throw ConfigError("output_times", "must be sorted");
    for (double t : cfg.output_times)
        if (!(t >= 0.0 && t <= cfg.t_final)) throw ConfigError("output_times", "entries must lie in [0, t_final]");
    if (!(cfg.front_amplitude > 0.0)) throw ConfigError("front_amplitude", "must be positive");
    if (!(cfg.saturation_level > 0.0 && cfg.saturation_level < 1.0))
        throw ConfigError("saturation_level", "must lie in (0, 1)");

    const double dx = 2.0 * cfg.half_width / static_cast<double>(cfg.points_per_axis);
    const InitialCondition& ic = cfg.initial;
    switch (ic.kind) {
        case InitialKind::front:
        case InitialKind::ball:
            if (!(ic.theta > 0.0 && ic.theta <= 1.0)) throw ConfigError("initial.theta", "must lie in (0, 1]");
            if (ic.kind == InitialKind::front && !(ic.R >= 4.0 * dx))
                throw ConfigError("initial.R", "must span at least four grid cells");
            if (ic.kind == InitialKind::ball && !(ic.R_inner >= 0.0 && ic.R - ic.R_inner >= 4.0 * dx))
                throw ConfigError("initial.R", "R - R' must span at least four grid cells");
            if (ic.R >= 0.5 * cfg.half_width) throw ConfigError("initial.R", "must be below half_width / 2");
            break;
        case InitialKind::bump:
            if (!ic.bump) throw ConfigError("initial.bump", "missing");
            if (ic.bump->dimension != cfg.dimension) throw ConfigError("initial.bump", "dimension mismatch");
            if (std::abs(ic.bump->s - cfg.s) > 1e-12) throw ConfigError("initial.bump", "built for another s");
            if (ic.bump->R_theta >= 0.5 * cfg.half_width)
                throw ConfigError("initial.bump", "support must be below half_width / 2");
            break;
        case InitialKind::field:
            if (!ic.field) throw ConfigError("initial.field", "missing");
            if (ic.field->dimension() != cfg.dimension || ic.field->points_per_axis() != cfg.points_per_axis ||
                ic.field->half_width() != cfg.half_width)
                throw ConfigError("initial.field", "grid does not match the solver grid");
            if (!ic.field->in_unit_box()) throw ConfigError("initial.field", "values must lie in [0, 1]");
            break;
    }
    const double need = 4.0 * predicted_front(cfg, cfg.t_final);
    if (!(cfg.half_width >= need))
        throw ConfigError("half_width", "below four times the predicted front at t_final (" + std::to_string(need) + ")");
}

GridField initial_field(const SolverConfig& cfg) {
    const InitialCondition& ic = cfg.initial;
    const double L = cfg.half_width;
    const double w = 2.0 * (2.0 * L / static_cast<double>(cfg.points_per_axis));
    switch (ic.kind) {
        case InitialKind::front: {
            const double c = 0.5 * ic.R;
            const double seam = -L + w;
            return GridField::sample(cfg.dimension, L, cfg.points_per_axis, [&](double x, double) {
                return ic.theta * smooth_drop((x - c) / w) * (1.0 - smooth_drop((x - seam) / w));
            });
        }
        case InitialKind::ball: {
            const double c = 0.5 * (ic.R_inner + ic.R);
            return GridField::sample(cfg.dimension, L, cfg.points_per_axis, [&](double x, double y) {
                return ic.theta * smooth_drop((std::hypot(x, y) - c) / w);
            });
        }
        case InitialKind::bump: {
            const BumpProfile& b = *ic.bump;
            return GridField::sample(cfg.dimension, L, cfg.points_per_axis,
                                     [&](double x, double y) { return b.value(std::hypot(x, y)); });
        }
        case InitialKind::field:
            return *ic.field;
    }
    return {};
}

struct Stepper::Impl {
    double s;
    ReactionSpec f;
    SpectralContext ctx;
    std::vector<std::pair<double, std::vector<double>>> cache;
    std::vector<double> su, sf, a, fa, next;
    double floor = std::numeric_limits<double>::infinity();

    Impl(double s_, ReactionSpec f_, int d, double L, std::size_t n)
        : s(s_), f(std::move(f_)), ctx(d, L, n) {
        const std::size_t m = ctx.real_size();
        su.resize(m);
        sf.resize(m);
        a.resize(m);
        fa.resize(m);
        next.resize(m);
    }

    const std::vector<double>& multiplier(double dt) {
        for (auto& entry : cache)
            if (entry.first == dt) return entry.second;
        if (cache.size() == kMultiplierCache) cache.erase(cache.begin());
        cache.emplace_back(dt, ctx.heat_multiplier(s, dt));
        // The grid kernel is the response to a unit spike.
        std::vector<double> spike(ctx.real_size(), 0.0);
        spike[0] = 1.0;
        ctx.apply(spike.data(), spike.data(), cache.back().second);
        floor = std::min(floor, *std::min_element(spike.begin(), spike.end()));
        return cache.back().second;
    }
};

Stepper::Stepper(double s, ReactionSpec f, int dimension, double half_width, std::size_t points_per_axis)
    : impl_(std::make_unique<Impl>(s, std::move(f), dimension, half_width, points_per_axis)) {}

Stepper::~Stepper() = default;

double Stepper::kernel_floor() const { return impl_->floor; }

void Stepper::step(const GridField& in, GridField& out, double dt) {
    Impl& m = *impl_;
    const std::size_t n = in.size();
    if (n != m.ctx.real_size()) throw ContractError("step: field does not match the stepper grid");
    const std::vector<double>& M = m.multiplier(dt);
    const double* u = in.values().data();
    m.f.apply(u, m.fa.data(), n);
    m.ctx.apply(u, m.su.data(), M);
    m.ctx.apply(m.fa.data(), m.sf.data(), M);
    for (std::size_t i = 0; i < n; ++i) m.a[i] = m.su[i] + dt * m.sf[i];
    m.f.apply(m.a.data(), m.fa.data(), n);
    const double half = 0.5 * dt;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = m.su[i] + half * (m.sf[i] + m.fa[i]);
        m.next[i] = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo >= -kStabilityBox && hi <= 1.0 + kStabilityBox)) {
        const double bad = std::isfinite(lo) && lo < -kStabilityBox ? lo : hi;
        char buf[160];
        std::snprintf(buf, sizeof buf, "step left [0, 1] (value %.3g at dt = %.3g); use a smaller dt", bad, dt);
        throw StabilityError(buf, bad);
    }
    if (!out.same_grid(in)) out = GridField(in.dimension(), in.half_width(), in.points_per_axis());
    std::copy(m.next.begin(), m.next.end(), out.values().begin());
}

GridField step(const GridField& state, const SolverConfig& cfg, double dt) {
    if (!(dt > 0.0 && dt <= cfg.dt_initial)) throw ContractError("step: dt must lie in (0, dt_initial]");
    state.require_finite();
    Stepper stepper(cfg.s, cfg.reaction, state.dimension(), state.half_width(), state.points_per_axis());
    GridField out;
    stepper.step(state, out, dt);
    return out;
}

namespace {

double clip(GridField& u) {
    double worst = 0.0;
    for (double& v : u.values()) {
        if (v < 0.0) {
            worst = std::max(worst, -v);
            v = 0.0;
        } else if (v > 1.0) {
            worst = std::max(worst, v - 1.0);
            v = 1.0;
        }
    }
    return worst;
}

/// Step size for the next step toward `target`; lands on it exactly.
double next_step(double t, double target, double dt) {
    const double gap = target - t;
    return gap <= dt * (1.0 + 1e-12) ? gap : dt;
}

}  // namespace

Trajectory run(const SolverConfig& cfg, const Observer& observer) {
    validate(cfg);
    std::vector<double> outputs = cfg.output_times;
    if (outputs.empty()) outputs.push_back(cfg.t_final);

    const Geometry geometry = geometry_of(cfg);
    const TrackWindow window = tracking_window(cfg);
    const double threshold = window.hi - 0.1 * (window.hi - window.lo);

    Trajectory traj;
    GridField u = initial_field(cfg);
    GridField next(u.dimension(), u.half_width(), u.points_per_axis());
    Stepper stepper(cfg.s, cfg.reaction, cfg.dimension, cfg.half_width, cfg.points_per_axis);

    double t = 0.0;
    double dt = cfg.dt_initial;
    traj.dt_history.push_back({0.0, dt});
    auto record = [&](double time) {
        Snapshot snap;
        snap.t = time;
        snap.mass = u.mass();
        snap.min = u.min();
        snap.max = u.max();
        if (cfg.store_fields) snap.field = u;
        traj.snapshots.push_back(std::move(snap));
        if (observer) observer(time, u);
    };

    std::size_t k = 0;
    while (k < outputs.size() && outputs[k] <= 0.0) record(outputs[k++]);
    while (k < outputs.size()) {
        const double target = outputs[k];
        const double h = next_step(t, target, dt);
        try {
            stepper.step(u, next, h);
        } catch (const StabilityError&) {
            if (traj.halvings == kMaxHalvings) throw;
            dt *= 0.5;
            ++traj.halvings;
            traj.dt_history.push_back({t, dt});
            continue;
        }
        traj.max_clip = std::max(traj.max_clip, clip(next));
        u.values().swap(next.values());
        t = h == target - t ? target : t + h;
        ++traj.steps;

        const LevelPositions pos = level_positions(u, cfg.saturation_level, geometry, window);
        if (pos.x_over && *pos.x_over >= threshold) {
            traj.saturated = true;
            traj.saturation_time = t;
            traj.saturation_position = *pos.x_over;
            return traj;
        }
        while (k < outputs.size() && outputs[k] <= t) record(outputs[k++]);
    }
    return traj;
}

ComparisonReport comparison_test(const GridField& u0, const GridField& v0, const SolverConfig& cfg) {
    if (!u0.same_grid(v0)) throw ContractError("comparison_test: fields live on different grids");
    u0.require_finite();
    v0.require_finite();
    for (std::size_t i = 0; i < u0.size(); ++i)
        if (u0[i] > v0[i]) throw ContractError("comparison_test: u0 <= v0 fails at node " + std::to_string(i));
    if (!(cfg.dt_initial > 0.0 && cfg.t_final > 0.0)) throw ContractError("comparison_test: bad time settings");

    Stepper stepper(cfg.s, cfg.reaction, u0.dimension(), u0.half_width(), u0.points_per_axis());
    GridField u = u0, v = v0;
    GridField un = u0, vn = v0;
    ComparisonReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    auto observe = [&](double t) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, u[i] - v[i]);
        if (worst > rep.max_violation) {
            rep.max_violation = worst;
            rep.time_of_max = t;
        }
        if (rep.identical && std::memcmp(u.values().data(), v.values().data(), u.size() * sizeof(double)) != 0)
            rep.identical = false;
    };
    observe(0.0);

    double t = 0.0;
    double dt = cfg.dt_initial;
    while (t < cfg.t_final) {
        const double h = next_step(t, cfg.t_final, dt);
        try {
            stepper.step(u, un, h);
            stepper.step(v, vn, h);
        } catch (const StabilityError&) {
            if (rep.halvings == kMaxHalvings) throw;
            dt *= 0.5;
            ++rep.halvings;
            continue;
        }
        clip(un);
        clip(vn);
        u.values().swap(un.values());
        v.values().swap(vn.values());
        t = h == cfg.t_final - t ? cfg.t_final : t + h;
        ++rep.steps;
        observe(t);
    }
    rep.kernel_floor = stepper.kernel_floor();
    return rep;
}

}  // namespace fraclab
