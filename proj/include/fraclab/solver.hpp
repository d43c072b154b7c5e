#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fraclab/bump.hpp"
#include "fraclab/grid_field.hpp"
#include "fraclab/reactions.hpp"

namespace fraclab {

/// Largest overshoot of [0, 1] a step may produce before it is rejected.
inline constexpr double kStabilityBox = 1e-6;

enum class InitialKind { front, ball, bump, field };

const char* to_string(InitialKind kind);

/// Initial data. `front`: theta behind a smoothed step at R/2, so that
/// theta chi_(-inf,0) <= u0 <= chi_(-inf,R) away from the periodic seam.
/// `ball`: theta on |x| <= R', zero beyond R, smoothed step in between.
/// `bump`: the radial bump u(|x|). `field`: an explicit grid field.
/// Steps are C-infinity ramps spanning four grid cells.
struct InitialCondition {
    InitialKind kind = InitialKind::front;
    double theta = 0.0;
    double R_inner = 0.0;  ///< R' for balls
    double R = 0.0;
    std::shared_ptr<const BumpProfile> bump;
    std::shared_ptr<const GridField> field;

    static InitialCondition front(double theta, double R);
    static InitialCondition ball(double theta, double R_inner, double R);
    static InitialCondition from_bump(BumpProfile bump);
    static InitialCondition from_field(GridField field);

    /// Radius (or front position) outside which the data vanishes.
    double extent() const;
};

enum class Geometry { front, radial };

const char* to_string(Geometry g);

struct SolverConfig {
    double s = 0.5;
    int dimension = 1;
    double half_width = 64.0;
    std::size_t points_per_axis = 1024;
    double dt_initial = 0.01;
    double t_final = 1.0;
    ReactionSpec reaction;
    InitialCondition initial;
    std::vector<double> output_times;
    /// Multiplies the theoretical growth law when predicting the front.
    double front_amplitude = 1.0;
    /// Level used for the saturation test.
    double saturation_level = 0.1;
    /// Keep fields in the trajectory; off for large runs fed to an observer.
    bool store_fields = true;
};

/// Front geometry for front data, radial otherwise.
Geometry geometry_of(const SolverConfig& cfg);

/// Part of the box where level sets are meaningful. For front data on the
/// periodic box the plateau also invades the gap from the seam at +-L, so
/// tracking stops halfway across the gap; radial data uses |x| <= L.
struct TrackWindow {
    double lo = 0.0;
    double hi = 0.0;
};

TrackWindow tracking_window(const SolverConfig& cfg);

/// The growth law the theory predicts for this reaction and initial data,
/// times front_amplitude, plus the initial extent: t^{1/(2s)} for ignition
/// (s < 1/2), t^{alpha/(2s(alpha-1))} for alpha-monostable in the algebraic
/// regime, exp(f'(0) t/(2s)) or exp(f'(0) t/(d+2s)) for KPP, linear otherwise.
double predicted_front(const SolverConfig& cfg, double t);

/// Throws ConfigError naming the offending field.
void validate(const SolverConfig& cfg);

GridField initial_field(const SolverConfig& cfg);

/// Fourier multipliers and FFT plans reused across steps of one run.
class Stepper {
public:
    Stepper(double s, ReactionSpec f, int dimension, double half_width, std::size_t points_per_axis);
    ~Stepper();
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    /// One ETD2 step. Throws StabilityError when the result leaves
    /// [-1e-6, 1 + 1e-6]; `in` is untouched in that case.
    void step(const GridField& in, GridField& out, double dt);
    /// Most negative entry among the grid heat kernels of the step sizes used.
    double kernel_floor() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// predictor a = S_dt[u] + dt S_dt[f(u)],
/// u+ = S_dt[u] + (dt/2)(S_dt[f(u)] + f(a)).
GridField step(const GridField& state, const SolverConfig& cfg, double dt);

struct Snapshot {
    double t = 0.0;
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
    GridField field;  ///< empty unless store_fields
};

struct DtChange {
    double t = 0.0;
    double dt = 0.0;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<DtChange> dt_history;
    long steps = 0;
    int halvings = 0;
    /// Largest amount any accepted step had to be clipped back into [0, 1].
    double max_clip = 0.0;
    bool saturated = false;
    double saturation_time = 0.0;
    double saturation_position = 0.0;
};

using Observer = std::function<void(double t, const GridField& u)>;

/// Integrates to t_final, landing exactly on every output time. On a
/// StabilityError the step is retried with dt halved (at most 8 times over
/// the run). Accepted steps are clipped to [0, 1]. The run stops early with
/// `saturated` set once the saturation level passes 90% of the tracking
/// window.
Trajectory run(const SolverConfig& cfg, const Observer& observer = {});

struct ComparisonReport {
    double max_violation = 0.0;  ///< max over steps of max(u - v)
    double time_of_max = 0.0;
    long steps = 0;
    int halvings = 0;
    bool identical = true;  ///< u and v agreed bit for bit at every step
    /// Most negative entry of the discrete heat kernels used; order is only
    /// guaranteed when this is >= 0 up to rounding.
    double kernel_floor = 0.0;
};

/// Evolves u0 and v0 with the same dt sequence (halving both on a
/// stability error) and tracks max(u - v). Requires u0 <= v0 nodewise.
ComparisonReport comparison_test(const GridField& u0, const GridField& v0, const SolverConfig& cfg);

}  // namespace fraclab
