#pragma once

#include <optional>
#include <vector>

#include "fraclab/solver.hpp"

namespace fraclab {

/// x_under = inf{x : u <= lambda} and x_over = sup{x : u >= lambda} inside a
/// tracking window, linearly interpolated between straddling nodes; a level
/// met at the window edge reports the edge. Radial geometry reduces u over
/// shells of width one cell by min (for x_under) and max (for x_over) and
/// reports radii. Entries are empty when the set is empty.
struct LevelPositions {
    std::optional<double> x_under;
    std::optional<double> x_over;
};

LevelPositions level_positions(const GridField& u, double lambda, Geometry g, const TrackWindow& w);

struct LevelSetSeries {
    double lambda = 0.5;
    Geometry geometry = Geometry::front;
    std::vector<double> times;
    /// NaN marks an absent entry.
    std::vector<double> x_under;
    std::vector<double> x_over;
};

/// Records level positions at every observed time; usable as a run observer.
class LevelSetRecorder {
public:
    LevelSetRecorder(std::vector<double> lambdas, Geometry g, TrackWindow w);
    void operator()(double t, const GridField& u);
    const std::vector<LevelSetSeries>& series() const { return series_; }

private:
    TrackWindow window_;
    std::vector<LevelSetSeries> series_;
};

LevelSetSeries track(const Trajectory& trajectory, double lambda, Geometry g, const TrackWindow& w);

struct FitWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// Last decade of [0, t_end], never reaching below 0.1 t_end.
FitWindow late_window(double t_end);

struct FitResult {
    double slope = 0.0;      ///< exponent p, or rate sigma
    double amplitude = 0.0;  ///< exp(intercept)
    double residual = 0.0;   ///< max |fit - data| in the fitted coordinates
    int samples = 0;
};

/// Least squares of log x against log t over the window. Needs 8 samples;
/// throws ContractError on nonpositive positions.
FitResult fit_power(const std::vector<double>& times, const std::vector<double>& x, FitWindow w);
/// Least squares of log x against t.
FitResult fit_exponential(const std::vector<double>& times, const std::vector<double>& x, FitWindow w);

/// x_under(sub) <= x_under(sim) and x_over(sim) <= x_over(super) at every
/// time, reading an absent x_under as +inf and an absent x_over as -inf.
/// Throws ContractError unless the time grids agree.
bool sandwich_check(const LevelSetSeries& sub, const LevelSetSeries& sim, const LevelSetSeries& super);

}  // namespace fraclab
