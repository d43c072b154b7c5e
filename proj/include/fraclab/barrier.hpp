#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab {

enum class BarrierMode { super, sub };

const char* to_string(BarrierMode mode);

/// Times on which a barrier is claimed to be a super- or subsolution.
struct TimeWindow {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool closed_lo = false;

    bool empty() const { return !(lo < hi); }
    bool contains(double t) const { return (closed_lo ? t >= lo : t > lo) && t < hi; }
};

/// An explicit space-time function used to trap solutions.
///
/// Positions are local coordinates z: the absolute position is origin(t) + z
/// for line barriers, and z is the radius |x| for radial ones. Barriers whose
/// front sits at astronomically large |x| stay accurate this way.
class Barrier {
public:
    virtual ~Barrier() = default;

    virtual std::string id() const = 0;
    virtual std::string kind() const = 0;
    virtual BarrierMode intended_mode() const = 0;
    virtual double s() const = 0;
    virtual int dimension() const = 0;
    virtual bool radial() const = 0;
    virtual TimeWindow window() const = 0;

    virtual double origin(double /*t*/) const { return 0.0; }
    virtual double value(double t, double z) const = 0;
    /// Time derivative at fixed absolute position. The default is a centered
    /// difference with step 1e-4 t.
    virtual double time_derivative(double t, double z) const;
    /// The profile at time t in local coordinates, ready for quadrature.
    virtual Profile profile_at(double t) const = 0;
    /// Local coordinates where branches meet.
    virtual std::vector<double> junctions(double t) const = 0;
    /// Spatial certification points at time t, `count` of them.
    virtual std::vector<double> sample_points(double t, int count) const = 0;
    /// Times to certify when the window has no finite upper end.
    virtual double sampling_horizon() const { return window().hi; }
};

}  // namespace fraclab
