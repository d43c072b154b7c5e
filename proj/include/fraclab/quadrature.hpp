#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace fraclab {

/// Far-field model u(y) ~ limit + coeff * |y|^{-decay}.
struct Tail {
    double limit = std::numeric_limits<double>::quiet_NaN();  // must be declared
    double coeff = 0.0;
    double decay = 0.0;
};

enum class ProfileGeometry { line, radial, planar };

/// A closed-form function on R^d that the quadrature can integrate against the
/// singular kernel. Line profiles live on R; radial profiles are functions of
/// |x| in R^d; planar profiles are general functions on R^2.
class Profile {
public:
    static Profile line(std::function<double(double)> f, Tail left, Tail right);
    static Profile radial(int dimension, std::function<double(double)> of_radius, Tail far);
    static Profile planar(std::function<double(double, double)> f, Tail far);
    static Profile constant(int dimension, double value);

    /// Locations where the profile is only Lipschitz (positions for line
    /// profiles, radii for radial ones).
    Profile& with_kinks(std::vector<double> kinks);
    /// Locations where the profile is smooth but changes character quickly;
    /// used only as mesh splits.
    Profile& with_breaks(std::vector<double> breaks);
    /// Length scales for the inner and outer cutoffs.
    Profile& with_scales(double inner, double outer);
    /// Caps the mesh panel width to `max_panel` for |h| up to |x| + zone.
    Profile& with_resolution(double max_panel, double zone = std::numeric_limits<double>::infinity());
    /// Marks the profile as oscillating with the given period; the tail then
    /// averages to `limit` and the outer cutoff snaps to a multiple of it.
    Profile& with_period(double period);
    /// Declares that a radial or planar profile equals its far limit for
    /// |x| >= radius; the outer cutoff then stops there exactly.
    Profile& with_support(double radius);

    ProfileGeometry geometry() const { return geometry_; }
    int dimension() const { return dimension_; }
    double operator()(double x) const;
    double at(double x, double y) const;

    const Tail& left_tail() const { return left_; }
    const Tail& right_tail() const { return right_; }
    const std::vector<double>& kinks() const { return kinks_; }
    const std::vector<double>& breaks() const { return breaks_; }
    double inner_scale() const { return inner_scale_; }
    double outer_scale() const { return outer_scale_; }
    double max_panel() const { return max_panel_; }
    double resolution_zone() const { return zone_; }
    double period() const { return period_; }
    double support() const { return support_; }

private:
    ProfileGeometry geometry_ = ProfileGeometry::line;
    int dimension_ = 1;
    std::function<double(double)> f1_;
    std::function<double(double, double)> f2_;
    Tail left_;
    Tail right_;
    std::vector<double> kinks_;
    std::vector<double> breaks_;
    double inner_scale_ = 1.0;
    double outer_scale_ = 1.0;
    double max_panel_ = std::numeric_limits<double>::infinity();
    double zone_ = std::numeric_limits<double>::infinity();
    double period_ = 0.0;
    double support_ = std::numeric_limits<double>::infinity();
};

struct QuadratureScheme {
    double s = 0.5;
    int dimension = 1;
    double inner_cutoff = 0.125;  ///< in units of the profile's inner scale
    double outer_cutoff = 1e6;    ///< in units of the profile's outer scale
    int nodes_per_decade = 32;
    int angular_panels = 16;      ///< 8-point Gauss panels over a half turn
    double normalization_constant = 0.0;

    /// Default resolution with a calibrated normalization.
    static QuadratureScheme make(double s, int dimension);
    /// Same scheme with mesh densities multiplied by `factor`.
    QuadratureScheme refined(double factor) const;
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// (-Delta)^s profile at x. For line and radial profiles x is a position or a
/// radius (the point (x, 0) in two dimensions).
QuadratureResult quadrature_apply_at(const Profile& profile, double x, const QuadratureScheme& scheme);
QuadratureResult quadrature_apply_at(const Profile& profile, double x, double y, const QuadratureScheme& scheme);

/// c_{s,d} fixed by requiring the quadrature to reproduce the symbol |xi|^{2s}
/// on a single Fourier mode. Memoized; deterministic.
double calibrate_constant(double s, int dimension);
double calibrate_constant(double s, int dimension, int nodes_per_decade);

}  // namespace fraclab
