#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fraclab {

/// Tolerance for solution states living in [0, 1].
inline constexpr double kTolBox = 1e-8;

/// Samples on the periodic box [-half_width, half_width)^d, d in {1, 2}.
/// 2D storage is row-major with the first axis as the slow index.
class GridField {
public:
    GridField() = default;
    GridField(int dimension, double half_width, std::size_t points_per_axis, double fill = 0.0);

    /// Samples f(x, y) at every node; y is 0 in one dimension.
    static GridField sample(int dimension, double half_width, std::size_t points_per_axis,
                            const std::function<double(double, double)>& f);

    int dimension() const { return dimension_; }
    double half_width() const { return half_width_; }
    std::size_t points_per_axis() const { return n_; }
    std::size_t size() const { return values_.size(); }
    double spacing() const { return 2.0 * half_width_ / static_cast<double>(n_); }
    double coordinate(std::size_t i) const { return -half_width_ + static_cast<double>(i) * spacing(); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool same_grid(const GridField& other) const;

    /// Throws DataError on the first non-finite value.
    void require_finite() const;
    /// True when every value lies in [-tol, 1 + tol].
    bool in_unit_box(double tol = kTolBox) const;

    double min() const;
    double max() const;
    /// Riemann sum of the values times the cell volume.
    double mass() const;

private:
    int dimension_ = 1;
    double half_width_ = 1.0;
    std::size_t n_ = 0;
    std::vector<double> values_;
};

}  // namespace fraclab
