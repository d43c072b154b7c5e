#include "fraclab/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {

GridField::GridField(int dimension, double half_width, std::size_t points_per_axis, double fill)
    : dimension_(dimension), half_width_(half_width), n_(points_per_axis) {
    if (dimension != 1 && dimension != 2)
        throw ContractError("GridField: dimension must be 1 or 2");
    if (!(half_width > 0.0))
        throw ContractError("GridField: half_width must be positive");
    if (points_per_axis < 16 || (points_per_axis & (points_per_axis - 1)) != 0)
        throw ContractError("GridField: points_per_axis must be a power of two >= 16");
    std::size_t total = dimension == 1 ? n_ : n_ * n_;
    values_.assign(total, fill);
}

GridField GridField::sample(int dimension, double half_width, std::size_t points_per_axis,
                            const std::function<double(double, double)>& f) {
    GridField g(dimension, half_width, points_per_axis);
    if (dimension == 1) {
        for (std::size_t i = 0; i < g.n_; ++i) g.values_[i] = f(g.coordinate(i), 0.0);
    } else {
        for (std::size_t i = 0; i < g.n_; ++i)
            for (std::size_t j = 0; j < g.n_; ++j)
                g.values_[i * g.n_ + j] = f(g.coordinate(i), g.coordinate(j));
    }
    return g;
}

bool GridField::same_grid(const GridField& other) const {
    return dimension_ == other.dimension_ && n_ == other.n_ && half_width_ == other.half_width_;
}

void GridField::require_finite() const {
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw DataError("non-finite value at node " + std::to_string(i));
}

bool GridField::in_unit_box(double tol) const {
    return std::all_of(values_.begin(), values_.end(),
                       [tol](double v) { return v >= -tol && v <= 1.0 + tol; });
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double GridField::mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum * std::pow(spacing(), dimension_);
}

}  // namespace fraclab
