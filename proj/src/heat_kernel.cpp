#include "fraclab/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/quadrature_detail.hpp"

namespace fraclab {

double fractional_heat_kernel(double s, int d, double r) {
    if (!(s > 0.0 && s < 1.0)) throw ContractError("fractional_heat_kernel: s must lie in (0,1)");
    if (d != 1 && d != 2) throw ContractError("fractional_heat_kernel: dimension must be 1 or 2");
    r = std::abs(r);
    // exp(-xi^{2s}) drops below 1e-17 past this point.
    const double xi_max = std::pow(40.0, 1.0 / (2.0 * s));
    const double panel = std::min(0.5, std::numbers::pi / (4.0 * std::max(r, 1e-300)));
    auto integrand = [&](double xi) {
        const double decay = std::exp(-std::pow(xi, 2.0 * s));
        if (d == 1) return std::cos(xi * r) * decay;
        return std::cyl_bessel_j(0.0, xi * r) * decay * xi;
    };
    std::vector<double> mesh = detail::graded_mesh(1e-12, xi_max, 16, {1.0}, panel, xi_max);
    double sum = 0.0;
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        double err = 0.0;
        sum += detail::gk15_panel(integrand, mesh[i - 1], mesh[i], err);
    }
    return d == 1 ? sum / std::numbers::pi : sum / (2.0 * std::numbers::pi);
}

double heat_kernel_lower_constant(double s, int d) {
    const double q = d + 2.0 * s;
    double lowest = calibrate_constant(s, d);
    for (int i = 0; i <= 200; ++i) {
        // Dense near the origin, geometric further out.
        const double z = i <= 100 ? 0.05 * i : 5.0 * std::pow(40.0, (i - 100) / 100.0);
        lowest = std::min(lowest, fractional_heat_kernel(s, d, z) * (1.0 + std::pow(z, q)));
    }
    if (!(lowest > 0.0)) throw ConsistencyError("heat_kernel_lower_constant: nonpositive kernel sample");
    return 0.9 * lowest;
}

double far_field_constant(double s, int d, double theta) {
    const double omega = d == 1 ? 2.0 : 2.0 * std::numbers::pi;
    return std::pow(2.0, -d - 2.0 * s - 1.0) / d * heat_kernel_lower_constant(s, d) * theta * omega;
}

}  // namespace fraclab
