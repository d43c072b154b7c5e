#pragma once

// Panel rules shared by the singular-integral code and a few constant
// computations elsewhere in the library.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "fraclab/quadrature.hpp"

namespace fraclab::detail {

/// One Gauss-Kronrod 15 panel; `err` receives |K15 - G7|.
template <class F>
double gk15_panel(F&& f, double a, double b, double& err) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    using g7 = boost::math::quadrature::gauss<double, 7>;
    static const auto& x = gk::abscissa();
    static const auto& wk = gk::weights();
    static const auto& wg = g7::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = wk[0] * fc;
    double g = wg[0] * fc;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double pair = f(c + h * x[i]) + f(c - h * x[i]);
        k += wk[i] * pair;
        if (i % 2 == 0) g += wg[i / 2] * pair;
    }
    err = std::abs(k - g) * h;
    return k * h;
}

double gk15(const std::function<double(double)>& f, double a, double b, double& err);

/// Geometric mesh on [lo, hi] with the given density, refined at `splits`
/// and with panels capped at `max_panel` while they start below `zone_end`.
std::vector<double> graded_mesh(double lo, double hi, int nodes_per_decade, std::vector<double> splits,
                                double max_panel, double zone_end);

/// Integral of w(h) h^{-1-2s} over (0, H): panels on [h_floor, H] plus a local
/// model below h_floor (quadratic in h, or linear at a kink).
template <class W>
QuadratureResult singular_integral(W&& w, double s, double h_floor, double H, const std::vector<double>& splits,
                                   bool kink, int nodes_per_decade, double max_panel, double zone_end) {
    const std::vector<double> mesh = graded_mesh(h_floor, H, nodes_per_decade, splits, max_panel, zone_end);
    const double p = -1.0 - 2.0 * s;
    auto integrand = [&](double h) { return w(h) * std::pow(h, p); };
    QuadratureResult r;
    for (std::size_t i = 1; i < mesh.size(); ++i) {
        double err = 0.0;
        r.value += gk15_panel(integrand, mesh[i - 1], mesh[i], err);
        r.error += err;
    }
    const double w0 = w(h_floor);
    const double inner = w0 * std::pow(h_floor, -2.0 * s) / (kink ? 1.0 - 2.0 * s : 2.0 - 2.0 * s);
    r.value += inner;
    r.error += 1e-6 * std::abs(inner);
    return r;
}

}  // namespace fraclab::detail
