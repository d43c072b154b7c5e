#include "fraclab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double signed_index(std::size_t i, std::size_t n) {
    return i <= n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
}

}  // namespace

SpectralContext::SpectralContext(int dimension, double half_width, std::size_t n)
    : dimension_(dimension), n_(n) {
    if (dimension != 1 && dimension != 2) throw ContractError("SpectralContext: dimension must be 1 or 2");
    const std::size_t half = n / 2 + 1;
    real_size_ = dimension == 1 ? n : n * n;
    spectral_size_ = dimension == 1 ? half : n * half;

    const double k0 = std::numbers::pi / half_width;  // 2*pi / L with L = 2*half_width
    xi2_.resize(spectral_size_);
    if (dimension == 1) {
        for (std::size_t j = 0; j < half; ++j) {
            double k = k0 * static_cast<double>(j);
            xi2_[j] = k * k;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double ki = k0 * signed_index(i, n);
            for (std::size_t j = 0; j < half; ++j) {
                double kj = k0 * static_cast<double>(j);
                xi2_[i * half + j] = ki * ki + kj * kj;
            }
        }
    }

    real_buf_ = fftw_alloc_real(real_size_);
    auto* spec = fftw_alloc_complex(spectral_size_);
    spec_buf_ = spec;
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int ni = static_cast<int>(n);
    if (dimension == 1) {
        forward_ = fftw_plan_dft_r2c_1d(ni, real_buf_, spec, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_1d(ni, spec, real_buf_, FFTW_ESTIMATE);
    } else {
        forward_ = fftw_plan_dft_r2c_2d(ni, ni, real_buf_, spec, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_2d(ni, ni, spec, real_buf_, FFTW_ESTIMATE);
    }
}

SpectralContext::~SpectralContext() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
    fftw_free(real_buf_);
    fftw_free(spec_buf_);
}

std::vector<double> SpectralContext::fractional_symbol(double s) const {
    std::vector<double> m(spectral_size_);
    const double inv_n = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < spectral_size_; ++i) m[i] = std::pow(xi2_[i], s) * inv_n;
    return m;
}

std::vector<double> SpectralContext::heat_multiplier(double s, double t) const {
    std::vector<double> m(spectral_size_);
    const double inv_n = 1.0 / static_cast<double>(real_size_);
    for (std::size_t i = 0; i < spectral_size_; ++i) m[i] = std::exp(-std::pow(xi2_[i], s) * t) * inv_n;
    return m;
}

void SpectralContext::apply(const double* in, double* out, const std::vector<double>& multiplier) {
    if (in != real_buf_) std::memcpy(real_buf_, in, real_size_ * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(forward_));
    auto* spec = static_cast<fftw_complex*>(spec_buf_);
    for (std::size_t i = 0; i < spectral_size_; ++i) {
        spec[i][0] *= multiplier[i];
        spec[i][1] *= multiplier[i];
    }
    // c2r destroys its input, which is fine since the spectrum is scratch.
    fftw_execute(static_cast<fftw_plan>(backward_));
    std::memcpy(out, real_buf_, real_size_ * sizeof(double));
}

GridField spectral_apply(const GridField& field, double s) {
    if (!(s > 0.0 && s < 1.0)) throw ContractError("spectral_apply: s must lie in (0,1)");
    field.require_finite();
    SpectralContext ctx(field.dimension(), field.half_width(), field.points_per_axis());
    GridField out = field;
    ctx.apply(field.values().data(), out.values().data(), ctx.fractional_symbol(s));
    return out;
}

GridField semigroup_step(const GridField& field, double s, double t) {
    if (!(t > 0.0)) throw ContractError("semigroup_step: t must be positive");
    if (!(s > 0.0 && s < 1.0)) throw ContractError("semigroup_step: s must lie in (0,1)");
    field.require_finite();
    SpectralContext ctx(field.dimension(), field.half_width(), field.points_per_axis());
    GridField out = field;
    ctx.apply(field.values().data(), out.values().data(), ctx.heat_multiplier(s, t));
    return out;
}

}  // namespace fraclab
