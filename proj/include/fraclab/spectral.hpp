#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fraclab/grid_field.hpp"

namespace fraclab {

/// Real-to-complex FFT plans and scratch buffers for one grid geometry.
/// Not thread-safe: give each worker its own context.
class SpectralContext {
public:
    SpectralContext(int dimension, double half_width, std::size_t points_per_axis);
    ~SpectralContext();
    SpectralContext(const SpectralContext&) = delete;
    SpectralContext& operator=(const SpectralContext&) = delete;

    int dimension() const { return dimension_; }
    std::size_t real_size() const { return real_size_; }
    std::size_t spectral_size() const { return spectral_size_; }

    /// |xi|^2 for every stored half-spectrum coefficient.
    const std::vector<double>& wavenumber_squared() const { return xi2_; }

    /// |xi|^{2s} per coefficient, with the 1/N inverse-transform factor folded in.
    std::vector<double> fractional_symbol(double s) const;
    /// exp(-|xi|^{2s} t) per coefficient, with the 1/N factor folded in.
    std::vector<double> heat_multiplier(double s, double t) const;

    /// out = IFFT(multiplier * FFT(in)). `in` and `out` may alias.
    void apply(const double* in, double* out, const std::vector<double>& multiplier);

private:
    int dimension_;
    std::size_t n_;
    std::size_t real_size_;
    std::size_t spectral_size_;
    std::vector<double> xi2_;
    double* real_buf_ = nullptr;
    void* spec_buf_ = nullptr;
    void* forward_ = nullptr;
    void* backward_ = nullptr;
};

/// Applies the Fourier multiplier |xi|^{2s}.
GridField spectral_apply(const GridField& field, double s);

/// The fractional heat semigroup S_t: multiplier exp(-|xi|^{2s} t).
GridField semigroup_step(const GridField& field, double s, double t);

}  // namespace fraclab
