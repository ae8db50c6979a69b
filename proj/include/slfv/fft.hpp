#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "slfv/errors.hpp"

namespace slfv {

/// In-place iterative radix-2 complex FFT. Length must be a power of two.
/// inverse = true applies the conjugate transform and the 1/N factor.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw input_error("fft: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

/// Row-column 2D FFT on an nx-by-ny row-major array.
inline void fft_2d(std::vector<std::complex<double>>& a, std::size_t nx, std::size_t ny, bool inverse) {
    if (a.size() != nx * ny) throw input_error("fft_2d: size mismatch");
    std::vector<std::complex<double>> buf;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        buf.assign(a.begin() + static_cast<long>(ix * ny), a.begin() + static_cast<long>((ix + 1) * ny));
        fft(buf, inverse);
        std::copy(buf.begin(), buf.end(), a.begin() + static_cast<long>(ix * ny));
    }
    buf.resize(nx);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) buf[ix] = a[ix * ny + iy];
        fft(buf, inverse);
        for (std::size_t ix = 0; ix < nx; ++ix) a[ix * ny + iy] = buf[ix];
    }
}

} // namespace slfv
