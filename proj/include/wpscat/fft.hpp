#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <vector>

// Iterative radix-2 complex FFT.  Grids in this project are power-of-two by
// contract, so no mixed-radix machinery is needed.  Forward uses the
// e^{-2*pi*i*k*m/N} kernel; inverse carries the 1/N factor.

namespace wpscat::fft {

using cd = std::complex<double>;

inline const std::vector<cd>& twiddle_table(std::size_t n) {
    static thread_local std::map<std::size_t, std::vector<cd>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cd> w(n / 2);
    const double step = -2.0 * 3.14159265358979323846 / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
        w[j] = std::polar(1.0, step * static_cast<double>(j));
    return cache.emplace(n, std::move(w)).first->second;
}

// In-place transform with unit stride. sign=-1: forward, sign=+1: inverse
// (inverse includes 1/n).
inline void transform(cd* a, std::size_t n, int sign) {
    if (n <= 1) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& w = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t tstep = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cd tw = w[j * tstep];
                if (sign > 0) tw = std::conj(tw);
                const cd u = a[i + j];
                const cd v = a[i + j + half] * tw;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
    if (sign > 0) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
    }
}

// Transform every axis-aligned line of a dim-dimensional cube with side n
// (row-major layout, dim is 1 or 2).
inline void transform_nd(std::vector<cd>& data, int dim, std::size_t n, int sign) {
    if (dim == 1) {
        transform(data.data(), n, sign);
        return;
    }
    // rows
    for (std::size_t r = 0; r < n; ++r) transform(data.data() + r * n, n, sign);
    // columns
    std::vector<cd> line(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) line[r] = data[r * n + c];
        transform(line.data(), n, sign);
        for (std::size_t r = 0; r < n; ++r) data[r * n + c] = line[r];
    }
}

} // namespace wpscat::fft
