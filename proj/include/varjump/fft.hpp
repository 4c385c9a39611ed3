#ifndef VARJUMP_FFT_HPP
#define VARJUMP_FFT_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace varjump {
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
}  // namespace varjump

namespace varjump::fft {

using cdouble = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// Forward twiddle table exp(-2*pi*i*j/n), j < n/2.  Cached per length,
// thread_local so concurrent transforms never share mutable state.
inline const std::vector<cdouble>& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::vector<cdouble>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cdouble> w(n / 2);
    const double step = -6.283185307179586476925286766559 / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
        w[j] = std::polar(1.0, step * static_cast<double>(j));
    return cache.emplace(n, std::move(w)).first->second;
}

}  // namespace detail

// In-place iterative radix-2 transform.  Unnormalized forward; the inverse
// applies conjugate twiddles and the 1/n factor.
inline void transform(std::vector<cdouble>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = detail::twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cdouble t = w[j * stride];
                if (inverse) t = std::conj(t);
                t *= a[i + j + len / 2];
                const cdouble u = a[i + j];
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

// Row-major rows x cols transform, rows and cols powers of two.
inline void transform_2d(std::vector<cdouble>& a, std::size_t rows, std::size_t cols, bool inverse) {
    if (a.size() != rows * cols) throw std::invalid_argument("fft: size mismatch");
    std::vector<cdouble> buf;
    buf.resize(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy(a.begin() + r * cols, a.begin() + (r + 1) * cols, buf.begin());
        transform(buf, inverse);
        std::copy(buf.begin(), buf.end(), a.begin() + r * cols);
    }
    buf.resize(rows);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < rows; ++r) buf[r] = a[r * cols + c];
        transform(buf, inverse);
        for (std::size_t r = 0; r < rows; ++r) a[r * cols + c] = buf[r];
    }
}

}  // namespace varjump::fft

#endif  // VARJUMP_FFT_HPP
