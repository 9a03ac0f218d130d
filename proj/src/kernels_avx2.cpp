// AVX2 kernel variants. Compiled with -mavx2 -mno-fma; every operation keeps
// the exact rounding order of the scalar reference in kernels.cpp, so outputs
// are bit-identical between backends.
#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>

namespace shelab::kern::avx2 {

namespace {

// Unaligned shifted load with zero ghosts at the array ends.
inline __m256d load_shifted(const double* f, int i, int shift, int n) {
    alignas(32) double tmp[4];
    for (int k = 0; k < 4; ++k) {
        const int j = i + k + shift;
        tmp[k] = (j >= 0 && j < n) ? f[j] : 0.0;
    }
    return _mm256_load_pd(tmp);
}

} // namespace

void second_diff_1d(const double* f, double* out, int n, double inv_h2) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d ih2 = _mm256_set1_pd(inv_h2);
    int i = 0;
    if (n > 0) {
        const double r0 = (n > 1) ? f[1] : 0.0;
        out[0] = ((0.0 + r0) - 2.0 * f[0]) * inv_h2;
        i = 1;
    }
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d l = _mm256_loadu_pd(f + i - 1);
        const __m256d c = _mm256_loadu_pd(f + i);
        const __m256d r = _mm256_loadu_pd(f + i + 1);
        const __m256d v = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_add_pd(l, r), _mm256_mul_pd(two, c)), ih2);
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) {
        const double l = (i > 0) ? f[i - 1] : 0.0;
        const double r = (i + 1 < n) ? f[i + 1] : 0.0;
        out[i] = ((l + r) - 2.0 * f[i]) * inv_h2;
    }
}

void central_diff_1d(const double* f, double* out, int n, double inv_2h) {
    const __m256d i2h = _mm256_set1_pd(inv_2h);
    int i = 0;
    if (n > 0) {
        const double r0 = (n > 1) ? f[1] : 0.0;
        out[0] = (r0 - 0.0) * inv_2h;
        i = 1;
    }
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d l = _mm256_loadu_pd(f + i - 1);
        const __m256d r = _mm256_loadu_pd(f + i + 1);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(r, l), i2h));
    }
    for (; i < n; ++i) {
        const double l = (i > 0) ? f[i - 1] : 0.0;
        const double r = (i + 1 < n) ? f[i + 1] : 0.0;
        out[i] = (r - l) * inv_2h;
    }
}

void second_diff_2d(const double* f, double* out, int nx, int ny, double inv_h2) {
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d ih2 = _mm256_set1_pd(inv_h2);
    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + static_cast<std::size_t>(iy) * nx;
        const double* up = (iy > 0) ? row - nx : nullptr;
        const double* dn = (iy + 1 < ny) ? row + nx : nullptr;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        int ix = 0;
        for (; ix + 4 <= nx; ix += 4) {
            const bool interior = (ix >= 1) && (ix + 4 <= nx - 1);
            const __m256d l = interior ? _mm256_loadu_pd(row + ix - 1)
                                       : load_shifted(row, ix, -1, nx);
            const __m256d r = interior ? _mm256_loadu_pd(row + ix + 1)
                                       : load_shifted(row, ix, +1, nx);
            const __m256d c = _mm256_loadu_pd(row + ix);
            const __m256d u = up ? _mm256_loadu_pd(up + ix) : _mm256_setzero_pd();
            const __m256d d = dn ? _mm256_loadu_pd(dn + ix) : _mm256_setzero_pd();
            const __m256d v = _mm256_mul_pd(
                _mm256_sub_pd(_mm256_add_pd(_mm256_add_pd(l, r), _mm256_add_pd(u, d)),
                              _mm256_mul_pd(four, c)),
                ih2);
            _mm256_storeu_pd(o + ix, v);
        }
        for (; ix < nx; ++ix) {
            const double l = (ix > 0) ? row[ix - 1] : 0.0;
            const double r = (ix + 1 < nx) ? row[ix + 1] : 0.0;
            const double u = up ? up[ix] : 0.0;
            const double d = dn ? dn[ix] : 0.0;
            o[ix] = (((l + r) + (u + d)) - 4.0 * row[ix]) * inv_h2;
        }
    }
}

void central_diff_2d_x(const double* f, double* out, int nx, int ny, double inv_2h) {
    const __m256d i2h = _mm256_set1_pd(inv_2h);
    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + static_cast<std::size_t>(iy) * nx;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        int ix = 0;
        for (; ix + 4 <= nx; ix += 4) {
            const bool interior = (ix >= 1) && (ix + 4 <= nx - 1);
            const __m256d l = interior ? _mm256_loadu_pd(row + ix - 1)
                                       : load_shifted(row, ix, -1, nx);
            const __m256d r = interior ? _mm256_loadu_pd(row + ix + 1)
                                       : load_shifted(row, ix, +1, nx);
            _mm256_storeu_pd(o + ix, _mm256_mul_pd(_mm256_sub_pd(r, l), i2h));
        }
        for (; ix < nx; ++ix) {
            const double l = (ix > 0) ? row[ix - 1] : 0.0;
            const double r = (ix + 1 < nx) ? row[ix + 1] : 0.0;
            o[ix] = (r - l) * inv_2h;
        }
    }
}

void central_diff_2d_y(const double* f, double* out, int nx, int ny, double inv_2h) {
    const __m256d i2h = _mm256_set1_pd(inv_2h);
    for (int iy = 0; iy < ny; ++iy) {
        const double* up = (iy > 0) ? f + static_cast<std::size_t>(iy - 1) * nx : nullptr;
        const double* dn = (iy + 1 < ny) ? f + static_cast<std::size_t>(iy + 1) * nx : nullptr;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        int ix = 0;
        for (; ix + 4 <= nx; ix += 4) {
            const __m256d u = up ? _mm256_loadu_pd(up + ix) : _mm256_setzero_pd();
            const __m256d d = dn ? _mm256_loadu_pd(dn + ix) : _mm256_setzero_pd();
            _mm256_storeu_pd(o + ix, _mm256_mul_pd(_mm256_sub_pd(d, u), i2h));
        }
        for (; ix < nx; ++ix) {
            const double u = up ? up[ix] : 0.0;
            const double d = dn ? dn[ix] : 0.0;
            o[ix] = (d - u) * inv_2h;
        }
    }
}

void fused_rhs(const double* u, const double* lap, const double* s, double c,
               double* out, int n) {
    const __m256d cv = _mm256_set1_pd(c);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d uv = _mm256_loadu_pd(u + i);
        const __m256d lv = _mm256_loadu_pd(lap + i);
        const __m256d sv = _mm256_loadu_pd(s + i);
        const __m256d r = _mm256_add_pd(_mm256_add_pd(uv, _mm256_mul_pd(cv, lv)),
                                        _mm256_mul_pd(sv, uv));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = (u[i] + c * lap[i]) + s[i] * u[i];
}

void axpy(double a, const double* x, double* y, int n) {
    const __m256d av = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d yv = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, int n) {
    __m256d acc = _mm256_setzero_pd();
    const int n4 = n - (n % 4);
    for (int i = 0; i < n4; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                               _mm256_loadu_pd(b + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double tail = 0.0;
    for (int i = n4; i < n; ++i) tail = tail + a[i] * b[i];
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

} // namespace shelab::kern::avx2

#endif // __x86_64__
