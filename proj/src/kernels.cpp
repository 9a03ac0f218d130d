#include "shelab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace shelab::kern {

// ---------------------------------------------------------------------------
// Scalar reference kernels. These define the semantics; the AVX2 variants in
// kernels_avx2.cpp must match them bit for bit (same op order, no FMA).
// ---------------------------------------------------------------------------

namespace scalar {

void second_diff_1d(const double* f, double* out, int n, double inv_h2) {
    for (int i = 0; i < n; ++i) {
        const double l = (i > 0) ? f[i - 1] : 0.0;
        const double r = (i + 1 < n) ? f[i + 1] : 0.0;
        out[i] = ((l + r) - 2.0 * f[i]) * inv_h2;
    }
}

void central_diff_1d(const double* f, double* out, int n, double inv_2h) {
    for (int i = 0; i < n; ++i) {
        const double l = (i > 0) ? f[i - 1] : 0.0;
        const double r = (i + 1 < n) ? f[i + 1] : 0.0;
        out[i] = (r - l) * inv_2h;
    }
}

void second_diff_2d(const double* f, double* out, int nx, int ny, double inv_h2) {
    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + static_cast<std::size_t>(iy) * nx;
        const double* up = (iy > 0) ? row - nx : nullptr;
        const double* dn = (iy + 1 < ny) ? row + nx : nullptr;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double l = (ix > 0) ? row[ix - 1] : 0.0;
            const double r = (ix + 1 < nx) ? row[ix + 1] : 0.0;
            const double u = up ? up[ix] : 0.0;
            const double d = dn ? dn[ix] : 0.0;
            o[ix] = (((l + r) + (u + d)) - 4.0 * row[ix]) * inv_h2;
        }
    }
}

void central_diff_2d_x(const double* f, double* out, int nx, int ny, double inv_2h) {
    for (int iy = 0; iy < ny; ++iy) {
        const double* row = f + static_cast<std::size_t>(iy) * nx;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double l = (ix > 0) ? row[ix - 1] : 0.0;
            const double r = (ix + 1 < nx) ? row[ix + 1] : 0.0;
            o[ix] = (r - l) * inv_2h;
        }
    }
}

void central_diff_2d_y(const double* f, double* out, int nx, int ny, double inv_2h) {
    for (int iy = 0; iy < ny; ++iy) {
        const double* up = (iy > 0) ? f + static_cast<std::size_t>(iy - 1) * nx : nullptr;
        const double* dn = (iy + 1 < ny) ? f + static_cast<std::size_t>(iy + 1) * nx : nullptr;
        double* o = out + static_cast<std::size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double u = up ? up[ix] : 0.0;
            const double d = dn ? dn[ix] : 0.0;
            o[ix] = (d - u) * inv_2h;
        }
    }
}

void fused_rhs(const double* u, const double* lap, const double* s, double c,
               double* out, int n) {
    for (int i = 0; i < n; ++i) {
        out[i] = (u[i] + c * lap[i]) + s[i] * u[i];
    }
}

void axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

double dot(const double* a, const double* b, int n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const int n4 = n - (n % 4);
    for (int i = 0; i < n4; i += 4) {
        acc0 = acc0 + a[i] * b[i];
        acc1 = acc1 + a[i + 1] * b[i + 1];
        acc2 = acc2 + a[i + 2] * b[i + 2];
        acc3 = acc3 + a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (int i = n4; i < n; ++i) tail = tail + a[i] * b[i];
    return ((acc0 + acc1) + (acc2 + acc3)) + tail;
}

} // namespace scalar

#if defined(__x86_64__)
// AVX2 variants, compiled only on x86-64 (see kernels_avx2.cpp).
namespace avx2 {
void second_diff_1d(const double* f, double* out, int n, double inv_h2);
void central_diff_1d(const double* f, double* out, int n, double inv_2h);
void second_diff_2d(const double* f, double* out, int nx, int ny, double inv_h2);
void central_diff_2d_x(const double* f, double* out, int nx, int ny, double inv_2h);
void central_diff_2d_y(const double* f, double* out, int nx, int ny, double inv_2h);
void fused_rhs(const double* u, const double* lap, const double* s, double c,
               double* out, int n);
void axpy(double a, const double* x, double* y, int n);
double dot(const double* a, const double* b, int n);
} // namespace avx2
#endif

bool avx2_supported() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

std::atomic<int> g_backend{-1}; // -1 = unresolved

Backend resolve() {
    const char* env = std::getenv("SHELAB_KERNELS");
    std::string want = env ? env : "auto";
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2") {
        if (!avx2_supported()) throw std::runtime_error("AVX2 kernels requested but unsupported");
        return Backend::avx2;
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend current() {
    int b = g_backend.load(std::memory_order_acquire);
    if (b < 0) {
        Backend r = resolve();
        g_backend.store(static_cast<int>(r), std::memory_order_release);
        return r;
    }
    return static_cast<Backend>(b);
}

} // namespace

Backend active() { return current(); }

void force(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw std::runtime_error("AVX2 kernels requested but unsupported");
    g_backend.store(static_cast<int>(b), std::memory_order_release);
}

void force_from_string(const std::string& name) {
    if (name == "scalar") force(Backend::scalar);
    else if (name == "avx2") force(Backend::avx2);
    else if (name == "auto") g_backend.store(-1, std::memory_order_release);
    else throw std::runtime_error("unknown kernel backend: " + name);
}

const char* name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

#if defined(__x86_64__)
#define SHELAB_DISPATCH(fn, ...)                                \
    do {                                                        \
        if (current() == Backend::avx2) return avx2::fn(__VA_ARGS__); \
        return scalar::fn(__VA_ARGS__);                         \
    } while (0)
#else
#define SHELAB_DISPATCH(fn, ...)        \
    do {                                \
        (void)current();                \
        return scalar::fn(__VA_ARGS__); \
    } while (0)
#endif

void second_diff_1d(const double* f, double* out, int n, double inv_h2) {
    SHELAB_DISPATCH(second_diff_1d, f, out, n, inv_h2);
}
void central_diff_1d(const double* f, double* out, int n, double inv_2h) {
    SHELAB_DISPATCH(central_diff_1d, f, out, n, inv_2h);
}
void second_diff_2d(const double* f, double* out, int nx, int ny, double inv_h2) {
    SHELAB_DISPATCH(second_diff_2d, f, out, nx, ny, inv_h2);
}
void central_diff_2d_x(const double* f, double* out, int nx, int ny, double inv_2h) {
    SHELAB_DISPATCH(central_diff_2d_x, f, out, nx, ny, inv_2h);
}
void central_diff_2d_y(const double* f, double* out, int nx, int ny, double inv_2h) {
    SHELAB_DISPATCH(central_diff_2d_y, f, out, nx, ny, inv_2h);
}
void fused_rhs(const double* u, const double* lap, const double* s, double c,
               double* out, int n) {
    SHELAB_DISPATCH(fused_rhs, u, lap, s, c, out, n);
}
void axpy(double a, const double* x, double* y, int n) {
    SHELAB_DISPATCH(axpy, a, x, y, n);
}
double dot(const double* a, const double* b, int n) {
    SHELAB_DISPATCH(dot, a, b, n);
}

#undef SHELAB_DISPATCH

} // namespace shelab::kern
