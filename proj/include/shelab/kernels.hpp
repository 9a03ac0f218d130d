#pragma once

#include <string>

namespace shelab::kern {

/// Inner-loop arithmetic kernels behind the grid and solver hot paths.
///
/// Two implementations exist: a scalar reference and an AVX2 variant picked
/// at runtime. Both use the same operation and reduction order (4-lane
/// interleaved accumulators, no FMA), so for identical inputs they produce
/// bit-identical outputs. The active backend is recorded in run manifests.
enum class Backend { scalar, avx2 };

bool avx2_supported();

/// Currently active backend (resolved on first use from force()/environment
/// variable SHELAB_KERNELS=scalar|avx2|auto, default auto).
Backend active();

/// Force a backend for this process. Throws if unsupported on this machine.
void force(Backend b);
void force_from_string(const std::string& name);

const char* name(Backend b);

// All stencils treat values outside the index range as 0 (Dirichlet ghost).
void second_diff_1d(const double* f, double* out, int n, double inv_h2);
void central_diff_1d(const double* f, double* out, int n, double inv_2h);
// Row-major layout, x fastest: index = iy*nx + ix.
void second_diff_2d(const double* f, double* out, int nx, int ny, double inv_h2);
void central_diff_2d_x(const double* f, double* out, int nx, int ny, double inv_2h);
void central_diff_2d_y(const double* f, double* out, int nx, int ny, double inv_2h);

/// out[i] = u[i] + c*lap[i] + s[i]*u[i]
void fused_rhs(const double* u, const double* lap, const double* s, double c,
               double* out, int n);

/// y[i] += a*x[i]
void axpy(double a, const double* x, double* y, int n);

/// Deterministic dot product (interleaved 4-lane accumulation).
double dot(const double* a, const double* b, int n);

} // namespace shelab::kern
