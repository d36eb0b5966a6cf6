#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include "gravity_kernel.hpp"
#include "nbview/errors.hpp"

namespace nbview::detail {

namespace {

// Structure-of-arrays copy of the particle state, padded so vector loads
// past the end stay in bounds.
struct Columns {
  explicit Columns(std::span<const Particle> ps, double gravity)
      : n(ps.size()),
        x(n + kPad), y(n + kPad), z(n + kPad), gm(n + kPad),
        ax(n + kPad), ay(n + kPad), az(n + kPad) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ps[i].position.x;
      y[i] = ps[i].position.y;
      z[i] = ps[i].position.z;
      gm[i] = gravity * ps[i].mass;
    }
  }

  static constexpr std::size_t kPad = 8;
  std::size_t n;
  std::vector<double> x, y, z, gm;
  std::vector<double> ax, ay, az;
};

// Exact sqrt/divide form. Pairs (i, j) for j in [begin, n).
inline bool row_portable(Columns& c, std::size_t i, std::size_t begin,
                         double eps2) {
  const double xi = c.x[i], yi = c.y[i], zi = c.z[i], gmi = c.gm[i];
  const double* x = c.x.data();
  const double* y = c.y.data();
  const double* z = c.z.data();
  const double* gm = c.gm.data();
  double* ax = c.ax.data();
  double* ay = c.ay.data();
  double* az = c.az.data();
  double sx = 0.0, sy = 0.0, sz = 0.0;
  int singular = 0;
#pragma omp simd reduction(+ : sx, sy, sz) reduction(| : singular)
  for (std::size_t j = begin; j < c.n; ++j) {
    const double dx = x[j] - xi;
    const double dy = y[j] - yi;
    const double dz = z[j] - zi;
    const double r2 = dx * dx + dy * dy + dz * dz + eps2;
    singular |= (r2 == 0.0);
    const double inv = 1.0 / (r2 * std::sqrt(r2));
    const double fj = gm[j] * inv;
    const double fi = gmi * inv;
    sx += fj * dx;
    sy += fj * dy;
    sz += fj * dz;
    ax[j] -= fi * dx;
    ay[j] -= fi * dy;
    az[j] -= fi * dz;
  }
  c.ax[i] += sx;
  c.ay[i] += sy;
  c.az[i] += sz;
  return singular != 0;
}

#if defined(__AVX512F__)
// 1/sqrt from the 14-bit hardware estimate refined by two Newton steps,
// accurate to a few ulp.
inline __m512d rsqrt_refined(__m512d r2) {
  const __m512d half = _mm512_set1_pd(0.5);
  const __m512d three_halves = _mm512_set1_pd(1.5);
  const __m512d h = _mm512_mul_pd(half, r2);
  __m512d y = _mm512_rsqrt14_pd(r2);
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(h, _mm512_mul_pd(y, y), three_halves));
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(h, _mm512_mul_pd(y, y), three_halves));
  return y;
}

inline bool row_avx512(Columns& c, std::size_t i, double eps2) {
  const __m512d xi = _mm512_set1_pd(c.x[i]);
  const __m512d yi = _mm512_set1_pd(c.y[i]);
  const __m512d zi = _mm512_set1_pd(c.z[i]);
  const __m512d gmi = _mm512_set1_pd(c.gm[i]);
  const __m512d e2 = _mm512_set1_pd(eps2);
  const __m512d zero = _mm512_setzero_pd();
  __m512d sx = zero, sy = zero, sz = zero;
  __mmask8 singular = 0;

  std::size_t j = i + 1;
  for (; j + 8 <= c.n; j += 8) {
    const __m512d dx = _mm512_sub_pd(_mm512_loadu_pd(&c.x[j]), xi);
    const __m512d dy = _mm512_sub_pd(_mm512_loadu_pd(&c.y[j]), yi);
    const __m512d dz = _mm512_sub_pd(_mm512_loadu_pd(&c.z[j]), zi);
    const __m512d r2 = _mm512_fmadd_pd(
        dx, dx, _mm512_fmadd_pd(dy, dy, _mm512_fmadd_pd(dz, dz, e2)));
    singular |= _mm512_cmp_pd_mask(r2, zero, _CMP_EQ_OQ);
    const __m512d rinv = rsqrt_refined(r2);
    const __m512d inv = _mm512_mul_pd(rinv, _mm512_mul_pd(rinv, rinv));
    const __m512d fj = _mm512_mul_pd(_mm512_loadu_pd(&c.gm[j]), inv);
    const __m512d fi = _mm512_mul_pd(gmi, inv);
    sx = _mm512_fmadd_pd(fj, dx, sx);
    sy = _mm512_fmadd_pd(fj, dy, sy);
    sz = _mm512_fmadd_pd(fj, dz, sz);
    _mm512_storeu_pd(&c.ax[j], _mm512_fnmadd_pd(fi, dx, _mm512_loadu_pd(&c.ax[j])));
    _mm512_storeu_pd(&c.ay[j], _mm512_fnmadd_pd(fi, dy, _mm512_loadu_pd(&c.ay[j])));
    _mm512_storeu_pd(&c.az[j], _mm512_fnmadd_pd(fi, dz, _mm512_loadu_pd(&c.az[j])));
  }
  c.ax[i] += _mm512_reduce_add_pd(sx);
  c.ay[i] += _mm512_reduce_add_pd(sy);
  c.az[i] += _mm512_reduce_add_pd(sz);
  const bool tail_singular = row_portable(c, i, j, eps2);
  return singular != 0 || tail_singular;
}
#endif

// Below this size the exact form is used regardless of the CPU.
constexpr std::size_t kVectorThreshold = 64;

[[noreturn]] void throw_singular(std::span<const Particle> ps, double eps2) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const Vec3 d = ps[j].position - ps[i].position;
      if (dot(d, d) + eps2 == 0.0) {
        throw SingularConfiguration("particles " + std::to_string(i) + " and " +
                                    std::to_string(j) +
                                    " coincide with zero softening");
      }
    }
  }
  throw SingularConfiguration("coincident particles with zero softening");
}

}  // namespace

void pairwise_accelerations(std::span<const Particle> particles, double gravity,
                            double softening, std::span<Vec3> out) {
  Columns c(particles, gravity);
  const double eps2 = softening * softening;
  bool singular = false;

#if defined(__AVX512F__)
  const bool vector_path = c.n >= kVectorThreshold;
#else
  const bool vector_path = false;
#endif

  for (std::size_t i = 0; i < c.n; ++i) {
#if defined(__AVX512F__)
    if (vector_path) {
      singular |= row_avx512(c, i, eps2);
      continue;
    }
#endif
    singular |= row_portable(c, i, i + 1, eps2);
  }
  (void)vector_path;

  if (singular) throw_singular(particles, eps2);

  for (std::size_t i = 0; i < c.n; ++i) out[i] = {c.ax[i], c.ay[i], c.az[i]};
}

}  // namespace nbview::detail
