#include "zakdd/spread_pilot.hpp"

#include <cmath>

#include <string>

namespace zakdd {

Cazac2DParams make_cazac2d(const GridParams& grid, i64 alpha1, i64 beta1, i64 alpha2,
                           i64 beta2, i64 gamma) {
  const i64 mn = grid.mn();
  alpha1 = mod_reduce(alpha1, mn);
  beta1 = mod_reduce(beta1, mn);
  alpha2 = mod_reduce(alpha2, mn);
  beta2 = mod_reduce(beta2, mn);
  gamma = mod_reduce(gamma, mn);
  require(gcd64(mod_reduce(2 * alpha1, mn), mn) == 1, Errc::InvalidAlpha,
          "2*alpha1 must be a unit mod MN, got alpha1=" + std::to_string(alpha1));
  require(gcd64(mod_reduce(2 * alpha2, mn), mn) == 1, Errc::InvalidAlpha,
          "2*alpha2 must be a unit mod MN, got alpha2=" + std::to_string(alpha2));
  return {grid, alpha1, beta1, alpha2, beta2, gamma};
}

QuasiPeriodicArray point_pilot(const GridParams& grid, i64 k_p, i64 l_p) {
  QuasiPeriodicArray X = QuasiPeriodicArray::zeros(grid);
  X.fund(static_cast<int>(mod_reduce(k_p, grid.M)),
         static_cast<int>(mod_reduce(l_p, grid.N))) = 1.0;
  return X;
}

PeriodicArray2D cazac_filter_2d(const Cazac2DParams& p) {
  const i64 mn = p.grid.mn();
  std::vector<cplx> w(static_cast<size_t>(mn) * mn);
  for (i64 k = 0; k < mn; ++k)
    for (i64 l = 0; l < mn; ++l)
      w[static_cast<size_t>(k) * mn + l] =
          unit_phase(p.alpha1 * k * k + p.beta1 * k + p.alpha2 * l * l + p.beta2 * l +
                         p.gamma,
                     mn);
  return {p.grid, std::move(w)};
}

QuasiPeriodicArray twisted_conv(const PeriodicArray2D& a, const QuasiPeriodicArray& b) {
  require_same_grid(a.grid(), b.grid());
  const GridParams& g = a.grid();
  const i64 mn = g.mn();
  QuasiPeriodicArray c = QuasiPeriodicArray::zeros(g);
  for (int k = 0; k < g.M; ++k) {
    for (int l = 0; l < g.N; ++l) {
      cplx acc = 0.0;
      for (i64 kp = 0; kp < mn; ++kp)
        for (i64 lp = 0; lp < mn; ++lp)
          acc += a.at(kp, lp) * b.at(k - kp, l - lp) * unit_phase(lp * (k - kp), mn);
      c.fund(k, l) = acc;
    }
  }
  return c;
}

QuasiPeriodicArray spread_pilot(const Cazac2DParams& p, i64 k_p, i64 l_p) {
  // Collapsing the full-square twisted convolution against the point pilot's
  // quasi-periodic extension leaves one filter sample per periodization pair
  // (n, m):
  //   s[k,l] = sum_{n=0}^{N-1} sum_{m=0}^{M-1} W[k-k_p-nM, l-l_p-mN]
  //            * e^{j2pi n l_p / N} * e^{j2pi (l-l_p-mN)(k_p+nM) / MN}.
  // The MN coherent terms give the raw output constant amplitude sqrt(MN);
  // rescale to unit per-cell amplitude to match the chirp convention
  // (fundamental energy MN).
  const GridParams& g = p.grid;
  const i64 mn = g.mn();
  QuasiPeriodicArray s = QuasiPeriodicArray::zeros(g);
  const double scale = 1.0 / std::sqrt(static_cast<double>(mn));
  for (int k = 0; k < g.M; ++k) {
    for (int l = 0; l < g.N; ++l) {
      cplx acc = 0.0;
      for (i64 n = 0; n < g.N; ++n) {
        for (i64 m = 0; m < g.M; ++m) {
          const i64 a = k - k_p - n * g.M;
          const i64 b = l - l_p - m * g.N;
          acc += unit_phase(p.alpha1 * a * a + p.beta1 * a + p.alpha2 * b * b +
                                p.beta2 * b + p.gamma,
                            mn) *
                 unit_phase(n * l_p, g.N) * unit_phase(b * (k_p + n * g.M), mn);
        }
      }
      s.fund(k, l) = scale * acc;
    }
  }
  return s;
}

i64 lattice_theta(const Cazac2DParams& p) {
  const i64 mn = p.grid.mn();
  return mod_reduce(mod_inverse(2 * p.alpha1, mn) - 2 * p.alpha2, mn);
}

bool lattice_support(const Cazac2DParams& p, i64 k, i64 l) {
  i64 theta = lattice_theta(p);
  return mod_reduce(2 * p.alpha1 * k - l, p.grid.M) == 0 &&
         mod_reduce(k - theta * l, p.grid.N) == 0;
}

}  // namespace zakdd
