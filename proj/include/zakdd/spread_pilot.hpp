#pragma once

#include "zakdd/grid.hpp"

namespace zakdd {

// Two-dimensional chirp filter parameters, all mod MN:
//   W[k, l] = e^{j 2 pi (alpha1 k^2 + beta1 k + alpha2 l^2 + beta2 l + gamma) / MN}.
// Both 2*alpha1 and 2*alpha2 must be units mod MN so the support-lattice
// congruences below stay solvable.
struct Cazac2DParams {
  GridParams grid;
  i64 alpha1 = 0;
  i64 beta1 = 0;
  i64 alpha2 = 0;
  i64 beta2 = 0;
  i64 gamma = 0;
};

Cazac2DParams make_cazac2d(const GridParams& grid, i64 alpha1, i64 beta1, i64 alpha2,
                           i64 beta2, i64 gamma);

// Single quasi-periodically extended impulse at (k_p, l_p), reduced into the
// fundamental domain.
QuasiPeriodicArray point_pilot(const GridParams& grid, i64 k_p, i64 l_p);

// One MN x MN period of the 2-D chirp.
PeriodicArray2D cazac_filter_2d(const Cazac2DParams& p);

// Twisted convolution of a doubly periodic array with a quasi-periodic one:
//   c[k, l] = sum_{k',l' in [0,MN)} a[k', l'] b[k-k', l-l'] e^{j 2 pi l'(k-k') / MN}.
// The result is again quasi-periodic.
QuasiPeriodicArray twisted_conv(const PeriodicArray2D& a, const QuasiPeriodicArray& b);

// Pilot spread over the whole frame by twisted convolution with the filter.
QuasiPeriodicArray spread_pilot(const Cazac2DParams& p, i64 k_p, i64 l_p);

// theta = ((2 alpha1)^{-1} - 2 alpha2) mod MN, the Doppler-axis slope of the
// spread pilot's self-ambiguity lattice.
i64 lattice_theta(const Cazac2DParams& p);

// Self-ambiguity support of the spread pilot: unit magnitude exactly on
//   2 alpha1 k - l = 0 (mod M)  and  k - theta l = 0 (mod N),
// which picks out MN points of [0,MN)^2.
bool lattice_support(const Cazac2DParams& p, i64 k, i64 l);

}  // namespace zakdd
