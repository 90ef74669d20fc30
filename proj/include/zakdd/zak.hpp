#pragma once

#include "zakdd/grid.hpp"

namespace zakdd {

// Discrete Zak transform of an MN-periodic sequence:
//   X[k, l] = (1/sqrt(N)) sum_{p=0}^{N-1} x[k + pM] e^{-j 2 pi p l / N}.
// Unitary; the result is quasi-periodic with parameters (M, N).
QuasiPeriodicArray dzt(const PeriodicSequence& x);

// Inverse transform:
//   x[k + pM] = (1/sqrt(N)) sum_{l=0}^{N-1} X[k, l] e^{+j 2 pi p l / N}
// for k in [0, M), p in [0, N).
PeriodicSequence idzt(const QuasiPeriodicArray& X);

// Time-domain pulsone basis: v_{r,s} is the s-th tone on the r-th length-M
// pulse slot, zero elsewhere in the period, r in [0, N), s in [0, M).
PeriodicSequence basis_td(const GridParams& grid, int r, int s);

// The same basis element expressed directly in the delay-Doppler domain:
//   V_{r,s}[k, l] = (1/sqrt(MN)) e^{j 2 pi s k / M} e^{-j 2 pi (r - floor(k/M)) l / N}.
QuasiPeriodicArray basis_dd(const GridParams& grid, int r, int s);

}  // namespace zakdd
