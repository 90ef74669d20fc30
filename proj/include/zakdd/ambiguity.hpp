#pragma once

#include <random>

#include "zakdd/cazac.hpp"
#include "zakdd/constellation.hpp"
#include "zakdd/grid.hpp"

namespace zakdd {

// Cross-ambiguity values on the full doubly periodic domain [0,MN)^2.
class AmbiguitySurface {
 public:
  AmbiguitySurface(GridParams grid, std::vector<cplx> values);

  const GridParams& grid() const { return grid_; }
  cplx at(i64 k, i64 l) const {
    return values_[static_cast<size_t>(mod_reduce(k, grid_.mn())) * grid_.mn() +
                   mod_reduce(l, grid_.mn())];
  }
  std::span<const cplx> values() const { return values_; }

 private:
  GridParams grid_;
  std::vector<cplx> values_;  // row-major, (k, l) -> k*MN + l
};

// Time-domain cross-ambiguity,
//   A[k, l] = (1/MN) sum_{n=0}^{MN-1} x[k+n] conj(y[n]) e^{-j 2 pi n l / MN}.
// Each delay row is one MN-point DFT of the lag product.
AmbiguitySurface td_ambiguity(const PeriodicSequence& x, const PeriodicSequence& y);

enum class DdAfPath {
  Auto,           // Direct on small grids, ViaTimeDomain beyond
  Direct,         // the delay-Doppler double sum, O(MN^3)
  ViaTimeDomain,  // inverse Zak transform of both arrays, then td_ambiguity
};

// Delay-Doppler cross-ambiguity,
//   A[k, l] = (1/MN) sum_{k'=0}^{M-1} sum_{l'=0}^{N-1}
//             X[k', l'] conj(Y[k'-k, l'-l]) e^{-j 2 pi (k'-k) l / MN},
// Y evaluated quasi-periodically. Equal to the time-domain ambiguity of the
// inverse transforms, which is the fast route for large grids.
AmbiguitySurface dd_ambiguity(const QuasiPeriodicArray& X, const QuasiPeriodicArray& Y,
                              DdAfPath path = DdAfPath::Auto);

// Single cell of the direct double sum; (k, l) may be any integers.
cplx dd_ambiguity_point(const QuasiPeriodicArray& X, const QuasiPeriodicArray& Y,
                        i64 k, i64 l);

// Self-ambiguity support line of a chirp: 2 alpha k - l = 0 mod MN.
bool on_self_af_line(const CazacParams& p, i64 k, i64 l);

// Closed-form self-ambiguity of a chirp: e^{j 2 pi (lk + k beta - alpha k^2)/MN}
// on the support line, zero elsewhere.
cplx self_af_closed_form(const CazacParams& p, i64 k, i64 l);

struct FlatnessResult {
  bool eligible;     // gcd(p.alpha - q.alpha, MN) == 1
  double magnitude;  // 1/sqrt(MN) when eligible
};

// Cross-ambiguity of two chirps has everywhere-constant magnitude
// 1/sqrt(MN) whenever the alpha difference is a unit mod MN.
FlatnessResult cross_af_flatness(const CazacParams& p, const CazacParams& q);

// |sum_{n=0}^{modulus-1} e^{j 2 pi a n^2 / modulus}|; requires an odd modulus
// and gcd(a, modulus) = 1 (throws BadModulus otherwise). Always sqrt(modulus).
double gauss_sum_magnitude(i64 a, i64 modulus);

// sum_{n=0}^{modulus-1} e^{j 2 pi k n / modulus}, by direct summation.
cplx roots_of_unity_sum(i64 k, i64 modulus);

struct UnbiasednessReport {
  double mean_sq_cross;  // Monte-Carlo mean of |A_{D,X}[k,l]|^2 over probes
  double std_error;      // standard error of the per-trial means
  i64 trials;
  i64 psi;               // (4M)^{-1} mod N, the data/pilot incoherence slope
  double target;         // 1/MN
};

// Draws i.i.d. data frames D and measures |A_{D,X}|^2 at a fixed random set
// of probe cells; for any X with fundamental-domain energy MN the expected
// value is exactly 1/MN per cell.
UnbiasednessReport unbiasedness_stat(const QuasiPeriodicArray& X,
                                     const Constellation& constellation, i64 trials,
                                     int probes, std::mt19937_64& rng);

}  // namespace zakdd
