#pragma once

#include "zakdd/grid.hpp"

namespace zakdd {

// Quadratic-phase (chirp) sequence parameters, all mod MN:
//   x[n] = e^{j 2 pi (alpha n^2 + beta n + gamma) / MN}.
// Constant amplitude is automatic; zero autocorrelation off the peak needs
// 2*alpha invertible mod MN, which make_cazac_params does not demand (it
// only rejects 2*alpha = 0, where the chirp degenerates to a pure tone).
struct CazacParams {
  GridParams grid;
  i64 alpha = 0;
  i64 beta = 0;
  i64 gamma = 0;
};

CazacParams make_cazac_params(const GridParams& grid, i64 alpha, i64 beta, i64 gamma);

enum class CazacKind { GeneralQuadratic, ZadoffChu, Gaussian, Wiener };

const char* cazac_kind_name(CazacKind kind);

// A named family member together with its resolved quadratic coefficients.
struct CazacFamily {
  CazacKind kind;
  i64 root;  // Zadoff-Chu root u; zero for the other families
  CazacParams params;
};

// Zadoff-Chu root u maps to alpha = beta = u * inverse(2) mod MN, gamma = 0,
// which reproduces u(n^2 + n)/2 = u n(n+1)/2 in the exponent.
CazacFamily zadoff_chu(const GridParams& grid, i64 root);
CazacFamily gaussian_family(const GridParams& grid, i64 alpha, i64 beta);
CazacFamily wiener_family(const GridParams& grid, i64 alpha);
CazacFamily general_quadratic(const GridParams& grid, i64 alpha, i64 beta, i64 gamma);

// One period of the chirp in the time domain.
PeriodicSequence cazac_td(const CazacParams& p);

// Its Zak image, evaluated by the folded closed form
//   X[k, l] = (e^{j 2 pi (gamma + k beta)/MN} / sqrt(N))
//             sum_p e^{j 2 pi (alpha (k+pM)^2 + pM(beta-l)) / MN};
// agrees with dzt(cazac_td(p)) to machine precision.
QuasiPeriodicArray cazac_dd(const CazacParams& p);

// Largest deviation of |x[n]| from 1 over one period.
double ca_deviation(const PeriodicSequence& x);

// Largest off-peak normalized periodic autocorrelation magnitude,
//   max_{k != 0} |(1/MN) sum_n x[n+k] conj(x[n])|.
double zac_deviation(const PeriodicSequence& x);

bool verify_ca(const PeriodicSequence& x, double tol);
bool verify_zac(const PeriodicSequence& x, double tol);

}  // namespace zakdd
