#pragma once

#include <complex>
#include <span>
#include <vector>

#include "zakdd/errors.hpp"
#include "zakdd/modmath.hpp"

namespace zakdd {

using cplx = std::complex<double>;

// e^{j 2 pi num/den} with the integer exponent reduced mod den first, so
// phases stay accurate no matter how large the accumulated numerator is.
cplx unit_phase(i64 num, i64 den);

// Cached table of the den-th roots of unity, table[r] = e^{j 2 pi r / den}.
// Hot loops whose phases are all multiples of 2 pi / den use it to replace
// per-term sin/cos with an index lookup.
const std::vector<cplx>& phase_table(i64 den);

// Delay-Doppler grid geometry. M delay bins and N Doppler bins per frame,
// nu_p the Doppler period in Hz. M and N are odd and coprime; the frame
// carries MN samples at bandwidth M*nu_p over a duration of N/nu_p.
struct GridParams {
  int M = 0;
  int N = 0;
  double nu_p = 0.0;

  int mn() const { return M * N; }
  double tau_p() const { return 1.0 / nu_p; }  // delay period, seconds
  double bandwidth() const { return M * nu_p; }
  double duration() const { return N * tau_p(); }
  double delay_res() const { return tau_p() / M; }
  double doppler_res() const { return nu_p / N; }

  bool same_grid(const GridParams& o) const {
    return M == o.M && N == o.N && nu_p == o.nu_p;
  }
};

GridParams make_grid(int M, int N, double nu_p);

void require_same_grid(const GridParams& a, const GridParams& b);

// MN-periodic discrete-time signal; one period stored, any index readable.
class PeriodicSequence {
 public:
  PeriodicSequence(GridParams grid, std::vector<cplx> samples);

  const GridParams& grid() const { return grid_; }
  int period() const { return grid_.mn(); }
  cplx at(i64 n) const { return samples_[mod_reduce(n, samples_.size())]; }
  std::span<const cplx> samples() const { return samples_; }
  std::span<cplx> samples() { return samples_; }

 private:
  GridParams grid_;
  std::vector<cplx> samples_;
};

// Quasi-periodic delay-Doppler array. The fundamental domain
// [0,M) x [0,N) is stored; everything else is reconstructed through
//   X[k + nM, l + mN] = e^{j 2 pi n l / N} X[k, l].
class QuasiPeriodicArray {
 public:
  QuasiPeriodicArray(GridParams grid, std::vector<cplx> fundamental);

  static QuasiPeriodicArray zeros(const GridParams& grid);

  const GridParams& grid() const { return grid_; }

  cplx& fund(int k, int l) { return values_[static_cast<size_t>(k) * grid_.N + l]; }
  const cplx& fund(int k, int l) const {
    return values_[static_cast<size_t>(k) * grid_.N + l];
  }

  // Quasi-periodic evaluation at any integer pair.
  cplx at(i64 k, i64 l) const {
    i64 k0 = mod_reduce(k, grid_.M);
    i64 l0 = mod_reduce(l, grid_.N);
    i64 n = floor_div(k, grid_.M);
    cplx v = values_[static_cast<size_t>(k0) * grid_.N + l0];
    return v * unit_phase(n * l0, grid_.N);
  }

  std::span<const cplx> fundamental() const { return values_; }
  std::span<cplx> fundamental() { return values_; }

  double energy() const;  // sum |X|^2 over the fundamental domain

 private:
  GridParams grid_;
  std::vector<cplx> values_;  // row-major, index (k, l) -> k*N + l
};

// MN x MN doubly periodic array: 2-D chirp filters and periodized channel
// taps live here. Plain toroidal indexing, no quasi-periodic phase.
class PeriodicArray2D {
 public:
  PeriodicArray2D(GridParams grid, std::vector<cplx> values);

  static PeriodicArray2D zeros(const GridParams& grid);

  const GridParams& grid() const { return grid_; }

  cplx& cell(i64 k, i64 l) {
    return values_[static_cast<size_t>(mod_reduce(k, grid_.mn())) * grid_.mn() +
                   mod_reduce(l, grid_.mn())];
  }
  cplx at(i64 k, i64 l) const {
    return values_[static_cast<size_t>(mod_reduce(k, grid_.mn())) * grid_.mn() +
                   mod_reduce(l, grid_.mn())];
  }

  std::span<const cplx> values() const { return values_; }

 private:
  GridParams grid_;
  std::vector<cplx> values_;
};

// <a, b> over one M x N window anchored at (k0, l0), second factor
// conjugated. Offset independence is a consequence of quasi-periodicity.
cplx inner_product_qp(const QuasiPeriodicArray& a, const QuasiPeriodicArray& b,
                      i64 k0 = 0, i64 l0 = 0);

struct Papr {
  double linear;
  double db;
};

// Peak-to-average power over one period. Throws ZeroSignal on a zero input.
Papr papr(const PeriodicSequence& x);

}  // namespace zakdd
