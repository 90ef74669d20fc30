#include "zakdd/zak.hpp"

#include <cmath>
#include <string>

namespace zakdd {

QuasiPeriodicArray dzt(const PeriodicSequence& x) {
  const GridParams& g = x.grid();
  QuasiPeriodicArray X = QuasiPeriodicArray::zeros(g);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.N));
  for (int k = 0; k < g.M; ++k) {
    for (int l = 0; l < g.N; ++l) {
      cplx acc = 0.0;
      for (int p = 0; p < g.N; ++p)
        acc += x.at(k + static_cast<i64>(p) * g.M) *
               unit_phase(-static_cast<i64>(p) * l, g.N);
      X.fund(k, l) = scale * acc;
    }
  }
  return X;
}

PeriodicSequence idzt(const QuasiPeriodicArray& X) {
  const GridParams& g = X.grid();
  std::vector<cplx> x(g.mn());
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.N));
  for (int k = 0; k < g.M; ++k) {
    for (int p = 0; p < g.N; ++p) {
      cplx acc = 0.0;
      for (int l = 0; l < g.N; ++l)
        acc += X.fund(k, l) * unit_phase(static_cast<i64>(p) * l, g.N);
      x[static_cast<size_t>(k) + static_cast<size_t>(p) * g.M] = scale * acc;
    }
  }
  return {g, std::move(x)};
}

namespace {
void check_basis_index(const GridParams& g, int r, int s) {
  require(r >= 0 && r < g.N && s >= 0 && s < g.M, Errc::IndexOutOfRange,
          "basis index (r=" + std::to_string(r) + ", s=" + std::to_string(s) +
              ") outside [0," + std::to_string(g.N) + ") x [0," +
              std::to_string(g.M) + ")");
}
}  // namespace

PeriodicSequence basis_td(const GridParams& grid, int r, int s) {
  check_basis_index(grid, r, s);
  std::vector<cplx> v(grid.mn());
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.M));
  for (int n = r * grid.M; n < (r + 1) * grid.M; ++n)
    v[n] = scale * unit_phase(static_cast<i64>(s) * n, grid.M);
  return {grid, std::move(v)};
}

QuasiPeriodicArray basis_dd(const GridParams& grid, int r, int s) {
  check_basis_index(grid, r, s);
  QuasiPeriodicArray V = QuasiPeriodicArray::zeros(grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.mn()));
  for (int k = 0; k < grid.M; ++k)
    for (int l = 0; l < grid.N; ++l)
      V.fund(k, l) = scale * unit_phase(static_cast<i64>(s) * k, grid.M) *
                     unit_phase(-static_cast<i64>(r) * l, grid.N);
  return V;
}

}  // namespace zakdd
