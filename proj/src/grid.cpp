#include "zakdd/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace zakdd {

cplx unit_phase(i64 num, i64 den) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(mod_reduce(num, den)) /
                 static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

const std::vector<cplx>& phase_table(i64 den) {
  static std::mutex mu;
  static std::map<i64, std::vector<cplx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::vector<cplx>& table = cache[den];
  if (table.empty()) {
    table.resize(static_cast<size_t>(den));
    for (i64 r = 0; r < den; ++r) table[static_cast<size_t>(r)] = unit_phase(r, den);
  }
  return table;
}

GridParams make_grid(int M, int N, double nu_p) {
  require(M % 2 != 0 && N % 2 != 0, Errc::EvenDimension,
          "grid dimensions must be odd, got M=" + std::to_string(M) +
              " N=" + std::to_string(N));
  require(M > 0 && N > 0 && nu_p > 0.0, Errc::NonPositive,
          "grid dimensions and nu_p must be positive");
  require(std::gcd(M, N) == 1, Errc::NotCoprime,
          "M=" + std::to_string(M) + " and N=" + std::to_string(N) +
              " share a factor");
  return {M, N, nu_p};
}

void require_same_grid(const GridParams& a, const GridParams& b) {
  require(a.same_grid(b), Errc::GridMismatch, "operands live on different grids");
}

PeriodicSequence::PeriodicSequence(GridParams grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
  require(samples_.size() == static_cast<size_t>(grid_.mn()), Errc::GridMismatch,
          "sequence needs one full period of " + std::to_string(grid_.mn()) +
              " samples, got " + std::to_string(samples_.size()));
}

QuasiPeriodicArray::QuasiPeriodicArray(GridParams grid, std::vector<cplx> fundamental)
    : grid_(grid), values_(std::move(fundamental)) {
  require(values_.size() == static_cast<size_t>(grid_.mn()), Errc::GridMismatch,
          "fundamental domain needs " + std::to_string(grid_.mn()) +
              " cells, got " + std::to_string(values_.size()));
}

QuasiPeriodicArray QuasiPeriodicArray::zeros(const GridParams& grid) {
  return {grid, std::vector<cplx>(grid.mn())};
}

double QuasiPeriodicArray::energy() const {
  double e = 0.0;
  for (const cplx& v : values_) e += std::norm(v);
  return e;
}

PeriodicArray2D::PeriodicArray2D(GridParams grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  size_t want = static_cast<size_t>(grid_.mn()) * grid_.mn();
  require(values_.size() == want, Errc::GridMismatch,
          "periodic 2-D array needs MN x MN cells");
}

PeriodicArray2D PeriodicArray2D::zeros(const GridParams& grid) {
  return {grid, std::vector<cplx>(static_cast<size_t>(grid.mn()) * grid.mn())};
}

cplx inner_product_qp(const QuasiPeriodicArray& a, const QuasiPeriodicArray& b,
                      i64 k0, i64 l0) {
  require_same_grid(a.grid(), b.grid());
  const GridParams& g = a.grid();
  cplx acc = 0.0;
  for (i64 k = k0; k < k0 + g.M; ++k)
    for (i64 l = l0; l < l0 + g.N; ++l) acc += a.at(k, l) * std::conj(b.at(k, l));
  return acc;
}

Papr papr(const PeriodicSequence& x) {
  double peak = 0.0, mean = 0.0;
  for (const cplx& v : x.samples()) {
    double p = std::norm(v);
    peak = std::max(peak, p);
    mean += p;
  }
  mean /= static_cast<double>(x.period());
  require(mean > 0.0, Errc::ZeroSignal, "PAPR of the all-zero sequence");
  double lin = peak / mean;
  return {lin, 10.0 * std::log10(lin)};
}

}  // namespace zakdd
