#include "zakdd/ambiguity.hpp"

#include <cmath>
#include <string>

#include "zakdd/dft.hpp"
#include "zakdd/zak.hpp"

namespace zakdd {

AmbiguitySurface::AmbiguitySurface(GridParams grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  size_t want = static_cast<size_t>(grid_.mn()) * grid_.mn();
  require(values_.size() == want, Errc::GridMismatch,
          "ambiguity surface needs MN x MN cells");
}

AmbiguitySurface td_ambiguity(const PeriodicSequence& x, const PeriodicSequence& y) {
  require_same_grid(x.grid(), y.grid());
  const i64 mn = x.period();
  Dft dft(static_cast<int>(mn));
  std::vector<cplx> row(mn), lag(mn);
  std::vector<cplx> out(static_cast<size_t>(mn) * mn);
  const double scale = 1.0 / static_cast<double>(mn);
  for (i64 k = 0; k < mn; ++k) {
    for (i64 n = 0; n < mn; ++n) lag[n] = x.at(k + n) * std::conj(y.at(n));
    dft.forward(lag.data(), row.data());
    for (i64 l = 0; l < mn; ++l) out[static_cast<size_t>(k) * mn + l] = scale * row[l];
  }
  return {x.grid(), std::move(out)};
}

cplx dd_ambiguity_point(const QuasiPeriodicArray& X, const QuasiPeriodicArray& Y,
                        i64 k, i64 l) {
  require_same_grid(X.grid(), Y.grid());
  const GridParams& g = X.grid();
  const i64 mn = g.mn();
  const std::vector<cplx>& w = phase_table(mn);
  cplx acc = 0.0;
  for (int kp = 0; kp < g.M; ++kp) {
    const i64 ks = kp - k;
    const i64 k0 = mod_reduce(ks, g.M);
    const i64 n = floor_div(ks, g.M);
    // Y.at(ks, ls) = Y.fund(k0, l0) * e^{j2pi n l0 / N}; fold both phases
    // into MN-th roots (1/N = M/MN).
    const cplx twist = w[static_cast<size_t>(mod_reduce(-ks * l, mn))];
    for (int lp = 0; lp < g.N; ++lp) {
      const i64 l0 = mod_reduce(lp - l, g.N);
      const cplx yv = Y.fund(static_cast<int>(k0), static_cast<int>(l0)) *
                      w[static_cast<size_t>(mod_reduce(n * l0 * g.M, mn))];
      acc += X.fund(kp, lp) * std::conj(yv) * twist;
    }
  }
  return acc / static_cast<double>(mn);
}

AmbiguitySurface dd_ambiguity(const QuasiPeriodicArray& X, const QuasiPeriodicArray& Y,
                              DdAfPath path) {
  require_same_grid(X.grid(), Y.grid());
  const GridParams& g = X.grid();
  const i64 mn = g.mn();
  if (path == DdAfPath::Auto)
    path = mn <= 105 ? DdAfPath::Direct : DdAfPath::ViaTimeDomain;
  if (path == DdAfPath::ViaTimeDomain) {
    AmbiguitySurface s = td_ambiguity(idzt(X), idzt(Y));
    return s;
  }
  std::vector<cplx> out(static_cast<size_t>(mn) * mn);
  for (i64 k = 0; k < mn; ++k)
    for (i64 l = 0; l < mn; ++l)
      out[static_cast<size_t>(k) * mn + l] = dd_ambiguity_point(X, Y, k, l);
  return {g, std::move(out)};
}

bool on_self_af_line(const CazacParams& p, i64 k, i64 l) {
  return mod_reduce(2 * p.alpha * k - l, p.grid.mn()) == 0;
}

cplx self_af_closed_form(const CazacParams& p, i64 k, i64 l) {
  if (!on_self_af_line(p, k, l)) return 0.0;
  const i64 mn = p.grid.mn();
  return unit_phase(l * k + k * p.beta - p.alpha * k * k, mn);
}

FlatnessResult cross_af_flatness(const CazacParams& p, const CazacParams& q) {
  require_same_grid(p.grid, q.grid);
  const i64 mn = p.grid.mn();
  bool eligible = gcd64(mod_reduce(p.alpha - q.alpha, mn), mn) == 1;
  return {eligible, eligible ? 1.0 / std::sqrt(static_cast<double>(mn)) : 0.0};
}

double gauss_sum_magnitude(i64 a, i64 modulus) {
  require(modulus > 0 && modulus % 2 == 1, Errc::BadModulus,
          "quadratic sum modulus must be odd and positive");
  require(gcd64(mod_reduce(a, modulus), modulus) == 1, Errc::BadModulus,
          "quadratic coefficient must be a unit mod " + std::to_string(modulus));
  cplx acc = 0.0;
  for (i64 n = 0; n < modulus; ++n) acc += unit_phase(a * n * n, modulus);
  return std::abs(acc);
}

cplx roots_of_unity_sum(i64 k, i64 modulus) {
  require(modulus > 0, Errc::BadModulus, "modulus must be positive");
  cplx acc = 0.0;
  for (i64 n = 0; n < modulus; ++n) acc += unit_phase(k * n, modulus);
  return acc;
}

UnbiasednessReport unbiasedness_stat(const QuasiPeriodicArray& X,
                                     const Constellation& constellation, i64 trials,
                                     int probes, std::mt19937_64& rng) {
  require(trials > 0, Errc::EmptyTrialSet, "unbiasedness statistic needs trials > 0");
  validate_constellation(constellation);
  const GridParams& g = X.grid();
  const i64 mn = g.mn();

  probes = static_cast<int>(std::min<i64>(probes, mn));
  std::uniform_int_distribution<i64> cell(0, mn - 1);
  std::vector<std::pair<i64, i64>> probe_set(probes);
  for (auto& p : probe_set) p = {cell(rng), cell(rng)};

  double mean = 0.0, m2 = 0.0;  // Welford over per-trial probe averages
  for (i64 t = 0; t < trials; ++t) {
    DataFrame d = random_data_frame(g, constellation, rng);
    QuasiPeriodicArray D = to_dd_array(d);
    double trial_mean = 0.0;
    for (const auto& [pk, pl] : probe_set)
      trial_mean += std::norm(dd_ambiguity_point(D, X, pk, pl));
    trial_mean /= static_cast<double>(probe_set.size());
    double delta = trial_mean - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (trial_mean - mean);
  }
  double variance = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  double se = std::sqrt(variance / static_cast<double>(trials));

  i64 psi = mod_inverse(4 * static_cast<i64>(g.M), g.N);
  return {mean, se, trials, psi, 1.0 / static_cast<double>(mn)};
}

}  // namespace zakdd
