#include "zakdd/receiver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <string>

#include "zakdd/ambiguity.hpp"

namespace zakdd {

namespace {

using SparseOp = Eigen::SparseMatrix<cplx>;

// Two region cells whose difference sits on the pilot's self-ambiguity
// support read the same tap; reject such regions. The scan covers the
// difference set of [0,k_max] x [-l_max,l_max] against the pilot's measured
// self-ambiguity, with a 10% relative magnitude cutoff separating the exact
// support (full magnitude) from chirp-free residue (order 1/sqrt(MN)).
void check_region_alias_free(const QuasiPeriodicArray& pilot,
                             const SensingRegion& region) {
  require(region.k_max >= 0 && region.l_max >= 0, Errc::NonPositive,
          "sensing region half-widths must be non-negative");
  const GridParams& g = pilot.grid();
  require(region.k_max < g.M && 2 * region.l_max < g.N, Errc::RegionAliased,
          "sensing region wraps around the fundamental domain");
  double peak = std::abs(dd_ambiguity_point(pilot, pilot, 0, 0));
  require(peak > 0.0, Errc::ZeroSignal, "pilot carries no energy");
  for (int dk = -region.k_max; dk <= region.k_max; ++dk) {
    for (int dl = -2 * region.l_max; dl <= 2 * region.l_max; ++dl) {
      if (dk == 0 && dl == 0) continue;
      double mag = std::abs(dd_ambiguity_point(pilot, pilot, dk, dl));
      require(mag <= 0.1 * peak, Errc::RegionAliased,
              "pilot self-ambiguity support at offset (" + std::to_string(dk) + "," +
                  std::to_string(dl) + ") aliases the sensing region");
    }
  }
}

std::vector<cplx> fundamental_minus(const QuasiPeriodicArray& a,
                                    const QuasiPeriodicArray& b) {
  std::vector<cplx> out(a.fundamental().begin(), a.fundamental().end());
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b.fundamental()[i];
  return out;
}

// Twisted convolution by the taps as a sparse operator on the vectorized
// fundamental domain, cell (k, l) -> k*N + l.
SparseOp channel_operator(const EffectiveChannel& h, double scale) {
  const GridParams& g = h.grid;
  const i64 mn = g.mn();
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<size_t>(mn) * h.taps.size() / 4);
  for (int k = 0; k < g.M; ++k) {
    for (int l = 0; l < g.N; ++l) {
      const int row = k * g.N + l;
      for (int dk = -h.k_halfwidth; dk <= h.k_halfwidth; ++dk) {
        for (int dl = -h.l_halfwidth; dl <= h.l_halfwidth; ++dl) {
          cplx tap = h.tap(dk, dl);
          if (tap == cplx{}) continue;
          i64 ks = k - dk, ls = l - dl;
          i64 k0 = mod_reduce(ks, g.M), l0 = mod_reduce(ls, g.N);
          cplx coeff = tap * unit_phase(static_cast<i64>(dl) * ks, mn) *
                       unit_phase(floor_div(ks, g.M) * l0, g.N);
          trips.emplace_back(row, static_cast<int>(k0 * g.N + l0), scale * coeff);
        }
      }
    }
  }
  SparseOp H(mn, mn);
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

double max_region_stat(const QuasiPeriodicArray& y, const QuasiPeriodicArray& ref,
                       const SensingRegion& region) {
  double best = 0.0;
  for (int k = 0; k <= region.k_max; ++k)
    for (int l = -region.l_max; l <= region.l_max; ++l)
      best = std::max(best, std::norm(dd_ambiguity_point(y, ref, k, l)));
  return best;
}

}  // namespace

EffectiveChannel estimate_channel(const QuasiPeriodicArray& y,
                                  const QuasiPeriodicArray& pilot,
                                  const SensingRegion& region, double pilot_energy) {
  require_same_grid(y.grid(), pilot.grid());
  require(pilot_energy > 0.0, Errc::ZeroSignal, "pilot energy must be positive");
  check_region_alias_free(pilot, region);
  const GridParams& g = y.grid();
  EffectiveChannel h = make_effective_channel(g, region.k_max, region.l_max);
  const double scale = static_cast<double>(g.mn()) / pilot_energy;
  for (int k = 0; k <= region.k_max; ++k)
    for (int l = -region.l_max; l <= region.l_max; ++l)
      h.tap(k, l) = scale * dd_ambiguity_point(y, pilot, k, l);
  return h;
}

DataFrame detect_data(const QuasiPeriodicArray& y, const EffectiveChannel& h,
                      const QuasiPeriodicArray& pilot, double data_scale,
                      double sigma2, const Constellation& constellation) {
  require_same_grid(y.grid(), h.grid);
  require_same_grid(y.grid(), pilot.grid());
  validate_constellation(constellation);
  require(data_scale > 0.0, Errc::NonPositive, "data scale must be positive");
  require(sigma2 >= 0.0, Errc::NonPositive, "noise variance must be non-negative");
  const GridParams& g = y.grid();
  const i64 mn = g.mn();

  QuasiPeriodicArray pilot_rx = apply_channel(h, pilot);
  std::vector<cplx> residual = fundamental_minus(y, pilot_rx);
  Eigen::Map<const Eigen::VectorXcd> yv(residual.data(), mn);

  SparseOp H = channel_operator(h, data_scale);
  SparseOp Hh = SparseOp(H.adjoint());
  Eigen::MatrixXcd G = Eigen::MatrixXcd(SparseOp(H * Hh));
  G.diagonal().array() += sigma2;

  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  require(llt.info() == Eigen::Success, Errc::SingularChannel,
          "normal matrix is not positive definite");
  Eigen::VectorXcd soft = Hh * llt.solve(yv);

  DataFrame out{g, std::vector<cplx>(mn)};
  for (i64 i = 0; i < mn; ++i)
    out.symbols[i] = constellation.points[nearest_point(constellation, soft[i])];
  return out;
}

TurboResult turbo_loop(const QuasiPeriodicArray& y, const QuasiPeriodicArray& pilot,
                       const SensingRegion& region, int iters, double data_scale,
                       double sigma2, const Constellation& constellation,
                       const DataFrame* truth) {
  require(iters > 0, Errc::NonPositive, "turbo loop needs at least one iteration");
  const double pilot_energy = pilot.energy();
  TurboResult result;
  for (int t = 0; t < iters; ++t) {
    QuasiPeriodicArray input = y;
    if (t > 0) {
      // Cancel the previous hard decisions through the previous channel
      // estimate, then read the pilot again from the cleaned frame.
      QuasiPeriodicArray data_dd = to_dd_array(result.data_per_iter.back());
      for (cplx& v : data_dd.fundamental()) v *= data_scale;
      QuasiPeriodicArray echo = apply_channel(result.channel_per_iter.back(), data_dd);
      input = QuasiPeriodicArray(y.grid(), fundamental_minus(y, echo));
    }
    EffectiveChannel h = estimate_channel(input, pilot, region, pilot_energy);
    DataFrame detected = detect_data(y, h, pilot, data_scale, sigma2, constellation);
    if (truth != nullptr)
      result.ber_trace.push_back(bit_error_rate(constellation, *truth, detected));
    result.channel_per_iter.push_back(std::move(h));
    result.data_per_iter.push_back(std::move(detected));
  }
  return result;
}

double ost_threshold(const GridParams& grid, const SensingRegion& region, double sigma2,
                     double dict_energy, double pfa_target) {
  require(pfa_target > 0.0 && pfa_target < 1.0, Errc::BadConfig,
          "false-alarm target must lie in (0, 1)");
  double cells = static_cast<double>(region.k_max + 1) * (2 * region.l_max + 1);
  double mn = static_cast<double>(grid.mn());
  double per_cell_var = sigma2 * dict_energy / (mn * mn);
  return per_cell_var * std::log(cells / pfa_target);
}

double ost_calibrate_threshold(const GridParams& grid,
                               const std::vector<QuasiPeriodicArray>& dictionary,
                               const SensingRegion& region, double sigma2,
                               double pfa_target, int trials, std::mt19937_64& rng) {
  require(!dictionary.empty(), Errc::EmptyDictionary, "no preambles to calibrate");
  require(trials > 0, Errc::EmptyTrialSet, "calibration needs trials > 0");
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  std::vector<double> stats;
  stats.reserve(static_cast<size_t>(trials) * dictionary.size());
  for (int t = 0; t < trials; ++t) {
    QuasiPeriodicArray noise = QuasiPeriodicArray::zeros(grid);
    for (cplx& v : noise.fundamental()) v = cplx{gauss(rng), gauss(rng)};
    for (const QuasiPeriodicArray& p : dictionary)
      stats.push_back(max_region_stat(noise, p, region));
  }
  std::sort(stats.begin(), stats.end());
  size_t idx = static_cast<size_t>(
      std::min<double>(static_cast<double>(stats.size()) - 1.0,
                       std::ceil((1.0 - pfa_target) * stats.size())));
  return stats[idx];
}

DetectionReport ost_detect(const QuasiPeriodicArray& y,
                           const std::vector<QuasiPeriodicArray>& dictionary,
                           const SensingRegion& region, double sigma2,
                           double pfa_target, std::optional<double> threshold_override) {
  require(!dictionary.empty(), Errc::EmptyDictionary,
          "detection needs a non-empty preamble dictionary");
  double threshold =
      threshold_override.has_value()
          ? *threshold_override
          : ost_threshold(y.grid(), region, sigma2, dictionary.front().energy(),
                          pfa_target);
  DetectionReport report;
  report.threshold = threshold;
  for (size_t i = 0; i < dictionary.size(); ++i) {
    require_same_grid(y.grid(), dictionary[i].grid());
    double stat = max_region_stat(y, dictionary[i], region);
    report.statistics.push_back(stat);
    if (stat > threshold) report.active_set.push_back(static_cast<int>(i));
  }
  return report;
}

std::vector<QuasiPeriodicArray> preamble_dictionary(const GridParams& grid,
                                                    CazacKind kind, int count) {
  require(count > 0, Errc::EmptyDictionary, "dictionary size must be positive");
  const i64 mn = grid.mn();
  std::vector<i64> chosen;
  std::vector<QuasiPeriodicArray> dict;
  const double unit = 1.0 / std::sqrt(static_cast<double>(mn));
  for (i64 candidate = 1; candidate < mn && static_cast<int>(dict.size()) < count;
       ++candidate) {
    if (mod_reduce(2 * candidate, mn) == 0) continue;
    bool ok = true;
    for (i64 prev : chosen)
      if (gcd64(mod_reduce(candidate - prev, mn), mn) != 1) ok = false;
    if (!ok) continue;
    CazacFamily family = kind == CazacKind::ZadoffChu ? zadoff_chu(grid, candidate)
                         : kind == CazacKind::Gaussian
                             ? gaussian_family(grid, candidate, candidate)
                         : kind == CazacKind::Wiener
                             ? wiener_family(grid, candidate)
                             : general_quadratic(grid, candidate, 0, 0);
    // Zadoff-Chu roots map to alpha = root * inv(2); the pairwise-difference
    // test on roots carries over because inv(2) is a unit.
    chosen.push_back(candidate);
    QuasiPeriodicArray p = cazac_dd(family.params);
    for (cplx& v : p.fundamental()) v *= unit;
    dict.push_back(std::move(p));
  }
  require(static_cast<int>(dict.size()) == count, Errc::BadConfig,
          "grid only admits " + std::to_string(dict.size()) +
              " pairwise-coprime preambles, wanted " + std::to_string(count));
  return dict;
}

}  // namespace zakdd
