#pragma once

#include <optional>
#include <random>
#include <vector>

#include "zakdd/cazac.hpp"
#include "zakdd/channel.hpp"
#include "zakdd/constellation.hpp"
#include "zakdd/grid.hpp"

namespace zakdd {

// Delay-Doppler window [0, k_max] x [-l_max, l_max] the channel estimator
// reads. It must not contain two cells whose difference lies on the pilot's
// self-ambiguity support, otherwise distinct taps alias onto each other.
struct SensingRegion {
  int k_max = 6;
  int l_max = 3;
};

// Cross-ambiguity readout of the channel taps:
//   h_hat[k, l] = (MN / pilot_energy) * A_{y, pilot}[k, l]
// over the sensing region, zero outside. pilot is the transmitted (scaled)
// pilot and pilot_energy its fundamental-domain energy. Throws RegionAliased
// when the region fails the alias-freeness check for this pilot.
EffectiveChannel estimate_channel(const QuasiPeriodicArray& y,
                                  const QuasiPeriodicArray& pilot,
                                  const SensingRegion& region, double pilot_energy);

// MMSE equalization against the dense MN x MN twisted-convolution operator:
// cancels the pilot through the supplied channel, solves
//   x_hat = H^H (H H^H + sigma2 I)^{-1} (y - H_pilot),
// with H scaled so unit-energy symbols map to their received amplitude, then
// slices each cell to the nearest constellation point. Throws SingularChannel
// when the normal matrix is not positive definite (possible only at
// sigma2 = 0).
DataFrame detect_data(const QuasiPeriodicArray& y, const EffectiveChannel& h,
                      const QuasiPeriodicArray& pilot, double data_scale,
                      double sigma2, const Constellation& constellation);

struct TurboResult {
  std::vector<EffectiveChannel> channel_per_iter;
  std::vector<DataFrame> data_per_iter;
  std::vector<double> ber_trace;  // filled when truth is supplied
};

// Iterative estimate/detect loop. Iteration 1 estimates from y as received;
// later iterations re-modulate the previous decisions, cancel them from y,
// re-estimate the channel, and detect again.
TurboResult turbo_loop(const QuasiPeriodicArray& y, const QuasiPeriodicArray& pilot,
                       const SensingRegion& region, int iters, double data_scale,
                       double sigma2, const Constellation& constellation,
                       const DataFrame* truth = nullptr);

struct DetectionReport {
  std::vector<int> active_set;
  std::vector<double> statistics;  // max |A_{y,dict_i}|^2 over the region
  double threshold;
};

// Per-candidate false-alarm threshold: each cross-ambiguity cell under
// noise-only input is complex Gaussian with variance sigma2 * E_dict / MN^2,
// so |A|^2 has an exponential tail; a Bonferroni union over the region cells
// keeps the per-candidate false-alarm probability at most pfa_target.
double ost_threshold(const GridParams& grid, const SensingRegion& region, double sigma2,
                     double dict_energy, double pfa_target);

// Same quantity calibrated empirically from noise-only frames.
double ost_calibrate_threshold(const GridParams& grid,
                               const std::vector<QuasiPeriodicArray>& dictionary,
                               const SensingRegion& region, double sigma2,
                               double pfa_target, int trials, std::mt19937_64& rng);

// Orthogonal sequence testing: thresholds the per-candidate maximum of
// |A_{y, dict_i}|^2 over the sensing region.
DetectionReport ost_detect(const QuasiPeriodicArray& y,
                           const std::vector<QuasiPeriodicArray>& dictionary,
                           const SensingRegion& region, double sigma2,
                           double pfa_target,
                           std::optional<double> threshold_override = std::nullopt);

// Unit-energy chirp preambles whose pairwise alpha differences are units mod
// MN, so every cross-ambiguity is flat at 1/sqrt(MN) relative magnitude.
std::vector<QuasiPeriodicArray> preamble_dictionary(const GridParams& grid,
                                                    CazacKind kind, int count);

}  // namespace zakdd
