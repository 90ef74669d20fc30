#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zakdd/grid.hpp"

namespace zakdd {

// Self-ambiguity surface study of one chirp waveform: writes the
// delay-Doppler surface, the time-domain surface of the same sequence
// (equal by the transform-domain equivalence, emitted as the baseline), the
// sequence itself, and a support summary.
struct AmbiguityRunConfig {
  int M = 31;
  int N = 37;
  double nu_p = 30000.0;
  std::string family = "zadoff-chu";  // zadoff-chu | gaussian | wiener | general
  std::int64_t root = 14;             // zadoff-chu root
  std::int64_t alpha = 1;
  std::int64_t beta = 0;
  std::int64_t gamma = 0;
  std::string out_dir;  // empty: no files written
};

struct AmbiguityRunResult {
  std::int64_t support_count = 0;
  double on_line_min_mag = 0.0;
  double off_line_max_mag = 0.0;
  double td_dd_max_dev = 0.0;  // measured gap between the two routes
  double papr_db = 0.0;
};

AmbiguityRunResult run_ambiguity(const AmbiguityRunConfig& cfg);

// Superimposed-pilot link: per frame, a chirp pilot plus QPSK data through a
// random doubly selective channel, then the iterative estimate/detect loop.
struct IsacRunConfig {
  int M = 31;
  int N = 37;
  double nu_p = 30000.0;
  // "spread": point pilot filtered by the discrete chirp filter with
  // alpha1 = alpha2 = pilot_root, whose self-ambiguity sits on a 2-D lattice
  // and therefore admits a sensing region wide enough for the full Doppler
  // spread. "chirp": the bare quadratic-phase array of the same root; its
  // line-supported self-ambiguity caps the alias-free Doppler half-width, so
  // it needs a narrower region (e.g. 6 x 5 for root 11).
  std::string pilot_kind = "spread";
  std::int64_t pilot_root = 11;
  double rho_d_db = 25.0;
  double nu_max = 6000.0;
  std::vector<double> pdr_list{0.5, 1.0, 2.0};
  int iters = 5;
  int trials = 200;  // frames per pdr point
  int region_k = 2;
  int region_l = 8;
  double beta_tau = 0.6;
  double beta_nu = 0.6;
  int tap_halfwidth = 8;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct IsacIterStats {
  double pdr = 0.0;
  int iter = 0;            // 1-based
  double mean_ber = 0.0;
  double median_ber = 0.0;
  double ci_low = 0.0;     // 95% normal interval on the mean
  double ci_high = 0.0;
};

struct IsacPdrStats {
  double pdr = 0.0;
  std::vector<double> median_by_iter;
  int wins = 0;            // frames where the last iteration beats the first
  int losses = 0;
  double sign_test_p = 1.0;  // one-sided, improvement direction
};

struct IsacRunResult {
  std::vector<IsacIterStats> table;
  std::vector<IsacPdrStats> per_pdr;
};

IsacRunResult run_isac(const IsacRunConfig& cfg);

// Multi-user preamble detection: K users pick distinct chirp preambles,
// each passes through an independent channel, and the receiver thresholds
// per-preamble ambiguity peaks.
struct RachRunConfig {
  int M = 31;
  int N = 37;
  double nu_p = 30000.0;
  std::vector<std::string> families{"zadoff-chu", "gaussian", "wiener"};
  int users = 5;
  int dict_size = 8;
  std::vector<double> snr_list{-28.0, -24.0, -20.0, -16.0, -12.0, -8.0};
  double nu_max = 815.0;
  int trials = 1000;
  double pfa_target = 1e-3;
  bool calibrate = false;  // replace the analytic threshold by a Monte-Carlo one
  int region_k = 6;
  int region_l = 3;
  double beta_tau = 0.6;
  double beta_nu = 0.6;
  int tap_halfwidth = 8;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct RachCell {
  double snr_db = 0.0;
  std::string family;
  double miss_rate = 0.0;        // NaN when users == 0
  double false_alarm_rate = 0.0; // per trial and candidate
  std::int64_t misses = 0;
  std::int64_t active_total = 0;
  int trials = 0;
};

struct RachRunResult {
  std::vector<RachCell> table;
};

RachRunResult run_rach(const RachRunConfig& cfg);

// Small-grid self-checks of the core identities, reported as pass/fail
// entries with measured errors. mutate_dzt deliberately corrupts one Zak
// coefficient so the equivalence check must fail (negative control).
struct VerifyRunConfig {
  bool mutate_dzt = false;
  std::uint64_t seed = 7;
  std::string out_dir;
};

struct VerifyEntry {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
  double tolerance = 0.0;
};

struct VerifyRunResult {
  std::vector<VerifyEntry> entries;
  bool all_pass = false;
};

VerifyRunResult run_verify(const VerifyRunConfig& cfg);

// One-sided sign test: probability of at least `wins` successes in
// wins+losses fair coin flips.
double sign_test_p(int wins, int losses);

}  // namespace zakdd
