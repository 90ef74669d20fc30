#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zakdd/ambiguity.hpp"
#include "zakdd/receiver.hpp"
#include "zakdd/spread_pilot.hpp"

using namespace zakdd;

namespace {

bool throws_code(Errc want, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == want;
  }
  return false;
}

QuasiPeriodicArray unit_energy(QuasiPeriodicArray x) {
  double scale = 1.0 / std::sqrt(x.energy());
  for (cplx& v : x.fundamental()) v *= scale;
  return x;
}

}  // namespace

TEST_SUITE("receiver") {
  TEST_CASE("channel taps inside an alias-free region are read off exactly") {
    GridParams g = make_grid(31, 37, 30000.0);
    QuasiPeriodicArray pilot = unit_energy(spread_pilot(make_cazac2d(g, 11, 0, 11, 0, 0), 0, 0));
    SensingRegion region{2, 8};

    EffectiveChannel truth = make_effective_channel(g, 2, 8);
    truth.tap(0, 0) = cplx(0.8, -0.1);
    truth.tap(1, -3) = cplx(0.0, 0.3);
    truth.tap(2, 5) = cplx(-0.2, 0.05);
    truth.tap(1, 8) = cplx(0.1, 0.1);  // on the region boundary

    const double e_p = 9.0;
    QuasiPeriodicArray tx = pilot;
    for (cplx& v : tx.fundamental()) v *= 3.0;  // sqrt(E_p)
    QuasiPeriodicArray y = apply_channel(truth, tx);

    EffectiveChannel est = estimate_channel(y, tx, region, e_p);
    CHECK(est.k_halfwidth == 2);
    CHECK(est.l_halfwidth == 8);
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k)
      for (int l = -8; l <= 8; ++l)
        worst = std::max(worst, std::abs(est.tap(k, l) - truth.tap(k, l)));
    CHECK(worst < 1e-12);
  }

  TEST_CASE("line-supported chirp pilots alias even small regions") {
    GridParams g = make_grid(3, 5, 1.0);
    // Root-1 chirp: self-ambiguity on l = k mod 15, so offset (1, 1) sits in
    // any region with both half-widths >= 1.
    QuasiPeriodicArray chirp = unit_energy(cazac_dd(zadoff_chu(g, 1).params));
    CHECK(throws_code(Errc::RegionAliased, [&] {
      estimate_channel(chirp, chirp, SensingRegion{1, 1}, 1.0);
    }));
    // The delay-only region {k in [0,1], l = 0} avoids the line.
    CHECK_NOTHROW(estimate_channel(chirp, chirp, SensingRegion{1, 0}, 1.0));
  }

  TEST_CASE("lattice-supported spread pilots admit the same region") {
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray sp = unit_energy(spread_pilot(make_cazac2d(g, 1, 0, 1, 0, 0), 0, 0));
    CHECK_NOTHROW(estimate_channel(sp, sp, SensingRegion{1, 1}, 1.0));
  }

  TEST_CASE("regions that wrap the fundamental domain are rejected") {
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray sp = unit_energy(spread_pilot(make_cazac2d(g, 1, 0, 1, 0, 0), 0, 0));
    CHECK(throws_code(Errc::RegionAliased, [&] {
      estimate_channel(sp, sp, SensingRegion{3, 1}, 1.0);
    }));
    CHECK(throws_code(Errc::RegionAliased, [&] {
      estimate_channel(sp, sp, SensingRegion{1, 3}, 1.0);  // 2*3 >= N
    }));
    CHECK(throws_code(Errc::NonPositive, [&] {
      estimate_channel(sp, sp, SensingRegion{-1, 1}, 1.0);
    }));
    CHECK(throws_code(Errc::ZeroSignal, [&] {
      estimate_channel(sp, sp, SensingRegion{1, 1}, 0.0);
    }));
    CHECK(throws_code(Errc::ZeroSignal, [&] {
      QuasiPeriodicArray z = QuasiPeriodicArray::zeros(g);
      estimate_channel(z, z, SensingRegion{1, 1}, 1.0);
    }));
  }

  TEST_CASE("detect_data recovers clean symbols through a known channel") {
    GridParams g = make_grid(5, 7, 1.0);
    std::mt19937_64 rng(61);
    DataFrame truth = random_data_frame(g, qam4(), rng);

    EffectiveChannel h = make_effective_channel(g, 1, 1);
    h.tap(0, 0) = cplx(1.0, 0.0);
    h.tap(1, 1) = cplx(0.2, -0.3);

    QuasiPeriodicArray pilot = QuasiPeriodicArray::zeros(g);  // pure data frame
    const double data_scale = 0.7;
    QuasiPeriodicArray data_dd = to_dd_array(truth);
    for (cplx& v : data_dd.fundamental()) v *= data_scale;
    QuasiPeriodicArray y = apply_channel(h, data_dd);

    DataFrame hat = detect_data(y, h, pilot, data_scale, 1e-6, qam4());
    CHECK(bit_error_rate(qam4(), truth, hat) == 0.0);
  }

  TEST_CASE("detect_data cancels a superimposed pilot before equalizing") {
    GridParams g = make_grid(5, 7, 1.0);
    std::mt19937_64 rng(62);
    DataFrame truth = random_data_frame(g, qam4(), rng);
    QuasiPeriodicArray pilot = unit_energy(spread_pilot(make_cazac2d(g, 1, 0, 1, 0, 0), 0, 0));

    FrameConfig fc{qam4(), 1.0, 25.0, pilot};
    Frame frame = assemble_frame(truth, fc);
    QuasiPeriodicArray scaled_pilot = pilot;
    for (cplx& v : scaled_pilot.fundamental()) v *= std::sqrt(frame.pilot_energy);

    EffectiveChannel h = make_effective_channel(g, 1, 1);
    h.tap(0, 0) = cplx(0.9, 0.2);
    h.tap(0, -1) = cplx(-0.1, 0.25);
    QuasiPeriodicArray y = apply_channel(h, frame.tx);

    DataFrame hat = detect_data(y, h, scaled_pilot, frame.data_scale, 1e-6, qam4());
    CHECK(bit_error_rate(qam4(), truth, hat) == 0.0);
  }

  TEST_CASE("detect_data validates its arguments") {
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray zero = QuasiPeriodicArray::zeros(g);
    EffectiveChannel h = make_effective_channel(g, 0, 0);
    h.tap(0, 0) = 1.0;
    CHECK(throws_code(Errc::NonPositive,
                      [&] { detect_data(zero, h, zero, 0.0, 1.0, qam4()); }));
    CHECK(throws_code(Errc::NonPositive,
                      [&] { detect_data(zero, h, zero, 1.0, -1.0, qam4()); }));
    // All-zero taps at zero noise: the normal matrix is exactly singular.
    EffectiveChannel dead = make_effective_channel(g, 0, 0);
    CHECK(throws_code(Errc::SingularChannel,
                      [&] { detect_data(zero, dead, zero, 1.0, 0.0, qam4()); }));
  }

  TEST_CASE("turbo_loop drives the error rate of a clean link to zero") {
    GridParams g = make_grid(5, 7, 1.0);
    std::mt19937_64 rng(63);
    DataFrame truth = random_data_frame(g, qam4(), rng);
    QuasiPeriodicArray pilot = unit_energy(spread_pilot(make_cazac2d(g, 1, 0, 1, 0, 0), 0, 0));

    FrameConfig fc{qam4(), 2.0, 25.0, pilot};
    Frame frame = assemble_frame(truth, fc);

    EffectiveChannel h_true = make_effective_channel(g, 1, 1);
    h_true.tap(0, 0) = cplx(1.0, 0.0);
    h_true.tap(1, 1) = cplx(0.1, -0.2);
    QuasiPeriodicArray clean = apply_channel(h_true, frame.tx);
    NoisyFrame nf = add_noise(clean, fc.rho_d_db, frame.data_energy, rng);

    QuasiPeriodicArray scaled_pilot = pilot;
    for (cplx& v : scaled_pilot.fundamental()) v *= std::sqrt(frame.pilot_energy);

    TurboResult tr = turbo_loop(nf.y, scaled_pilot, SensingRegion{1, 1}, 4,
                                frame.data_scale, nf.sigma2, qam4(), &truth);
    REQUIRE(tr.ber_trace.size() == 4);
    REQUIRE(tr.channel_per_iter.size() == 4);
    REQUIRE(tr.data_per_iter.size() == 4);
    CHECK(tr.ber_trace.back() <= tr.ber_trace.front());
    CHECK(tr.ber_trace.back() == 0.0);
  }

  TEST_CASE("turbo_loop requires a positive iteration count") {
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray sp = unit_energy(spread_pilot(make_cazac2d(g, 1, 0, 1, 0, 0), 0, 0));
    CHECK(throws_code(Errc::NonPositive, [&] {
      turbo_loop(sp, sp, SensingRegion{1, 1}, 0, 1.0, 0.1, qam4());
    }));
  }

  TEST_CASE("analytic detection threshold follows the stated formula") {
    GridParams g = make_grid(3, 5, 1.0);
    SensingRegion region{1, 1};
    double sigma2 = 0.5, energy = 15.0, pfa = 1e-3;
    double want = sigma2 * energy / 225.0 * std::log(6.0 / pfa);
    CHECK(ost_threshold(g, region, sigma2, energy, pfa) ==
          doctest::Approx(want).epsilon(1e-14));
    CHECK(ost_threshold(g, region, sigma2, energy, 1e-4) >
          ost_threshold(g, region, sigma2, energy, 1e-3));
    CHECK(throws_code(Errc::BadConfig, [&] { ost_threshold(g, region, 1.0, 1.0, 0.0); }));
    CHECK(throws_code(Errc::BadConfig, [&] { ost_threshold(g, region, 1.0, 1.0, 1.0); }));
  }

  TEST_CASE("ost_detect flags exactly the transmitted preamble on a clean input") {
    GridParams g = make_grid(5, 7, 1.0);
    std::vector<QuasiPeriodicArray> dict = preamble_dictionary(g, CazacKind::ZadoffChu, 3);
    // No noise at all: the active statistic is (E/MN)^2 = 1/1225 and the
    // cross statistics are 1/MN^3; any threshold between separates them.
    QuasiPeriodicArray y = dict[1];
    DetectionReport r = ost_detect(y, dict, SensingRegion{2, 2}, 1e-3, 1e-3,
                                   1.0 / (35.0 * 35.0 * 35.0) * 4.0);
    REQUIRE(r.active_set.size() == 1);
    CHECK(r.active_set[0] == 1);
    CHECK(r.statistics[1] == doctest::Approx(1.0 / 1225.0).epsilon(1e-9));
    CHECK(r.statistics[0] == doctest::Approx(1.0 / (35.0 * 35.0 * 35.0)).epsilon(1e-6));

    // A prohibitive override silences everything.
    DetectionReport quiet = ost_detect(y, dict, SensingRegion{2, 2}, 1e-3, 1e-3, 1.0);
    CHECK(quiet.active_set.empty());
    CHECK(throws_code(Errc::EmptyDictionary, [&] {
      ost_detect(y, {}, SensingRegion{2, 2}, 1e-3, 1e-3);
    }));
  }

  TEST_CASE("ost_detect under noise only stays quiet at the analytic threshold") {
    GridParams g = make_grid(5, 7, 1.0);
    std::vector<QuasiPeriodicArray> dict = preamble_dictionary(g, CazacKind::Gaussian, 3);
    std::mt19937_64 rng(64);
    double sigma2 = 1.0 / 35.0;
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    int alarms = 0;
    for (int t = 0; t < 20; ++t) {
      QuasiPeriodicArray noise = QuasiPeriodicArray::zeros(g);
      for (cplx& v : noise.fundamental()) v = cplx{gauss(rng), gauss(rng)};
      DetectionReport r = ost_detect(noise, dict, SensingRegion{2, 2}, sigma2, 1e-3);
      alarms += static_cast<int>(r.active_set.size());
    }
    CHECK(alarms == 0);  // expected alarms = 20 * 3 * 1e-3 = 0.06
  }

  TEST_CASE("detection through a mild channel at moderate noise") {
    GridParams g = make_grid(5, 7, 1.0);
    std::vector<QuasiPeriodicArray> dict = preamble_dictionary(g, CazacKind::ZadoffChu, 3);
    std::mt19937_64 rng(65);
    EffectiveChannel h = make_effective_channel(g, 1, 1);
    h.tap(0, 0) = cplx(0.9, 0.0);
    h.tap(1, 0) = cplx(0.0, std::sqrt(1.0 - 0.81));
    NoisyFrame nf = multiuser_superpose({{h, dict[2]}}, 20.0, rng);
    // The explicit threshold sits an order of magnitude above the worst-case
    // inactive-candidate statistic (cross-chirp leakage ~ 1/MN^3 plus noise)
    // and an order of magnitude below the active one, so the decision is
    // deterministic for any reasonable noise draw.
    DetectionReport r = ost_detect(nf.y, dict, SensingRegion{2, 2}, nf.sigma2, 1e-3, 2e-4);
    REQUIRE(r.active_set.size() == 1);
    CHECK(r.active_set[0] == 2);
  }

  TEST_CASE("calibrated threshold reproduces the requested false-alarm rate") {
    GridParams g = make_grid(3, 5, 1.0);
    std::vector<QuasiPeriodicArray> dict = preamble_dictionary(g, CazacKind::Wiener, 2);
    std::mt19937_64 rng(66);
    double sigma2 = 0.2, pfa = 0.05;
    double lambda = ost_calibrate_threshold(g, dict, SensingRegion{1, 1}, sigma2, pfa,
                                            400, rng);
    CHECK(lambda > 0.0);
    // Replay fresh noise and measure the per-candidate exceedance rate.
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    int exceed = 0, total = 0;
    for (int t = 0; t < 400; ++t) {
      QuasiPeriodicArray noise = QuasiPeriodicArray::zeros(g);
      for (cplx& v : noise.fundamental()) v = cplx{gauss(rng), gauss(rng)};
      DetectionReport r = ost_detect(noise, dict, SensingRegion{1, 1}, sigma2, pfa, lambda);
      exceed += static_cast<int>(r.active_set.size());
      total += 2;
    }
    double rate = static_cast<double>(exceed) / total;
    CHECK(rate > 0.0);
    CHECK(rate < 3.0 * pfa);
    // In this regime the union bound over region cells is nearly exact (the
    // per-cell tail probability is small), so the empirically calibrated
    // threshold should agree with the analytic one up to quantile-estimation
    // noise rather than sit strictly below it.
    double analytic = ost_threshold(g, SensingRegion{1, 1}, sigma2, dict[0].energy(), pfa);
    CHECK(lambda == doctest::Approx(analytic).epsilon(0.2));
    CHECK(throws_code(Errc::EmptyTrialSet, [&] {
      ost_calibrate_threshold(g, dict, SensingRegion{1, 1}, sigma2, pfa, 0, rng);
    }));
  }

  TEST_CASE("preamble_dictionary obeys the pairwise-unit-difference rule") {
    GridParams g = make_grid(3, 5, 1.0);
    std::vector<QuasiPeriodicArray> dict = preamble_dictionary(g, CazacKind::ZadoffChu, 3);
    REQUIRE(dict.size() == 3);
    for (const QuasiPeriodicArray& p : dict)
      CHECK(p.energy() == doctest::Approx(1.0).epsilon(1e-12));
    // Cross-ambiguities between distinct entries are flat by construction.
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j) {
        double lo = 1e9, hi = 0.0;
        for (i64 k = 0; k < 15; ++k)
          for (i64 l = 0; l < 15; ++l) {
            double m = std::abs(dd_ambiguity_point(dict[i], dict[j], k, l));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
          }
        CHECK(hi - lo < 1e-10);
        CHECK(hi == doctest::Approx(1.0 / (15.0 * std::sqrt(15.0))).epsilon(1e-9));
      }
    // Fifteen admits only three pairwise-unit residues; asking for four fails.
    CHECK(throws_code(Errc::BadConfig,
                      [&] { preamble_dictionary(g, CazacKind::ZadoffChu, 4); }));
    CHECK(throws_code(Errc::EmptyDictionary,
                      [&] { preamble_dictionary(g, CazacKind::ZadoffChu, 0); }));
  }
}
