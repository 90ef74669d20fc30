#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zakdd/channel.hpp"
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

// Brute-force twisted convolution of a finite tap set with a frame:
//   y[k, l] = sum_{dk, dl} h[dk, dl] x[k-dk, l-dl] e^{j 2 pi dl (k-dk) / MN}.
QuasiPeriodicArray apply_channel_oracle(const EffectiveChannel& h,
                                        const QuasiPeriodicArray& x) {
  const GridParams& g = h.grid;
  const i64 mn = g.mn();
  QuasiPeriodicArray y = QuasiPeriodicArray::zeros(g);
  for (int k = 0; k < g.M; ++k)
    for (int l = 0; l < g.N; ++l) {
      cplx acc = 0.0;
      for (int dk = -h.k_halfwidth; dk <= h.k_halfwidth; ++dk)
        for (int dl = -h.l_halfwidth; dl <= h.l_halfwidth; ++dl)
          acc += h.tap(dk, dl) * oracles::qp_at(x, k - dk, l - dl) *
                 oracles::phase(
                     static_cast<double>(oracles::imod(
                         static_cast<i64>(dl) * (k - dk), mn)) /
                     static_cast<double>(mn));
      y.fund(k, l) = acc;
    }
  return y;
}

EffectiveChannel random_taps(const GridParams& g, int kw, int lw,
                             std::mt19937_64& rng) {
  EffectiveChannel h = make_effective_channel(g, kw, lw);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (cplx& t : h.taps) t = {nd(rng), nd(rng)};
  return h;
}

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("six-path vehicular profile carries the published numbers") {
    ChannelConfig cfg = veh_a_channel(815.0);
    REQUIRE(cfg.profile.size() == 6);
    const double delays_ns[] = {0, 310, 710, 1090, 1730, 2510};
    const double powers_db[] = {0, -1, -9, -10, -15, -20};
    for (size_t i = 0; i < 6; ++i) {
      CHECK(cfg.profile[i].delay_s == doctest::Approx(delays_ns[i] * 1e-9).epsilon(1e-15));
      CHECK(cfg.profile[i].power_db == doctest::Approx(powers_db[i]).epsilon(1e-15));
    }
    CHECK(cfg.nu_max == 815.0);
    CHECK(cfg.use_power_profile);
  }

  TEST_CASE("sample_channel draws unit-energy gains and bounded Dopplers") {
    ChannelConfig cfg = veh_a_channel(500.0);
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 20; ++rep) {
      ChannelRealization ch = sample_channel(cfg, rng);
      REQUIRE(ch.gains.size() == 6);
      double total = 0.0;
      for (const cplx& gv : ch.gains) total += std::norm(gv);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      for (double nu : ch.dopplers_hz) CHECK(std::abs(nu) <= 500.0 + 1e-12);
      for (size_t i = 0; i < 6; ++i)
        CHECK(ch.delays_s[i] == cfg.profile[i].delay_s);
    }
  }

  TEST_CASE("sample_channel is deterministic per seed and profile-toggle aligned") {
    ChannelConfig cfg = veh_a_channel(300.0);
    std::mt19937_64 a(7), b(7), c(8);
    ChannelRealization ra = sample_channel(cfg, a);
    ChannelRealization rb = sample_channel(cfg, b);
    ChannelRealization rc = sample_channel(cfg, c);
    for (size_t i = 0; i < 6; ++i) {
      CHECK(ra.gains[i] == rb.gains[i]);
      CHECK(ra.dopplers_hz[i] == rb.dopplers_hz[i]);
    }
    bool same = true;
    for (size_t i = 0; i < 6; ++i) same = same && (ra.gains[i] == rc.gains[i]);
    CHECK_FALSE(same);

    // Disabling the power profile must not shift the RNG stream: the Doppler
    // draws stay identical, only the gain weights change.
    ChannelConfig flat = cfg;
    flat.use_power_profile = false;
    std::mt19937_64 d(7);
    ChannelRealization rd = sample_channel(flat, d);
    for (size_t i = 0; i < 6; ++i)
      CHECK(rd.dopplers_hz[i] == ra.dopplers_hz[i]);
    double total = 0.0;
    for (const cplx& gv : rd.gains) total += std::norm(gv);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("sample_channel rejects an empty profile") {
    std::mt19937_64 rng(1);
    ChannelConfig empty{{}, 100.0, true};
    CHECK(throws_code(Errc::EmptyProfile, [&] { sample_channel(empty, rng); }));
  }

  TEST_CASE("zero nu_max pins every path Doppler to zero") {
    std::mt19937_64 rng(52);
    ChannelRealization ch = sample_channel(veh_a_channel(0.0), rng);
    for (double nu : ch.dopplers_hz) CHECK(nu == 0.0);
  }

  TEST_CASE("root-raised-cosine matches the spectrum-integration oracle") {
    // Reference values computed by numerically integrating
    // 2 * int_0^{(1+beta)/2} sqrt(S_rc(f)) cos(2 pi f t) df on a fine grid.
    struct Row {
      double beta, t, value;
    };
    const Row rows[] = {
        {0.6, 0.0, 1.163943726841079},
        {0.6, 0.25, 0.983631643083461},
        {0.6, 1.0 / 2.4, 0.710601173980947},  // the removable singularity
        {0.6, 0.5, 0.554199418738935},
        {0.6, 1.0, -0.113193757520236},
        {0.6, 2.5, -0.021826963624049},
        {0.3, 0.0, 1.081971863420525},
        {0.3, 0.25, 0.950379763805289},
        {0.3, 1.0 / 1.2, 0.106832530366101},
        {0.3, 0.5, 0.615344958509524},
        {0.3, 1.0, -0.075001543843097},
        {0.3, 2.5, 0.045015815807872},
    };
    for (const Row& r : rows) {
      CHECK(rrc_impulse(r.t, r.beta) == doctest::Approx(r.value).epsilon(1e-12));
      CHECK(rrc_impulse(-r.t, r.beta) == doctest::Approx(r.value).epsilon(1e-12));
    }
    // beta -> 0 degenerates to the sinc pulse.
    CHECK(rrc_impulse(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(rrc_impulse(0.5, 0.0) == doctest::Approx(2.0 / 3.141592653589793).epsilon(1e-12));
    CHECK(std::abs(rrc_impulse(1.0, 0.0)) < 1e-12);
    // The guarded point is continuous from both sides.
    double c = 1.0 / 2.4;
    CHECK(std::abs(rrc_impulse(c + 1e-7, 0.6) - rrc_impulse(c, 0.6)) < 1e-5);
    CHECK(std::abs(rrc_impulse(c - 1e-7, 0.6) - rrc_impulse(c, 0.6)) < 1e-5);
  }

  TEST_CASE("a single unit path projects to exactly unit tap energy") {
    GridParams g = make_grid(31, 37, 30000.0);
    ChannelRealization ch;
    ch.gains = {cplx(1.0, 0.0)};
    ch.delays_s = {710e-9};  // fractional: 0.66 delay bins
    ch.dopplers_hz = {500.0};
    PulseShapeConfig pulse;  // beta 0.6, halfwidth 8
    EffectiveChannel h = effective_channel(g, ch, pulse);
    CHECK(h.energy() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.k_halfwidth == 9);   // ceil(0.66) + 8
    CHECK(h.l_halfwidth == 9);   // ceil(500/810.8) + 8
  }

  TEST_CASE("window sizes at the production operating points") {
    GridParams g = make_grid(31, 37, 30000.0);
    std::mt19937_64 rng(53);
    PulseShapeConfig pulse;
    ChannelRealization slow = sample_channel(veh_a_channel(0.0), rng);
    EffectiveChannel h0 = effective_channel(g, slow, pulse);
    CHECK(h0.k_halfwidth == 11);  // ceil(2510 ns / 1075.3 ns) + 8
    CHECK(h0.l_halfwidth == 8);

    // Force the fastest path to the full Doppler spread to pin the window.
    ChannelRealization fast = slow;
    fast.dopplers_hz[0] = 6000.0;
    EffectiveChannel h6 = effective_channel(g, fast, pulse);
    CHECK(h6.k_halfwidth == 11);
    CHECK(h6.l_halfwidth == 16);  // ceil(6000 / 810.8) + 8
  }

  TEST_CASE("tap windows that exceed half a period are rejected") {
    GridParams g = make_grid(3, 5, 1.0);
    ChannelRealization ch;
    ch.gains = {cplx(1.0, 0.0)};
    ch.delays_s = {0.0};
    ch.dopplers_hz = {0.0};
    PulseShapeConfig pulse;
    pulse.tap_halfwidth = 2;  // window 5 > M = 3
    CHECK(throws_code(Errc::SpreadTooLarge, [&] { effective_channel(g, ch, pulse); }));
    pulse.tap_halfwidth = 1;
    CHECK_NOTHROW(effective_channel(g, ch, pulse));
    CHECK(throws_code(Errc::EmptyProfile, [&] {
      effective_channel(g, ChannelRealization{}, pulse);
    }));
  }

  TEST_CASE("apply_channel matches the brute-force twisted convolution") {
    std::mt19937_64 rng(54);
    for (auto [m, n] : {std::pair{3, 5}, {5, 7}}) {
      GridParams g = make_grid(m, n, 1.0);
      EffectiveChannel h = random_taps(g, 1, 1, rng);
      QuasiPeriodicArray x = oracles::random_array(g, rng);
      QuasiPeriodicArray fast = apply_channel(h, x);
      QuasiPeriodicArray slow = apply_channel_oracle(h, x);
      double worst = 0.0;
      for (size_t i = 0; i < fast.fundamental().size(); ++i)
        worst = std::max(worst,
                         std::abs(fast.fundamental()[i] - slow.fundamental()[i]));
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("apply_channel equals twisted convolution with the periodized taps") {
    GridParams g = make_grid(3, 5, 1.0);
    std::mt19937_64 rng(55);
    EffectiveChannel h = random_taps(g, 1, 2, rng);
    QuasiPeriodicArray x = oracles::random_array(g, rng);
    QuasiPeriodicArray via_taps = apply_channel(h, x);
    QuasiPeriodicArray via_conv = twisted_conv(periodize_taps(h), x);
    double worst = 0.0;
    for (size_t i = 0; i < via_taps.fundamental().size(); ++i)
      worst = std::max(worst, std::abs(via_taps.fundamental()[i] -
                                       via_conv.fundamental()[i]));
    CHECK(worst < 1e-11);
  }

  TEST_CASE("identity and single-shift channels act as expected") {
    GridParams g = make_grid(3, 5, 1.0);
    std::mt19937_64 rng(56);
    QuasiPeriodicArray x = oracles::random_array(g, rng);

    EffectiveChannel id = make_effective_channel(g, 0, 0);
    id.tap(0, 0) = 1.0;
    QuasiPeriodicArray y = apply_channel(id, x);
    for (size_t i = 0; i < x.fundamental().size(); ++i)
      CHECK(std::abs(y.fundamental()[i] - x.fundamental()[i]) < 1e-14);

    // A pure (delay, Doppler) shift multiplies by the twist phase.
    EffectiveChannel shift = make_effective_channel(g, 1, 1);
    shift.tap(1, 1) = 1.0;
    QuasiPeriodicArray z = apply_channel(shift, x);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 5; ++l) {
        cplx want = oracles::qp_at(x, k - 1, l - 1) *
                    oracles::phase(static_cast<double>(oracles::imod(k - 1, 15)) / 15.0);
        CHECK(std::abs(z.fund(k, l) - want) < 1e-13);
      }
  }

  TEST_CASE("assemble_frame splits energy by the pilot-to-data ratio") {
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray pilot = point_pilot(g, 0, 0);  // unit energy
    std::mt19937_64 rng(57);
    DataFrame data = random_data_frame(g, qam4(), rng);
    for (double pdr : {0.5, 1.0, 2.0}) {
      FrameConfig fc{qam4(), pdr, 25.0, pilot};
      Frame f = assemble_frame(data, fc);
      CHECK(f.pilot_energy + f.data_energy == doctest::Approx(15.0).epsilon(1e-12));
      CHECK(f.pilot_energy / f.data_energy == doctest::Approx(pdr).epsilon(1e-12));
      CHECK(f.data_scale == doctest::Approx(std::sqrt(f.data_energy / 15.0)).epsilon(1e-12));
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 5; ++l) {
          cplx want = std::sqrt(f.pilot_energy) * pilot.fund(k, l) +
                      f.data_scale * data.symbols[static_cast<size_t>(k) * 5 + l];
          CHECK(std::abs(f.tx.fund(k, l) - want) < 1e-13);
        }
    }
    FrameConfig bad{qam4(), 0.0, 25.0, pilot};
    CHECK(throws_code(Errc::BadPdr, [&] { assemble_frame(data, bad); }));
    bad.pdr = -1.0;
    CHECK(throws_code(Errc::BadPdr, [&] { assemble_frame(data, bad); }));
  }

  TEST_CASE("add_noise hits the advertised per-cell variance") {
    GridParams g = make_grid(31, 37, 30000.0);
    QuasiPeriodicArray zero = QuasiPeriodicArray::zeros(g);
    std::mt19937_64 rng(58);
    NoisyFrame nf = add_noise(zero, 10.0, static_cast<double>(g.mn()), rng);
    // Reference energy MN at 10 dB: sigma2 = 10^{-1} exactly.
    CHECK(nf.sigma2 == doctest::Approx(0.1).epsilon(1e-12));
    double measured = nf.y.energy() / static_cast<double>(g.mn());
    CHECK(measured == doctest::Approx(nf.sigma2).epsilon(0.15));

    std::mt19937_64 r1(9), r2(9);
    NoisyFrame a = add_noise(zero, 0.0, 1.0, r1);
    NoisyFrame b = add_noise(zero, 0.0, 1.0, r2);
    for (size_t i = 0; i < a.y.fundamental().size(); ++i)
      CHECK(a.y.fundamental()[i] == b.y.fundamental()[i]);
  }

  TEST_CASE("multiuser_superpose sums channel outputs before the noise") {
    GridParams g = make_grid(3, 5, 1.0);
    std::mt19937_64 rng(59);
    QuasiPeriodicArray x1 = oracles::random_array(g, rng);
    QuasiPeriodicArray x2 = oracles::random_array(g, rng);
    EffectiveChannel h1 = random_taps(g, 1, 1, rng);
    EffectiveChannel h2 = random_taps(g, 0, 1, rng);

    std::mt19937_64 noise_rng(101), ref_rng(101);
    NoisyFrame got = multiuser_superpose({{h1, x1}, {h2, x2}}, 20.0, noise_rng);
    QuasiPeriodicArray want = apply_channel(h1, x1);
    QuasiPeriodicArray y2 = apply_channel(h2, x2);
    for (int i = 0; i < 15; ++i) want.fundamental()[i] += y2.fundamental()[i];
    NoisyFrame ref = add_noise(want, 20.0, 1.0, ref_rng);
    for (int i = 0; i < 15; ++i)
      CHECK(std::abs(got.y.fundamental()[i] - ref.y.fundamental()[i]) < 1e-13);
    CHECK(got.sigma2 == ref.sigma2);

    CHECK(throws_code(Errc::EmptyProfile, [&] {
      std::mt19937_64 r(1);
      multiuser_superpose({}, 0.0, r);
    }));
  }
}
