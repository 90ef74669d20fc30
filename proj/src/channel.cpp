#include "zakdd/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace zakdd {

namespace {
constexpr double kPi = std::numbers::pi;
}

ChannelConfig veh_a_channel(double nu_max) {
  return {{{0e-9, 0.0},
           {310e-9, -1.0},
           {710e-9, -9.0},
           {1090e-9, -10.0},
           {1730e-9, -15.0},
           {2510e-9, -20.0}},
          nu_max,
          true};
}

ChannelRealization sample_channel(const ChannelConfig& cfg, std::mt19937_64& rng) {
  require(!cfg.profile.empty(), Errc::EmptyProfile, "channel profile has no paths");
  require(cfg.nu_max >= 0.0, Errc::NonPositive, "nu_max must be non-negative");
  const size_t paths = cfg.profile.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-kPi, kPi);

  ChannelRealization ch;
  ch.gains.resize(paths);
  ch.delays_s.resize(paths);
  ch.dopplers_hz.resize(paths);
  double total = 0.0;
  for (size_t i = 0; i < paths; ++i) {
    double w = cfg.use_power_profile ? std::pow(10.0, cfg.profile[i].power_db / 10.0)
                                     : 1.0;
    // Draw re/im before scaling so the profile toggle does not shift the
    // RNG stream alignment between configurations.
    double re = gauss(rng), im = gauss(rng);
    ch.gains[i] = std::sqrt(w / 2.0) * cplx{re, im};
    total += std::norm(ch.gains[i]);
    ch.delays_s[i] = cfg.profile[i].delay_s;
    ch.dopplers_hz[i] = cfg.nu_max * std::cos(angle(rng));
  }
  double norm = 1.0 / std::sqrt(total);
  for (cplx& gain : ch.gains) gain *= norm;
  return ch;
}

double rrc_impulse(double t, double beta) {
  if (beta < 1e-12) {
    if (std::abs(t) < 1e-12) return 1.0;
    return std::sin(kPi * t) / (kPi * t);
  }
  if (std::abs(t) < 1e-12) return 1.0 - beta + 4.0 * beta / kPi;
  double critical = 1.0 / (4.0 * beta);
  if (std::abs(std::abs(t) - critical) < 1e-9) {
    double a = kPi / (4.0 * beta);
    return (beta / std::sqrt(2.0)) *
           ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
  }
  double num = std::sin(kPi * t * (1.0 - beta)) +
               4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
  double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
  return num / den;
}

EffectiveChannel make_effective_channel(const GridParams& grid, int k_halfwidth,
                                        int l_halfwidth) {
  EffectiveChannel h;
  h.grid = grid;
  h.k_halfwidth = k_halfwidth;
  h.l_halfwidth = l_halfwidth;
  h.taps.assign(static_cast<size_t>(2 * k_halfwidth + 1) * (2 * l_halfwidth + 1), 0.0);
  return h;
}

double EffectiveChannel::energy() const {
  double e = 0.0;
  for (const cplx& t : taps) e += std::norm(t);
  return e;
}

namespace {

// RRC samples at integer offsets within +-halfwidth of a fractional center,
// renormalized to unit energy after the truncation.
std::vector<double> sampled_pulse(double center, double beta, int halfwidth,
                                  int first, int count) {
  std::vector<double> v(count, 0.0);
  double energy = 0.0;
  for (int i = 0; i < count; ++i) {
    double offset = static_cast<double>(first + i) - center;
    if (std::abs(offset) > halfwidth + 1e-12) continue;
    v[i] = rrc_impulse(offset, beta);
    energy += v[i] * v[i];
  }
  require(energy > 0.0, Errc::SpreadTooLarge,
          "pulse window misses the path center entirely");
  double scale = 1.0 / std::sqrt(energy);
  for (double& x : v) x *= scale;
  return v;
}

}  // namespace

EffectiveChannel effective_channel(const GridParams& grid, const ChannelRealization& ch,
                                   const PulseShapeConfig& pulse) {
  require(!ch.gains.empty(), Errc::EmptyProfile, "channel realization has no paths");
  double max_delay_bins = 0.0, max_doppler_bins = 0.0;
  for (size_t i = 0; i < ch.gains.size(); ++i) {
    max_delay_bins = std::max(max_delay_bins,
                              std::abs(ch.delays_s[i] / grid.delay_res()));
    max_doppler_bins = std::max(max_doppler_bins,
                                std::abs(ch.dopplers_hz[i] / grid.doppler_res()));
  }
  int k_w = static_cast<int>(std::ceil(max_delay_bins)) + pulse.tap_halfwidth;
  int l_w = static_cast<int>(std::ceil(max_doppler_bins)) + pulse.tap_halfwidth;
  require(2 * k_w <= grid.M && 2 * l_w <= grid.N, Errc::SpreadTooLarge,
          "tap window " + std::to_string(2 * k_w + 1) + " x " +
              std::to_string(2 * l_w + 1) + " exceeds half a period of " +
              std::to_string(grid.M) + " x " + std::to_string(grid.N));

  EffectiveChannel h = make_effective_channel(grid, k_w, l_w);
  const int k_count = 2 * k_w + 1, l_count = 2 * l_w + 1;
  for (size_t i = 0; i < ch.gains.size(); ++i) {
    double d = ch.delays_s[i] / grid.delay_res();
    double b = ch.dopplers_hz[i] / grid.doppler_res();
    std::vector<double> gk =
        sampled_pulse(d, pulse.beta_tau, pulse.tap_halfwidth, -k_w, k_count);
    std::vector<double> gl =
        sampled_pulse(b, pulse.beta_nu, pulse.tap_halfwidth, -l_w, l_count);
    for (int a = 0; a < k_count; ++a) {
      if (gk[a] == 0.0) continue;
      for (int c = 0; c < l_count; ++c)
        h.taps[static_cast<size_t>(a) * l_count + c] += ch.gains[i] * gk[a] * gl[c];
    }
  }
  return h;
}

PeriodicArray2D periodize_taps(const EffectiveChannel& h) {
  PeriodicArray2D a = PeriodicArray2D::zeros(h.grid);
  for (int dk = -h.k_halfwidth; dk <= h.k_halfwidth; ++dk)
    for (int dl = -h.l_halfwidth; dl <= h.l_halfwidth; ++dl)
      a.cell(dk, dl) += h.tap(dk, dl);
  return a;
}

QuasiPeriodicArray apply_channel(const EffectiveChannel& h,
                                 const QuasiPeriodicArray& frame) {
  require_same_grid(h.grid, frame.grid());
  const GridParams& g = h.grid;
  const i64 mn = g.mn();
  const std::vector<cplx>& w = phase_table(mn);
  QuasiPeriodicArray y = QuasiPeriodicArray::zeros(g);
  for (int dk = -h.k_halfwidth; dk <= h.k_halfwidth; ++dk) {
    for (int dl = -h.l_halfwidth; dl <= h.l_halfwidth; ++dl) {
      const cplx tap = h.tap(dk, dl);
      if (tap == cplx{}) continue;
      for (int k = 0; k < g.M; ++k) {
        const i64 ks = k - dk;
        const i64 k0 = mod_reduce(ks, g.M);
        const i64 n = floor_div(ks, g.M);
        // frame.at(ks, ls) = fund(k0, l0) * e^{j2pi n l0 / N}; fold the
        // quasi-periodic phase and the twist into MN-th roots (1/N = M/MN).
        const cplx twisted_tap = tap * w[static_cast<size_t>(mod_reduce(
                                       static_cast<i64>(dl) * ks, mn))];
        for (int l = 0; l < g.N; ++l) {
          const i64 l0 = mod_reduce(l - dl, g.N);
          y.fund(k, l) += twisted_tap *
                          frame.fund(static_cast<int>(k0), static_cast<int>(l0)) *
                          w[static_cast<size_t>(mod_reduce(n * l0 * g.M, mn))];
        }
      }
    }
  }
  return y;
}

Frame assemble_frame(const DataFrame& data, const FrameConfig& fc) {
  require(fc.pdr > 0.0, Errc::BadPdr, "pilot-to-data ratio must be positive");
  require_same_grid(data.grid, fc.pilot.grid());
  const GridParams& g = data.grid;
  const double mn = static_cast<double>(g.mn());
  const double e_p = mn * fc.pdr / (1.0 + fc.pdr);
  const double e_d = mn / (1.0 + fc.pdr);
  const double data_scale = std::sqrt(e_d / mn);
  const double pilot_scale = std::sqrt(e_p);
  QuasiPeriodicArray tx = QuasiPeriodicArray::zeros(g);
  for (int k = 0; k < g.M; ++k)
    for (int l = 0; l < g.N; ++l)
      tx.fund(k, l) = pilot_scale * fc.pilot.fund(k, l) +
                      data_scale * data.symbols[static_cast<size_t>(k) * g.N + l];
  return {std::move(tx), e_p, e_d, data_scale};
}

NoisyFrame add_noise(const QuasiPeriodicArray& y, double snr_db,
                     double signal_ref_energy, std::mt19937_64& rng) {
  const GridParams& g = y.grid();
  double sigma2 = signal_ref_energy /
                  (static_cast<double>(g.mn()) * std::pow(10.0, snr_db / 10.0));
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  QuasiPeriodicArray out = y;
  for (cplx& v : out.fundamental()) v += cplx{gauss(rng), gauss(rng)};
  return {std::move(out), sigma2};
}

NoisyFrame multiuser_superpose(
    const std::vector<std::pair<EffectiveChannel, QuasiPeriodicArray>>& users,
    double snr_db, std::mt19937_64& rng) {
  require(!users.empty(), Errc::EmptyProfile, "superposition needs at least one user");
  const GridParams& g = users.front().second.grid();
  QuasiPeriodicArray sum = QuasiPeriodicArray::zeros(g);
  for (const auto& [h, tx] : users) {
    require_same_grid(g, tx.grid());
    QuasiPeriodicArray y = apply_channel(h, tx);
    for (int i = 0; i < g.mn(); ++i) sum.fundamental()[i] += y.fundamental()[i];
  }
  return add_noise(sum, snr_db, 1.0, rng);
}

}  // namespace zakdd
