#pragma once

#include <random>
#include <utility>
#include <vector>

#include "zakdd/constellation.hpp"
#include "zakdd/grid.hpp"

namespace zakdd {

struct PathProfileEntry {
  double delay_s;    // seconds
  double power_db;   // relative path power
};

// Doubly selective multipath model: fixed delay/power profile, per-path
// Doppler nu_i = nu_max * cos(theta_i) with theta_i uniform on [-pi, pi).
struct ChannelConfig {
  std::vector<PathProfileEntry> profile;
  double nu_max = 0.0;  // Hz
  bool use_power_profile = true;
};

// Six-path vehicular profile: delays 0..2510 ns, powers 0..-20 dB.
ChannelConfig veh_a_channel(double nu_max);

struct ChannelRealization {
  std::vector<cplx> gains;        // normalized so sum |h_i|^2 = 1
  std::vector<double> delays_s;
  std::vector<double> dopplers_hz;
};

ChannelRealization sample_channel(const ChannelConfig& cfg, std::mt19937_64& rng);

// Root-raised-cosine pulse shaping applied on both axes when projecting the
// physical paths onto the integer delay-Doppler grid.
struct PulseShapeConfig {
  double beta_tau = 0.6;
  double beta_nu = 0.6;
  int tap_halfwidth = 8;  // truncation radius around each path, in bins
};

// Unit-period root-raised-cosine impulse response at offset t bins.
double rrc_impulse(double t, double beta);

// Channel taps on the integer grid, window [-k_halfwidth, k_halfwidth] x
// [-l_halfwidth, l_halfwidth], delay-major storage.
struct EffectiveChannel {
  GridParams grid;
  int k_halfwidth = 0;
  int l_halfwidth = 0;
  std::vector<cplx> taps;

  cplx tap(int dk, int dl) const {
    return taps[static_cast<size_t>(dk + k_halfwidth) * (2 * l_halfwidth + 1) +
                (dl + l_halfwidth)];
  }
  cplx& tap(int dk, int dl) {
    return taps[static_cast<size_t>(dk + k_halfwidth) * (2 * l_halfwidth + 1) +
                (dl + l_halfwidth)];
  }
  double energy() const;
};

EffectiveChannel make_effective_channel(const GridParams& grid, int k_halfwidth,
                                        int l_halfwidth);

// Projects a channel realization onto grid taps: per path, separable RRC
// samples at the fractional delay/Doppler offsets, each axis renormalized to
// unit energy after truncation, then scaled by the path gain. Throws
// SpreadTooLarge when the tap window does not fit in half a period.
EffectiveChannel effective_channel(const GridParams& grid, const ChannelRealization& ch,
                                   const PulseShapeConfig& pulse);

// One period of the taps as a doubly periodic array (reference form of the
// channel operator; apply_channel is the sparse equivalent).
PeriodicArray2D periodize_taps(const EffectiveChannel& h);

// Twisted convolution of the periodized taps with the frame.
QuasiPeriodicArray apply_channel(const EffectiveChannel& h,
                                 const QuasiPeriodicArray& frame);

// Pilot plus data superposition with pilot-to-data energy ratio pdr:
//   tx = sqrt(E_p) * pilot + sqrt(E_d / MN) * data,
// E_p + E_d = MN, E_p / E_d = pdr. The pilot must carry unit energy.
struct FrameConfig {
  Constellation constellation;
  double pdr = 1.0;
  double rho_d_db = 25.0;        // data SNR used as the add_noise reference
  QuasiPeriodicArray pilot;      // unit fundamental-domain energy
};

struct Frame {
  QuasiPeriodicArray tx;
  double pilot_energy;  // E_p
  double data_energy;   // E_d
  double data_scale;    // sqrt(E_d / MN)
};

Frame assemble_frame(const DataFrame& data, const FrameConfig& fc);

struct NoisyFrame {
  QuasiPeriodicArray y;
  double sigma2;  // per-cell complex noise variance
};

// Adds i.i.d. complex Gaussian noise with variance
//   sigma^2 = signal_ref_energy / (MN * 10^{snr_db/10}) per fundamental cell.
NoisyFrame add_noise(const QuasiPeriodicArray& y, double snr_db,
                     double signal_ref_energy, std::mt19937_64& rng);

// Sum of per-user channel outputs plus noise. snr_db is referenced to one
// unit-energy transmit signal through a unit-energy channel.
NoisyFrame multiuser_superpose(
    const std::vector<std::pair<EffectiveChannel, QuasiPeriodicArray>>& users,
    double snr_db, std::mt19937_64& rng);

}  // namespace zakdd
