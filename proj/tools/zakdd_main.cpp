// Command-line front end for the delay-Doppler waveform toolbox.
//
// Subcommands:
//   ambiguity  self-ambiguity surface of one chirp waveform
//   isac       superimposed-pilot link with iterative estimate/detect
//   rach       multi-user preamble detection sweep
//   verify     small-grid self-checks of the core identities
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "zakdd/errors.hpp"
#include "zakdd/experiments.hpp"

namespace {

void add_grid_options(CLI::App* app, int& M, int& N, double& nu_p) {
  app->add_option("--m", M, "delay-axis modulus (odd)")->capture_default_str();
  app->add_option("--n", N, "Doppler-axis modulus (odd, coprime to m)")
      ->capture_default_str();
  app->add_option("--nu-p", nu_p, "Doppler period in Hz")->capture_default_str();
}

void add_pulse_options(CLI::App* app, zakdd::IsacRunConfig& c) {
  app->add_option("--beta-tau", c.beta_tau, "delay pulse roll-off")
      ->capture_default_str();
  app->add_option("--beta-nu", c.beta_nu, "Doppler pulse roll-off")
      ->capture_default_str();
  app->add_option("--tap-halfwidth", c.tap_halfwidth,
                  "pulse taps kept on each side of a path center")
      ->capture_default_str();
}

void add_pulse_options(CLI::App* app, zakdd::RachRunConfig& c) {
  app->add_option("--beta-tau", c.beta_tau, "delay pulse roll-off")
      ->capture_default_str();
  app->add_option("--beta-nu", c.beta_nu, "Doppler pulse roll-off")
      ->capture_default_str();
  app->add_option("--tap-halfwidth", c.tap_halfwidth,
                  "pulse taps kept on each side of a path center")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delay-Doppler waveform design and link simulation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  zakdd::AmbiguityRunConfig amb;
  CLI::App* amb_cmd = app.add_subcommand("ambiguity", "self-ambiguity surface study");
  add_grid_options(amb_cmd, amb.M, amb.N, amb.nu_p);
  amb_cmd->add_option("--family", amb.family,
                      "zadoff-chu | gaussian | wiener | general")
      ->capture_default_str();
  amb_cmd->add_option("--root", amb.root, "zadoff-chu root")->capture_default_str();
  amb_cmd->add_option("--alpha", amb.alpha, "quadratic phase coefficient")
      ->capture_default_str();
  amb_cmd->add_option("--beta", amb.beta, "linear phase coefficient")
      ->capture_default_str();
  amb_cmd->add_option("--gamma", amb.gamma, "constant phase coefficient")
      ->capture_default_str();
  amb_cmd->add_option("--out", amb.out_dir, "output directory")->required();

  zakdd::IsacRunConfig isac;
  CLI::App* isac_cmd =
      app.add_subcommand("isac", "superimposed-pilot sensing and detection link");
  add_grid_options(isac_cmd, isac.M, isac.N, isac.nu_p);
  isac_cmd->add_option("--pilot", isac.pilot_kind,
                       "pilot construction: spread (lattice-supported filter) "
                       "or chirp (line-supported array)")
      ->capture_default_str();
  isac_cmd->add_option("--pilot-root", isac.pilot_root, "pilot chirp root")
      ->capture_default_str();
  isac_cmd->add_option("--rho-d", isac.rho_d_db, "data SNR in dB")
      ->capture_default_str();
  isac_cmd->add_option("--nu-max", isac.nu_max, "maximum Doppler shift in Hz")
      ->capture_default_str();
  isac_cmd->add_option("--pdr", isac.pdr_list, "pilot-to-data power ratios")
      ->capture_default_str();
  isac_cmd->add_option("--iters", isac.iters, "estimate/detect iterations")
      ->capture_default_str();
  isac_cmd->add_option("--trials", isac.trials, "frames per ratio point")
      ->capture_default_str();
  isac_cmd->add_option("--region-k", isac.region_k, "sensing region delay extent")
      ->capture_default_str();
  isac_cmd->add_option("--region-l", isac.region_l, "sensing region Doppler extent")
      ->capture_default_str();
  add_pulse_options(isac_cmd, isac);
  isac_cmd->add_option("--seed", isac.seed, "base RNG seed")->capture_default_str();
  isac_cmd->add_option("--out", isac.out_dir, "output directory")->required();

  zakdd::RachRunConfig rach;
  CLI::App* rach_cmd = app.add_subcommand("rach", "multi-user preamble detection");
  add_grid_options(rach_cmd, rach.M, rach.N, rach.nu_p);
  rach_cmd->add_option("--families", rach.families,
                       "waveform families to compare (zadoff-chu gaussian wiener)")
      ->capture_default_str();
  rach_cmd->add_option("--users", rach.users, "simultaneously active users")
      ->capture_default_str();
  rach_cmd->add_option("--dict-size", rach.dict_size, "preambles per family")
      ->capture_default_str();
  rach_cmd->add_option("--snr", rach.snr_list, "per-user SNR sweep in dB")
      ->capture_default_str();
  rach_cmd->add_option("--nu-max", rach.nu_max, "maximum Doppler shift in Hz")
      ->capture_default_str();
  rach_cmd->add_option("--trials", rach.trials, "trials per SNR point")
      ->capture_default_str();
  rach_cmd->add_option("--pfa", rach.pfa_target, "per-candidate false-alarm target")
      ->capture_default_str();
  rach_cmd->add_flag("--calibrate", rach.calibrate,
                     "use a Monte-Carlo noise-only threshold instead of the "
                     "analytic one");
  rach_cmd->add_option("--region-k", rach.region_k, "sensing region delay extent")
      ->capture_default_str();
  rach_cmd->add_option("--region-l", rach.region_l, "sensing region Doppler extent")
      ->capture_default_str();
  add_pulse_options(rach_cmd, rach);
  rach_cmd->add_option("--seed", rach.seed, "base RNG seed")->capture_default_str();
  rach_cmd->add_option("--out", rach.out_dir, "output directory")->required();

  zakdd::VerifyRunConfig ver;
  CLI::App* ver_cmd = app.add_subcommand("verify", "core identity self-checks");
  ver_cmd->add_flag("--mutate-dzt", ver.mutate_dzt,
                    "corrupt one Zak coefficient so the equivalence check must "
                    "fail (negative control)");
  ver_cmd->add_option("--seed", ver.seed, "RNG seed")->capture_default_str();
  ver_cmd->add_option("--out", ver.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (amb_cmd->parsed()) {
      zakdd::AmbiguityRunResult r = run_ambiguity(amb);
      std::printf("support_count %lld\n", static_cast<long long>(r.support_count));
      std::printf("on_line_min_mag %.6e\n", r.on_line_min_mag);
      std::printf("off_line_max_mag %.6e\n", r.off_line_max_mag);
      std::printf("td_dd_max_dev %.6e\n", r.td_dd_max_dev);
      std::printf("papr_db %.6e\n", r.papr_db);
    } else if (isac_cmd->parsed()) {
      zakdd::IsacRunResult r = run_isac(isac);
      for (const auto& s : r.per_pdr) {
        std::printf("pdr %.3f first-iter median %.4e last-iter median %.4e "
                    "wins %d losses %d sign-test p %.3e\n",
                    s.pdr, s.median_by_iter.front(), s.median_by_iter.back(),
                    s.wins, s.losses, s.sign_test_p);
      }
    } else if (rach_cmd->parsed()) {
      zakdd::RachRunResult r = run_rach(rach);
      for (const auto& c : r.table)
        std::printf("family %-10s snr %+6.1f dB miss %.4e fa %.4e\n",
                    c.family.c_str(), c.snr_db, c.miss_rate, c.false_alarm_rate);
    } else if (ver_cmd->parsed()) {
      zakdd::VerifyRunResult r = run_verify(ver);
      for (const auto& e : r.entries)
        std::printf("%-18s %s  max_error %.3e  tolerance %.3e\n", e.name.c_str(),
                    e.pass ? "pass" : "FAIL", e.max_error, e.tolerance);
      if (!r.all_pass) return 1;
    }
  } catch (const zakdd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return zakdd::is_numeric_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
