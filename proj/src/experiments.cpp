#include "zakdd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "json.hpp"

#include "zakdd/ambiguity.hpp"
#include "zakdd/cazac.hpp"
#include "zakdd/channel.hpp"
#include "zakdd/io.hpp"
#include "zakdd/receiver.hpp"
#include "zakdd/spread_pilot.hpp"
#include "zakdd/zak.hpp"

namespace zakdd {

namespace {

using json = nlohmann::ordered_json;

CazacKind parse_family(const std::string& name) {
  if (name == "zadoff-chu") return CazacKind::ZadoffChu;
  if (name == "gaussian") return CazacKind::Gaussian;
  if (name == "wiener") return CazacKind::Wiener;
  if (name == "general") return CazacKind::GeneralQuadratic;
  fail(Errc::BadConfig, "unknown waveform family '" + name + "'");
}

CazacFamily resolve_family(const GridParams& grid, const std::string& name, i64 root,
                           i64 alpha, i64 beta, i64 gamma) {
  switch (parse_family(name)) {
    case CazacKind::ZadoffChu: return zadoff_chu(grid, root);
    case CazacKind::Gaussian: return gaussian_family(grid, alpha, beta);
    case CazacKind::Wiener: return wiener_family(grid, alpha);
    case CazacKind::GeneralQuadratic: return general_quadratic(grid, alpha, beta, gamma);
  }
  fail(Errc::BadConfig, "unreachable");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(seed ^ index);
}

QuasiPeriodicArray unit_energy_pilot(const CazacParams& params) {
  QuasiPeriodicArray p = cazac_dd(params);
  double scale = 1.0 / std::sqrt(p.energy());
  for (cplx& v : p.fundamental()) v *= scale;
  return p;
}

}  // namespace

double sign_test_p(int wins, int losses) {
  const int n = wins + losses;
  if (n == 0) return 1.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k)
    p += std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) -
                  n * std::log(2.0));
  return std::min(p, 1.0);
}

AmbiguityRunResult run_ambiguity(const AmbiguityRunConfig& cfg) {
  GridParams grid = make_grid(cfg.M, cfg.N, cfg.nu_p);
  CazacFamily family =
      resolve_family(grid, cfg.family, cfg.root, cfg.alpha, cfg.beta, cfg.gamma);
  PeriodicSequence x = cazac_td(family.params);
  QuasiPeriodicArray X = cazac_dd(family.params);

  AmbiguitySurface dd = dd_ambiguity(X, X);
  AmbiguitySurface td = td_ambiguity(x, x);

  AmbiguityRunResult result;
  result.on_line_min_mag = 2.0;
  const i64 mn = grid.mn();
  for (i64 k = 0; k < mn; ++k) {
    for (i64 l = 0; l < mn; ++l) {
      double mag = std::abs(dd.at(k, l));
      result.td_dd_max_dev =
          std::max(result.td_dd_max_dev, std::abs(dd.at(k, l) - td.at(k, l)));
      if (on_self_af_line(family.params, k, l))
        result.on_line_min_mag = std::min(result.on_line_min_mag, mag);
      else
        result.off_line_max_mag = std::max(result.off_line_max_mag, mag);
      if (mag > 0.5) ++result.support_count;
    }
  }
  result.papr_db = papr(x).db;

  if (!cfg.out_dir.empty()) {
    write_sequence_csv(join_path(cfg.out_dir, "sequence.csv"), x);
    write_surface_csv(join_path(cfg.out_dir, "dd_af.csv"), dd);
    write_surface_csv(join_path(cfg.out_dir, "td_af_baseline.csv"), td);
    json j;
    j["config"] = {{"m", cfg.M},          {"n", cfg.N},
                   {"nu_p", cfg.nu_p},    {"family", cfg.family},
                   {"root", cfg.root},    {"alpha", family.params.alpha},
                   {"beta", family.params.beta}, {"gamma", family.params.gamma},
                   {"out", cfg.out_dir}};
    j["support_count"] = result.support_count;
    j["on_line_min_mag"] = result.on_line_min_mag;
    j["off_line_max_mag"] = result.off_line_max_mag;
    j["td_dd_max_dev"] = result.td_dd_max_dev;
    j["papr_db"] = result.papr_db;
    write_json(join_path(cfg.out_dir, "summary.json"), j);
  }
  return result;
}

IsacRunResult run_isac(const IsacRunConfig& cfg) {
  require(cfg.trials > 0, Errc::EmptyTrialSet, "isac needs trials > 0");
  require(cfg.iters > 0, Errc::NonPositive, "isac needs iters > 0");
  require(!cfg.pdr_list.empty(), Errc::BadConfig, "isac needs a non-empty pdr list");
  GridParams grid = make_grid(cfg.M, cfg.N, cfg.nu_p);
  QuasiPeriodicArray unit_pilot = [&] {
    if (cfg.pilot_kind == "spread") {
      Cazac2DParams filt =
          make_cazac2d(grid, cfg.pilot_root, 0, cfg.pilot_root, 0, 0);
      QuasiPeriodicArray p = spread_pilot(filt, 0, 0);
      double scale = 1.0 / std::sqrt(p.energy());
      for (cplx& v : p.fundamental()) v *= scale;
      return p;
    }
    if (cfg.pilot_kind == "chirp")
      return unit_energy_pilot(zadoff_chu(grid, cfg.pilot_root).params);
    fail(Errc::BadConfig, "pilot kind must be 'spread' or 'chirp', got '" +
                              cfg.pilot_kind + "'");
  }();
  Constellation constellation = qam4();
  ChannelConfig chan = veh_a_channel(cfg.nu_max);
  PulseShapeConfig pulse{cfg.beta_tau, cfg.beta_nu, cfg.tap_halfwidth};
  SensingRegion region{cfg.region_k, cfg.region_l};

  IsacRunResult result;
  for (size_t pi = 0; pi < cfg.pdr_list.size(); ++pi) {
    const double pdr = cfg.pdr_list[pi];
    FrameConfig fc{constellation, pdr, cfg.rho_d_db, unit_pilot};
    std::vector<std::vector<double>> traces;
    traces.reserve(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      std::uint64_t index = pi * static_cast<std::uint64_t>(cfg.trials) + t;
      std::mt19937_64 rng = trial_rng(cfg.seed, index);
      DataFrame data = random_data_frame(grid, constellation, rng);
      Frame frame = assemble_frame(data, fc);
      EffectiveChannel ch = effective_channel(grid, sample_channel(chan, rng), pulse);
      QuasiPeriodicArray clean = apply_channel(ch, frame.tx);
      NoisyFrame noisy = add_noise(clean, cfg.rho_d_db, frame.data_energy, rng);
      QuasiPeriodicArray pilot_tx = unit_pilot;
      double pilot_scale = std::sqrt(frame.pilot_energy);
      for (cplx& v : pilot_tx.fundamental()) v *= pilot_scale;
      TurboResult turbo =
          turbo_loop(noisy.y, pilot_tx, region, cfg.iters, frame.data_scale,
                     noisy.sigma2, constellation, &data);
      traces.push_back(std::move(turbo.ber_trace));
    }

    IsacPdrStats stats;
    stats.pdr = pdr;
    for (int it = 0; it < cfg.iters; ++it) {
      std::vector<double> bers;
      bers.reserve(traces.size());
      for (const auto& tr : traces) bers.push_back(tr[it]);
      double mean = 0.0;
      for (double b : bers) mean += b;
      mean /= static_cast<double>(bers.size());
      double var = 0.0;
      for (double b : bers) var += (b - mean) * (b - mean);
      var = bers.size() > 1 ? var / static_cast<double>(bers.size() - 1) : 0.0;
      double half = 1.96 * std::sqrt(var / static_cast<double>(bers.size()));
      IsacIterStats cell;
      cell.pdr = pdr;
      cell.iter = it + 1;
      cell.mean_ber = mean;
      cell.median_ber = median_of(bers);
      cell.ci_low = std::max(0.0, mean - half);
      cell.ci_high = std::min(1.0, mean + half);
      result.table.push_back(cell);
      stats.median_by_iter.push_back(cell.median_ber);
    }
    for (const auto& tr : traces) {
      if (tr.back() < tr.front()) ++stats.wins;
      if (tr.back() > tr.front()) ++stats.losses;
    }
    stats.sign_test_p = sign_test_p(stats.wins, stats.losses);
    result.per_pdr.push_back(std::move(stats));
  }

  if (!cfg.out_dir.empty()) {
    std::string csv_path = join_path(cfg.out_dir, "isac_ber.csv");
    std::filesystem::create_directories(cfg.out_dir);
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    require(f != nullptr, Errc::BadConfig, "cannot open " + csv_path);
    std::fputs("pdr,iter,ber,ci_low,ci_high\n", f);
    for (const auto& c : result.table)
      std::fprintf(f, "%.12e,%d,%.12e,%.12e,%.12e\n", c.pdr, c.iter, c.mean_ber,
                   c.ci_low, c.ci_high);
    std::fclose(f);

    json j;
    j["config"] = {{"m", cfg.M},
                   {"n", cfg.N},
                   {"nu_p", cfg.nu_p},
                   {"pilot", cfg.pilot_kind},
                   {"pilot_root", cfg.pilot_root},
                   {"rho_d_db", cfg.rho_d_db},
                   {"nu_max", cfg.nu_max},
                   {"pdr_list", cfg.pdr_list},
                   {"iters", cfg.iters},
                   {"trials", cfg.trials},
                   {"region_k", cfg.region_k},
                   {"region_l", cfg.region_l},
                   {"beta_tau", cfg.beta_tau},
                   {"beta_nu", cfg.beta_nu},
                   {"tap_halfwidth", cfg.tap_halfwidth},
                   {"seed", cfg.seed},
                   {"out", cfg.out_dir}};
    json rows = json::array();
    for (const auto& c : result.table)
      rows.push_back({{"pdr", c.pdr},
                      {"iter", c.iter},
                      {"mean_ber", c.mean_ber},
                      {"median_ber", c.median_ber},
                      {"ci_low", c.ci_low},
                      {"ci_high", c.ci_high}});
    j["table"] = rows;
    json per_pdr = json::array();
    for (const auto& s : result.per_pdr)
      per_pdr.push_back({{"pdr", s.pdr},
                         {"median_by_iter", s.median_by_iter},
                         {"wins", s.wins},
                         {"losses", s.losses},
                         {"sign_test_p", s.sign_test_p}});
    j["per_pdr"] = per_pdr;
    write_json(join_path(cfg.out_dir, "isac.json"), j);
  }
  return result;
}

RachRunResult run_rach(const RachRunConfig& cfg) {
  require(cfg.trials > 0, Errc::EmptyTrialSet, "rach needs trials > 0");
  require(cfg.users >= 0, Errc::NonPositive, "user count must be non-negative");
  require(cfg.users <= cfg.dict_size, Errc::BadConfig,
          "more users than dictionary entries");
  require(!cfg.families.empty(), Errc::BadConfig, "rach needs at least one family");
  GridParams grid = make_grid(cfg.M, cfg.N, cfg.nu_p);
  ChannelConfig chan = veh_a_channel(cfg.nu_max);
  PulseShapeConfig pulse{cfg.beta_tau, cfg.beta_nu, cfg.tap_halfwidth};
  SensingRegion region{cfg.region_k, cfg.region_l};
  const double mn = static_cast<double>(grid.mn());

  RachRunResult result;
  for (size_t fa = 0; fa < cfg.families.size(); ++fa) {
    CazacKind kind = parse_family(cfg.families[fa]);
    std::vector<QuasiPeriodicArray> dict =
        preamble_dictionary(grid, kind, cfg.dict_size);
    for (size_t si = 0; si < cfg.snr_list.size(); ++si) {
      const double snr_db = cfg.snr_list[si];
      const double sigma2 = 1.0 / (mn * std::pow(10.0, snr_db / 10.0));
      std::optional<double> threshold;
      if (cfg.calibrate) {
        std::mt19937_64 cal_rng =
            trial_rng(cfg.seed, 0xC0FFEEull + fa * cfg.snr_list.size() + si);
        threshold = ost_calibrate_threshold(grid, dict, region, sigma2,
                                            cfg.pfa_target, 1000, cal_rng);
      }
      RachCell cell;
      cell.snr_db = snr_db;
      cell.family = cfg.families[fa];
      cell.trials = cfg.trials;
      std::int64_t false_alarms = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        std::uint64_t index =
            (fa * cfg.snr_list.size() + si) * static_cast<std::uint64_t>(cfg.trials) +
            t;
        std::mt19937_64 rng = trial_rng(cfg.seed, index);

        // Partial Fisher-Yates draw of the active preamble subset.
        std::vector<int> order(cfg.dict_size);
        for (int i = 0; i < cfg.dict_size; ++i) order[i] = i;
        for (int i = 0; i < cfg.users; ++i) {
          std::uniform_int_distribution<int> pick(i, cfg.dict_size - 1);
          std::swap(order[i], order[pick(rng)]);
        }
        std::vector<bool> active(cfg.dict_size, false);
        for (int i = 0; i < cfg.users; ++i) active[order[i]] = true;

        NoisyFrame noisy = [&] {
          if (cfg.users == 0) {
            QuasiPeriodicArray silent = QuasiPeriodicArray::zeros(grid);
            return add_noise(silent, snr_db, 1.0, rng);
          }
          std::vector<std::pair<EffectiveChannel, QuasiPeriodicArray>> users;
          users.reserve(cfg.users);
          for (int i = 0; i < cfg.users; ++i)
            users.emplace_back(
                effective_channel(grid, sample_channel(chan, rng), pulse),
                dict[order[i]]);
          return multiuser_superpose(users, snr_db, rng);
        }();

        DetectionReport report = ost_detect(noisy.y, dict, region, noisy.sigma2,
                                            cfg.pfa_target, threshold);
        std::vector<bool> detected(cfg.dict_size, false);
        for (int i : report.active_set) detected[i] = true;
        for (int i = 0; i < cfg.dict_size; ++i) {
          if (active[i] && !detected[i]) ++cell.misses;
          if (!active[i] && detected[i]) ++false_alarms;
        }
        cell.active_total += cfg.users;
      }
      cell.miss_rate = cell.active_total > 0
                           ? static_cast<double>(cell.misses) /
                                 static_cast<double>(cell.active_total)
                           : std::numeric_limits<double>::quiet_NaN();
      cell.false_alarm_rate =
          static_cast<double>(false_alarms) /
          (static_cast<double>(cfg.trials) *
           std::max(1, cfg.dict_size - cfg.users));
      result.table.push_back(std::move(cell));
    }
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::string csv_path = join_path(cfg.out_dir, "rach_miss.csv");
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    require(f != nullptr, Errc::BadConfig, "cannot open " + csv_path);
    std::fputs("snr_db,family,miss_rate,trials\n", f);
    for (const auto& c : result.table)
      std::fprintf(f, "%.12e,%s,%.12e,%d\n", c.snr_db, c.family.c_str(), c.miss_rate,
                   c.trials);
    std::fclose(f);

    json j;
    j["config"] = {{"m", cfg.M},
                   {"n", cfg.N},
                   {"nu_p", cfg.nu_p},
                   {"families", cfg.families},
                   {"users", cfg.users},
                   {"dict_size", cfg.dict_size},
                   {"snr_list", cfg.snr_list},
                   {"nu_max", cfg.nu_max},
                   {"trials", cfg.trials},
                   {"pfa_target", cfg.pfa_target},
                   {"calibrate", cfg.calibrate},
                   {"region_k", cfg.region_k},
                   {"region_l", cfg.region_l},
                   {"beta_tau", cfg.beta_tau},
                   {"beta_nu", cfg.beta_nu},
                   {"tap_halfwidth", cfg.tap_halfwidth},
                   {"seed", cfg.seed},
                   {"out", cfg.out_dir}};
    json rows = json::array();
    for (const auto& c : result.table) {
      json row = {{"snr_db", c.snr_db},
                  {"family", c.family},
                  {"miss_rate", c.miss_rate},
                  {"false_alarm_rate", c.false_alarm_rate},
                  {"misses", c.misses},
                  {"active_total", c.active_total},
                  {"trials", c.trials}};
      rows.push_back(row);
    }
    j["table"] = rows;
    write_json(join_path(cfg.out_dir, "rach.json"), j);
  }
  return result;
}

VerifyRunResult run_verify(const VerifyRunConfig& cfg) {
  VerifyRunResult result;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_sequence = [&](const GridParams& g) {
    std::vector<cplx> v(g.mn());
    for (cplx& s : v) s = cplx{gauss(rng), gauss(rng)};
    return PeriodicSequence(g, std::move(v));
  };

  {  // Zak transform unitarity and invertibility at the full grid size.
    GridParams g = make_grid(31, 37, 30000.0);
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      PeriodicSequence x = random_sequence(g);
      PeriodicSequence y = random_sequence(g);
      QuasiPeriodicArray X = dzt(x), Y = dzt(y);
      cplx td = 0.0;
      for (i64 n = 0; n < g.mn(); ++n) td += x.at(n) * std::conj(y.at(n));
      worst = std::max(worst, std::abs(inner_product_qp(X, Y) - td));
      PeriodicSequence back = idzt(X);
      for (i64 n = 0; n < g.mn(); ++n)
        worst = std::max(worst, std::abs(back.at(n) - x.at(n)));
    }
    result.entries.push_back({"zak-unitarity", worst <= 1e-9, worst, 1e-9});
  }

  {  // Time-domain and Zak-domain ambiguity agree cell by cell.
    GridParams g = make_grid(5, 7, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      PeriodicSequence x = random_sequence(g);
      PeriodicSequence y = random_sequence(g);
      QuasiPeriodicArray X = dzt(x), Y = dzt(y);
      if (cfg.mutate_dzt) X.fund(1, 2) += 1e-3;  // negative control
      AmbiguitySurface dd = dd_ambiguity(X, Y, DdAfPath::Direct);
      AmbiguitySurface td = td_ambiguity(x, y);
      for (i64 k = 0; k < g.mn(); ++k)
        for (i64 l = 0; l < g.mn(); ++l)
          worst = std::max(worst, std::abs(dd.at(k, l) - td.at(k, l)));
    }
    result.entries.push_back({"af-equivalence", worst <= 1e-12, worst, 1e-12});
  }

  {  // Chirp self-ambiguity matches its line-supported closed form.
    GridParams g = make_grid(3, 5, 1.0);
    CazacParams p = make_cazac_params(g, 2, 1, 0);
    QuasiPeriodicArray X = cazac_dd(p);
    AmbiguitySurface dd = dd_ambiguity(X, X, DdAfPath::Direct);
    double worst = 0.0;
    for (i64 k = 0; k < g.mn(); ++k)
      for (i64 l = 0; l < g.mn(); ++l)
        worst = std::max(worst, std::abs(dd.at(k, l) - self_af_closed_form(p, k, l)));
    result.entries.push_back({"self-af-line", worst <= 1e-10, worst, 1e-10});
  }

  {  // Spread-pilot self-ambiguity sits exactly on the predicted lattice.
    GridParams g = make_grid(3, 5, 1.0);
    Cazac2DParams p = make_cazac2d(g, 1, 2, 1, 0, 0);
    QuasiPeriodicArray xs = spread_pilot(p, 0, 0);
    AmbiguitySurface dd = dd_ambiguity(xs, xs, DdAfPath::Direct);
    double worst = 0.0;
    for (i64 k = 0; k < g.mn(); ++k)
      for (i64 l = 0; l < g.mn(); ++l) {
        double want = lattice_support(p, k, l) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(std::abs(dd.at(k, l)) - want));
      }
    result.entries.push_back({"lattice-support", worst <= 1e-9, worst, 1e-9});
  }

  {  // Chirp cross-ambiguity is flat when the alpha difference is a unit.
    GridParams g = make_grid(5, 7, 1.0);
    CazacParams p = make_cazac_params(g, 1, 0, 0);
    CazacParams q = make_cazac_params(g, 2, 3, 1);
    FlatnessResult flat = cross_af_flatness(p, q);
    AmbiguitySurface dd =
        dd_ambiguity(cazac_dd(p), cazac_dd(q), DdAfPath::Direct);
    double worst = flat.eligible ? 0.0 : 1.0;
    for (i64 k = 0; k < g.mn(); ++k)
      for (i64 l = 0; l < g.mn(); ++l)
        worst = std::max(worst, std::abs(std::abs(dd.at(k, l)) - flat.magnitude));
    result.entries.push_back({"cross-af-flatness", worst <= 1e-9, worst, 1e-9});
  }

  {  // Quadratic phase sums hit sqrt(modulus) on the nose.
    double worst = 0.0;
    for (i64 n : {5, 9, 15, 21, 49, 101})
      for (i64 a : {1, 2, 4})
        if (gcd64(a, n) == 1)
          worst = std::max(worst,
                           std::abs(gauss_sum_magnitude(a, n) - std::sqrt(
                                                                    static_cast<double>(n))));
    result.entries.push_back({"gauss-sum", worst <= 1e-9, worst, 1e-9});
  }

  {  // Random data is unbiased against the chirp pilot in mean square.
    GridParams g = make_grid(3, 5, 1.0);
    QuasiPeriodicArray X = cazac_dd(zadoff_chu(g, 2).params);
    UnbiasednessReport rep = unbiasedness_stat(X, qam4(), 4000, 16, rng);
    double err = std::abs(rep.mean_sq_cross - rep.target);
    double tol = 3.0 * rep.std_error;
    result.entries.push_back({"unbiasedness", err <= tol, err, tol});
  }

  result.all_pass = true;
  for (const auto& e : result.entries) result.all_pass = result.all_pass && e.pass;

  if (!cfg.out_dir.empty()) {
    json j;
    j["config"] = {{"mutate_dzt", cfg.mutate_dzt}, {"seed", cfg.seed},
                   {"out", cfg.out_dir}};
    json rows = json::array();
    for (const auto& e : result.entries)
      rows.push_back({{"name", e.name},
                      {"pass", e.pass},
                      {"max_error", e.max_error},
                      {"tolerance", e.tolerance}});
    j["checks"] = rows;
    j["all_pass"] = result.all_pass;
    write_json(join_path(cfg.out_dir, "verify.json"), j);
  }
  return result;
}

}  // namespace zakdd
