#include "zakdd/cazac.hpp"

#include <cmath>
#include <string>

#include "zakdd/dft.hpp"

namespace zakdd {

CazacParams make_cazac_params(const GridParams& grid, i64 alpha, i64 beta, i64 gamma) {
  const i64 mn = grid.mn();
  alpha = mod_reduce(alpha, mn);
  beta = mod_reduce(beta, mn);
  gamma = mod_reduce(gamma, mn);
  require(mod_reduce(2 * alpha, mn) != 0, Errc::InvalidAlpha,
          "2*alpha = 0 mod MN degenerates the chirp to a tone (alpha=" +
              std::to_string(alpha) + ", MN=" + std::to_string(mn) + ")");
  return {grid, alpha, beta, gamma};
}

const char* cazac_kind_name(CazacKind kind) {
  switch (kind) {
    case CazacKind::GeneralQuadratic: return "general";
    case CazacKind::ZadoffChu: return "zadoff-chu";
    case CazacKind::Gaussian: return "gaussian";
    case CazacKind::Wiener: return "wiener";
  }
  return "?";
}

CazacFamily zadoff_chu(const GridParams& grid, i64 root) {
  const i64 mn = grid.mn();
  i64 half = mod_inverse(2, mn);  // MN odd, always exists
  i64 a = mod_reduce(root * half, mn);
  return {CazacKind::ZadoffChu, mod_reduce(root, mn),
          make_cazac_params(grid, a, a, 0)};
}

CazacFamily gaussian_family(const GridParams& grid, i64 alpha, i64 beta) {
  return {CazacKind::Gaussian, 0, make_cazac_params(grid, alpha, beta, 0)};
}

CazacFamily wiener_family(const GridParams& grid, i64 alpha) {
  return {CazacKind::Wiener, 0, make_cazac_params(grid, alpha, 0, 0)};
}

CazacFamily general_quadratic(const GridParams& grid, i64 alpha, i64 beta, i64 gamma) {
  return {CazacKind::GeneralQuadratic, 0, make_cazac_params(grid, alpha, beta, gamma)};
}

PeriodicSequence cazac_td(const CazacParams& p) {
  const i64 mn = p.grid.mn();
  std::vector<cplx> x(mn);
  for (i64 n = 0; n < mn; ++n)
    x[n] = unit_phase(p.alpha * n * n + p.beta * n + p.gamma, mn);
  return {p.grid, std::move(x)};
}

QuasiPeriodicArray cazac_dd(const CazacParams& p) {
  const GridParams& g = p.grid;
  const i64 mn = g.mn();
  QuasiPeriodicArray X = QuasiPeriodicArray::zeros(g);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.N));
  for (int k = 0; k < g.M; ++k) {
    cplx outer = unit_phase(p.gamma + static_cast<i64>(k) * p.beta, mn);
    for (int l = 0; l < g.N; ++l) {
      cplx acc = 0.0;
      for (int q = 0; q < g.N; ++q) {
        i64 t = k + static_cast<i64>(q) * g.M;
        acc += unit_phase(p.alpha * t * t + static_cast<i64>(q) * g.M * (p.beta - l), mn);
      }
      X.fund(k, l) = scale * outer * acc;
    }
  }
  return X;
}

double ca_deviation(const PeriodicSequence& x) {
  double worst = 0.0;
  for (const cplx& v : x.samples()) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
  return worst;
}

double zac_deviation(const PeriodicSequence& x) {
  // Periodic autocorrelation through the DFT: r = IDFT(|DFT(x)|^2) / MN^2.
  const i64 mn = x.period();
  Dft dft(static_cast<int>(mn));
  std::vector<cplx> spectrum(mn), corr(mn);
  dft.forward(x.samples().data(), spectrum.data());
  for (cplx& v : spectrum) v = std::norm(v);
  dft.backward(spectrum.data(), corr.data());
  double worst = 0.0;
  const double scale = 1.0 / (static_cast<double>(mn) * static_cast<double>(mn));
  for (i64 k = 1; k < mn; ++k) worst = std::max(worst, std::abs(corr[k]) * scale);
  return worst;
}

bool verify_ca(const PeriodicSequence& x, double tol) { return ca_deviation(x) <= tol; }

bool verify_zac(const PeriodicSequence& x, double tol) { return zac_deviation(x) <= tol; }

}  // namespace zakdd
