#include "zakdd/constellation.hpp"

#include <bit>
#include <cmath>

namespace zakdd {

Constellation qam4() {
  const double s = 1.0 / std::sqrt(2.0);
  // Index bits (b1 b0): b0 flips the real sign, b1 the imaginary sign.
  return {"4qam",
          {{s, s}, {-s, s}, {s, -s}, {-s, -s}}};
}

void validate_constellation(const Constellation& c) {
  require(!c.points.empty(), Errc::InvalidConstellation, "empty constellation");
  require(std::has_single_bit(c.points.size()), Errc::InvalidConstellation,
          "constellation size must be a power of two for bit labeling");
  double mean = 0.0;
  for (const cplx& p : c.points) mean += std::norm(p);
  mean /= static_cast<double>(c.points.size());
  require(std::abs(mean - 1.0) < 1e-9, Errc::InvalidConstellation,
          "constellation mean energy must be 1");
}

int bits_per_symbol(const Constellation& c) {
  return std::bit_width(c.points.size()) - 1;
}

int nearest_point(const Constellation& c, cplx v) {
  int best = 0;
  double best_d = std::norm(v - c.points[0]);
  for (size_t i = 1; i < c.points.size(); ++i) {
    double d = std::norm(v - c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int bit_difference(const Constellation& c, int i, int j) {
  (void)c;
  return std::popcount(static_cast<unsigned>(i) ^ static_cast<unsigned>(j));
}

DataFrame random_data_frame(const GridParams& grid, const Constellation& c,
                            std::mt19937_64& rng) {
  validate_constellation(c);
  std::uniform_int_distribution<size_t> pick(0, c.points.size() - 1);
  std::vector<cplx> symbols(grid.mn());
  for (cplx& s : symbols) s = c.points[pick(rng)];
  return {grid, std::move(symbols)};
}

QuasiPeriodicArray to_dd_array(const DataFrame& d) {
  return {d.grid, d.symbols};
}

double bit_error_rate(const Constellation& c, const DataFrame& truth,
                      const DataFrame& detected) {
  require_same_grid(truth.grid, detected.grid);
  int errors = 0;
  for (size_t i = 0; i < truth.symbols.size(); ++i)
    errors += bit_difference(c, nearest_point(c, truth.symbols[i]),
                             nearest_point(c, detected.symbols[i]));
  return static_cast<double>(errors) /
         (static_cast<double>(truth.symbols.size()) * bits_per_symbol(c));
}

}  // namespace zakdd
