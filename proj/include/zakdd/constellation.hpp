#pragma once

#include <random>
#include <string>
#include <vector>

#include "zakdd/grid.hpp"

namespace zakdd {

// Symbol alphabet with unit mean energy. Point order doubles as the bit
// labeling: symbol index == its bit pattern, and the built-in alphabets are
// Gray-labeled so neighbour decisions cost one bit.
struct Constellation {
  std::string name;
  std::vector<cplx> points;
};

// QPSK, points (+-1 +- j)/sqrt(2), Gray labels.
Constellation qam4();

// Throws InvalidConstellation unless the alphabet is non-empty, a power of
// two in size, and has mean energy 1 within tolerance.
void validate_constellation(const Constellation& c);

int bits_per_symbol(const Constellation& c);
int nearest_point(const Constellation& c, cplx v);
int bit_difference(const Constellation& c, int i, int j);

// One frame of data symbols on the fundamental domain, index (k,l) -> k*N+l.
struct DataFrame {
  GridParams grid;
  std::vector<cplx> symbols;
};

DataFrame random_data_frame(const GridParams& grid, const Constellation& c,
                            std::mt19937_64& rng);

// Embeds the symbols as the fundamental domain of a quasi-periodic array.
QuasiPeriodicArray to_dd_array(const DataFrame& d);

// Fraction of differing bits between two equally-sized frames.
double bit_error_rate(const Constellation& c, const DataFrame& truth,
                      const DataFrame& detected);

}  // namespace zakdd
