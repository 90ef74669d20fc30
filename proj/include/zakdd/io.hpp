#pragma once

#include <string>

#include "zakdd/ambiguity.hpp"
#include "zakdd/grid.hpp"

namespace zakdd {

// Fixed-format float for CSV cells; deterministic across runs.
std::string format_double(double v);

// Columns k,l,mag,phase over the full [0,MN)^2 domain, k-major.
void write_surface_csv(const std::string& path, const AmbiguitySurface& surface);

// Columns n,re,im over one period.
void write_sequence_csv(const std::string& path, const PeriodicSequence& x);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace zakdd
