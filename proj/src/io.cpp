#include "zakdd/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace zakdd {

namespace {
void ensure_parent(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}
}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void write_surface_csv(const std::string& path, const AmbiguitySurface& surface) {
  ensure_parent(path);
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, Errc::BadConfig, "cannot open " + path + " for writing");
  std::fputs("k,l,mag,phase\n", f);
  const i64 mn = surface.grid().mn();
  for (i64 k = 0; k < mn; ++k)
    for (i64 l = 0; l < mn; ++l) {
      cplx v = surface.at(k, l);
      std::fprintf(f, "%lld,%lld,%.12e,%.12e\n", static_cast<long long>(k),
                   static_cast<long long>(l), std::abs(v), std::arg(v));
    }
  std::fclose(f);
}

void write_sequence_csv(const std::string& path, const PeriodicSequence& x) {
  ensure_parent(path);
  std::FILE* f = std::fopen(path.c_str(), "w");
  require(f != nullptr, Errc::BadConfig, "cannot open " + path + " for writing");
  std::fputs("n,re,im\n", f);
  for (int n = 0; n < x.period(); ++n)
    std::fprintf(f, "%d,%.12e,%.12e\n", n, x.at(n).real(), x.at(n).imag());
  std::fclose(f);
}

void write_text_file(const std::string& path, const std::string& content) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::BadConfig, "cannot open " + path + " for writing");
  out << content;
}

}  // namespace zakdd
