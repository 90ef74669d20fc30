#include "zakdd/dft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace zakdd {

namespace {
// FFTW plan creation and destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dft::Dft(int length) : n_(length) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  in_buf_ = fftw_malloc(sizeof(fftw_complex) * n_);
  out_buf_ = fftw_malloc(sizeof(fftw_complex) * n_);
  fwd_plan_ = fftw_plan_dft_1d(n_, static_cast<fftw_complex*>(in_buf_),
                               static_cast<fftw_complex*>(out_buf_), FFTW_FORWARD,
                               FFTW_ESTIMATE);
  bwd_plan_ = fftw_plan_dft_1d(n_, static_cast<fftw_complex*>(in_buf_),
                               static_cast<fftw_complex*>(out_buf_), FFTW_BACKWARD,
                               FFTW_ESTIMATE);
}

Dft::~Dft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_plan_));
  fftw_free(in_buf_);
  fftw_free(out_buf_);
}

void Dft::forward(const std::complex<double>* in, std::complex<double>* out) const {
  std::memcpy(in_buf_, in, sizeof(fftw_complex) * n_);
  fftw_execute(static_cast<fftw_plan>(fwd_plan_));
  std::memcpy(out, out_buf_, sizeof(fftw_complex) * n_);
}

void Dft::backward(const std::complex<double>* in, std::complex<double>* out) const {
  std::memcpy(in_buf_, in, sizeof(fftw_complex) * n_);
  fftw_execute(static_cast<fftw_plan>(bwd_plan_));
  std::memcpy(out, out_buf_, sizeof(fftw_complex) * n_);
}

}  // namespace zakdd
