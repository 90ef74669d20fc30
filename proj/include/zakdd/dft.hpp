#pragma once

#include <complex>
#include <vector>

namespace zakdd {

// Fixed-length complex DFT backed by FFTW. forward() applies
// sum_n in[n] e^{-j 2 pi n k / L}; backward() the conjugate kernel.
// Neither direction scales the result. Instances are cheap to create
// (plans use FFTW_ESTIMATE so results are run-to-run deterministic) and
// each instance owns its buffers, so distinct instances may be used from
// distinct threads.
class Dft {
 public:
  explicit Dft(int length);
  ~Dft();

  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  int length() const { return n_; }

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int n_;
  void* in_buf_;
  void* out_buf_;
  void* fwd_plan_;
  void* bwd_plan_;
};

}  // namespace zakdd
