#pragma once

#include <complex>

namespace tfmd {

/// Complex 1-D DFT of a fixed size, both directions, backed by FFTW plans.
/// forward: X[q] = sum_i x[i] e^{-j 2 pi q i / n}. inverse is the
/// unnormalized adjoint (caller divides by n where needed).
class Dft {
  public:
    explicit Dft(int n);
    ~Dft();
    Dft(const Dft&) = delete;
    Dft& operator=(const Dft&) = delete;

    int size() const { return n_; }
    void forward(const std::complex<double>* in, std::complex<double>* out);
    void inverse(const std::complex<double>* in, std::complex<double>* out);

  private:
    int n_ = 0;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    std::complex<double>* buf_in_ = nullptr;
    std::complex<double>* buf_out_ = nullptr;
};

}  // namespace tfmd
