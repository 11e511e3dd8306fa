#include "tfmd/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace tfmd {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution on distinct
// plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Dft::Dft(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Dft: size must be positive");
    buf_in_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(static_cast<size_t>(n)));
    buf_out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(static_cast<size_t>(n)));
    if (!buf_in_ || !buf_out_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_in_),
                                 reinterpret_cast<fftw_complex*>(buf_out_), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
}

Dft::~Dft() {
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
        if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    }
    fftw_free(buf_in_);
    fftw_free(buf_out_);
}

void Dft::forward(const std::complex<double>* in, std::complex<double>* out) {
    std::memcpy(buf_in_, in, sizeof(std::complex<double>) * static_cast<size_t>(n_));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    std::memcpy(out, buf_out_, sizeof(std::complex<double>) * static_cast<size_t>(n_));
}

void Dft::inverse(const std::complex<double>* in, std::complex<double>* out) {
    std::memcpy(buf_in_, in, sizeof(std::complex<double>) * static_cast<size_t>(n_));
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(out, buf_out_, sizeof(std::complex<double>) * static_cast<size_t>(n_));
}

}  // namespace tfmd
