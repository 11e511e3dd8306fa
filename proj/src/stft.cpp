#include "tfmd/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tfmd/fft.hpp"

namespace tfmd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{-j 2 pi p / n} for p = 0..n-1
std::vector<std::complex<double>> negative_unit_roots(int n) {
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) {
        roots[static_cast<std::size_t>(p)] =
            std::polar(1.0, -kTwoPi * static_cast<double>(p) / static_cast<double>(n));
    }
    return roots;
}

int mod_floor(long long a, int n) {
    const long long r = a % n;
    return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

void StftConfig::validate() const {
    if (window_len < 2) throw std::invalid_argument("StftConfig: window_len must be >= 2");
    if (!(gaussian_alpha > 0.0)) throw std::invalid_argument("StftConfig: alpha must be positive");
    if (hop < 1 || hop > window_len) {
        throw std::invalid_argument("StftConfig: hop must satisfy 0 < hop <= window_len");
    }
    if (window_len > fft_size) {
        throw std::invalid_argument("StftConfig: fft_size must be >= window_len");
    }
    if (!(fs > 0.0)) throw std::invalid_argument("StftConfig: fs must be positive");
}

int StftConfig::num_frames(std::size_t signal_len) const {
    if (signal_len < static_cast<std::size_t>(window_len)) {
        throw std::invalid_argument("stft: signal shorter than the analysis window");
    }
    return static_cast<int>((signal_len - static_cast<std::size_t>(window_len)) /
                            static_cast<std::size_t>(hop)) +
           1;
}

std::size_t covered_samples(const StftConfig& config, std::size_t signal_len) {
    const int frames = config.num_frames(signal_len);
    return static_cast<std::size_t>(frames - 1) * static_cast<std::size_t>(config.hop) +
           static_cast<std::size_t>(config.window_len);
}

Eigen::VectorXd gaussian_window(int window_len, double alpha) {
    if (window_len < 2) throw std::invalid_argument("gaussian_window: length must be >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("gaussian_window: alpha must be positive");
    Eigen::VectorXd w(window_len);
    const double half_span = (window_len - 1) / 2.0;
    for (int n = 0; n < window_len; ++n) {
        const double u = alpha * (n - half_span) / half_span;
        w[n] = std::exp(-0.5 * u * u);
    }
    return w;
}

StftGrid stft(const Signal& x, const StftConfig& config) {
    config.validate();
    const int frame_len = config.window_len;
    const int hop = config.hop;
    const int n = config.fft_size;
    const int dc = config.dc_bin();
    const int frames = config.num_frames(x.samples.size());

    const Eigen::VectorXd window = gaussian_window(frame_len, config.gaussian_alpha);
    const auto roots = negative_unit_roots(n);
    Dft dft(n);

    StftGrid grid;
    grid.config = config;
    grid.signal_len = x.samples.size();
    grid.coeffs.resize(n, frames);

    std::vector<std::complex<double>> frame(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n));

    for (int m = 0; m < frames; ++m) {
        const std::size_t offset = static_cast<std::size_t>(m) * static_cast<std::size_t>(hop);
        for (int i = 0; i < frame_len; ++i) {
            frame[static_cast<std::size_t>(i)] = x.samples[offset + static_cast<std::size_t>(i)] * window[i];
        }
        std::fill(frame.begin() + frame_len, frame.end(), std::complex<double>{});
        dft.forward(frame.data(), spectrum.data());

        // Centered layout plus the absolute-time phase reference of the
        // frame offset: S[r,m] = e^{-j 2 pi q m R / N} DFT[q mod N], q = r - dc.
        for (int r = 0; r < n; ++r) {
            const int q = r - dc;
            const int src = q >= 0 ? q : q + n;
            const int p = mod_floor(static_cast<long long>(q) * static_cast<long long>(offset), n);
            grid.coeffs(r, m) = roots[static_cast<std::size_t>(p)] * spectrum[static_cast<std::size_t>(src)];
        }
    }
    return grid;
}

PosFreqGrid extract_pos_freq(const StftGrid& grid) {
    grid.config.validate();
    const int dc = grid.config.dc_bin();
    const int pos = grid.config.pos_bins();
    if (grid.coeffs.rows() != grid.config.fft_size) {
        throw std::invalid_argument("extract_pos_freq: grid rows inconsistent with fft_size");
    }
    PosFreqGrid out;
    out.config = grid.config;
    out.signal_len = grid.signal_len;
    out.coeffs = grid.coeffs.middleRows(dc, pos);
    return out;
}

Signal istft(const StftGrid& grid, std::size_t target_len, double* max_imag_abs) {
    grid.config.validate();
    const int n = grid.config.fft_size;
    const int frame_len = grid.config.window_len;
    const int hop = grid.config.hop;
    const int dc = grid.config.dc_bin();
    if (grid.coeffs.rows() != n) {
        throw std::invalid_argument("istft: grid rows inconsistent with fft_size");
    }
    const int frames = static_cast<int>(grid.coeffs.cols());
    if (frames < 1) throw std::invalid_argument("istft: grid has no frames");

    const Eigen::VectorXd window = gaussian_window(frame_len, grid.config.gaussian_alpha);
    const auto roots = negative_unit_roots(n);
    Dft dft(n);

    const std::size_t covered =
        static_cast<std::size_t>(frames - 1) * static_cast<std::size_t>(hop) +
        static_cast<std::size_t>(frame_len);
    std::vector<std::complex<double>> accum(covered, std::complex<double>{});
    std::vector<double> weight(covered, 0.0);

    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> frame(static_cast<std::size_t>(n));
    const double inv_n = 1.0 / static_cast<double>(n);

    for (int m = 0; m < frames; ++m) {
        const std::size_t offset = static_cast<std::size_t>(m) * static_cast<std::size_t>(hop);
        for (int r = 0; r < n; ++r) {
            const int q = r - dc;
            const int dst = q >= 0 ? q : q + n;
            const int p = mod_floor(static_cast<long long>(q) * static_cast<long long>(offset), n);
            spectrum[static_cast<std::size_t>(dst)] =
                grid.coeffs(r, m) * std::conj(roots[static_cast<std::size_t>(p)]);
        }
        dft.inverse(spectrum.data(), frame.data());
        for (int i = 0; i < frame_len; ++i) {
            const std::size_t idx = offset + static_cast<std::size_t>(i);
            accum[idx] += window[i] * frame[static_cast<std::size_t>(i)] * inv_n;
            weight[idx] += window[i] * window[i];
        }
    }

    Signal out;
    out.fs = grid.config.fs;
    out.samples.assign(target_len, 0.0);
    double worst_imag = 0.0;
    const std::size_t upto = std::min(target_len, covered);
    for (std::size_t i = 0; i < upto; ++i) {
        if (weight[i] <= 1e-12) {
            throw numerical_error("istft: overlap-add denominator degenerate (NOLA violated)");
        }
        const std::complex<double> v = accum[i] / weight[i];
        worst_imag = std::max(worst_imag, std::abs(v.imag()));
        out.samples[i] = v.real();
    }
    if (max_imag_abs) *max_imag_abs = worst_imag;
    return out;
}

}  // namespace tfmd
