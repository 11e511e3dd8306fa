#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

#include "tfmd/types.hpp"

namespace tfmd {

/// Analysis/synthesis configuration for the Gaussian-windowed STFT.
struct StftConfig {
    int window_len = 128;        // Lw [samples]
    double gaussian_alpha = 2.5; // window shape parameter
    int hop = 13;                // R [samples]
    int fft_size = 256;          // N [bins]
    double fs = 1000.0;          // [Hz]

    void validate() const;  // throws std::invalid_argument

    /// Number of non-negative-frequency bins, ceil(N/2).
    int pos_bins() const { return (fft_size + 1) / 2; }

    /// 0-based row index of the DC frequency in the centered layout
    /// (1-based this is ceil((N+1)/2)).
    int dc_bin() const { return fft_size / 2; }

    /// Frame count floor((T - Lw)/R) + 1; throws if T < Lw.
    int num_frames(std::size_t signal_len) const;

    /// Frequency of 0-based full-grid row: (row - dc_bin) * fs / N.
    double bin_frequency(int row) const {
        return static_cast<double>(row - dc_bin()) * fs / static_cast<double>(fft_size);
    }

    /// Center time of 0-based frame index.
    double frame_center_time(int frame) const {
        return (static_cast<double>(frame) * hop + 0.5 * (window_len - 1)) / fs;
    }
};

/// Complex STFT coefficients over the full centered-frequency grid.
/// coeffs is fft_size x num_frames with rows ascending in frequency,
/// spanning [-fs/2, fs/2).
struct StftGrid {
    Eigen::MatrixXcd coeffs;
    StftConfig config;
    std::size_t signal_len = 0;
};

/// The DC-and-positive-frequency rows of an StftGrid; row 0 is DC.
struct PosFreqGrid {
    Eigen::MatrixXcd coeffs;
    StftConfig config;
    std::size_t signal_len = 0;
};

/// w[n] = exp(-0.5 (alpha (n - (Lw-1)/2) / ((Lw-1)/2))^2), n = 0..Lw-1.
Eigen::VectorXd gaussian_window(int window_len, double alpha);

/// Windowed DFT of every complete frame; frame m (0-based) covers samples
/// m*R .. m*R+Lw-1 and the coefficient phase references absolute sample
/// time, matching a direct evaluation at each bin frequency.
StftGrid stft(const Signal& x, const StftConfig& config);

PosFreqGrid extract_pos_freq(const StftGrid& grid);

/// Least-squares overlap-add inversion: per-frame inverse DFT, window,
/// accumulate, then divide by the summed squared window; trimmed or
/// zero-padded to target_len. Covered samples with an overlap-add
/// denominator below 1e-12 raise numerical_error (NOLA violation).
/// max_imag_abs, when non-null, receives the largest |imag| residue.
Signal istft(const StftGrid& grid, std::size_t target_len, double* max_imag_abs = nullptr);

/// Last sample index (exclusive) covered by at least one complete frame.
std::size_t covered_samples(const StftConfig& config, std::size_t signal_len);

}  // namespace tfmd
