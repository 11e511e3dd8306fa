#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tfmd/segmentation.hpp"
#include "tfmd/stft.hpp"
#include "tfmd/types.hpp"

namespace tfmd {

/// Full pipeline configuration.
struct TfmdParams {
    StftConfig stft;
    FilterParams filter;
    int smooth_u = 3;  // frequency extent of the smoothing kernel
    int smooth_v = 3;  // time extent

    void validate() const;
};

/// Intermediate quantities captured while decomposing.
struct Diagnostics {
    double tau = 0.0;
    int component_count = 0;                         // candidates before filtering
    std::vector<std::int64_t> pixel_counts;          // all candidates, label order
    std::vector<std::int64_t> retained_pixel_counts; // per retained mode
    std::vector<int> retained_labels;                // original labels, mode order
    std::int64_t size_threshold = 0;
    double max_imag_residue = 0.0;                   // over all reconstructed modes
};

struct DecompositionResult {
    std::vector<Signal> modes;                  // reconstructed, mode order
    std::vector<MaskMatrix> masks;              // full-grid symmetric masks
    std::vector<Eigen::MatrixXcd> masked_grids; // S .* B_i
    Signal total;                               // element-wise sum of modes
    int n_modes = 0;
    Diagnostics diagnostics;
};

/// Magnitude spectrogram aggregated from several equal-length segments,
/// each normalized by its own maximum before summation.
struct PriorSpectrogram {
    Eigen::MatrixXd values;  // pos_bins x M
    int segment_count = 0;   // segments actually accumulated
    int skipped_segments = 0;
    StftConfig config;
    std::size_t segment_len = 0;
};

/// Runs the whole pipeline: STFT, positive-frequency magnitudes, smoothing,
/// adaptive threshold, 8-CCL, size filtering, symmetric mask extension,
/// masking of the original complex coefficients, and per-mode inversion.
/// Zero retained masks is a valid outcome (n_modes = 0, zero total).
DecompositionResult decompose(const Signal& x, const TfmdParams& params);

PriorSpectrogram build_prior(const std::vector<Signal>& segments, const StftConfig& config);

/// Same as decompose() except masks are derived from the prior matrix; the
/// resulting masks are applied to the target's own STFT coefficients.
DecompositionResult decompose_with_prior(const Signal& x, const PriorSpectrogram& prior,
                                         const TfmdParams& params);

/// Element-wise sum of equal-length modes; an empty list gives a zero
/// signal of the fallback length.
Signal reconstruct_total(const std::vector<Signal>& modes, std::size_t len_if_empty = 0,
                         double fs_if_empty = 0.0);

}  // namespace tfmd
