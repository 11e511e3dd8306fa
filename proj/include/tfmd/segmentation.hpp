#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace tfmd {

using MaskMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using LabelMatrix = Eigen::MatrixXi;

/// Size-filtering parameters for candidate masks.
struct FilterParams {
    std::int64_t p_abs = 10;  // absolute minimum pixel count
    double p_rel = 0.005;     // fraction of the non-negative-frequency grid
    double c_thresh = 2.0;    // threshold constant (larger -> lower threshold)

    void validate() const;
};

/// Result of 8-connected-component labeling. labels holds 0 for background
/// and 1..component_count for regions, numbered by first occurrence in
/// row-major scan order. pixel_counts[i-1] is the size of label i.
struct LabeledComponents {
    LabelMatrix labels;
    int component_count = 0;
    std::vector<std::int64_t> pixel_counts;
};

/// Candidate masks that survived size filtering, ordered by descending
/// pixel count (ties: smaller original label first).
struct FilteredMasks {
    std::vector<MaskMatrix> masks;
    std::vector<int> source_labels;
    std::vector<std::int64_t> pixel_counts;
    std::int64_t size_threshold = 0;  // max(P_abs, floor(P_rel * grid_cells))
};

/// Mean over a u x v window centered at each cell, truncated at the matrix
/// borders with the divisor equal to the in-bounds cell count. u, v odd.
Eigen::MatrixXd smooth(const Eigen::MatrixXd& magnitudes, int u, int v);

/// tau = sqrt(max * median / c_thresh) over all cells; even-count median is
/// the mean of the two middle order statistics. All-zero input gives 0.
double adaptive_threshold(const Eigen::MatrixXd& smoothed, double c_thresh);

/// bit = 1 iff value > tau (strict).
MaskMatrix initial_mask(const Eigen::MatrixXd& smoothed, double tau);

LabeledComponents label_components(const MaskMatrix& mask);

FilteredMasks filter_by_size(const LabeledComponents& lc, const FilterParams& params,
                             std::int64_t grid_cells);

/// Mirror a pos-frequency mask (pos_bins x M) around the DC axis onto the
/// full fft_size x M grid. dc_bin is the 0-based DC row of the full grid.
/// The even-N edge row with no positive-frequency counterpart is zeroed.
MaskMatrix extend_symmetric(const MaskMatrix& mask, int fft_size, int dc_bin);

}  // namespace tfmd
