#include "tfmd/decomposition.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tfmd {

void TfmdParams::validate() const {
    stft.validate();
    filter.validate();
    if (smooth_u < 1 || smooth_v < 1 || smooth_u % 2 == 0 || smooth_v % 2 == 0) {
        throw std::invalid_argument("TfmdParams: smoothing dimensions must be odd and positive");
    }
}

Signal reconstruct_total(const std::vector<Signal>& modes, std::size_t len_if_empty,
                         double fs_if_empty) {
    Signal total;
    if (modes.empty()) {
        total.fs = fs_if_empty;
        total.samples.assign(len_if_empty, 0.0);
        return total;
    }
    total.fs = modes.front().fs;
    total.samples.assign(modes.front().samples.size(), 0.0);
    for (const auto& mode : modes) {
        if (mode.samples.size() != total.samples.size() || mode.fs != total.fs) {
            throw std::invalid_argument("reconstruct_total: modes must share length and fs");
        }
        for (std::size_t i = 0; i < total.samples.size(); ++i) {
            total.samples[i] += mode.samples[i];
        }
    }
    return total;
}

namespace {

DecompositionResult run_pipeline(const Signal& x, const TfmdParams& params,
                                 const Eigen::MatrixXd* mask_basis) {
    params.validate();

    const StftGrid grid = stft(x, params.stft);
    const PosFreqGrid pos = extract_pos_freq(grid);
    const Eigen::MatrixXd magnitudes = pos.coeffs.cwiseAbs();

    if (mask_basis && (mask_basis->rows() != magnitudes.rows() ||
                       mask_basis->cols() != magnitudes.cols())) {
        throw std::invalid_argument("decompose_with_prior: prior grid does not match the target grid");
    }
    const Eigen::MatrixXd& segmentation_input = mask_basis ? *mask_basis : magnitudes;

    const Eigen::MatrixXd smoothed = smooth(segmentation_input, params.smooth_u, params.smooth_v);
    const double tau = adaptive_threshold(smoothed, params.filter.c_thresh);
    const MaskMatrix mask_initial = initial_mask(smoothed, tau);
    const LabeledComponents components = label_components(mask_initial);
    const FilteredMasks filtered =
        filter_by_size(components, params.filter, static_cast<std::int64_t>(mask_initial.size()));

    DecompositionResult result;
    result.n_modes = static_cast<int>(filtered.masks.size());
    result.diagnostics.tau = tau;
    result.diagnostics.component_count = components.component_count;
    result.diagnostics.pixel_counts = components.pixel_counts;
    result.diagnostics.retained_pixel_counts = filtered.pixel_counts;
    result.diagnostics.retained_labels = filtered.source_labels;
    result.diagnostics.size_threshold = filtered.size_threshold;

    const int n = params.stft.fft_size;
    const int dc = params.stft.dc_bin();
    const std::size_t target_len = x.samples.size();

    double worst_imag = 0.0;
    for (const auto& pos_mask : filtered.masks) {
        MaskMatrix full = extend_symmetric(pos_mask, n, dc);

        // Masks are applied to the original complex coefficients; the
        // smoothed magnitudes exist only to shape the masks.
        Eigen::MatrixXcd masked = Eigen::MatrixXcd::Zero(grid.coeffs.rows(), grid.coeffs.cols());
        for (Eigen::Index c = 0; c < masked.cols(); ++c) {
            for (Eigen::Index r = 0; r < masked.rows(); ++r) {
                if (full(r, c)) masked(r, c) = grid.coeffs(r, c);
            }
        }

        StftGrid masked_grid{masked, params.stft, target_len};
        double imag_residue = 0.0;
        Signal mode = istft(masked_grid, target_len, &imag_residue);
        if (imag_residue >= 1e-9) {
            throw numerical_error("decompose: reconstructed mode has non-negligible imaginary part");
        }
        worst_imag = std::max(worst_imag, imag_residue);

        result.masks.push_back(std::move(full));
        result.masked_grids.push_back(std::move(masked));
        result.modes.push_back(std::move(mode));
    }
    result.diagnostics.max_imag_residue = worst_imag;
    result.total = reconstruct_total(result.modes, target_len, x.fs);
    return result;
}

}  // namespace

DecompositionResult decompose(const Signal& x, const TfmdParams& params) {
    return run_pipeline(x, params, nullptr);
}

PriorSpectrogram build_prior(const std::vector<Signal>& segments, const StftConfig& config) {
    config.validate();
    if (segments.empty()) throw std::invalid_argument("build_prior: need at least one segment");
    const std::size_t len = segments.front().samples.size();
    const double fs = segments.front().fs;
    for (const auto& seg : segments) {
        if (seg.samples.size() != len || seg.fs != fs) {
            throw std::invalid_argument("build_prior: segments must share length and fs");
        }
    }

    PriorSpectrogram prior;
    prior.config = config;
    prior.segment_len = len;
    prior.values = Eigen::MatrixXd::Zero(config.pos_bins(), config.num_frames(len));

    for (const auto& seg : segments) {
        const Eigen::MatrixXd mag = extract_pos_freq(stft(seg, config)).coeffs.cwiseAbs();
        const double peak = mag.maxCoeff();
        if (peak <= 0.0) {
            ++prior.skipped_segments;  // degenerate all-zero segment
            continue;
        }
        prior.values += mag / peak;
        ++prior.segment_count;
    }
    return prior;
}

DecompositionResult decompose_with_prior(const Signal& x, const PriorSpectrogram& prior,
                                         const TfmdParams& params) {
    return run_pipeline(x, params, &prior.values);
}

}  // namespace tfmd
