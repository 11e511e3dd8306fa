#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tfmd/decomposition.hpp"
#include "tfmd/evaluation.hpp"
#include "tfmd/segmentation.hpp"
#include "tfmd/stft.hpp"
#include "tfmd/types.hpp"

namespace tfmd {

/// Round-trip-exact decimal formatting (17 significant digits).
std::string format_double(double v);

/// Two-column CSV (time_s,value) with a one-line header.
void write_signal_csv(const std::filesystem::path& path, const Signal& x);

/// Parses a (time_s,value) CSV; sampling must be uniform within 1e-9
/// relative on the time step. Unreadable files raise io_error; malformed
/// content and non-uniform sampling raise std::invalid_argument.
Signal read_signal_csv(const std::filesystem::path& path);

/// Magnitude matrix, rows ascending in bin frequency, with a header row of
/// frame center times and a leading column of bin frequencies.
void write_spectrogram_csv(const std::filesystem::path& path, const StftGrid& grid);

/// PGM P2, maxval 1; row 0 of the matrix is the first raster row.
void write_mask_pgm(const std::filesystem::path& path, const MaskMatrix& mask);

/// 0/1 matrix as CSV.
void write_mask_csv(const std::filesystem::path& path, const MaskMatrix& mask);

/// Integer label matrix as CSV.
void write_labels_csv(const std::filesystem::path& path, const LabelMatrix& labels);

/// Mode CSVs, mask PGMs (optional) and the manifest JSON for one
/// decomposition. Returns the manifest path.
std::filesystem::path write_decomposition_bundle(const std::filesystem::path& out_dir,
                                                 const DecompositionResult& result,
                                                 const TfmdParams& params,
                                                 bool export_masks);

/// Experiment artifacts: a table CSV matching the reported-results layout,
/// a long-format records CSV, and a summary JSON with per-condition
/// medians. experiment is 1 or 2.
void write_experiment_outputs(const std::filesystem::path& out_dir, int experiment,
                              const std::vector<ExperimentRecord>& records);

/// Fixed-width text rendering of experiment records for stdout.
std::string render_experiment_table(int experiment, const std::vector<ExperimentRecord>& records);

}  // namespace tfmd
