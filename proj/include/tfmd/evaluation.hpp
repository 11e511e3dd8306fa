#pragma once

#include <cstdint>
#include <vector>

#include "tfmd/decomposition.hpp"
#include "tfmd/types.hpp"

namespace tfmd {

/// Optimal injective assignment of ground-truth modes to reconstructed
/// modes. assignment[j] is the 0-based reconstructed index matched to truth
/// mode j, or -1 when unmatched (possible only when fewer reconstructions
/// than truths). per_mode_errors[j] is NaN for unmatched truths.
struct MatchResult {
    std::vector<int> assignment;
    std::vector<double> per_mode_errors;
    std::vector<int> unmatched_reconstructed;
    double total_cost = 0.0;  // sum of matched errors
};

/// One decomposition outcome in an experiment sweep.
struct ExperimentRecord {
    int case_id = 0;
    bool noisy = false;
    double input_snr_db = 0.0;  // meaningful only when noisy
    std::uint64_t seed = 0;     // meaningful only when noisy
    int n_g = 0;
    int n_f = 0;
    double e_rel_total = 0.0;
    double e_rel_avg = 0.0;  // mean over matched modes
    double snr_out_db = 0.0;
    std::vector<double> per_mode_errors;  // indexed by truth mode, NaN if unmatched
};

/// ||truth - estimate||_2 / ||truth||_2. Throws on zero-norm truth.
double relative_l2(const Signal& truth, const Signal& estimate);

/// 10 log10(||clean||^2 / ||clean - estimate||^2); +infinity when the
/// error vector is exactly zero.
double output_snr_db(const Signal& clean, const Signal& estimate);

/// Exhaustive optimal matching; list sizes are small (<= 7) by contract.
MatchResult match_modes(const std::vector<Signal>& truth_modes,
                        const std::vector<Signal>& reconstructed);

/// Noise-free decomposition of cases 1..6. per_case_alpha applies the
/// case-5 window-shape exception (alpha = 2.0) on top of the base params.
std::vector<ExperimentRecord> run_experiment1(const TfmdParams& base_params,
                                              bool per_case_alpha = true);

/// Noisy sweep: every case x input SNR x seed, metrics computed against the
/// clean ground truth. Records are ordered by (case, snr, seed).
std::vector<ExperimentRecord> run_experiment2(const TfmdParams& base_params,
                                              const std::vector<double>& snrs_db,
                                              const std::vector<std::uint64_t>& seeds,
                                              bool per_case_alpha = true);

double median(std::vector<double> values);  // empty -> NaN

}  // namespace tfmd
