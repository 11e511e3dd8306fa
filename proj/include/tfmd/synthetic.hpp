#pragma once

#include <cstdint>
#include <vector>

#include "tfmd/types.hpp"

namespace tfmd {

/// A synthetic multicomponent test signal together with the constituent
/// modes it was built from. The composite is the element-wise sum of the
/// constituents by construction.
struct GroundTruthCase {
    int case_id = 0;
    Signal composite;
    std::vector<Signal> constituents;
    double duration_s = 0.0;
    double fs = 0.0;
};

struct NoiseSpec {
    double target_snr_db = 0.0;
    std::uint64_t seed = 0;
};

/// Number of ground-truth constituent modes for case 1..6: {2,2,4,2,7,2}.
int constituent_count(int case_id);

/// Duration in seconds for case 1..6 (3 s for case 5, 1 s otherwise).
double case_duration_s(int case_id);

/// Builds synthetic case `case_id` in 1..6, sampled at t = n/fs.
/// Throws std::invalid_argument for an unknown case id.
GroundTruthCase generate_case(int case_id, double fs = 1000.0);

/// Band-limited component synthesized by sampling a complex spectral
/// definition (ids 4..7) on the length-`num_samples` DFT grid, mirroring
/// conjugately onto negative frequencies, and inverse-transforming.
Signal synthesize_cds_component(int cds_id, double fs, std::size_t num_samples);

/// x plus white Gaussian noise, with the drawn noise vector rescaled so the
/// realized energy ratio hits spec.target_snr_db exactly. Same signal and
/// seed give a bit-identical result.
Signal add_awgn(const Signal& x, const NoiseSpec& spec);

/// Cosine-tapered (Tukey) window evaluated at normalized position u in
/// [0,1] with taper fraction r; zero outside [0,1].
double tukey(double u, double r);

}  // namespace tfmd
