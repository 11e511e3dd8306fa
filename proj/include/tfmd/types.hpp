#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tfmd {

/// Uniformly sampled real-valued time series, t[n] = n / fs.
struct Signal {
    std::vector<double> samples;
    double fs = 0.0;  // sampling frequency [Hz]

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return fs > 0.0 ? static_cast<double>(samples.size()) / fs : 0.0; }
};

/// Overlap-add inversion degenerated (NOLA violation) or a reconstruction
/// failed a numerical sanity bound.
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File-format or filesystem failure.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline double energy(const Signal& x) {
    double e = 0.0;
    for (double v : x.samples) e += v * v;
    return e;
}

inline double l2_norm(const Signal& x) { return std::sqrt(energy(x)); }

}  // namespace tfmd
