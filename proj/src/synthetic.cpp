#include "tfmd/synthetic.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tfmd/fft.hpp"

namespace tfmd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double indicator(double t, double a, double b) { return (t >= a && t <= b) ? 1.0 : 0.0; }

// Standard normal draws with a fully specified byte stream: mt19937_64
// plus Box-Muller, independent of any library distribution internals.
std::vector<double> standard_normal(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto next_unit = [&rng]() {
        // in (0,1), never exactly 0 or 1
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; i += 2) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = kTwoPi * u2;
        out[i] = radius * std::cos(angle);
        if (i + 1 < count) out[i + 1] = radius * std::sin(angle);
    }
    return out;
}

}  // namespace

double tukey(double u, double r) {
    if (u < 0.0 || u > 1.0) return 0.0;
    if (r <= 0.0) return 1.0;
    const double half = r / 2.0;
    if (u < half) return 0.5 * (1.0 + std::cos(kPi * (2.0 * u / r - 1.0)));
    if (u > 1.0 - half) return 0.5 * (1.0 + std::cos(kPi * (2.0 * u / r - 2.0 / r + 1.0)));
    return 1.0;
}

int constituent_count(int case_id) {
    switch (case_id) {
        case 1: return 2;
        case 2: return 2;
        case 3: return 4;
        case 4: return 2;
        case 5: return 7;
        case 6: return 2;
        default: throw std::invalid_argument("constituent_count: case_id must be 1..6");
    }
}

double case_duration_s(int case_id) {
    constituent_count(case_id);  // validates the id
    return case_id == 5 ? 3.0 : 1.0;
}

Signal synthesize_cds_component(int cds_id, double fs, std::size_t num_samples) {
    if (cds_id < 4 || cds_id > 7) {
        throw std::invalid_argument("synthesize_cds_component: cds_id must be 4..7");
    }
    if (fs <= 0.0 || num_samples < 2) {
        throw std::invalid_argument("synthesize_cds_component: need fs > 0 and >= 2 samples");
    }

    double band_lo = 0.0;
    std::function<double(double)> phase_cycles;
    switch (cds_id) {
        case 4:
            band_lo = fs / 4.0;
            phase_cycles = [](double f) { return 0.4 * f + 2.0 * std::cos(kTwoPi * f / 100.0); };
            break;
        case 5:
            band_lo = 3.0 * fs / 10.0;
            phase_cycles = [](double f) { return 0.8 * f + 0.0005 * f * f; };
            break;
        case 6:
            band_lo = 7.0 * fs / 20.0;
            phase_cycles = [](double f) { return 1.8 * f + 2.0 * std::cos(kTwoPi * f / 100.0); };
            break;
        case 7:
            band_lo = 4.0 * fs / 10.0;
            phase_cycles = [](double f) { return 2.2 * f + 0.0005 * f * f; };
            break;
    }
    const double band_hi = fs / 2.0;  // half-open: [band_lo, band_hi)

    const std::size_t n = num_samples;
    std::vector<std::complex<double>> spectrum(n, 0.0);
    for (std::size_t m = 1; m <= (n - 1) / 2; ++m) {
        const double f = static_cast<double>(m) * fs / static_cast<double>(n);
        if (f >= band_lo && f < band_hi) {
            const std::complex<double> value = std::polar(30.0, -kTwoPi * phase_cycles(f));
            spectrum[m] = value;
            spectrum[n - m] = std::conj(value);
        }
    }

    std::vector<std::complex<double>> time(n);
    Dft dft(static_cast<int>(n));
    dft.inverse(spectrum.data(), time.data());

    Signal out;
    out.fs = fs;
    out.samples.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = time[i].real() * inv_n;
    return out;
}

GroundTruthCase generate_case(int case_id, double fs) {
    const int n_modes = constituent_count(case_id);
    if (fs <= 0.0) throw std::invalid_argument("generate_case: fs must be positive");

    const double duration = case_duration_s(case_id);
    const std::size_t T = static_cast<std::size_t>(std::llround(duration * fs));

    std::vector<std::function<double(double)>> modes;
    switch (case_id) {
        case 1:
            modes = {
                [](double t) { return std::cos(kTwoPi * (20.0 * t + 25.0 * t * t)); },
                [](double t) { return 0.9 * std::cos(kTwoPi * (130.0 * t + 25.0 * t * t * t)); },
            };
            break;
        case 2:
            modes = {
                [](double t) { return 1.2 * std::cos(kTwoPi * 100.0 * t + 15.0 * std::sin(kTwoPi * 2.0 * t)); },
                [](double t) { return 1.0 * std::cos(kTwoPi * 250.0 * t + 5.0 * std::sin(kTwoPi * 5.0 * t)); },
            };
            break;
        case 3:
            modes = {
                [](double t) { return std::cos(kTwoPi * (10.0 * t + 15.0 * t * t)); },
                [](double t) { return 0.9 * std::sin(kTwoPi * 100.0 * t); },
                [](double t) {
                    return 1.1 * indicator(t, 0.0, 0.7) *
                           std::cos(kTwoPi * 350.0 * (t - 0.1) + 5.0 * std::sin(kTwoPi * 6.0 * (t - 0.1)));
                },
                [](double t) {
                    return 1.2 * indicator(t, 0.6, 0.9) * tukey((t - 0.6) / 0.3, 0.25) *
                           std::sin(kTwoPi * 200.0 * t);
                },
            };
            break;
        case 4:
            modes = {
                [](double t) { return std::cos(kTwoPi * (20.0 * t + 30.0 * t * t)); },
                [](double t) {
                    return 1.1 * (0.8 + 0.4 * std::cos(kTwoPi * 2.0 * t)) * std::sin(kTwoPi * 200.0 * t);
                },
            };
            break;
        case 5:
            modes = {
                [](double t) {
                    return std::cos(kTwoPi * (170.0 * t + 20.0 * t * t + 3.0 * std::cos(3.0 * kPi * t)));
                },
                [](double t) { return indicator(t, 0.0, 1.5) * std::cos(kTwoPi * (75.0 * t + 20.0 * t * t)); },
                [](double t) {
                    return indicator(t, 1.0, 3.0) *
                           std::cos(kTwoPi * (10.0 * t + 20.0 * t * t + 3.0 * std::cos(3.0 * kPi * t)));
                },
            };
            break;
        case 6:
            modes = {
                [](double t) { return std::sin(kTwoPi * 100.0 * t); },
                [](double t) { return 0.8 * std::sin(kTwoPi * 200.0 * t); },
            };
            break;
    }

    GroundTruthCase out;
    out.case_id = case_id;
    out.duration_s = duration;
    out.fs = fs;
    out.constituents.reserve(static_cast<std::size_t>(n_modes));

    for (const auto& mode : modes) {
        Signal s;
        s.fs = fs;
        s.samples.resize(T);
        for (std::size_t i = 0; i < T; ++i) {
            s.samples[i] = mode(static_cast<double>(i) / fs);
        }
        out.constituents.push_back(std::move(s));
    }
    if (case_id == 5) {
        for (int cds_id = 4; cds_id <= 7; ++cds_id) {
            out.constituents.push_back(synthesize_cds_component(cds_id, fs, T));
        }
    }

    out.composite.fs = fs;
    out.composite.samples.assign(T, 0.0);
    for (const auto& c : out.constituents) {
        for (std::size_t i = 0; i < T; ++i) out.composite.samples[i] += c.samples[i];
    }
    return out;
}

Signal add_awgn(const Signal& x, const NoiseSpec& spec) {
    if (x.samples.empty()) throw std::invalid_argument("add_awgn: empty signal");
    if (!std::isfinite(spec.target_snr_db)) {
        throw std::invalid_argument("add_awgn: target SNR must be finite");
    }
    const double signal_energy = energy(x);
    if (!(signal_energy > 0.0)) {
        throw std::invalid_argument("add_awgn: signal energy must be nonzero");
    }

    const std::vector<double> noise = standard_normal(x.samples.size(), spec.seed);
    double noise_energy = 0.0;
    for (double v : noise) noise_energy += v * v;

    // Rescale the realized draw so the energy ratio hits the target exactly,
    // not just in expectation.
    const double scale =
        std::sqrt(signal_energy / noise_energy) * std::pow(10.0, -spec.target_snr_db / 20.0);

    Signal out = x;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] += scale * noise[i];
    }
    return out;
}

}  // namespace tfmd
