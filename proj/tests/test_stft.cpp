#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "tfmd/stft.hpp"

using namespace tfmd;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Explicit summation of the transform definition: for each bin and frame,
// S[k,m] = sum_n x[n] w[n - mR] e^{-j 2 pi F(k) n / fs} with the window
// support bounding the sum.
Eigen::MatrixXcd stft_by_summation(const Signal& x, const StftConfig& cfg) {
    const Eigen::VectorXd w = gaussian_window(cfg.window_len, cfg.gaussian_alpha);
    const int frames = cfg.num_frames(x.samples.size());
    Eigen::MatrixXcd out(cfg.fft_size, frames);
    for (int m = 0; m < frames; ++m) {
        for (int r = 0; r < cfg.fft_size; ++r) {
            const double freq = cfg.bin_frequency(r);
            std::complex<double> acc{};
            for (int i = 0; i < cfg.window_len; ++i) {
                const int n = m * cfg.hop + i;
                acc += x.samples[static_cast<std::size_t>(n)] * w[i] *
                       std::polar(1.0, -kTwoPi * freq * static_cast<double>(n) / cfg.fs);
            }
            out(r, m) = acc;
        }
    }
    return out;
}

Signal random_signal(std::size_t n, double fs, std::uint64_t seed) {
    Signal s;
    s.fs = fs;
    s.samples = oracle::random_samples(n, seed);
    return s;
}

}  // namespace

TEST_CASE("gaussian window endpoints, symmetry, and shape ordering") {
    const Eigen::VectorXd w = gaussian_window(128, 2.5);
    CHECK(w[0] == doctest::Approx(0.04393693362340741).epsilon(1e-14));
    CHECK(w[127] == w[0]);
    for (int n = 0; n < 128; ++n) CHECK(w[n] == w[127 - n]);

    // odd length peaks at exactly 1
    const Eigen::VectorXd w_odd = gaussian_window(129, 2.5);
    CHECK(w_odd[64] == 1.0);

    // wider shape parameter dominates everywhere off the exact center; an
    // even length has no center sample, so strictly larger at every index
    const Eigen::VectorXd wide = gaussian_window(128, 2.0);
    CHECK(wide[0] == doctest::Approx(0.1353352832366127).epsilon(1e-14));
    for (int n = 0; n < 128; ++n) CHECK(wide[n] > w[n]);

    CHECK_THROWS_AS(gaussian_window(1, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_window(16, 0.0), std::invalid_argument);
}

TEST_CASE("config validation and framing arithmetic") {
    StftConfig cfg;  // defaults
    CHECK(cfg.pos_bins() == 128);
    CHECK(cfg.dc_bin() == 128);
    CHECK(cfg.num_frames(1000) == 68);
    CHECK(covered_samples(cfg, 1000) == 999);
    CHECK(cfg.num_frames(3000) == 221);
    CHECK(covered_samples(cfg, 3000) == 2988);
    CHECK(cfg.bin_frequency(128) == 0.0);
    CHECK(cfg.bin_frequency(0) == -500.0);
    CHECK(cfg.bin_frequency(255) == doctest::Approx(127.0 * 1000.0 / 256.0));
    CHECK(cfg.frame_center_time(0) == doctest::Approx(63.5 / 1000.0));

    StftConfig bad = cfg;
    bad.hop = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.fft_size = 64;  // smaller than the window
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.hop = 200;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Signal tiny;
    tiny.fs = 1000.0;
    tiny.samples.assign(100, 1.0);
    CHECK_THROWS_AS(stft(tiny, cfg), std::invalid_argument);
}

TEST_CASE("dc input concentrates on the dc row") {
    StftConfig cfg;
    Signal ones;
    ones.fs = 1000.0;
    ones.samples.assign(400, 1.0);
    const StftGrid grid = stft(ones, cfg);
    const Eigen::VectorXd w = gaussian_window(cfg.window_len, cfg.gaussian_alpha);
    const double wsum = w.sum();
    for (Eigen::Index m = 0; m < grid.coeffs.cols(); ++m) {
        CHECK(std::abs(grid.coeffs(cfg.dc_bin(), m)) == doctest::Approx(wsum).epsilon(1e-12));
    }
}

TEST_CASE("on-grid tone peaks at +-f0") {
    StftConfig cfg;
    Signal tone;
    tone.fs = 1000.0;
    tone.samples.resize(1000);
    const double f0 = 125.0;  // exactly bin 32 above DC
    for (std::size_t n = 0; n < tone.samples.size(); ++n) {
        tone.samples[n] = std::cos(kTwoPi * f0 * static_cast<double>(n) / tone.fs);
    }
    const StftGrid grid = stft(tone, cfg);
    const int up = cfg.dc_bin() + 32;
    const int down = cfg.dc_bin() - 32;
    for (Eigen::Index m = 0; m < grid.coeffs.cols(); ++m) {
        Eigen::Index argmax = 0;
        grid.coeffs.col(m).cwiseAbs().maxCoeff(&argmax);
        CHECK((argmax == up || argmax == down));
        const double peak = std::abs(grid.coeffs(argmax, m));
        CHECK(std::abs(grid.coeffs(up, m)) == doctest::Approx(peak).epsilon(1e-9));
        CHECK(std::abs(grid.coeffs(down, m)) == doctest::Approx(peak).epsilon(1e-9));
    }
}

TEST_CASE("transform equals the explicit-summation oracle") {
    StftConfig cfg;
    cfg.window_len = 16;
    cfg.gaussian_alpha = 2.5;
    cfg.hop = 5;
    cfg.fft_size = 20;
    cfg.fs = 50.0;
    const Signal x = random_signal(83, cfg.fs, 7171);

    const StftGrid grid = stft(x, cfg);
    const Eigen::MatrixXcd reference = stft_by_summation(x, cfg);
    REQUIRE(grid.coeffs.rows() == reference.rows());
    REQUIRE(grid.coeffs.cols() == reference.cols());
    const double scale = reference.cwiseAbs().maxCoeff();
    for (Eigen::Index m = 0; m < reference.cols(); ++m) {
        for (Eigen::Index r = 0; r < reference.rows(); ++r) {
            CHECK(std::abs(grid.coeffs(r, m) - reference(r, m)) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("conjugate symmetry for real input") {
    StftConfig cfg;
    const Signal x = random_signal(500, cfg.fs, 99);
    const StftGrid grid = stft(x, cfg);
    const int dc = cfg.dc_bin();
    for (Eigen::Index m = 0; m < grid.coeffs.cols(); ++m) {
        for (int r = 0; r < cfg.fft_size; ++r) {
            const int mirror = 2 * dc - r;
            if (mirror < 0 || mirror >= cfg.fft_size) continue;
            CHECK(std::abs(grid.coeffs(mirror, m) - std::conj(grid.coeffs(r, m))) < 1e-10);
        }
    }
}

TEST_CASE("positive-frequency extraction rows") {
    StftConfig cfg;
    const Signal x = random_signal(300, cfg.fs, 11);
    const StftGrid grid = stft(x, cfg);
    const PosFreqGrid pos = extract_pos_freq(grid);
    REQUIRE(pos.coeffs.rows() == 128);
    CHECK(pos.coeffs.row(0) == grid.coeffs.row(128));    // DC
    CHECK(pos.coeffs.row(127) == grid.coeffs.row(255));  // F = 127 fs / 256

    StftConfig odd = cfg;
    odd.fft_size = 5;
    odd.window_len = 4;
    odd.hop = 2;
    CHECK(odd.pos_bins() == 3);
    CHECK(odd.dc_bin() == 2);
    const Signal y = random_signal(20, cfg.fs, 12);
    const StftGrid g5 = stft(y, odd);
    const PosFreqGrid p5 = extract_pos_freq(g5);
    REQUIRE(p5.coeffs.rows() == 3);
    CHECK(p5.coeffs.row(0) == g5.coeffs.row(2));
    CHECK(p5.coeffs.row(2) == g5.coeffs.row(4));
}

TEST_CASE("round trip reconstructs covered samples and zeroes the tail") {
    StftConfig cfg;
    const Signal x = random_signal(1000, cfg.fs, 2024);
    const StftGrid grid = stft(x, cfg);
    double imag = 0.0;
    const Signal back = istft(grid, x.samples.size(), &imag);
    REQUIRE(back.samples.size() == 1000);
    CHECK(imag < 1e-9);

    const std::size_t covered = covered_samples(cfg, x.samples.size());
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t n = 0; n < covered; ++n) {
        const double d = back.samples[n] - x.samples[n];
        err += d * d;
        ref += x.samples[n] * x.samples[n];
    }
    CHECK(std::sqrt(err / ref) < 1e-9);
    for (std::size_t n = covered; n < back.samples.size(); ++n) CHECK(back.samples[n] == 0.0);
}

TEST_CASE("istft of an all-zero grid is all zeros") {
    StftConfig cfg;
    StftGrid grid;
    grid.config = cfg;
    grid.signal_len = 500;
    grid.coeffs = Eigen::MatrixXcd::Zero(cfg.fft_size, cfg.num_frames(500));
    const Signal out = istft(grid, 500);
    for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("istft trims and pads to the target length") {
    StftConfig cfg;
    const Signal x = random_signal(600, cfg.fs, 5);
    const StftGrid grid = stft(x, cfg);
    const Signal shorter = istft(grid, 300);
    CHECK(shorter.samples.size() == 300);
    const Signal longer = istft(grid, 800);
    CHECK(longer.samples.size() == 800);
    for (std::size_t n = covered_samples(cfg, 600); n < 800; ++n) {
        CHECK(longer.samples[n] == 0.0);
    }
}

TEST_CASE("linearity and exact scaling") {
    StftConfig cfg;
    const Signal x = random_signal(400, cfg.fs, 31);
    const Signal y = random_signal(400, cfg.fs, 32);
    Signal mix;
    mix.fs = cfg.fs;
    mix.samples.resize(400);
    const double a = 1.75;  // power-of-two multiples of 0.25 keep products exact
    const double b = -0.5;
    for (std::size_t n = 0; n < 400; ++n) {
        mix.samples[n] = a * x.samples[n] + b * y.samples[n];
    }
    const Eigen::MatrixXcd lhs = stft(mix, cfg).coeffs;
    const Eigen::MatrixXcd rhs = a * stft(x, cfg).coeffs + b * stft(y, cfg).coeffs;
    const double scale = rhs.cwiseAbs().maxCoeff();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * scale);

    // scaling by a power of two commutes exactly with the whole transform
    Signal doubled = x;
    for (double& v : doubled.samples) v *= 2.0;
    const Eigen::MatrixXcd gx = stft(x, cfg).coeffs;
    const Eigen::MatrixXcd g2 = stft(doubled, cfg).coeffs;
    CHECK(g2 == (2.0 * gx));
}

TEST_CASE("degenerate window overlap raises a numerical error") {
    StftConfig cfg;
    cfg.window_len = 32;
    cfg.hop = 32;           // no overlap
    cfg.fft_size = 32;
    cfg.gaussian_alpha = 60.0;  // endpoint weights underflow to zero
    const Signal x = random_signal(128, cfg.fs, 8);
    const StftGrid grid = stft(x, cfg);
    CHECK_THROWS_AS(istft(grid, x.samples.size()), numerical_error);
}
