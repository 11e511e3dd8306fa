#include "tfmd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tfmd/decomposition.hpp"
#include "tfmd/evaluation.hpp"
#include "tfmd/io.hpp"
#include "tfmd/synthetic.hpp"

namespace tfmd {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

const char* case_name(int case_id) {
    switch (case_id) {
        case 1: return "frequency-separated chirps";
        case 2: return "sinusoidal FM pair";
        case 3: return "four-component mix";
        case 4: return "chirp plus AM tone";
        case 5: return "generalized nonlinear multicomponent";
        case 6: return "two stationary tones";
        default: return "unknown";
    }
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("TFMD_DEFAULT_OUT")) return fs::path(env);
    return fs::path(".");
}

std::uint64_t parse_u64(const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not an unsigned integer: '" + text + "'");
    }
    return value;
}

// Accepts single values and inclusive ranges ("1..10").
std::vector<std::uint64_t> expand_seed_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::uint64_t> out;
    for (const auto& token : tokens) {
        const auto dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_u64(token));
            continue;
        }
        const std::uint64_t first = parse_u64(token.substr(0, dots));
        const std::uint64_t last = parse_u64(token.substr(dots + 2));
        if (last < first || last - first > 1000000) {
            throw std::invalid_argument("bad seed range: '" + token + "'");
        }
        for (std::uint64_t s = first; s <= last; ++s) out.push_back(s);
    }
    if (out.empty()) throw std::invalid_argument("seed list is empty");
    return out;
}

struct ParamOptions {
    TfmdParams params;
    CLI::Option* alpha_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--window-len", params.stft.window_len, "analysis window length [samples]");
        alpha_opt = cmd->add_option("--alpha", params.stft.gaussian_alpha,
                                    "Gaussian window shape parameter");
        cmd->add_option("--hop", params.stft.hop, "hop size [samples]");
        cmd->add_option("--fft-size", params.stft.fft_size, "FFT size [bins]");
        cmd->add_option("--smooth-u", params.smooth_u, "smoothing kernel frequency extent (odd)");
        cmd->add_option("--smooth-v", params.smooth_v, "smoothing kernel time extent (odd)");
        cmd->add_option("--c-thresh", params.filter.c_thresh, "adaptive threshold constant");
        cmd->add_option("--p-abs", params.filter.p_abs, "absolute minimum component size [pixels]");
        cmd->add_option("--p-rel", params.filter.p_rel, "relative minimum component size [fraction]");
    }
    bool alpha_overridden() const { return alpha_opt && alpha_opt->count() > 0; }
};

void run_synth(int case_id, double fs, const fs::path& out_dir) {
    const GroundTruthCase gt = generate_case(case_id, fs);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create directory: " + out_dir.string());

    write_signal_csv(out_dir / "composite.csv", gt.composite);
    ordered_json sidecar;
    sidecar["case_id"] = gt.case_id;
    sidecar["name"] = case_name(gt.case_id);
    sidecar["fs"] = gt.fs;
    sidecar["duration_s"] = gt.duration_s;
    sidecar["n_constituents"] = gt.constituents.size();
    sidecar["composite_csv"] = "composite.csv";
    ordered_json files = ordered_json::array();
    for (std::size_t j = 0; j < gt.constituents.size(); ++j) {
        const std::string name = "constituent_" + std::to_string(j + 1) + ".csv";
        write_signal_csv(out_dir / name, gt.constituents[j]);
        files.push_back(name);
    }
    sidecar["constituent_csvs"] = std::move(files);

    const fs::path sidecar_path = out_dir / "case.json";
    std::ofstream f(sidecar_path);
    if (!f) throw io_error("cannot open for writing: " + sidecar_path.string());
    f << sidecar.dump(2) << '\n';
    f.flush();
    if (!f) throw io_error("write failed: " + sidecar_path.string());

    std::cout << "case " << case_id << " (" << case_name(case_id) << "): wrote "
              << gt.constituents.size() + 1 << " signals to " << out_dir.string() << "\n";
}

void run_decompose(const fs::path& input, ParamOptions& opts, const fs::path& out_dir,
                   bool export_masks, bool export_spectrogram,
                   const std::vector<std::string>& prior_paths) {
    const Signal x = read_signal_csv(input);
    TfmdParams params = opts.params;
    params.stft.fs = x.fs;

    DecompositionResult result;
    if (prior_paths.empty()) {
        result = decompose(x, params);
    } else {
        std::vector<Signal> segments;
        segments.reserve(prior_paths.size());
        for (const auto& p : prior_paths) segments.push_back(read_signal_csv(p));
        const PriorSpectrogram prior = build_prior(segments, params.stft);
        result = decompose_with_prior(x, prior, params);
    }

    const fs::path manifest = write_decomposition_bundle(out_dir, result, params, export_masks);
    if (export_spectrogram) {
        write_spectrogram_csv(out_dir / "spectrogram.csv", stft(x, params.stft));
    }
    std::cout << "n_modes=" << result.n_modes << " tau=" << format_double(result.diagnostics.tau)
              << " manifest=" << manifest.string() << "\n";
}

void run_experiment(int which, ParamOptions& opts, double fs, const std::vector<double>& snrs,
                    const std::vector<std::string>& seed_tokens, const fs::path& out_dir) {
    if (which != 1 && which != 2) {
        throw std::invalid_argument("experiment number must be 1 or 2");
    }
    TfmdParams params = opts.params;
    params.stft.fs = fs;
    const bool per_case_alpha = !opts.alpha_overridden();

    std::vector<ExperimentRecord> records;
    if (which == 1) {
        records = run_experiment1(params, per_case_alpha);
    } else {
        records = run_experiment2(params, snrs, expand_seed_tokens(seed_tokens), per_case_alpha);
    }
    write_experiment_outputs(out_dir, which, records);
    std::cout << render_experiment_table(which, records);
    std::cout << "wrote experiment " << which << " artifacts to " << out_dir.string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Time-frequency mode decomposition of multicomponent signals"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic test case");
    int case_id = 0;
    double synth_fs = 1000.0;
    std::string synth_out = default_out_dir().string();
    synth->add_option("--case", case_id, "case id (1..6)")->required();
    synth->add_option("--fs", synth_fs, "sampling frequency [Hz]");
    synth->add_option("--out", synth_out, "output directory");
    synth->callback([&]() { run_synth(case_id, synth_fs, synth_out); });

    // decompose
    auto* dec = app.add_subcommand("decompose", "decompose a (time_s,value) CSV into modes");
    std::string dec_input;
    std::string dec_out = default_out_dir().string();
    bool export_masks = false;
    bool export_spectrogram = false;
    std::vector<std::string> prior_paths;
    ParamOptions dec_opts;
    dec->add_option("input", dec_input, "input signal CSV")->required();
    dec_opts.attach(dec);
    dec->add_option("--out", dec_out, "output directory");
    dec->add_flag("--export-masks", export_masks, "write per-mode mask PGMs");
    dec->add_flag("--export-spectrogram", export_spectrogram, "write the magnitude spectrogram CSV");
    dec->add_option("--prior-segment", prior_paths,
                    "segment CSV for a prior-informed spectrogram (repeatable)");
    dec->callback([&]() {
        run_decompose(dec_input, dec_opts, dec_out, export_masks, export_spectrogram, prior_paths);
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "reproduce a benchmark experiment");
    int which = 0;
    double exp_fs = 1000.0;
    std::vector<double> snrs = {5, 10, 15, 20, 25, 30, 35, 40};
    std::vector<std::string> seed_tokens = {"1..10"};
    std::string exp_out = default_out_dir().string();
    ParamOptions exp_opts;
    exp->add_option("which", which, "experiment number (1 or 2)")->required();
    exp_opts.attach(exp);
    exp->add_option("--fs", exp_fs, "sampling frequency [Hz]");
    exp->add_option("--snrs", snrs, "input SNRs in dB")->delimiter(',');
    exp->add_option("--seeds", seed_tokens, "noise seeds, single values or ranges like 1..10")
        ->delimiter(',');
    exp->add_option("--out", exp_out, "output directory");
    exp->callback([&]() { run_experiment(which, exp_opts, exp_fs, snrs, seed_tokens, exp_out); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tfmd");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "run 'tfmd --help' for usage\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace tfmd
