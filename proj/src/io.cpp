#include "tfmd/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace tfmd {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path.string());
    return f;
}

void finish_write(std::ofstream& f, const fs::path& path) {
    f.flush();
    if (!f) throw io_error("write failed: " + path.string());
}

// Content problems are validation errors (exit 1 at the CLI); only open
// and write failures are io_error (exit 2).
double parse_field(const std::string& text, const fs::path& path, std::size_t line_no) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) {
        throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                    ": not a number: '" + text + "'");
    }
    return value;
}

// JSON has no NaN/inf literals; summaries use null for them.
ordered_json json_number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json params_to_json(const TfmdParams& params) {
    ordered_json j;
    j["stft"] = {{"window_len", params.stft.window_len},
                 {"gaussian_alpha", params.stft.gaussian_alpha},
                 {"hop", params.stft.hop},
                 {"fft_size", params.stft.fft_size},
                 {"fs", params.stft.fs}};
    j["filter"] = {{"p_abs", params.filter.p_abs},
                   {"p_rel", params.filter.p_rel},
                   {"c_thresh", params.filter.c_thresh}};
    j["smooth"] = {{"u", params.smooth_u}, {"v", params.smooth_v}};
    return j;
}

}  // namespace

void write_signal_csv(const fs::path& path, const Signal& x) {
    if (!(x.fs > 0.0)) throw std::invalid_argument("write_signal_csv: fs must be positive");
    auto f = open_for_write(path);
    f << "time_s,value\n";
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        f << format_double(static_cast<double>(i) / x.fs) << ',' << format_double(x.samples[i])
          << '\n';
    }
    finish_write(f, path);
}

Signal read_signal_csv(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open for reading: " + path.string());

    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected 'time,value'");
        }
        times.push_back(parse_field(line.substr(0, comma), path, line_no));
        values.push_back(parse_field(line.substr(comma + 1), path, line_no));
    }
    if (times.size() < 2) throw std::invalid_argument(path.string() + ": need at least two samples");

    const double span = times.back() - times.front();
    const double dt = span / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) {
        throw std::invalid_argument(path.string() + ": time column must be strictly increasing");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double step = times[i] - times[i - 1];
        if (std::abs(step - dt) > 1e-9 * dt) {
            throw std::invalid_argument(path.string() + ": non-uniform sampling at row " +
                                        std::to_string(i + 1));
        }
    }

    Signal out;
    out.fs = 1.0 / dt;
    out.samples = std::move(values);
    return out;
}

void write_spectrogram_csv(const fs::path& path, const StftGrid& grid) {
    auto f = open_for_write(path);
    f << "freq_hz";
    for (Eigen::Index m = 0; m < grid.coeffs.cols(); ++m) {
        f << ',' << format_double(grid.config.frame_center_time(static_cast<int>(m)));
    }
    f << '\n';
    for (Eigen::Index r = 0; r < grid.coeffs.rows(); ++r) {
        f << format_double(grid.config.bin_frequency(static_cast<int>(r)));
        for (Eigen::Index m = 0; m < grid.coeffs.cols(); ++m) {
            f << ',' << format_double(std::abs(grid.coeffs(r, m)));
        }
        f << '\n';
    }
    finish_write(f, path);
}

void write_mask_pgm(const fs::path& path, const MaskMatrix& mask) {
    auto f = open_for_write(path);
    f << "P2\n" << mask.cols() << ' ' << mask.rows() << "\n1\n";
    for (Eigen::Index r = 0; r < mask.rows(); ++r) {
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
            if (c) f << ' ';
            f << static_cast<int>(mask(r, c));
        }
        f << '\n';
    }
    finish_write(f, path);
}

void write_mask_csv(const fs::path& path, const MaskMatrix& mask) {
    auto f = open_for_write(path);
    for (Eigen::Index r = 0; r < mask.rows(); ++r) {
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
            if (c) f << ',';
            f << static_cast<int>(mask(r, c));
        }
        f << '\n';
    }
    finish_write(f, path);
}

void write_labels_csv(const fs::path& path, const LabelMatrix& labels) {
    auto f = open_for_write(path);
    for (Eigen::Index r = 0; r < labels.rows(); ++r) {
        for (Eigen::Index c = 0; c < labels.cols(); ++c) {
            if (c) f << ',';
            f << labels(r, c);
        }
        f << '\n';
    }
    finish_write(f, path);
}

fs::path write_decomposition_bundle(const fs::path& out_dir, const DecompositionResult& result,
                                    const TfmdParams& params, bool export_masks) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create directory: " + out_dir.string());

    ordered_json manifest;
    manifest["params"] = params_to_json(params);
    manifest["signal_length"] = result.total.samples.size();
    manifest["fs"] = result.total.fs;
    manifest["n_modes"] = result.n_modes;
    manifest["tau"] = result.diagnostics.tau;
    manifest["n_components"] = result.diagnostics.component_count;
    manifest["size_threshold"] = result.diagnostics.size_threshold;
    manifest["pixel_counts"] = result.diagnostics.pixel_counts;
    manifest["max_imag_residue"] = result.diagnostics.max_imag_residue;

    ordered_json modes = ordered_json::array();
    for (int i = 0; i < result.n_modes; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "mode_%03d.csv", i + 1);
        write_signal_csv(out_dir / name, result.modes[static_cast<std::size_t>(i)]);

        ordered_json entry;
        entry["index"] = i + 1;
        entry["csv"] = name;
        entry["pixels"] = result.diagnostics.retained_pixel_counts[static_cast<std::size_t>(i)];
        entry["source_label"] = result.diagnostics.retained_labels[static_cast<std::size_t>(i)];
        if (export_masks) {
            char mask_name[32];
            std::snprintf(mask_name, sizeof(mask_name), "mask_%03d.pgm", i + 1);
            write_mask_pgm(out_dir / mask_name, result.masks[static_cast<std::size_t>(i)]);
            entry["mask_pgm"] = mask_name;
        }
        modes.push_back(std::move(entry));
    }
    manifest["modes"] = std::move(modes);

    write_signal_csv(out_dir / "total.csv", result.total);
    manifest["total_csv"] = "total.csv";

    const fs::path manifest_path = out_dir / "manifest.json";
    auto f = open_for_write(manifest_path);
    f << manifest.dump(2) << '\n';
    finish_write(f, manifest_path);
    return manifest_path;
}

namespace {

std::string csv_or_empty(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

double quantile(std::vector<double> values, double p) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double idx = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

struct ConditionStats {
    int case_id = 0;
    double snr_db = 0.0;
    int n_g = 0;
    std::vector<double> n_f;
    std::vector<double> e_rel_total;
    std::vector<double> e_rel_avg;
    std::vector<double> snr_out_db;
};

std::vector<ConditionStats> aggregate(const std::vector<ExperimentRecord>& records) {
    std::map<std::pair<int, double>, ConditionStats> grouped;
    for (const auto& rec : records) {
        auto& agg = grouped[{rec.case_id, rec.noisy ? rec.input_snr_db : 0.0}];
        agg.case_id = rec.case_id;
        agg.snr_db = rec.noisy ? rec.input_snr_db : 0.0;
        agg.n_g = rec.n_g;
        agg.n_f.push_back(rec.n_f);
        agg.e_rel_total.push_back(rec.e_rel_total);
        if (std::isfinite(rec.e_rel_avg)) agg.e_rel_avg.push_back(rec.e_rel_avg);
        agg.snr_out_db.push_back(rec.snr_out_db);
    }
    std::vector<ConditionStats> out;
    for (auto& [key, agg] : grouped) out.push_back(std::move(agg));
    return out;
}

std::size_t max_mode_count(const std::vector<ExperimentRecord>& records) {
    std::size_t n = 0;
    for (const auto& rec : records) n = std::max(n, rec.per_mode_errors.size());
    return n;
}

void write_records_csv(const fs::path& path, const std::vector<ExperimentRecord>& records) {
    auto f = open_for_write(path);
    const std::size_t n_modes = max_mode_count(records);
    f << "case,input_snr_db,seed,n_g,n_f,e_rel_total,e_rel_avg,snr_out_db";
    for (std::size_t j = 1; j <= n_modes; ++j) f << ",e_rel_mode_" << j;
    f << '\n';
    for (const auto& rec : records) {
        f << rec.case_id << ',';
        if (rec.noisy) f << format_double(rec.input_snr_db);
        f << ',';
        if (rec.noisy) f << rec.seed;
        f << ',' << rec.n_g << ',' << rec.n_f << ',' << csv_or_empty(rec.e_rel_total) << ','
          << csv_or_empty(rec.e_rel_avg) << ',' << csv_or_empty(rec.snr_out_db);
        for (std::size_t j = 0; j < n_modes; ++j) {
            f << ',';
            if (j < rec.per_mode_errors.size()) f << csv_or_empty(rec.per_mode_errors[j]);
        }
        f << '\n';
    }
    finish_write(f, path);
}

}  // namespace

void write_experiment_outputs(const fs::path& out_dir, int experiment,
                              const std::vector<ExperimentRecord>& records) {
    if (experiment != 1 && experiment != 2) {
        throw std::invalid_argument("write_experiment_outputs: experiment must be 1 or 2");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create directory: " + out_dir.string());

    const std::string stem = "experiment" + std::to_string(experiment);
    write_records_csv(out_dir / (stem + "_records.csv"), records);

    ordered_json summary;
    summary["experiment"] = experiment;

    if (experiment == 1) {
        auto table = open_for_write(out_dir / (stem + "_table.csv"));
        table << "case,n_g,n_f,e_rel_total,e_rel_avg\n";
        for (const auto& rec : records) {
            table << rec.case_id << ',' << rec.n_g << ',' << rec.n_f << ','
                  << csv_or_empty(rec.e_rel_total) << ',' << csv_or_empty(rec.e_rel_avg) << '\n';
        }
        finish_write(table, out_dir / (stem + "_table.csv"));

        const std::size_t n_modes = max_mode_count(records);
        auto modes = open_for_write(out_dir / (stem + "_modes.csv"));
        modes << "case";
        for (std::size_t j = 1; j <= n_modes; ++j) modes << ",e_rel_mode_" << j;
        modes << '\n';
        for (const auto& rec : records) {
            modes << rec.case_id;
            for (std::size_t j = 0; j < n_modes; ++j) {
                modes << ',';
                if (j < rec.per_mode_errors.size()) modes << csv_or_empty(rec.per_mode_errors[j]);
            }
            modes << '\n';
        }
        finish_write(modes, out_dir / (stem + "_modes.csv"));

        ordered_json cases = ordered_json::array();
        for (const auto& rec : records) {
            cases.push_back({{"case", rec.case_id},
                             {"n_g", rec.n_g},
                             {"n_f", rec.n_f},
                             {"e_rel_total", json_number_or_null(rec.e_rel_total)},
                             {"e_rel_avg", json_number_or_null(rec.e_rel_avg)},
                             {"snr_out_db", json_number_or_null(rec.snr_out_db)}});
        }
        summary["cases"] = std::move(cases);
    } else {
        const auto stats = aggregate(records);
        auto table = open_for_write(out_dir / (stem + "_table.csv"));
        table << "case,input_snr_db,n_g,median_n_f,median_e_rel_total,iqr_e_rel_total,"
                 "median_e_rel_avg,median_snr_out_db,iqr_snr_out_db\n";
        ordered_json conditions = ordered_json::array();
        for (const auto& agg : stats) {
            const double med_total = median(agg.e_rel_total);
            const double iqr_total = quantile(agg.e_rel_total, 0.75) - quantile(agg.e_rel_total, 0.25);
            const double med_snr = median(agg.snr_out_db);
            const double iqr_snr = quantile(agg.snr_out_db, 0.75) - quantile(agg.snr_out_db, 0.25);
            const double med_avg = median(agg.e_rel_avg);
            table << agg.case_id << ',' << format_double(agg.snr_db) << ',' << agg.n_g << ','
                  << format_double(median(agg.n_f)) << ',' << csv_or_empty(med_total) << ','
                  << csv_or_empty(iqr_total) << ',' << csv_or_empty(med_avg) << ','
                  << csv_or_empty(med_snr) << ',' << csv_or_empty(iqr_snr) << '\n';
            conditions.push_back({{"case", agg.case_id},
                                  {"input_snr_db", agg.snr_db},
                                  {"n_g", agg.n_g},
                                  {"trials", agg.n_f.size()},
                                  {"median_n_f", median(agg.n_f)},
                                  {"median_e_rel_total", json_number_or_null(med_total)},
                                  {"iqr_e_rel_total", json_number_or_null(iqr_total)},
                                  {"median_e_rel_avg", json_number_or_null(med_avg)},
                                  {"median_snr_out_db", json_number_or_null(med_snr)},
                                  {"iqr_snr_out_db", json_number_or_null(iqr_snr)}});
        }
        finish_write(table, out_dir / (stem + "_table.csv"));
        summary["conditions"] = std::move(conditions);
    }

    const fs::path summary_path = out_dir / (stem + "_summary.json");
    auto f = open_for_write(summary_path);
    f << summary.dump(2) << '\n';
    finish_write(f, summary_path);
}

std::string render_experiment_table(int experiment, const std::vector<ExperimentRecord>& records) {
    std::ostringstream os;
    char line[160];
    if (experiment == 1) {
        os << "case   n_g   n_f   e_rel_total   e_rel_avg\n";
        for (const auto& rec : records) {
            std::snprintf(line, sizeof(line), "%4d  %4d  %4d  %12.4e  %10.4e\n", rec.case_id,
                          rec.n_g, rec.n_f, rec.e_rel_total, rec.e_rel_avg);
            os << line;
        }
    } else {
        os << "case   snr_in   n_g   med_n_f   med_e_rel_total   med_snr_out\n";
        for (const auto& agg : aggregate(records)) {
            std::snprintf(line, sizeof(line), "%4d  %7.1f  %4d  %8.1f  %16.4e  %12.2f\n",
                          agg.case_id, agg.snr_db, agg.n_g, median(agg.n_f),
                          median(agg.e_rel_total), median(agg.snr_out_db));
            os << line;
        }
    }
    return os.str();
}

}  // namespace tfmd
