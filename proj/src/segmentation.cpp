#include "tfmd/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tfmd {

void FilterParams::validate() const {
    if (p_abs < 0) throw std::invalid_argument("FilterParams: p_abs must be >= 0");
    if (!(p_rel >= 0.0) || p_rel >= 1.0) {
        throw std::invalid_argument("FilterParams: p_rel must be in [0, 1)");
    }
    if (!(c_thresh > 0.0)) throw std::invalid_argument("FilterParams: c_thresh must be positive");
}

Eigen::MatrixXd smooth(const Eigen::MatrixXd& magnitudes, int u, int v) {
    if (u < 1 || v < 1 || u % 2 == 0 || v % 2 == 0) {
        throw std::invalid_argument("smooth: kernel dimensions must be odd and positive");
    }
    const Eigen::Index rows = magnitudes.rows();
    const Eigen::Index cols = magnitudes.cols();
    const Eigen::Index hu = u / 2;
    const Eigen::Index hv = v / 2;

    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const Eigen::Index c0 = std::max<Eigen::Index>(0, c - hv);
        const Eigen::Index c1 = std::min(cols - 1, c + hv);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::Index r0 = std::max<Eigen::Index>(0, r - hu);
            const Eigen::Index r1 = std::min(rows - 1, r + hu);
            double sum = 0.0;
            for (Eigen::Index cc = c0; cc <= c1; ++cc) {
                for (Eigen::Index rr = r0; rr <= r1; ++rr) {
                    sum += magnitudes(rr, cc);
                }
            }
            // divisor = in-bounds cell count (window truncated at borders)
            out(r, c) = sum / static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
        }
    }
    return out;
}

double adaptive_threshold(const Eigen::MatrixXd& smoothed, double c_thresh) {
    if (smoothed.size() == 0) throw std::invalid_argument("adaptive_threshold: empty matrix");
    if (!(c_thresh > 0.0)) throw std::invalid_argument("adaptive_threshold: c_thresh must be positive");

    std::vector<double> values(smoothed.data(), smoothed.data() + smoothed.size());
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median_value =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return std::sqrt(values.back() * median_value / c_thresh);
}

MaskMatrix initial_mask(const Eigen::MatrixXd& smoothed, double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("initial_mask: tau must be >= 0");
    MaskMatrix out(smoothed.rows(), smoothed.cols());
    for (Eigen::Index c = 0; c < smoothed.cols(); ++c) {
        for (Eigen::Index r = 0; r < smoothed.rows(); ++r) {
            out(r, c) = smoothed(r, c) > tau ? 1 : 0;
        }
    }
    return out;
}

namespace {

int find_root(std::vector<int>& parent, int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
    }
    return a;
}

void unite(std::vector<int>& parent, int a, int b) {
    const int ra = find_root(parent, a);
    const int rb = find_root(parent, b);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
}

}  // namespace

LabeledComponents label_components(const MaskMatrix& mask) {
    const Eigen::Index rows = mask.rows();
    const Eigen::Index cols = mask.cols();

    LabeledComponents out;
    out.labels = LabelMatrix::Zero(rows, cols);

    // Two-pass union-find over the four already-scanned 8-neighbors.
    LabelMatrix provisional = LabelMatrix::Zero(rows, cols);
    std::vector<int> parent(1, 0);  // index 0 unused (background)

    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!mask(r, c)) continue;
            int label = 0;
            const Eigen::Index prev[4][2] = {
                {r - 1, c - 1}, {r - 1, c}, {r - 1, c + 1}, {r, c - 1}};
            for (const auto& rc : prev) {
                if (rc[0] < 0 || rc[1] < 0 || rc[1] >= cols) continue;
                const int neighbor = provisional(rc[0], rc[1]);
                if (neighbor == 0) continue;
                if (label == 0) {
                    label = neighbor;
                } else {
                    unite(parent, label, neighbor);
                }
            }
            if (label == 0) {
                label = static_cast<int>(parent.size());
                parent.push_back(label);
            }
            provisional(r, c) = label;
        }
    }

    // Final labels numbered by first occurrence in row-major scan order.
    std::vector<int> final_of_root(parent.size(), 0);
    int next_label = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const int p = provisional(r, c);
            if (p == 0) continue;
            const int root = find_root(parent, p);
            if (final_of_root[static_cast<std::size_t>(root)] == 0) {
                final_of_root[static_cast<std::size_t>(root)] = ++next_label;
            }
            const int label = final_of_root[static_cast<std::size_t>(root)];
            out.labels(r, c) = label;
            if (static_cast<std::size_t>(label) > out.pixel_counts.size()) {
                out.pixel_counts.push_back(0);
            }
            ++out.pixel_counts[static_cast<std::size_t>(label - 1)];
        }
    }
    out.component_count = next_label;
    return out;
}

FilteredMasks filter_by_size(const LabeledComponents& lc, const FilterParams& params,
                             std::int64_t grid_cells) {
    params.validate();
    if (grid_cells < 0) throw std::invalid_argument("filter_by_size: grid_cells must be >= 0");

    FilteredMasks out;
    out.size_threshold =
        std::max(params.p_abs,
                 static_cast<std::int64_t>(std::floor(params.p_rel * static_cast<double>(grid_cells))));

    struct Candidate {
        int label;
        std::int64_t pixels;
    };
    std::vector<Candidate> retained;
    for (int i = 1; i <= lc.component_count; ++i) {
        const std::int64_t pixels = lc.pixel_counts[static_cast<std::size_t>(i - 1)];
        if (pixels >= out.size_threshold) retained.push_back({i, pixels});
    }
    std::stable_sort(retained.begin(), retained.end(), [](const Candidate& a, const Candidate& b) {
        if (a.pixels != b.pixels) return a.pixels > b.pixels;
        return a.label < b.label;
    });

    for (const auto& cand : retained) {
        MaskMatrix m(lc.labels.rows(), lc.labels.cols());
        for (Eigen::Index c = 0; c < lc.labels.cols(); ++c) {
            for (Eigen::Index r = 0; r < lc.labels.rows(); ++r) {
                m(r, c) = lc.labels(r, c) == cand.label ? 1 : 0;
            }
        }
        out.masks.push_back(std::move(m));
        out.source_labels.push_back(cand.label);
        out.pixel_counts.push_back(cand.pixels);
    }
    return out;
}

MaskMatrix extend_symmetric(const MaskMatrix& mask, int fft_size, int dc_bin) {
    const int pos = (fft_size + 1) / 2;
    if (mask.rows() != pos) {
        throw std::invalid_argument("extend_symmetric: mask rows must equal ceil(fft_size/2)");
    }
    if (dc_bin != fft_size / 2) {
        throw std::invalid_argument("extend_symmetric: dc_bin inconsistent with fft_size");
    }
    MaskMatrix out = MaskMatrix::Zero(fft_size, mask.cols());
    for (int r = 0; r < fft_size; ++r) {
        const int src = r >= dc_bin ? r - dc_bin : dc_bin - r;
        if (src < pos) out.row(r) = mask.row(src);
        // Even-N edge row (src == pos) has no mirror and stays zero.
    }
    return out;
}

}  // namespace tfmd
