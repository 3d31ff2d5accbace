#include "pcad/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pcad/errors.hpp"

namespace pcad {

void PeriodMarks::validate(size_t series_length) const {
    for (size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] < 0 || taus[k] >= static_cast<long>(series_length))
            throw DataError("period mark " + std::to_string(taus[k]) + " outside [0, " +
                            std::to_string(series_length) + ")");
        if (k > 0 && taus[k] - taus[k - 1] < 2)
            throw DataError("period marks not strictly increasing with gap >= 2 at index " +
                            std::to_string(k));
    }
}

int window_length(double mean_period, int n0) {
    if (mean_period <= 0) throw ConfigError("mean period must be positive");
    if (n0 < 3) throw ConfigError("initial number of classes must be >= 3");
    const int T = static_cast<int>(std::floor(3.0 * mean_period / static_cast<double>(n0)));
    if (T < 2)
        throw ConfigError("window length floor(3*" + std::to_string(mean_period) + "/" +
                          std::to_string(n0) + ") = " + std::to_string(T) + " is degenerate");
    return T;
}

void normalize_window(double* data, int d, int T) {
    for (int i = 0; i < d; ++i) {
        double* row = data + static_cast<size_t>(i) * T;
        double mean = 0.0;
        for (int t = 0; t < T; ++t) mean += row[t];
        mean /= T;
        double var = 0.0;
        for (int t = 0; t < T; ++t) {
            const double c = row[t] - mean;
            var += c * c;
        }
        var /= T;
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            for (int t = 0; t < T; ++t) row[t] = 0.0;
        } else {
            for (int t = 0; t < T; ++t) row[t] = (row[t] - mean) / sd;
        }
    }
}

std::vector<double> normalize_window(const std::vector<double>& raw, int d, int T) {
    if (static_cast<size_t>(d) * T != raw.size())
        throw DataError("window size mismatch: " + std::to_string(raw.size()) + " != " +
                        std::to_string(d) + "x" + std::to_string(T));
    std::vector<double> out = raw;
    normalize_window(out.data(), d, T);
    return out;
}

std::vector<LabeledSegment> segment(const TimeSeries& ts, const PeriodMarks& marks,
                                    const SegmentSpec& spec, int signal_id,
                                    SegmentStats* stats) {
    if (marks.count() < 2) throw DataError("segmentation needs at least 2 period marks");
    if (spec.T < 2) throw ConfigError("segment window length must be >= 2");
    if (spec.n0 < 1) throw ConfigError("n0 must be >= 1");
    marks.validate(ts.length());

    const int d = static_cast<int>(ts.dims());
    const long N = static_cast<long>(ts.length());
    SegmentStats local;
    local.periods = marks.count() - 1;

    std::vector<LabeledSegment> out;
    out.reserve(local.periods * spec.n0);
    for (size_t k = 0; k + 1 < marks.count(); ++k) {
        const long tau = marks.taus[k];
        const long gap = marks.taus[k + 1] - tau;
        for (int j = 0; j < spec.n0; ++j) {
            const long m = static_cast<long>(k) * spec.n0 + j;
            const long start = tau + (gap * j) / spec.n0;  // floor for non-negative values
            if (start + spec.T > N) {
                ++local.dropped_overrun;
                continue;
            }
            LabeledSegment seg;
            seg.d = d;
            seg.T = spec.T;
            seg.label = j;  // m mod n0
            seg.origin = SegmentOrigin{signal_id, m, tau};
            seg.raw_start = start;
            seg.data.resize(static_cast<size_t>(d) * spec.T);
            for (int i = 0; i < d; ++i)
                std::copy_n(ts.values[static_cast<size_t>(i)].begin() + start, spec.T,
                            seg.data.begin() + static_cast<size_t>(i) * spec.T);
            normalize_window(seg.data.data(), d, spec.T);
            out.push_back(std::move(seg));
            ++local.emitted;
        }
    }
    if (out.empty()) throw DataError("no segment fits inside the series");
    if (stats) *stats = local;
    return out;
}

void validate_label_map(const std::vector<int>& label_map) {
    if (label_map.empty()) throw ConfigError("empty label map");
    const int n = label_map_classes(label_map);
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int v : label_map) {
        if (v < 0 || v >= n) throw ConfigError("label map values must lie in [0, n)");
        seen[static_cast<size_t>(v)] = true;
    }
    for (int v = 0; v < n; ++v)
        if (!seen[static_cast<size_t>(v)])
            throw ConfigError("label map not contiguous: class " + std::to_string(v) +
                              " missing");
}

int label_map_classes(const std::vector<int>& label_map) {
    int n = 0;
    for (int v : label_map) n = std::max(n, v + 1);
    return n;
}

void relabel(std::vector<LabeledSegment>& segments, const std::vector<int>& label_map) {
    validate_label_map(label_map);
    const long n0 = static_cast<long>(label_map.size());
    for (auto& seg : segments) seg.label = label_map[static_cast<size_t>(seg.origin.m % n0)];
}

void dump_segments(std::ostream& out, const std::vector<LabeledSegment>& segments) {
    for (const auto& seg : segments) {
        out << "{\"signal\":" << seg.origin.signal << ",\"m\":" << seg.origin.m
            << ",\"label\":" << seg.label << ",\"start\":" << seg.raw_start << ",\"data\":[";
        for (size_t i = 0; i < seg.data.size(); ++i) {
            if (i) out << ',';
            out << seg.data[i];
        }
        out << "]}\n";
    }
}

}  // namespace pcad
