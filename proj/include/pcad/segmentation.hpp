#pragma once

#include <iosfwd>
#include <vector>

#include "pcad/time_series.hpp"

namespace pcad {

// Ordered period-begin indices tau_0 < tau_1 < ... within [0, N).
struct PeriodMarks {
    std::vector<long> taus;

    size_t count() const { return taus.size(); }
    // Throws DataError unless strictly increasing with gaps >= 2 and all
    // marks inside [0, series_length).
    void validate(size_t series_length) const;
};

struct SegmentSpec {
    int n0 = 0;              // initial number of classes (>= 3)
    int T = 0;               // window length (>= 2)
    double mean_period = 0;  // s-bar, informational
};

// T = floor(3 * mean_period / n0); throws if the result degenerates (< 2).
int window_length(double mean_period, int n0);

struct SegmentOrigin {
    int signal = 0;  // signal id
    long m = 0;      // running segment counter
    long tau = 0;    // period begin the segment belongs to
};

// Normalized window of length T with its phase label.
struct LabeledSegment {
    std::vector<double> data;  // d*T, row-major [feature][t], normalized
    int d = 0;
    int T = 0;
    int label = 0;  // current label (initially m mod n0)
    SegmentOrigin origin;
    long raw_start = 0;  // absolute start index in the source signal
};

struct SegmentStats {
    size_t emitted = 0;
    size_t dropped_overrun = 0;  // window would run past the series end
    size_t periods = 0;          // complete periods (pairs of adjacent marks)
};

// Per-feature-row normalization in place: subtract the row mean, divide by
// the population standard deviation (divisor T). Constant rows become zeros.
void normalize_window(double* data, int d, int T);
std::vector<double> normalize_window(const std::vector<double>& raw, int d, int T);

// Cuts n0 overlapping windows per period: segment m starts at
// tau_k + floor((tau_{k+1} - tau_k) * (m mod n0) / n0) with k = floor(m/n0),
// carries initial label m mod n0, and is normalized. Windows that do not fit
// before the series end are dropped (counted in stats).
std::vector<LabeledSegment> segment(const TimeSeries& ts, const PeriodMarks& marks,
                                    const SegmentSpec& spec, int signal_id = 0,
                                    SegmentStats* stats = nullptr);

// Throws ConfigError unless the map's values form a contiguous range [0, n).
void validate_label_map(const std::vector<int>& label_map);
int label_map_classes(const std::vector<int>& label_map);

// Reassigns each segment's label to label_map[m mod n0].
void relabel(std::vector<LabeledSegment>& segments, const std::vector<int>& label_map);

// Debug dump: one JSON object per line {signal, m, label, start, data}.
void dump_segments(std::ostream& out, const std::vector<LabeledSegment>& segments);

}  // namespace pcad
