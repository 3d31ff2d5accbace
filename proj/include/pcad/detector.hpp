#pragma once

#include <vector>

#include "pcad/network.hpp"
#include "pcad/segmentation.hpp"
#include "pcad/time_series.hpp"

namespace pcad {

struct SegmentPrediction {
    SegmentOrigin origin;
    long raw_start = 0;
    int T = 0;
    int true_label = 0;
    int predicted = 0;

    bool correct() const { return predicted == true_label; }
};

// Segments the signal exactly as in training (marks, n0, window length from
// the network spec), labels with respect to the final label map, and runs
// the classifier. max_periods > 0 restricts to the first K complete periods.
std::vector<SegmentPrediction> classify_signal(const Network& net,
                                               const std::vector<int>& label_map,
                                               const TimeSeries& ts, const PeriodMarks& marks,
                                               int n0, int signal_id = 0,
                                               long max_periods = -1);

double classification_accuracy(const std::vector<SegmentPrediction>& predictions);

// Type A: the whole signal is abnormal iff its average classification
// accuracy falls below delta.
struct TypeAVerdict {
    size_t total = 0;
    size_t correct = 0;
    double accuracy = 0.0;
    double delta = 0.0;
    bool abnormal = false;
};
TypeAVerdict detect_type_a(const std::vector<SegmentPrediction>& predictions, double delta);

// Type B: every misclassified segment flags its raw extent [start, start+T).
struct FlaggedExtent {
    long begin = 0;
    long end = 0;
    SegmentOrigin origin;
    int predicted = 0;
    int true_label = 0;
};
std::vector<FlaggedExtent> detect_type_b(const std::vector<SegmentPrediction>& predictions);

}  // namespace pcad
