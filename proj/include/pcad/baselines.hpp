#pragma once

#include <vector>

#include "pcad/segmentation.hpp"
#include "pcad/time_series.hpp"

namespace pcad {

struct SelfSimParams {
    int T = 0;      // window length
    int d_min = 1;  // minimum shift
    int d_max = 1;  // maximum shift

    void validate() const;
};

// a_tau = min over tau' in [tau-d_max, tau-d_min] of the squared Euclidean
// distance between the normalized windows at tau' and tau, for
// tau in [d_max, N-T]. Index i of the result corresponds to tau = d_max + i.
std::vector<double> self_dissimilarity(const TimeSeries& ts, const SelfSimParams& params);

// x -> 1/(x+1): maps dissimilarity 0 to rating 1.
double self_similarity_rating(double dissimilarity);

// Per-class means of normalized training segments (labels 0..n0-1).
std::vector<std::vector<double>> nearest_reference_train(
    const std::vector<LabeledSegment>& train, int n0);

// Euclidean-nearest class mean; ties break to the smaller label.
int nearest_reference_classify(const std::vector<double>& segment,
                               const std::vector<std::vector<double>>& means);

}  // namespace pcad
