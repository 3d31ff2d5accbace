#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pcad/adam.hpp"
#include "pcad/network.hpp"
#include "pcad/rng.hpp"
#include "pcad/segmentation.hpp"

namespace pcad {

struct DataSet {
    int d = 0;
    int T = 0;
    std::vector<LabeledSegment> segments;

    bool empty() const { return segments.empty(); }
    size_t size() const { return segments.size(); }
};

struct SegmentedSplit {
    DataSet train;
    DataSet val;
};

// Produces train/validation segments for a given initial number of classes
// (segmentation, window length and labels all depend on n0). Segments carry
// their initial labels m mod n0.
using DataProvider = std::function<SegmentedSplit(int n0)>;

// Counts of (true label i, predicted j) collected during one epoch.
struct ConfusionMatrix {
    int n = 0;
    int epoch = 0;
    std::vector<long> counts;  // n*n, row-major

    ConfusionMatrix() = default;
    ConfusionMatrix(int classes, int epoch_index)
        : n(classes), epoch(epoch_index), counts(static_cast<size_t>(classes) * classes, 0) {}

    long& at(int i, int j) { return counts[static_cast<size_t>(i) * n + j]; }
    long at(int i, int j) const { return counts[static_cast<size_t>(i) * n + j]; }
    long row_sum(int i) const;
    long total() const;
    double accuracy() const;  // diagonal share
    // Smallest per-class accuracy; rows with zero sum count as 0.
    double min_class_accuracy() const;
};

// Mini-batch size schedule: starts at `initial`, doubles every
// `growth_epochs` epochs (0 disables growth), capped at `max`.
struct BatchSchedule {
    int initial = 32;
    int growth_epochs = 0;
    int max = 32;

    int size_at(int epoch) const;
};

struct Hyperparams {
    int n0_star = 10;      // even, > 3
    double alpha = 0.03125;  // maximum per-class margin of error
    double lr = 0.01;
    BatchSchedule batch;
    int patience = 4;
    uint64_t seed = 0;
    int max_alpha_restarts = 3;
    int max_epochs = 400;  // safety cap per network

    void validate() const;
};

// One pass over the training data in a seeded shuffled order with disjoint
// mini-batches. Returns the mean per-sample loss and the confusion counts of
// the in-flight predictions.
struct EpochResult {
    double train_loss = 0.0;
    ConfusionMatrix confusion;
};
EpochResult train_epoch(Network& net, AdamState& adam, const AdamConfig& adam_config,
                        const DataSet& train, const std::vector<double>& weights,
                        int batch_size, Rng& rng, int epoch_index);

// Mean weighted loss and accuracy over a dataset (no parameter updates).
struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};
EvalResult evaluate(const Network& net, const DataSet& data, const std::vector<double>& weights);

// True iff the last `patience` entries contain no value strictly below the
// minimum of all entries preceding them.
bool training_stopped(const std::vector<double>& validation_losses, int patience = 4);

// Overall confusion matrix: sum_{k=1}^{E-1} V_k * (H_{k-1} - H_k), epoch 0
// excluded. Returns an n*n row-major matrix.
std::vector<double> overall_confusion(const std::vector<double>& train_losses,
                                      const std::vector<ConfusionMatrix>& confusions);

// min_i V^{ii} / sum_j V^{ij} >= 1 - alpha on the last epoch's counts.
bool reclustering_satisfied(const ConfusionMatrix& last, double alpha);

// Worst-accuracy class and its most-confused other class; ties break low.
std::pair<int, int> select_merge(const std::vector<double>& v_bar, int n);

// Merges class i_drop into j_into and reassigns the largest label n-1 to
// i_drop so that labels stay contiguous in [0, n-1).
std::vector<int> apply_merge(std::vector<int> label_map, int i_drop, int j_into, int n);

// w_z proportional to 1/count_z, normalized to mean weight 1.
std::vector<double> class_weights(const DataSet& data, int n);

struct NetRunRecord {
    int n0 = 0;
    int n = 0;
    std::vector<int> label_map;  // map in effect during this run
    std::vector<double> train_loss;      // H_k
    std::vector<double> val_loss;
    std::vector<ConfusionMatrix> confusions;
    int first_epoch = 0;  // cumulative epoch index within this n0 (label history)
    bool stored = false;
    double final_train_accuracy = 0.0;
    double final_val_accuracy = 0.0;

    int epochs() const { return static_cast<int>(train_loss.size()); }
};

struct MergeEvent {
    int n0 = 0;
    int at_epoch = 0;  // cumulative epoch within the n0 at which the merge happened
    int dropped = 0;   // i-degree
    int merged_into = 0;  // j-degree
    std::vector<int> new_label_map;
};

struct TrainRecord {
    std::vector<NetRunRecord> runs;
    std::vector<MergeEvent> merges;
    double alpha_used = 0.0;
    int restarts = 0;
};

struct TrainResult {
    Network net;
    std::vector<int> label_map;
    int n0 = 0;
    int n = 0;
    double validation_accuracy = 0.0;
    double train_accuracy = 0.0;
    TrainRecord record;
};

// The full class-count selection loop: for n0 in {n0*, n0*-2, ..., 4}, train
// and recluster until the per-class accuracy criterion holds, keep the net
// with the largest final class count (highest n0 on ties), doubling alpha
// and rerunning if nothing could be stored.
TrainResult run_training(const DataProvider& provider, const Hyperparams& hyper);

}  // namespace pcad
