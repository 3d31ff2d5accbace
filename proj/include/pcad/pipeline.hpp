#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pcad/detector.hpp"
#include "pcad/period_detector.hpp"
#include "pcad/presets.hpp"
#include "pcad/trainer.hpp"
#include "pcad/wave_generator.hpp"

namespace pcad {

// Classifier trained on one wave group's normal recording.
struct GroupTraining {
    int group = 0;
    PeriodDetector detector;  // primed on the training region
    PeriodMarks normal_marks;
    TrainResult trained;
    size_t train_segments = 0;
    size_t val_segments = 0;
};

GroupTraining train_wave_group(const WaveGroup& group, const WaveDataset& dataset,
                               const Preset& preset, uint64_t seed);

// Builds the trainer data provider for a normal wave: segments over the
// detected marks, split by the train/validation boundary.
DataProvider make_wave_provider(const TimeSeries& normal, const PeriodMarks& marks,
                                double mean_period, size_t train_length, int signal_id);

// Type-B evaluation of one anomaly-injected test segment.
struct SegmentReport {
    int group = 0;
    int segment = 0;
    AnomalyKind kind = AnomalyKind::Pulse;
    double magnitude = 0.0;
    long region_begin = 0;
    long region_end = 0;
    size_t windows = 0;
    size_t clean_windows = 0;      // prediction windows not overlapping the region
    size_t clean_flagged = 0;      // false positives among them
    size_t anomalous_windows = 0;  // windows overlapping the region
    size_t anomalous_flagged = 0;
    bool detected = false;  // any flagged window overlaps the region
};

SegmentReport evaluate_wave_segment(const GroupTraining& training, const WaveGroup& group,
                                    size_t segment_index,
                                    std::vector<FlaggedExtent>* flags = nullptr);

struct KindCount {
    size_t detected = 0;
    size_t total = 0;
};

// Table-style evaluation summary over all groups.
struct EvaluationSummary {
    KindCount amplitude, phase, pulse;
    KindCount white_low;   // noise factor <= 6
    KindCount white_high;  // noise factor > 6
    size_t clean_windows = 0;
    size_t false_positives = 0;

    KindCount anomalies_total() const;  // amplitude + phase + pulse
    double false_positive_rate() const;
};

EvaluationSummary summarize(const std::vector<SegmentReport>& reports);
std::string summary_table(const EvaluationSummary& summary);

// Nearest-reference baseline accuracy on the validation split of a group's
// normal wave, using the same segmentation as the trained model's n0.
double nearest_reference_validation_accuracy(const GroupTraining& training,
                                             const WaveGroup& group, const WaveDataset& dataset,
                                             const Preset& preset);

struct PipelineConfig {
    std::string out_dir;
    int groups = 4;
    uint64_t seed = 1;
    Preset preset = preset_wave();
    bool plots = false;
    bool write_dataset_files = true;
    bool run_baseline = false;  // also evaluate the nearest-reference baseline
};

struct GroupRun {
    int group = 0;
    int n0 = 0;
    int n = 0;
    double train_accuracy = 0.0;
    double validation_accuracy = 0.0;
    double nearest_validation_accuracy = -1.0;
    std::vector<SegmentReport> segments;
};

struct PipelineResult {
    std::vector<GroupRun> groups;
    EvaluationSummary summary;
    double mean_train_accuracy = 0.0;
    double mean_validation_accuracy = 0.0;
    double mean_nearest_validation_accuracy = -1.0;
};

// generate -> detect-periods -> train -> evaluate, everything written under
// config.out_dir together with a reproducibility manifest.
PipelineResult run_pipeline(const PipelineConfig& config);

// Shared report helpers.
nlohmann::json segment_report_json(const SegmentReport& r);
nlohmann::json summary_json(const EvaluationSummary& s);
void write_label_history(const std::string& path, const TrainRecord& record, int n0);
void write_loss_curves(const std::string& path, const TrainRecord& record);

}  // namespace pcad
