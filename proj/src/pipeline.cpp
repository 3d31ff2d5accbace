#include "pcad/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcad/baselines.hpp"
#include "pcad/errors.hpp"
#include "pcad/model_io.hpp"
#include "pcad/svg.hpp"
#include "pcad/version.hpp"

namespace pcad {

namespace {

constexpr uint64_t kTagTraining = 7001;

bool overlaps(long a_begin, long a_end, long b_begin, long b_end) {
    return a_begin < b_end && a_end > b_begin;
}

}  // namespace

DataProvider make_wave_provider(const TimeSeries& normal, const PeriodMarks& marks,
                                double mean_period, size_t train_length, int signal_id) {
    return [&normal, marks, mean_period, train_length, signal_id](int n0) {
        SegmentSpec spec;
        spec.n0 = n0;
        spec.T = window_length(mean_period, n0);
        spec.mean_period = mean_period;
        std::vector<LabeledSegment> segments = segment(normal, marks, spec, signal_id);

        SegmentedSplit split;
        split.train.d = split.val.d = static_cast<int>(normal.dims());
        split.train.T = split.val.T = spec.T;
        const long boundary = static_cast<long>(train_length);
        for (auto& seg : segments) {
            if (seg.raw_start + spec.T <= boundary)
                split.train.segments.push_back(std::move(seg));
            else if (seg.raw_start >= boundary)
                split.val.segments.push_back(std::move(seg));
            // windows straddling the boundary belong to neither split
        }
        return split;
    };
}

GroupTraining train_wave_group(const WaveGroup& group, const WaveDataset& dataset,
                               const Preset& preset, uint64_t seed) {
    const TimeSeries reference = group.normal.slice(0, dataset.train_length());
    GroupTraining out{group.index,
                      PeriodDetector(reference, preset.detector, preset.preprocessing),
                      PeriodMarks{},
                      TrainResult{},
                      0,
                      0};
    out.normal_marks = out.detector.detect(group.normal);

    DataProvider provider = make_wave_provider(group.normal, out.normal_marks,
                                               preset.mean_period, dataset.train_length(),
                                               group.index);
    Hyperparams hyper = preset.hyper;
    hyper.seed = derive_seed(seed, kTagTraining + static_cast<uint64_t>(group.index));
    out.trained = run_training(provider, hyper);

    SegmentedSplit split = provider(out.trained.n0);
    out.train_segments = split.train.size();
    out.val_segments = split.val.size();
    return out;
}

SegmentReport evaluate_wave_segment(const GroupTraining& training, const WaveGroup& group,
                                    size_t segment_index, std::vector<FlaggedExtent>* flags) {
    const TimeSeries& signal = group.segments.at(segment_index);
    const AnomalyRecord& record = group.anomalies.at(segment_index);

    SegmentReport report;
    report.group = group.index;
    report.segment = record.index;
    report.kind = record.spec.kind;
    report.magnitude = record.spec.magnitude;
    report.region_begin = record.region_begin;
    report.region_end = record.region_end;

    const PeriodMarks marks = training.detector.detect(signal);
    const std::vector<SegmentPrediction> predictions =
        classify_signal(training.trained.net, training.trained.label_map, signal, marks,
                        training.trained.n0, group.index);
    const std::vector<FlaggedExtent> flagged = detect_type_b(predictions);

    report.windows = predictions.size();
    for (const auto& p : predictions) {
        const bool anomalous =
            overlaps(p.raw_start, p.raw_start + p.T, report.region_begin, report.region_end);
        if (anomalous)
            ++report.anomalous_windows;
        else
            ++report.clean_windows;
    }
    for (const auto& f : flagged) {
        if (overlaps(f.begin, f.end, report.region_begin, report.region_end)) {
            ++report.anomalous_flagged;
            report.detected = true;
        } else {
            ++report.clean_flagged;
        }
    }
    if (flags) *flags = flagged;
    return report;
}

KindCount EvaluationSummary::anomalies_total() const {
    KindCount k;
    k.detected = amplitude.detected + phase.detected + pulse.detected;
    k.total = amplitude.total + phase.total + pulse.total;
    return k;
}

double EvaluationSummary::false_positive_rate() const {
    return clean_windows == 0
               ? 0.0
               : static_cast<double>(false_positives) / static_cast<double>(clean_windows);
}

EvaluationSummary summarize(const std::vector<SegmentReport>& reports) {
    EvaluationSummary s;
    for (const auto& r : reports) {
        KindCount* bucket = nullptr;
        switch (r.kind) {
            case AnomalyKind::Amplitude: bucket = &s.amplitude; break;
            case AnomalyKind::Phase: bucket = &s.phase; break;
            case AnomalyKind::Pulse: bucket = &s.pulse; break;
            case AnomalyKind::WhiteNoise:
                bucket = r.magnitude <= 6.0 ? &s.white_low : &s.white_high;
                break;
        }
        ++bucket->total;
        if (r.detected) ++bucket->detected;
        s.clean_windows += r.clean_windows;
        s.false_positives += r.clean_flagged;
    }
    return s;
}

std::string summary_table(const EvaluationSummary& s) {
    std::ostringstream out;
    char line[128];
    auto row = [&](const char* name, const KindCount& k) {
        const double pct = k.total == 0 ? 0.0 : 100.0 * k.detected / static_cast<double>(k.total);
        std::snprintf(line, sizeof(line), "%-28s %5zu/%-5zu %5.1f%%\n", name, k.detected,
                      k.total, pct);
        out << line;
    };
    out << "Type                         Detection    Rate\n";
    row("Phases", s.phase);
    row("Amplitudes", s.amplitude);
    row("Pulse", s.pulse);
    row("Total anomalies", s.anomalies_total());
    std::snprintf(line, sizeof(line), "%-28s %5zu/%-5zu %5.2f%%\n", "False positives",
                  s.false_positives, s.clean_windows, 100.0 * s.false_positive_rate());
    out << line;
    row("White noise (alpha <= 6)", s.white_low);
    row("White noise (alpha > 6)", s.white_high);
    return out.str();
}

double nearest_reference_validation_accuracy(const GroupTraining& training,
                                             const WaveGroup& group, const WaveDataset& dataset,
                                             const Preset& preset) {
    DataProvider provider = make_wave_provider(group.normal, training.normal_marks,
                                               preset.mean_period, dataset.train_length(),
                                               group.index);
    const int n0 = training.trained.n0;
    SegmentedSplit split = provider(n0);
    const auto means = nearest_reference_train(split.train.segments, n0);
    size_t correct = 0;
    for (const auto& seg : split.val.segments) {
        const int theta = static_cast<int>(seg.origin.m % n0);
        if (nearest_reference_classify(seg.data, means) == theta) ++correct;
    }
    return split.val.segments.empty()
               ? 0.0
               : static_cast<double>(correct) / static_cast<double>(split.val.size());
}

nlohmann::json segment_report_json(const SegmentReport& r) {
    nlohmann::json j;
    j["group"] = r.group;
    j["segment"] = r.segment;
    j["kind"] = anomaly_kind_name(r.kind);
    j["magnitude"] = r.magnitude;
    j["region"] = {r.region_begin, r.region_end};
    j["windows"] = r.windows;
    j["clean_windows"] = r.clean_windows;
    j["clean_flagged"] = r.clean_flagged;
    j["anomalous_windows"] = r.anomalous_windows;
    j["anomalous_flagged"] = r.anomalous_flagged;
    j["detected"] = r.detected;
    return j;
}

nlohmann::json summary_json(const EvaluationSummary& s) {
    auto kind = [](const KindCount& k) {
        return nlohmann::json{{"detected", k.detected}, {"total", k.total}};
    };
    nlohmann::json j;
    j["phase"] = kind(s.phase);
    j["amplitude"] = kind(s.amplitude);
    j["pulse"] = kind(s.pulse);
    j["total_anomalies"] = kind(s.anomalies_total());
    j["white_noise_low"] = kind(s.white_low);
    j["white_noise_high"] = kind(s.white_high);
    j["clean_windows"] = s.clean_windows;
    j["false_positives"] = s.false_positives;
    j["false_positive_rate"] = s.false_positive_rate();
    return j;
}

void write_label_history(const std::string& path, const TrainRecord& record, int n0) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write label history: " + path);
    out << "Epochs,Merge,New Labels\n";
    auto format_map = [](const std::vector<int>& map) {
        std::string s = "[";
        for (size_t i = 0; i < map.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(map[i]);
        }
        return s + "]";
    };
    size_t merge_idx = 0;
    for (const auto& run : record.runs) {
        if (run.n0 != n0) continue;
        out << run.first_epoch << " -- " << run.first_epoch + run.epochs() - 1 << ",N/A,"
            << format_map(run.label_map) << '\n';
        while (merge_idx < record.merges.size() && record.merges[merge_idx].n0 != n0)
            ++merge_idx;
        if (merge_idx < record.merges.size() &&
            record.merges[merge_idx].at_epoch == run.first_epoch + run.epochs()) {
            const MergeEvent& me = record.merges[merge_idx];
            out << me.at_epoch - 1 << " -> " << me.at_epoch << ',' << me.dropped << " to "
                << me.merged_into << ',' << format_map(me.new_label_map) << '\n';
            ++merge_idx;
        }
    }
}

void write_loss_curves(const std::string& path, const TrainRecord& record) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write loss curves: " + path);
    out << "n0,n,epoch,train_loss,val_loss\n";
    char buf[96];
    for (const auto& run : record.runs) {
        for (int k = 0; k < run.epochs(); ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g\n", run.n0, run.n,
                          run.first_epoch + k, run.train_loss[static_cast<size_t>(k)],
                          run.val_loss[static_cast<size_t>(k)]);
            out << buf;
        }
    }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    namespace fs = std::filesystem;
    if (config.out_dir.empty()) throw ConfigError("pipeline needs an output directory");
    if (config.preset.name != "wave")
        throw ConfigError("the end-to-end pipeline supports the wave preset");
    fs::create_directories(config.out_dir);

    const WaveDataset dataset = build_dataset(config.groups, config.seed);
    if (config.write_dataset_files)
        write_dataset(dataset, (fs::path(config.out_dir) / "dataset").string());

    PipelineResult result;
    std::vector<SegmentReport> all_reports;
    char name[64];

    for (const auto& group : dataset.groups) {
        GroupTraining training =
            train_wave_group(group, dataset, config.preset, config.seed);

        GroupRun run;
        run.group = group.index;
        run.n0 = training.trained.n0;
        run.n = training.trained.n;
        run.train_accuracy = training.trained.train_accuracy;
        run.validation_accuracy = training.trained.validation_accuracy;
        if (config.run_baseline)
            run.nearest_validation_accuracy =
                nearest_reference_validation_accuracy(training, group, dataset, config.preset);

        std::snprintf(name, sizeof(name), "group%03d", group.index);
        const fs::path gdir = fs::path(config.out_dir) / name;
        fs::create_directories(gdir);

        ModelFile model;
        model.network = training.trained.net;
        model.label_map = training.trained.label_map;
        model.n0 = training.trained.n0;
        model.mean_period = config.preset.mean_period;
        model.validation_accuracy = training.trained.validation_accuracy;
        model.train_accuracy = training.trained.train_accuracy;
        model.seed = config.seed;
        model.preset = config.preset.name;
        save_model(model, (gdir / "model.json").string());
        write_label_history((gdir / "label_history.csv").string(), training.trained.record,
                            training.trained.n0);
        write_loss_curves((gdir / "loss_curves.csv").string(), training.trained.record);

        {
            nlohmann::json jm = nlohmann::json::array();
            for (long tau : training.normal_marks.taus) jm.push_back(tau);
            std::ofstream out(gdir / "marks.json");
            out << jm.dump() << '\n';
        }

        for (size_t i = 0; i < group.segments.size(); ++i) {
            std::vector<FlaggedExtent> flags;
            SegmentReport report = evaluate_wave_segment(training, group, i, &flags);
            if (config.plots && i == 0) {
                SvgPlot plot(960, 280,
                             std::string("group ") + std::to_string(group.index) +
                                 " segment 0 (" + anomaly_kind_name(report.kind) + ")");
                plot.add_series(group.segments[i].values[0], "#444");
                const PeriodMarks marks = training.detector.detect(group.segments[i]);
                const auto preds =
                    classify_signal(training.trained.net, training.trained.label_map,
                                    group.segments[i], marks, training.trained.n0);
                for (const auto& p : preds) {
                    plot.add_band_bar(0, static_cast<double>(p.raw_start),
                                      static_cast<double>(p.raw_start + p.T) , p.predicted);
                    plot.add_band_bar(1, static_cast<double>(p.raw_start),
                                      static_cast<double>(p.raw_start + p.T), p.true_label);
                }
                plot.save((gdir / "segment00.svg").string());
            }
            run.segments.push_back(report);
            all_reports.push_back(report);
        }

        if (config.plots) {
            SvgPlot loss(720, 300, "validation loss");
            std::vector<double> vl;
            for (const auto& r : training.trained.record.runs)
                if (r.n0 == training.trained.n0)
                    vl.insert(vl.end(), r.val_loss.begin(), r.val_loss.end());
            loss.add_series(vl, "#4363d8", "validation");
            loss.save((gdir / "loss.svg").string());
        }

        result.groups.push_back(std::move(run));
    }

    result.summary = summarize(all_reports);
    double train_acc = 0.0, val_acc = 0.0, nearest_acc = 0.0;
    for (const auto& g : result.groups) {
        train_acc += g.train_accuracy;
        val_acc += g.validation_accuracy;
        nearest_acc += g.nearest_validation_accuracy;
    }
    const double inv = 1.0 / static_cast<double>(result.groups.size());
    result.mean_train_accuracy = train_acc * inv;
    result.mean_validation_accuracy = val_acc * inv;
    result.mean_nearest_validation_accuracy = config.run_baseline ? nearest_acc * inv : -1.0;

    // Report + summary.
    nlohmann::json report;
    report["schema"] = "pcad.report.v1";
    report["groups"] = nlohmann::json::array();
    for (const auto& g : result.groups) {
        nlohmann::json jg;
        jg["group"] = g.group;
        jg["n0"] = g.n0;
        jg["n"] = g.n;
        jg["train_accuracy"] = g.train_accuracy;
        jg["validation_accuracy"] = g.validation_accuracy;
        if (g.nearest_validation_accuracy >= 0.0)
            jg["nearest_validation_accuracy"] = g.nearest_validation_accuracy;
        jg["segments"] = nlohmann::json::array();
        for (const auto& r : g.segments) jg["segments"].push_back(segment_report_json(r));
        report["groups"].push_back(jg);
    }
    report["summary"] = summary_json(result.summary);
    report["mean_train_accuracy"] = result.mean_train_accuracy;
    report["mean_validation_accuracy"] = result.mean_validation_accuracy;
    {
        std::ofstream out(fs::path(config.out_dir) / "report.json");
        out << report.dump(2) << '\n';
    }
    {
        std::ofstream out(fs::path(config.out_dir) / "summary.txt");
        out << summary_table(result.summary);
    }

    // Reproducibility manifest: config echo + seed + version, no timestamps.
    nlohmann::json manifest;
    manifest["schema"] = "pcad.run-manifest.v1";
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    manifest["command"] = "pipeline";
    manifest["seed"] = config.seed;
    manifest["config"] = {{"groups", config.groups},
                          {"preset", config.preset.name},
                          {"plots", config.plots},
                          {"baseline", config.run_baseline}};
    manifest["outputs"] = {"dataset", "report.json", "summary.txt"};
    {
        std::ofstream out(fs::path(config.out_dir) / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    return result;
}

}  // namespace pcad
