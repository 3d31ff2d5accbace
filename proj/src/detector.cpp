#include "pcad/detector.hpp"

#include "pcad/errors.hpp"

namespace pcad {

std::vector<SegmentPrediction> classify_signal(const Network& net,
                                               const std::vector<int>& label_map,
                                               const TimeSeries& ts, const PeriodMarks& marks,
                                               int n0, int signal_id, long max_periods) {
    if (static_cast<int>(label_map.size()) != n0)
        throw ConfigError("label map size does not match n0");
    if (label_map_classes(label_map) != net.spec.n)
        throw ConfigError("label map class count does not match the network");
    if (static_cast<int>(ts.dims()) != net.spec.d)
        throw DataError("signal dimension does not match the network input channels");

    PeriodMarks used = marks;
    if (max_periods > 0 && static_cast<long>(used.taus.size()) > max_periods + 1)
        used.taus.resize(static_cast<size_t>(max_periods) + 1);

    SegmentSpec spec;
    spec.n0 = n0;
    spec.T = net.spec.T;
    std::vector<LabeledSegment> segments = segment(ts, used, spec, signal_id);
    relabel(segments, label_map);

    ForwardCache cache;
    std::vector<SegmentPrediction> out;
    out.reserve(segments.size());
    for (const auto& seg : segments) {
        SegmentPrediction p;
        p.origin = seg.origin;
        p.raw_start = seg.raw_start;
        p.T = seg.T;
        p.true_label = seg.label;
        p.predicted = predict(net, seg.data.data(), cache);
        out.push_back(p);
    }
    return out;
}

double classification_accuracy(const std::vector<SegmentPrediction>& predictions) {
    if (predictions.empty()) return 0.0;
    size_t correct = 0;
    for (const auto& p : predictions) correct += p.correct() ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

TypeAVerdict detect_type_a(const std::vector<SegmentPrediction>& predictions, double delta) {
    if (predictions.empty()) throw DataError("type A decision needs at least one prediction");
    TypeAVerdict v;
    v.total = predictions.size();
    for (const auto& p : predictions) v.correct += p.correct() ? 1 : 0;
    v.accuracy = static_cast<double>(v.correct) / static_cast<double>(v.total);
    v.delta = delta;
    v.abnormal = v.accuracy < delta;
    return v;
}

std::vector<FlaggedExtent> detect_type_b(const std::vector<SegmentPrediction>& predictions) {
    std::vector<FlaggedExtent> flags;
    for (const auto& p : predictions) {
        if (p.correct()) continue;
        FlaggedExtent f;
        f.begin = p.raw_start;
        f.end = p.raw_start + p.T;
        f.origin = p.origin;
        f.predicted = p.predicted;
        f.true_label = p.true_label;
        flags.push_back(f);
    }
    return flags;
}

}  // namespace pcad
