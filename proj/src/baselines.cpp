#include "pcad/baselines.hpp"

#include <cmath>
#include <limits>

#include "pcad/errors.hpp"

namespace pcad {

void SelfSimParams::validate() const {
    if (T < 2) throw ConfigError("self-similarity window must be >= 2");
    if (d_min < 1 || d_min > d_max) throw ConfigError("need 1 <= d_min <= d_max");
}

std::vector<double> self_dissimilarity(const TimeSeries& ts, const SelfSimParams& params) {
    params.validate();
    const long N = static_cast<long>(ts.length());
    const int d = static_cast<int>(ts.dims());
    if (N < params.d_max + params.T)
        throw DataError("series too short for the requested shifts and window");

    const size_t window = static_cast<size_t>(d) * params.T;
    const long last_start = N - params.T;  // inclusive

    auto window_at = [&](long start, std::vector<double>& buf) {
        buf.resize(window);
        for (int i = 0; i < d; ++i)
            for (int t = 0; t < params.T; ++t)
                buf[static_cast<size_t>(i) * params.T + t] =
                    ts.values[static_cast<size_t>(i)][static_cast<size_t>(start + t)];
        normalize_window(buf.data(), d, params.T);
    };

    // Ring buffer of the last d_max+1 normalized windows keeps memory flat
    // on long signals.
    const size_t ring = static_cast<size_t>(params.d_max) + 1;
    std::vector<std::vector<double>> recent(ring);
    for (long s = 0; s < params.d_max && s <= last_start; ++s)
        window_at(s, recent[static_cast<size_t>(s) % ring]);

    std::vector<double> out;
    out.reserve(static_cast<size_t>(last_start - params.d_max + 1));
    for (long tau = params.d_max; tau <= last_start; ++tau) {
        std::vector<double>& cur = recent[static_cast<size_t>(tau) % ring];
        window_at(tau, cur);
        double best = std::numeric_limits<double>::infinity();
        for (long shift = params.d_min; shift <= params.d_max; ++shift) {
            const std::vector<double>& ref =
                recent[static_cast<size_t>(tau - shift) % ring];
            double dist = 0.0;
            for (size_t idx = 0; idx < window; ++idx) {
                const double diff = ref[idx] - cur[idx];
                dist += diff * diff;
                if (dist >= best) break;
            }
            best = std::min(best, dist);
        }
        out.push_back(best);
    }
    return out;
}

double self_similarity_rating(double dissimilarity) { return 1.0 / (dissimilarity + 1.0); }

std::vector<std::vector<double>> nearest_reference_train(
    const std::vector<LabeledSegment>& train, int n0) {
    if (train.empty()) throw DataError("nearest-reference training set is empty");
    const size_t window = train[0].data.size();
    std::vector<std::vector<double>> means(static_cast<size_t>(n0),
                                           std::vector<double>(window, 0.0));
    std::vector<long> counts(static_cast<size_t>(n0), 0);
    for (const auto& seg : train) {
        const int theta = static_cast<int>(seg.origin.m % n0);
        if (seg.data.size() != window) throw DataError("inconsistent segment window sizes");
        for (size_t i = 0; i < window; ++i) means[static_cast<size_t>(theta)][i] += seg.data[i];
        ++counts[static_cast<size_t>(theta)];
    }
    for (int theta = 0; theta < n0; ++theta) {
        if (counts[static_cast<size_t>(theta)] == 0)
            throw DataError("class " + std::to_string(theta) + " has no training segments");
        for (double& v : means[static_cast<size_t>(theta)])
            v /= static_cast<double>(counts[static_cast<size_t>(theta)]);
    }
    return means;
}

int nearest_reference_classify(const std::vector<double>& segment,
                               const std::vector<std::vector<double>>& means) {
    if (means.empty()) throw ConfigError("no class means trained");
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t theta = 0; theta < means.size(); ++theta) {
        if (means[theta].size() != segment.size())
            throw ConfigError("segment/mean size mismatch");
        double dist = 0.0;
        for (size_t i = 0; i < segment.size(); ++i) {
            const double diff = segment[i] - means[theta][i];
            dist += diff * diff;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(theta);
        }
    }
    return best;
}

}  // namespace pcad
