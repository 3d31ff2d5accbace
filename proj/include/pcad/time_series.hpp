#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pcad {

// d-dimensional real-valued signal over a discrete time index.
// values[i][t] is feature i at time t; all rows have equal length.
struct TimeSeries {
    std::vector<std::vector<double>> values;
    double sample_rate = 0.0;  // samples per second, informational
    std::vector<std::string> feature_names;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> single_feature) {
        values.push_back(std::move(single_feature));
    }

    size_t dims() const { return values.size(); }
    size_t length() const { return values.empty() ? 0 : values[0].size(); }

    // Throws DataError if empty, ragged, or contains non-finite values.
    void validate() const;

    // Copy of the time range [begin, end) across all features.
    TimeSeries slice(size_t begin, size_t end) const;

    // Series containing only the selected feature.
    TimeSeries feature(size_t index) const;
};

// Block-averaging downsample: output length floor(N/factor), each output
// sample the mean of its factor-length block.
TimeSeries resample(const TimeSeries& ts, size_t factor);

// out[t] = in[t+1] - in[t] per feature; output length N-1.
TimeSeries first_difference(const TimeSeries& ts);

}  // namespace pcad
