#include "pcad/time_series.hpp"

#include <cmath>

#include "pcad/errors.hpp"

namespace pcad {

void TimeSeries::validate() const {
    if (values.empty()) throw DataError("time series has no features");
    const size_t n = values[0].size();
    if (n == 0) throw DataError("time series has no samples");
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != n)
            throw DataError("feature " + std::to_string(i) + " has " +
                            std::to_string(values[i].size()) + " samples, expected " +
                            std::to_string(n));
        for (size_t t = 0; t < values[i].size(); ++t) {
            if (!std::isfinite(values[i][t]))
                throw DataError("non-finite value at feature " + std::to_string(i) +
                                ", time " + std::to_string(t));
        }
    }
}

TimeSeries TimeSeries::slice(size_t begin, size_t end) const {
    if (begin > end || end > length()) throw DataError("slice range out of bounds");
    TimeSeries out;
    out.sample_rate = sample_rate;
    out.feature_names = feature_names;
    out.values.reserve(values.size());
    for (const auto& row : values)
        out.values.emplace_back(row.begin() + static_cast<long>(begin),
                                row.begin() + static_cast<long>(end));
    return out;
}

TimeSeries TimeSeries::feature(size_t index) const {
    if (index >= dims()) throw DataError("feature index out of range");
    TimeSeries out;
    out.sample_rate = sample_rate;
    out.values.push_back(values[index]);
    if (index < feature_names.size()) out.feature_names.push_back(feature_names[index]);
    return out;
}

TimeSeries resample(const TimeSeries& ts, size_t factor) {
    if (factor == 0) throw DataError("resample factor must be >= 1");
    if (factor == 1) return ts;
    if (ts.length() < factor) throw DataError("series shorter than resample factor");
    const size_t out_len = ts.length() / factor;
    TimeSeries out;
    out.sample_rate = ts.sample_rate > 0 ? ts.sample_rate / static_cast<double>(factor) : 0.0;
    out.feature_names = ts.feature_names;
    out.values.resize(ts.dims());
    for (size_t i = 0; i < ts.dims(); ++i) {
        out.values[i].resize(out_len);
        for (size_t t = 0; t < out_len; ++t) {
            double sum = 0.0;
            for (size_t k = 0; k < factor; ++k) sum += ts.values[i][t * factor + k];
            out.values[i][t] = sum / static_cast<double>(factor);
        }
    }
    return out;
}

TimeSeries first_difference(const TimeSeries& ts) {
    if (ts.length() < 2) throw DataError("first difference needs at least 2 samples");
    TimeSeries out;
    out.sample_rate = ts.sample_rate;
    out.feature_names = ts.feature_names;
    out.values.resize(ts.dims());
    for (size_t i = 0; i < ts.dims(); ++i) {
        out.values[i].resize(ts.length() - 1);
        for (size_t t = 0; t + 1 < ts.length(); ++t)
            out.values[i][t] = ts.values[i][t + 1] - ts.values[i][t];
    }
    return out;
}

}  // namespace pcad
