#pragma once

#include <string>
#include <vector>

#include "pcad/time_series.hpp"

namespace pcad {

struct CsvOptions {
    bool has_header = true;
    char delimiter = ',';
    // Feature columns to keep, by header name (or 0-based index when the
    // file has no header). Empty selects every column.
    std::vector<std::string> features;
    double sample_rate = 0.0;
};

// Reads a CSV file of one sample per row, one feature per column.
// Errors name the offending 1-based row number.
TimeSeries load_csv(const std::string& path, const CsvOptions& options = {});

// One sample per row, header from feature_names (generated if absent).
void write_csv(const std::string& path, const TimeSeries& ts);

}  // namespace pcad
