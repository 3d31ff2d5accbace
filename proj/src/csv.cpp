#include "pcad/csv.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stod(t, &pos);
    } catch (...) {
        return false;
    }
    return pos == t.size() && std::isfinite(out);
}

}  // namespace

TimeSeries load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    size_t row = 0;
    std::vector<std::string> header;
    if (options.has_header) {
        if (!std::getline(in, line)) throw DataError(path + ": empty file");
        ++row;
        // Strip a UTF-8 BOM if present.
        if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        for (auto& h : split_line(line, options.delimiter)) header.push_back(trim(h));
    }

    std::vector<std::vector<double>> rows;  // row-major while reading
    size_t ncols = header.size();
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line, options.delimiter);
        if (ncols == 0) ncols = cells.size();
        if (cells.size() != ncols)
            throw DataError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(ncols));
        std::vector<double> parsed(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(cells[c], parsed[c]))
                throw DataError(path + ": non-numeric cell '" + trim(cells[c]) + "' at row " +
                                std::to_string(row) + ", column " + std::to_string(c + 1));
        }
        rows.push_back(std::move(parsed));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");

    // Resolve the selected columns.
    std::vector<size_t> cols;
    if (options.features.empty()) {
        for (size_t c = 0; c < ncols; ++c) cols.push_back(c);
    } else {
        for (const auto& want : options.features) {
            const std::string name = trim(want);
            size_t found = ncols;
            for (size_t c = 0; c < header.size(); ++c) {
                if (header[c] == name) {
                    found = c;
                    break;
                }
            }
            if (found == ncols) {
                // Fall back to a numeric index.
                try {
                    size_t pos = 0;
                    const long idx = std::stol(name, &pos);
                    if (pos == name.size() && idx >= 0 && static_cast<size_t>(idx) < ncols)
                        found = static_cast<size_t>(idx);
                } catch (...) {
                }
            }
            if (found == ncols) throw DataError(path + ": no column named '" + name + "'");
            cols.push_back(found);
        }
    }

    TimeSeries ts;
    ts.sample_rate = options.sample_rate;
    ts.values.resize(cols.size());
    for (size_t i = 0; i < cols.size(); ++i) {
        ts.values[i].resize(rows.size());
        for (size_t t = 0; t < rows.size(); ++t) ts.values[i][t] = rows[t][cols[i]];
        if (cols[i] < header.size()) ts.feature_names.push_back(header[cols[i]]);
    }
    ts.validate();
    return ts;
}

void write_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    for (size_t i = 0; i < ts.dims(); ++i) {
        if (i) out << ',';
        if (i < ts.feature_names.size() && !ts.feature_names[i].empty())
            out << ts.feature_names[i];
        else
            out << "f" << i;
    }
    out << '\n';
    char buf[64];
    for (size_t t = 0; t < ts.length(); ++t) {
        for (size_t i = 0; i < ts.dims(); ++i) {
            if (i) out << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", ts.values[i][t]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace pcad
