#include "pcad/period_detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

[[noreturn]] void step_error(int step, const std::string& what) {
    throw DataError("period detection step " + std::to_string(step) + ": " + what);
}

}  // namespace

void PeriodDetectorParams::validate() const {
    if (prefilter_half_length < 0) throw ConfigError("prefilter half-length must be >= 0");
    if (s_min < 2 || s_min > s_max) throw ConfigError("need 2 <= s_min <= s_max");
    if (sigma < 0.0 || sigma >= 1.0) throw ConfigError("sigma must lie in [0, 1)");
    if (lambda <= 0.0 || lambda > 0.5) throw ConfigError("lambda must lie in (0, 1/2]");
    if (peak_adjust_radius < 0) throw ConfigError("peak adjust radius must be >= 0");
}

std::vector<double> rolling_mean(const std::vector<double>& x, int n) {
    if (n < 0) throw ConfigError("rolling mean half-length must be >= 0");
    if (n == 0) return x;
    const size_t w = 2 * static_cast<size_t>(n) + 1;
    if (x.size() < w) throw DataError("sequence shorter than rolling mean window");
    // Summed per window (not via a running sum) so the result for a window
    // depends only on its contents, keeping shifted signals bit-identical.
    std::vector<double> out(x.size() - w + 1);
    for (size_t t = 0; t < out.size(); ++t) {
        double sum = 0.0;
        for (size_t k = 0; k < w; ++k) sum += x[t + k];
        out[t] = sum / static_cast<double>(w);
    }
    return out;
}

int estimate_base_period(const std::vector<double>& y, int s_min, int s_max) {
    if (s_min < 1 || s_min > s_max) throw ConfigError("need 1 <= s_min <= s_max");
    const long N = static_cast<long>(y.size());
    if (N <= s_max) throw DataError("sequence length must exceed s_max");

    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(N);
    double r0 = 0.0;
    for (double v : y) r0 += (v - mean) * (v - mean);
    r0 /= static_cast<double>(N);
    if (r0 == 0.0) throw DataError("constant sequence: autocorrelation undefined");

    int best_lag = s_min;
    double best = -std::numeric_limits<double>::infinity();
    for (int tau = s_min; tau <= s_max; ++tau) {
        double r = 0.0;
        for (long t = 0; t + tau < N; ++t) r += (y[t + tau] - mean) * (y[t] - mean);
        r /= static_cast<double>(N);
        const double rho = r / r0;
        if (rho > best) {
            best = rho;
            best_lag = tau;
        }
    }
    return best_lag;
}

std::vector<long> simple_peaks(const std::vector<double>& y, int s_hat, double sigma) {
    const long N = static_cast<long>(y.size());
    const long hi_span = static_cast<long>(std::ceil(s_hat * (1.0 + sigma)));
    const long lo_span = static_cast<long>(std::floor(s_hat * (1.0 - sigma)));
    if (N < hi_span + 1) throw DataError("sequence too short for peak search window");

    auto argmax = [&](long lo, long hi) {  // inclusive bounds, ties break low
        long best = lo;
        for (long t = lo + 1; t <= hi; ++t)
            if (y[t] > y[best]) best = t;
        return best;
    };

    std::vector<long> peaks;
    peaks.push_back(argmax(0, hi_span));
    while (peaks.back() + hi_span <= N - 1) {
        const long lo = peaks.back() + lo_span;
        const long hi = peaks.back() + hi_span;
        peaks.push_back(argmax(std::max(lo, peaks.back() + 1), hi));
    }
    return peaks;
}

ReferenceSegment reference_segment(const std::vector<double>& y, const std::vector<long>& marks,
                                   int s_hat, double lambda) {
    const long lo = static_cast<long>(std::floor(-s_hat * lambda));
    const long hi = static_cast<long>(std::ceil(s_hat * lambda));
    const long N = static_cast<long>(y.size());
    const size_t w = static_cast<size_t>(hi - lo + 1);

    std::vector<long> usable;
    for (long mark : marks)
        if (mark + lo >= 0 && mark + hi < N) usable.push_back(mark);
    if (usable.empty()) step_error(4, "no mark admits a full reference window");

    std::vector<double> mean(w, 0.0);
    for (long mark : usable)
        for (size_t t = 0; t < w; ++t) mean[t] += y[static_cast<size_t>(mark + lo) + t];
    for (double& v : mean) v /= static_cast<double>(usable.size());

    long best_mark = usable.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (long mark : usable) {
        double score = 0.0;
        for (size_t t = 0; t < w; ++t) score += y[static_cast<size_t>(mark + lo) + t] * mean[t];
        if (score > best_score) {
            best_score = score;
            best_mark = mark;
        }
    }

    ReferenceSegment ref;
    ref.t_begin = lo;
    ref.center_mark = best_mark;
    ref.values.assign(y.begin() + (best_mark + lo), y.begin() + (best_mark + hi + 1));
    return ref;
}

long recenter_peak(const std::vector<double>& signal, long t0, int radius) {
    const long lo = t0 - radius;
    const long hi = t0 + radius;
    if (lo < 0 || hi >= static_cast<long>(signal.size()))
        throw DataError("recenter window outside the sequence");
    long best = lo;
    for (long t = lo + 1; t <= hi; ++t)
        if (signal[t] > signal[best]) best = t;
    return best;
}

CrossCorrelation cross_correlate(const std::vector<double>& x, const ReferenceSegment& u) {
    const long N = static_cast<long>(x.size());
    const long lo = u.t_begin;
    const long hi = u.t_begin + static_cast<long>(u.values.size()) - 1;
    const long tau_min = -lo;
    const long tau_max = N - 1 - hi;
    if (tau_max < tau_min) step_error(5, "input too short for a full reference overlap");

    CrossCorrelation c;
    c.tau_begin = tau_min;
    c.values.resize(static_cast<size_t>(tau_max - tau_min + 1));
    const size_t w = u.values.size();
    for (long tau = tau_min; tau <= tau_max; ++tau) {
        double sum = 0.0;
        const double* xs = x.data() + (tau + lo);
        for (size_t t = 0; t < w; ++t) sum += xs[t] * u.values[t];
        c.values[static_cast<size_t>(tau - tau_min)] = sum;
    }
    return c;
}

PeriodDetector::PeriodDetector(const TimeSeries& reference, const PeriodDetectorParams& params,
                               Preprocessing preprocessing)
    : params_(params), preprocessing_(preprocessing) {
    params_.validate();
    if (reference.dims() != 1)
        throw DataError("period detector expects a 1-dimensional reference signal");
    time_offset_ = params_.prefilter_half_length +
                   (preprocessing_ == Preprocessing::FirstDifference ? 1 : 0);

    std::vector<double> y;
    try {
        y = preprocess(reference);
    } catch (const DataError& e) {
        step_error(1, e.what());
    }

    try {
        s_hat_ = estimate_base_period(y, params_.s_min, params_.s_max);
    } catch (const DataError& e) {
        step_error(2, e.what());
    }

    try {
        step3_peaks_ = simple_peaks(y, s_hat_, params_.sigma);
    } catch (const DataError& e) {
        step_error(3, e.what());
    }

    u_ref_ = reference_segment(y, step3_peaks_, s_hat_, params_.lambda);

    if (params_.peak_adjust_radius > 0) {
        // Re-center the reference window on the corresponding peak of the
        // smoothed (but not differentiated) signal. A processed index t maps
        // to raw index t + time_offset_ and so to smoothed-raw index
        // t + time_offset_ - n.
        const std::vector<double> smoothed_raw =
            rolling_mean(reference.values[0], params_.prefilter_half_length);
        const long shift = time_offset_ - params_.prefilter_half_length;
        const long center = u_ref_.center_mark + shift;
        long adjusted = center;
        try {
            adjusted = recenter_peak(smoothed_raw, center, params_.peak_adjust_radius);
        } catch (const DataError&) {
            // Window clipped at the sequence edge: keep the original center.
        }
        const long new_mark = adjusted - shift;
        const long lo = u_ref_.t_begin;
        const long hi = lo + static_cast<long>(u_ref_.values.size()) - 1;
        if (new_mark != u_ref_.center_mark && new_mark + lo >= 0 &&
            new_mark + hi < static_cast<long>(y.size())) {
            u_ref_.center_mark = new_mark;
            u_ref_.values.assign(y.begin() + (new_mark + lo), y.begin() + (new_mark + hi + 1));
        }
    }
}

std::vector<double> PeriodDetector::preprocess(const TimeSeries& raw) const {
    if (raw.dims() != 1) throw DataError("period detector expects a 1-dimensional signal");
    raw.validate();
    std::vector<double> x = raw.values[0];
    if (preprocessing_ == Preprocessing::FirstDifference) {
        if (x.size() < 2) throw DataError("first difference needs at least 2 samples");
        for (size_t t = 0; t + 1 < x.size(); ++t) x[t] = x[t + 1] - x[t];
        x.pop_back();
    }
    return rolling_mean(x, params_.prefilter_half_length);
}

PeriodMarks PeriodDetector::detect(const TimeSeries& raw) const {
    std::vector<double> x;
    try {
        x = preprocess(raw);
    } catch (const DataError& e) {
        step_error(1, e.what());
    }
    const CrossCorrelation c = cross_correlate(x, u_ref_);

    std::vector<long> peaks;
    try {
        peaks = simple_peaks(c.values, s_hat_, params_.sigma);
    } catch (const DataError& e) {
        step_error(6, e.what());
    }

    PeriodMarks marks;
    marks.taus.reserve(peaks.size());
    for (long p : peaks) marks.taus.push_back(p + c.tau_begin + time_offset_);
    marks.validate(raw.length());
    return marks;
}

std::vector<long> PeriodDetector::reference_simple_peaks() const {
    std::vector<long> out;
    out.reserve(step3_peaks_.size());
    for (long p : step3_peaks_) out.push_back(p + time_offset_);
    return out;
}

PeriodMarks detect_periods(const TimeSeries& raw, const TimeSeries& reference,
                           const PeriodDetectorParams& params, Preprocessing preprocessing) {
    PeriodDetector detector(reference, params, preprocessing);
    return detector.detect(raw);
}

}  // namespace pcad
