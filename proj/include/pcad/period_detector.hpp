#pragma once

#include <vector>

#include "pcad/segmentation.hpp"
#include "pcad/time_series.hpp"

namespace pcad {

struct PeriodDetectorParams {
    int prefilter_half_length = 0;  // n; rolling mean window 2n+1
    int s_min = 2;                  // minimum base period length
    int s_max = 2;                  // maximum base period length
    double sigma = 0.0;             // period-length deviation factor, [0,1)
    double lambda = 1.0 / 3.0;      // reference window half-length factor, (0, 1/2]
    int peak_adjust_radius = 0;     // peak recentering radius on the smoothed raw signal

    void validate() const;
};

enum class Preprocessing { None, FirstDifference };

// Step 1. Centered rolling mean: output length N-2n, out[t] covers raw
// indices [t, t+2n], i.e. output index t corresponds to raw index t+n.
std::vector<double> rolling_mean(const std::vector<double>& x, int n);

// Step 2. Lag in [s_min, s_max] maximizing the sample autocorrelation
// rho_tau = r_tau / r_0 with the biased estimator
// r_tau = (1/N) * sum_t (y_{t+tau} - mean)(y_t - mean). Ties break low.
int estimate_base_period(const std::vector<double>& y, int s_min, int s_max);

// Steps 3/6. Inductive peak detection: T_0 = argmax over [0, ceil(s(1+sigma))],
// T_{k+1} = argmax over [T_k + floor(s(1-sigma)), T_k + ceil(s(1+sigma))];
// stops when the search window no longer fits. Argmax ties break low.
std::vector<long> simple_peaks(const std::vector<double>& y, int s_hat, double sigma);

// Window over t in [floor(-s*lambda), ceil(s*lambda)] relative to a peak.
struct ReferenceSegment {
    std::vector<double> values;
    long t_begin = 0;     // time index of values[0] relative to the window center
    long center_mark = 0; // peak the window was extracted around
};

// Step 4. Extracts windows centered at each usable mark, computes the
// seasonal mean, returns the window with the largest inner product against
// that mean. Ties break to the smallest mark index.
ReferenceSegment reference_segment(const std::vector<double>& y, const std::vector<long>& marks,
                                   int s_hat, double lambda);

// ECG-specific adjustment: argmax of `signal` within [t0-radius, t0+radius].
long recenter_peak(const std::vector<double>& signal, long t0, int radius);

// Step 5. C_tau = sum_t x[tau + t] * u[t] over the reference support; only
// offsets where the full window overlaps x are produced (no zero padding).
struct CrossCorrelation {
    std::vector<double> values;
    long tau_begin = 0;  // values[i] corresponds to tau = tau_begin + i
};
CrossCorrelation cross_correlate(const std::vector<double>& x, const ReferenceSegment& u);

// Detector primed on a reference signal (Steps 1-4), applicable to any
// number of input signals (Steps 5-6). Both signals must be 1-dimensional.
// All marks returned by detect() are translated back to raw-signal time
// (prefilter offset n, differencing offset 1).
class PeriodDetector {
  public:
    PeriodDetector(const TimeSeries& reference, const PeriodDetectorParams& params,
                   Preprocessing preprocessing);

    PeriodMarks detect(const TimeSeries& raw) const;

    int base_period() const { return s_hat_; }
    const ReferenceSegment& reference() const { return u_ref_; }
    // Step-3 peaks on the reference signal, in raw time (for diagnostics and
    // the simple-vs-crosscorrelating comparison plots).
    std::vector<long> reference_simple_peaks() const;

  private:
    std::vector<double> preprocess(const TimeSeries& raw) const;

    PeriodDetectorParams params_;
    Preprocessing preprocessing_;
    long time_offset_ = 0;  // processed index -> raw index shift
    int s_hat_ = 0;
    ReferenceSegment u_ref_;
    std::vector<long> step3_peaks_;  // in processed time
};

// One-shot composition of all six steps.
PeriodMarks detect_periods(const TimeSeries& raw, const TimeSeries& reference,
                           const PeriodDetectorParams& params, Preprocessing preprocessing);

}  // namespace pcad
