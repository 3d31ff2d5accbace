#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pcad/rng.hpp"
#include "pcad/time_series.hpp"

namespace pcad {

// Discrete Ornstein-Uhlenbeck process parameters: the process follows
// R_{t+1} = theta * Ntilde_t + (1 - theta) * R_t with Ntilde_t drawn from
// N(mu, (sigma/theta)^2), starting at r0.
struct OUParams {
    double mu = 0.0;
    double sigma = 1.0;
    double theta = 1.0;  // (0, 1]
    double r0 = 0.0;
};

// One smoothing step; gaussian_draw is a standard-normal variate from the
// caller's stream.
double ou_step(double r, const OUParams& params, double gaussian_draw);

// Synthetic wave: sum of four harmonics of base frequency f whose
// amplitudes, phases, clock rate and additive noise all drift as
// independent OU processes, plus i.i.d. white noise.
struct WaveSpec {
    double f = 0x1p-8;  // base frequency

    std::array<double, 4> amp_mean{1.0, 1.0, 1.0, 1.0};    // mu^{amp k}
    std::array<double, 4> phase_mean{0.0, 0.0, 0.0, 0.0};  // mu^{ph k}

    // Per-process sigma/theta (mu and r0 of the amplitude/phase processes
    // come from the means above).
    OUParams time_ou{1.0, 0x1p-8, 0x1p-8, 0.0};
    double amp_sigma = 0x1p-8;
    double amp_theta = 0x1p-8;
    double phase_sigma = 0x1p-10;
    double phase_theta = 0x1p-8;
    OUParams drift_ou{0.0, 0x1p-6, 0x1p-8, 0.0};  // R^{noise}, filtered noise
    double white_sigma = 0x1p-4;                  // N_t std deviation

    uint64_t seed = 0;
};

// Draws the wave shape: log2 amp_mean[k] ~ U(-1,1), phase_mean[k] ~ U(0,1).
WaveSpec sample_wave_spec(uint64_t seed);

TimeSeries generate_wave(const WaveSpec& spec, size_t length);

enum class AnomalyKind { Amplitude, Phase, Pulse, WhiteNoise };

const char* anomaly_kind_name(AnomalyKind kind);
AnomalyKind anomaly_kind_from_name(const std::string& name);

struct AnomalySpec {
    AnomalyKind kind = AnomalyKind::Pulse;
    int component = 1;       // harmonic k, amplitude/phase kinds only
    double magnitude = 0.0;  // a / phase shift / pulse amplitude p / noise factor alpha
    long start = 0;          // first anomalous sample
    long duration = 0;       // pulse width; 0 means "until the end"
};

// Draws an anomaly for one test segment: kind uniform over the four kinds,
// magnitudes per their laws (log2 a ~ U(1,2); shift ~ U(1/4,3/4);
// log2 p ~ U(2,4) with width in [2^5, 2^6); log2 alpha ~ U(2,6)).
// Non-pulse anomalies start at `start` and run to the end of the segment;
// pulses start uniformly inside the anomalous region.
AnomalySpec sample_anomaly(Rng& rng, long start, long segment_length);

// Generates `length` samples following the normal process, with the
// anomalous perturbation applied from anomaly.start on.
TimeSeries inject_anomaly(const WaveSpec& spec, const AnomalySpec& anomaly,
                          size_t length = 4096);

struct AnomalyRecord {
    int index = 0;  // segment index within the group
    AnomalySpec spec;
    long region_begin = 0;  // labeled anomalous region
    long region_end = 0;
};

struct WaveGroup {
    int index = 0;
    WaveSpec spec;
    TimeSeries normal;                 // 2^16 samples
    std::vector<TimeSeries> segments;  // 16 x 2^12 samples
    std::vector<AnomalyRecord> anomalies;
};

struct WaveDataset {
    uint64_t seed = 0;
    size_t normal_length = 0;
    size_t segment_length = 0;
    size_t anomaly_start = 0;
    std::vector<WaveGroup> groups;

    // First 7/8 of the normal wave (training region length).
    size_t train_length() const { return normal_length / 8 * 7; }
};

// Deterministic dataset assembly: per group one normal wave of 2^16 samples
// and 16 anomaly segments of 2^12 samples, anomalies entering at 2^11.
WaveDataset build_dataset(int group_count, uint64_t seed);

// CSV per signal plus a JSON manifest describing every segment.
void write_dataset(const WaveDataset& dataset, const std::string& dir);
WaveDataset load_dataset(const std::string& dir);

}  // namespace pcad
