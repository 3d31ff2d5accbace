#include "pcad/wave_generator.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pcad/csv.hpp"
#include "pcad/errors.hpp"

namespace pcad {

namespace {

// Stream tags for seed derivation. Every random stream used by the
// generator is keyed off the wave seed through these constants, so a
// dataset is a pure function of its master seed.
constexpr uint64_t kStreamTime = 0;
constexpr uint64_t kStreamAmp = 1;    // +k-1 for harmonic k
constexpr uint64_t kStreamPhase = 5;  // +k-1
constexpr uint64_t kStreamDrift = 9;
constexpr uint64_t kStreamWhite = 10;
constexpr uint64_t kStreamShape = 20;

constexpr uint64_t kTagGroup = 1000;
constexpr uint64_t kTagNormalWave = 1;
constexpr uint64_t kTagSegmentWave = 100;  // +segment index
constexpr uint64_t kTagAnomalies = 2;

constexpr double kTwoPi = 6.283185307179586476925286766559;

TimeSeries generate_internal(const WaveSpec& spec, size_t length, const AnomalySpec* anomaly) {
    Rng time_rng(derive_seed(spec.seed, kStreamTime));
    Rng drift_rng(derive_seed(spec.seed, kStreamDrift));
    Rng white_rng(derive_seed(spec.seed, kStreamWhite));
    std::array<Rng, 4> amp_rng{Rng(derive_seed(spec.seed, kStreamAmp + 0)),
                               Rng(derive_seed(spec.seed, kStreamAmp + 1)),
                               Rng(derive_seed(spec.seed, kStreamAmp + 2)),
                               Rng(derive_seed(spec.seed, kStreamAmp + 3))};
    std::array<Rng, 4> phase_rng{Rng(derive_seed(spec.seed, kStreamPhase + 0)),
                                 Rng(derive_seed(spec.seed, kStreamPhase + 1)),
                                 Rng(derive_seed(spec.seed, kStreamPhase + 2)),
                                 Rng(derive_seed(spec.seed, kStreamPhase + 3))};

    std::array<OUParams, 4> amp_params, phase_params;
    for (int k = 0; k < 4; ++k) {
        amp_params[k] = OUParams{spec.amp_mean[k], spec.amp_sigma, spec.amp_theta,
                                 spec.amp_mean[k]};
        phase_params[k] = OUParams{spec.phase_mean[k], spec.phase_sigma, spec.phase_theta,
                                   spec.phase_mean[k]};
    }

    double r_time = spec.time_ou.r0;
    double r_drift = spec.drift_ou.r0;
    std::array<double, 4> r_amp, r_phase;
    for (int k = 0; k < 4; ++k) {
        r_amp[k] = amp_params[k].r0;
        r_phase[k] = phase_params[k].r0;
    }

    TimeSeries out;
    out.feature_names = {"value"};
    out.values.resize(1);
    out.values[0].resize(length);

    double wave_time = 0.0;  // T_t = sum of R^{time} up to t-1
    for (size_t t = 0; t < length; ++t) {
        const bool anomalous =
            anomaly != nullptr && static_cast<long>(t) >= anomaly->start &&
            (anomaly->duration <= 0 ||
             static_cast<long>(t) < anomaly->start + anomaly->duration);

        double x = 0.0;
        for (int k = 0; k < 4; ++k) {
            double amp = r_amp[k];
            double phase = r_phase[k];
            if (anomalous && anomaly->kind == AnomalyKind::Amplitude &&
                anomaly->component == k + 1)
                amp += anomaly->magnitude;
            if (anomalous && anomaly->kind == AnomalyKind::Phase &&
                anomaly->component == k + 1)
                phase += anomaly->magnitude;
            x += amp * std::cos(kTwoPi * (spec.f * (k + 1) * wave_time + phase));
        }
        x += r_drift;
        double white = white_rng.gaussian(0.0, spec.white_sigma);
        if (anomalous && anomaly->kind == AnomalyKind::WhiteNoise) white *= anomaly->magnitude;
        x += white;
        if (anomalous && anomaly->kind == AnomalyKind::Pulse) x += anomaly->magnitude;
        out.values[0][t] = x;

        wave_time += r_time;
        r_time = ou_step(r_time, spec.time_ou, time_rng.gaussian());
        r_drift = ou_step(r_drift, spec.drift_ou, drift_rng.gaussian());
        for (int k = 0; k < 4; ++k) {
            r_amp[k] = ou_step(r_amp[k], amp_params[k], amp_rng[k].gaussian());
            r_phase[k] = ou_step(r_phase[k], phase_params[k], phase_rng[k].gaussian());
        }
    }
    return out;
}

}  // namespace

double ou_step(double r, const OUParams& params, double gaussian_draw) {
    const double n_tilde = params.mu + (params.sigma / params.theta) * gaussian_draw;
    return params.theta * n_tilde + (1.0 - params.theta) * r;
}

WaveSpec sample_wave_spec(uint64_t seed) {
    WaveSpec spec;
    spec.seed = seed;
    Rng rng(derive_seed(seed, kStreamShape));
    for (int k = 0; k < 4; ++k) spec.amp_mean[k] = std::exp2(rng.uniform(-1.0, 1.0));
    for (int k = 0; k < 4; ++k) spec.phase_mean[k] = rng.uniform(0.0, 1.0);
    return spec;
}

TimeSeries generate_wave(const WaveSpec& spec, size_t length) {
    if (length < 1) throw ConfigError("wave length must be >= 1");
    return generate_internal(spec, length, nullptr);
}

const char* anomaly_kind_name(AnomalyKind kind) {
    switch (kind) {
        case AnomalyKind::Amplitude: return "amplitude";
        case AnomalyKind::Phase: return "phase";
        case AnomalyKind::Pulse: return "pulse";
        case AnomalyKind::WhiteNoise: return "white_noise";
    }
    return "unknown";
}

AnomalyKind anomaly_kind_from_name(const std::string& name) {
    if (name == "amplitude") return AnomalyKind::Amplitude;
    if (name == "phase") return AnomalyKind::Phase;
    if (name == "pulse") return AnomalyKind::Pulse;
    if (name == "white_noise") return AnomalyKind::WhiteNoise;
    throw DataError("unknown anomaly kind: " + name);
}

AnomalySpec sample_anomaly(Rng& rng, long start, long segment_length) {
    AnomalySpec a;
    a.start = start;
    a.duration = 0;
    switch (rng.uniform_int(0, 3)) {
        case 0:
            a.kind = AnomalyKind::Amplitude;
            a.component = static_cast<int>(rng.uniform_int(1, 4));
            a.magnitude = std::exp2(rng.uniform(1.0, 2.0));
            break;
        case 1:
            a.kind = AnomalyKind::Phase;
            a.component = static_cast<int>(rng.uniform_int(1, 4));
            a.magnitude = rng.uniform(0.25, 0.75);
            break;
        case 2: {
            a.kind = AnomalyKind::Pulse;
            a.magnitude = std::exp2(rng.uniform(2.0, 4.0));
            a.duration = rng.uniform_int(32, 63);
            a.start = rng.uniform_int(start, segment_length - a.duration);
            break;
        }
        default:
            a.kind = AnomalyKind::WhiteNoise;
            a.magnitude = std::exp2(rng.uniform(2.0, 6.0));
            break;
    }
    return a;
}

TimeSeries inject_anomaly(const WaveSpec& spec, const AnomalySpec& anomaly, size_t length) {
    if (anomaly.start < 0 || anomaly.start >= static_cast<long>(length))
        throw ConfigError("anomaly start outside the segment");
    if (anomaly.kind == AnomalyKind::Amplitude || anomaly.kind == AnomalyKind::Phase) {
        if (anomaly.component < 1 || anomaly.component > 4)
            throw ConfigError("anomaly component must lie in {1,...,4}");
    }
    return generate_internal(spec, length, &anomaly);
}

WaveDataset build_dataset(int group_count, uint64_t seed) {
    if (group_count < 1) throw ConfigError("group count must be >= 1");
    WaveDataset ds;
    ds.seed = seed;
    ds.normal_length = size_t{1} << 16;
    ds.segment_length = size_t{1} << 12;
    ds.anomaly_start = size_t{1} << 11;
    ds.groups.resize(static_cast<size_t>(group_count));
    for (int g = 0; g < group_count; ++g) {
        WaveGroup& group = ds.groups[static_cast<size_t>(g)];
        group.index = g;
        const uint64_t group_seed = derive_seed(seed, kTagGroup + static_cast<uint64_t>(g));
        group.spec = sample_wave_spec(group_seed);
        group.spec.seed = derive_seed(group_seed, kTagNormalWave);
        group.normal = generate_wave(group.spec, ds.normal_length);

        Rng anomaly_rng(derive_seed(group_seed, kTagAnomalies));
        group.segments.reserve(16);
        group.anomalies.reserve(16);
        for (int i = 0; i < 16; ++i) {
            AnomalySpec a = sample_anomaly(anomaly_rng, static_cast<long>(ds.anomaly_start),
                                           static_cast<long>(ds.segment_length));
            WaveSpec seg_spec = group.spec;
            seg_spec.seed = derive_seed(group_seed, kTagSegmentWave + static_cast<uint64_t>(i));
            group.segments.push_back(inject_anomaly(seg_spec, a, ds.segment_length));

            AnomalyRecord rec;
            rec.index = i;
            rec.spec = a;
            rec.region_begin = a.start;
            rec.region_end = a.duration > 0 ? a.start + a.duration
                                            : static_cast<long>(ds.segment_length);
            group.anomalies.push_back(rec);
        }
    }
    return ds;
}

void write_dataset(const WaveDataset& dataset, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    nlohmann::json manifest;
    manifest["schema"] = "pcad.wave-dataset.v1";
    manifest["seed"] = dataset.seed;
    manifest["normal_length"] = dataset.normal_length;
    manifest["segment_length"] = dataset.segment_length;
    manifest["anomaly_start"] = dataset.anomaly_start;
    manifest["groups"] = nlohmann::json::array();

    char name[64];
    for (const auto& group : dataset.groups) {
        std::snprintf(name, sizeof(name), "group%03d", group.index);
        const fs::path gdir = fs::path(dir) / name;
        fs::create_directories(gdir);
        write_csv((gdir / "normal.csv").string(), group.normal);

        nlohmann::json jg;
        jg["group"] = group.index;
        jg["dir"] = name;
        jg["amp_mean"] = group.spec.amp_mean;
        jg["phase_mean"] = group.spec.phase_mean;
        jg["segments"] = nlohmann::json::array();
        for (size_t i = 0; i < group.segments.size(); ++i) {
            std::snprintf(name, sizeof(name), "segment%02d.csv", static_cast<int>(i));
            write_csv((gdir / name).string(), group.segments[i]);
            const AnomalyRecord& rec = group.anomalies[i];
            nlohmann::json js;
            js["segment"] = rec.index;
            js["file"] = name;
            js["kind"] = anomaly_kind_name(rec.spec.kind);
            js["component"] = rec.spec.component;
            js["magnitude"] = rec.spec.magnitude;
            js["start"] = rec.spec.start;
            js["duration"] = rec.spec.duration;
            js["region"] = {rec.region_begin, rec.region_end};
            jg["segments"].push_back(js);
        }
        manifest["groups"].push_back(jg);
    }

    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw DataError("cannot write dataset manifest under " + dir);
    out << manifest.dump(2) << '\n';
}

WaveDataset load_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw DataError("cannot open dataset manifest in " + dir);
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const std::exception& e) {
        throw DataError("malformed dataset manifest: " + std::string(e.what()));
    }

    WaveDataset ds;
    ds.seed = manifest.at("seed").get<uint64_t>();
    ds.normal_length = manifest.at("normal_length").get<size_t>();
    ds.segment_length = manifest.at("segment_length").get<size_t>();
    ds.anomaly_start = manifest.at("anomaly_start").get<size_t>();

    CsvOptions csv;
    for (const auto& jg : manifest.at("groups")) {
        WaveGroup group;
        group.index = jg.at("group").get<int>();
        jg.at("amp_mean").get_to(group.spec.amp_mean);
        jg.at("phase_mean").get_to(group.spec.phase_mean);
        const fs::path gdir = fs::path(dir) / jg.at("dir").get<std::string>();
        group.normal = load_csv((gdir / "normal.csv").string(), csv);
        for (const auto& js : jg.at("segments")) {
            group.segments.push_back(
                load_csv((gdir / js.at("file").get<std::string>()).string(), csv));
            AnomalyRecord rec;
            rec.index = js.at("segment").get<int>();
            rec.spec.kind = anomaly_kind_from_name(js.at("kind").get<std::string>());
            rec.spec.component = js.at("component").get<int>();
            rec.spec.magnitude = js.at("magnitude").get<double>();
            rec.spec.start = js.at("start").get<long>();
            rec.spec.duration = js.at("duration").get<long>();
            rec.region_begin = js.at("region")[0].get<long>();
            rec.region_end = js.at("region")[1].get<long>();
            group.anomalies.push_back(rec);
        }
        ds.groups.push_back(std::move(group));
    }
    return ds;
}

}  // namespace pcad
