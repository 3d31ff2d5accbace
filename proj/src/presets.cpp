#include "pcad/presets.hpp"

namespace pcad {

Preset preset_ecg() {
    Preset p;
    p.name = "ecg";
    p.detector.prefilter_half_length = 10;
    p.detector.s_min = 500;
    p.detector.s_max = 2000;
    p.detector.sigma = 0.5;
    p.detector.lambda = 1.0 / 3.0;
    p.detector.peak_adjust_radius = 10;
    p.preprocessing = Preprocessing::FirstDifference;
    p.mean_period = 35.0;     // 700 ms at 50 samples per second
    p.resample_factor = 20;   // 1000 Hz -> 50 Hz
    p.reference_feature = "i";
    p.hyper.n0_star = 10;
    p.hyper.alpha = 0x1p-5;
    p.hyper.lr = 0.1;
    p.hyper.batch = BatchSchedule{800, 2, 4800};
    return p;
}

Preset preset_scada() {
    Preset p;
    p.name = "scada";
    p.fixed_period = true;  // 10-second polling interval
    p.mean_period = 10.0;
    p.hyper.n0_star = 10;
    p.hyper.alpha = 0x1p-3;
    p.hyper.lr = 0.01;
    p.hyper.batch = BatchSchedule{4, 0, 4};
    return p;
}

Preset preset_wave() {
    Preset p;
    p.name = "wave";
    p.detector.prefilter_half_length = 8;
    p.detector.s_min = 240;
    p.detector.s_max = 272;
    p.detector.sigma = 0.25;
    p.detector.lambda = 1.0 / 3.0;
    p.preprocessing = Preprocessing::None;
    p.mean_period = 256.0;
    p.hyper.n0_star = 10;
    p.hyper.alpha = 0x1p-6;
    p.hyper.lr = 0.01;
    p.hyper.batch = BatchSchedule{40, 2, 360};
    return p;
}

std::optional<Preset> find_preset(const std::string& name) {
    if (name == "ecg") return preset_ecg();
    if (name == "scada") return preset_scada();
    if (name == "wave") return preset_wave();
    return std::nullopt;
}

}  // namespace pcad
