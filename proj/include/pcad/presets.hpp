#pragma once

#include <optional>
#include <string>

#include "pcad/period_detector.hpp"
#include "pcad/trainer.hpp"

namespace pcad {

// Named configuration bundle covering the period detector, preprocessing,
// and training hyperparameters for one dataset family.
struct Preset {
    std::string name;
    PeriodDetectorParams detector;
    Preprocessing preprocessing = Preprocessing::None;
    bool fixed_period = false;    // arithmetic marks instead of the detector
    double mean_period = 0.0;     // s-bar, in post-resample time units
    int resample_factor = 1;      // applied to the raw signal before training
    std::string reference_feature;  // detector input feature (empty: first)
    Hyperparams hyper;
};

Preset preset_ecg();
Preset preset_scada();
Preset preset_wave();

std::optional<Preset> find_preset(const std::string& name);

}  // namespace pcad
