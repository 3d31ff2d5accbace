#pragma once

#include "pcad/network.hpp"

namespace pcad {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moment estimates, shaped like the parameters.
struct AdamState {
    Parameters m;
    Parameters v;
    long step = 0;

    static AdamState for_network(const NetworkSpec& spec);
};

// One ADAM update; `grads` must already be averaged over the mini-batch.
void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               const AdamConfig& config);

}  // namespace pcad
