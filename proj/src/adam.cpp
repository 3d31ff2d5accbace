#include "pcad/adam.hpp"

#include <cmath>

#include "pcad/errors.hpp"

namespace pcad {

AdamState AdamState::for_network(const NetworkSpec& spec) {
    AdamState state;
    state.m = zero_parameters(spec);
    state.v = zero_parameters(spec);
    state.step = 0;
    return state;
}

void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               const AdamConfig& config) {
    if (params.layers.size() != grads.layers.size())
        throw ConfigError("adam: gradient/parameter layer count mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));

    for (size_t l = 0; l < params.layers.size(); ++l) {
        auto update = [&](Tensor& p, const Tensor& g, Tensor& m, Tensor& v) {
            for (size_t i = 0; i < p.size(); ++i) {
                const double gi = g[i];
                m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * gi;
                v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * gi * gi;
                const double m_hat = m[i] / bc1;
                const double v_hat = v[i] / bc2;
                p[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
            }
        };
        update(params.layers[l].weights, grads.layers[l].weights, state.m.layers[l].weights,
               state.v.layers[l].weights);
        update(params.layers[l].bias, grads.layers[l].bias, state.m.layers[l].bias,
               state.v.layers[l].bias);
    }
}

}  // namespace pcad
