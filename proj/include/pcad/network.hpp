#pragma once

#include <cstdint>
#include <vector>

namespace pcad {

// Flat row-major tensor. Shapes used here: conv kernels [M_in, M_out, S],
// dense weights [N_in, N_out], biases [M_out] / [N_out].
struct Tensor {
    std::vector<size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<size_t> s);
    size_t size() const { return data.size(); }
    double& operator[](size_t i) { return data[i]; }
    double operator[](size_t i) const { return data[i]; }
};

enum class LayerKind { Conv1d, MaxPool, Dense, Output };

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    // Conv1d / MaxPool geometry (channels x time).
    int m_in = 0, t_in = 0, m_out = 0, t_out = 0;
    int kernel = 0;  // S (odd), Conv1d only
    int pool = 0;    // R, MaxPool only
    // Dense / Output geometry.
    int n_in = 0, n_out = 0;

    size_t output_size() const;
    bool has_params() const { return kind != LayerKind::MaxPool; }
};

// Classifier stack for a d-channel input window of length T and n classes:
//   conv(d -> 6d, S0) -> maxpool(R1) -> conv(6d -> 18d, S2)
//   -> dense(N3 -> N4, tanh) -> dense(N4 -> n, identity logits)
// with S0 = (floor(T/6)+1)*2+1, S2 = (floor(T/12)+1)*2+1,
// R1 = 3 when the pooled sequence stays non-degenerate (T > 3), else 1,
// N3 = 18d * ceil(T/R1), N4 = floor(sqrt(N3 * n)).
struct NetworkSpec {
    int d = 0, T = 0, n = 0;
    std::vector<LayerSpec> layers;

    // Table-style sizes, for reporting and tests.
    int S0 = 0, R1 = 0, T2 = 0, S2 = 0, M3 = 0, N3 = 0, N4 = 0;
    int N5 = 0;
};

NetworkSpec layout(int d, int T, int n);

struct LayerParams {
    Tensor weights;  // empty for pools
    Tensor bias;
};

struct Parameters {
    std::vector<LayerParams> layers;  // aligned with NetworkSpec::layers

    void zero();
    size_t count() const;
    // Visits every tensor in a fixed order.
    template <typename F>
    void for_each(F&& f) {
        for (auto& l : layers) {
            if (!l.weights.data.empty()) f(l.weights);
            if (!l.bias.data.empty()) f(l.bias);
        }
    }
};

// Fan-scaled uniform initialization, bounds +-sqrt(6/(fan_in+fan_out)),
// biases zero; deterministic per seed.
Parameters init_parameters(const NetworkSpec& spec, uint64_t seed);
Parameters zero_parameters(const NetworkSpec& spec);

struct Network {
    NetworkSpec spec;
    Parameters params;
};

// Per-layer activation storage reused across forward/backward calls.
struct ForwardCache {
    std::vector<std::vector<double>> act;  // act[0] = input, act[L] = logits
    std::vector<std::vector<double>> grad; // scratch for backward
};

// Runs the network on one input window (spec.d * spec.T values, row-major
// channel x time). Returns the logits (act.back()).
const std::vector<double>& forward(const Network& net, const double* input,
                                   ForwardCache& cache);

// Argmax class of the logits; ties break to the smallest index.
int predict(const Network& net, const double* input, ForwardCache& cache);
int argmax_class(const std::vector<double>& logits);

std::vector<double> softmax(const std::vector<double>& logits);

// h(y, z) = -w_z * log(softmax(y)_z), computed via a max-shifted logsumexp.
double weighted_cross_entropy(const std::vector<double>& logits, int label,
                              const std::vector<double>& weights);

// Reverse-mode gradients of the sample loss; adds into `accum` (shaped like
// the parameters). Returns the sample loss. `cache` must hold the forward
// activations of exactly this input.
double backward(const Network& net, int label, const std::vector<double>& weights,
                ForwardCache& cache, Parameters& accum);

// Standalone layer operations (forward only), used directly by tests and
// the distance baselines.
std::vector<double> conv1d_forward(const std::vector<double>& x, int m_in, int t,
                                   const Tensor& kernels, const Tensor& bias);
std::vector<double> maxpool_forward(const std::vector<double>& x, int m, int t, int pool);
std::vector<double> dense_forward(const std::vector<double>& x, const Tensor& weights,
                                  const Tensor& bias, bool tanh_activation);

}  // namespace pcad
