#include "pcad/network.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "pcad/errors.hpp"
#include "pcad/rng.hpp"

namespace pcad {

namespace {

size_t product(const std::vector<size_t>& shape) {
    size_t p = 1;
    for (size_t s : shape) p *= s;
    return p;
}

// Pre-activation convolution with 'SAME' zero padding and the reversed-kernel
// index convention: pre[j][t] = b[j] + sum_{i,s} x[i][t + (S-1)/2 - s] * k[i][j][s].
void conv_pre(const double* x, int m_in, int t_len, const Tensor& kernels, const Tensor& bias,
              int m_out, double* pre) {
    const int S = static_cast<int>(kernels.shape[2]);
    const int c = (S - 1) / 2;
    for (int j = 0; j < m_out; ++j)
        for (int t = 0; t < t_len; ++t) pre[static_cast<size_t>(j) * t_len + t] = bias[j];
    for (int i = 0; i < m_in; ++i) {
        const double* xi = x + static_cast<size_t>(i) * t_len;
        for (int j = 0; j < m_out; ++j) {
            double* pj = pre + static_cast<size_t>(j) * t_len;
            const double* kij = kernels.data.data() +
                                (static_cast<size_t>(i) * static_cast<size_t>(m_out) + j) * S;
            for (int s = 0; s < S; ++s) {
                const double w = kij[s];
                if (w == 0.0) continue;
                const int shift = c - s;  // input index = t + shift
                const int t_lo = std::max(0, -shift);
                const int t_hi = std::min(t_len, t_len - shift);
                for (int t = t_lo; t < t_hi; ++t) pj[t] += w * xi[t + shift];
            }
        }
    }
}

}  // namespace

Tensor::Tensor(std::vector<size_t> s) : shape(std::move(s)) {
    data.assign(product(shape), 0.0);
}

size_t LayerSpec::output_size() const {
    switch (kind) {
        case LayerKind::Conv1d:
        case LayerKind::MaxPool:
            return static_cast<size_t>(m_out) * static_cast<size_t>(t_out);
        case LayerKind::Dense:
        case LayerKind::Output:
            return static_cast<size_t>(n_out);
    }
    return 0;
}

NetworkSpec layout(int d, int T, int n) {
    if (d < 1) throw ConfigError("layout: d must be >= 1");
    if (T < 2) throw ConfigError("layout: window length must be >= 2");
    if (n < 2) throw ConfigError("layout: need at least 2 classes");

    NetworkSpec spec;
    spec.d = d;
    spec.T = T;
    spec.n = n;
    spec.S0 = (T / 6 + 1) * 2 + 1;
    const int M1 = 6 * d;
    spec.R1 = T > 3 ? 3 : 1;  // pooling only when it leaves temporal structure
    spec.T2 = (T + spec.R1 - 1) / spec.R1;
    spec.S2 = (T / 12 + 1) * 2 + 1;
    spec.M3 = 3 * M1;
    spec.N3 = spec.M3 * spec.T2;
    spec.N4 = static_cast<int>(std::sqrt(static_cast<double>(spec.N3) * n));
    while ((spec.N4 + 1) * static_cast<long>(spec.N4 + 1) <= static_cast<long>(spec.N3) * n)
        ++spec.N4;  // exact integer floor of the geometric mean
    while (spec.N4 * static_cast<long>(spec.N4) > static_cast<long>(spec.N3) * n) --spec.N4;
    spec.N5 = n;

    LayerSpec conv0;
    conv0.kind = LayerKind::Conv1d;
    conv0.m_in = d;
    conv0.t_in = T;
    conv0.m_out = M1;
    conv0.t_out = T;
    conv0.kernel = spec.S0;

    LayerSpec pool1;
    pool1.kind = LayerKind::MaxPool;
    pool1.m_in = M1;
    pool1.t_in = T;
    pool1.m_out = M1;
    pool1.t_out = spec.T2;
    pool1.pool = spec.R1;

    LayerSpec conv2;
    conv2.kind = LayerKind::Conv1d;
    conv2.m_in = M1;
    conv2.t_in = spec.T2;
    conv2.m_out = spec.M3;
    conv2.t_out = spec.T2;
    conv2.kernel = spec.S2;

    LayerSpec fc3;
    fc3.kind = LayerKind::Dense;
    fc3.n_in = spec.N3;
    fc3.n_out = spec.N4;

    LayerSpec fc4;
    fc4.kind = LayerKind::Output;
    fc4.n_in = spec.N4;
    fc4.n_out = spec.N5;

    spec.layers = {conv0, pool1, conv2, fc3, fc4};
    return spec;
}

void Parameters::zero() {
    for (auto& l : layers) {
        std::fill(l.weights.data.begin(), l.weights.data.end(), 0.0);
        std::fill(l.bias.data.begin(), l.bias.data.end(), 0.0);
    }
}

size_t Parameters::count() const {
    size_t total = 0;
    for (const auto& l : layers) total += l.weights.size() + l.bias.size();
    return total;
}

Parameters zero_parameters(const NetworkSpec& spec) {
    Parameters p;
    p.layers.resize(spec.layers.size());
    for (size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        switch (ls.kind) {
            case LayerKind::Conv1d:
                p.layers[l].weights = Tensor({static_cast<size_t>(ls.m_in),
                                              static_cast<size_t>(ls.m_out),
                                              static_cast<size_t>(ls.kernel)});
                p.layers[l].bias = Tensor({static_cast<size_t>(ls.m_out)});
                break;
            case LayerKind::Dense:
            case LayerKind::Output:
                p.layers[l].weights = Tensor(
                    {static_cast<size_t>(ls.n_in), static_cast<size_t>(ls.n_out)});
                p.layers[l].bias = Tensor({static_cast<size_t>(ls.n_out)});
                break;
            case LayerKind::MaxPool:
                break;
        }
    }
    return p;
}

Parameters init_parameters(const NetworkSpec& spec, uint64_t seed) {
    Parameters p = zero_parameters(spec);
    Rng rng(seed);
    for (size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        if (!ls.has_params()) continue;
        double fan_in, fan_out;
        if (ls.kind == LayerKind::Conv1d) {
            fan_in = static_cast<double>(ls.m_in) * ls.kernel;
            fan_out = static_cast<double>(ls.m_out) * ls.kernel;
        } else {
            fan_in = ls.n_in;
            fan_out = ls.n_out;
        }
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& w : p.layers[l].weights.data) w = rng.uniform(-bound, bound);
        // biases stay zero
    }
    return p;
}

std::vector<double> conv1d_forward(const std::vector<double>& x, int m_in, int t,
                                   const Tensor& kernels, const Tensor& bias) {
    if (kernels.shape.size() != 3 || static_cast<int>(kernels.shape[0]) != m_in)
        throw ConfigError("conv1d: kernel shape mismatch");
    if (static_cast<size_t>(m_in) * t != x.size()) throw ConfigError("conv1d: input size mismatch");
    const int m_out = static_cast<int>(kernels.shape[1]);
    const int S = static_cast<int>(kernels.shape[2]);
    if (S % 2 == 0) throw ConfigError("conv1d: kernel size must be odd");
    if (bias.size() != static_cast<size_t>(m_out)) throw ConfigError("conv1d: bias size mismatch");
    std::vector<double> out(static_cast<size_t>(m_out) * t);
    conv_pre(x.data(), m_in, t, kernels, bias, m_out, out.data());
    for (double& v : out) v = std::tanh(v);
    return out;
}

std::vector<double> maxpool_forward(const std::vector<double>& x, int m, int t, int pool) {
    if (pool < 1) throw ConfigError("maxpool: pool size must be >= 1");
    if (static_cast<size_t>(m) * t != x.size()) throw ConfigError("maxpool: input size mismatch");
    const int t_out = (t + pool - 1) / pool;
    std::vector<double> out(static_cast<size_t>(m) * t_out);
    for (int j = 0; j < m; ++j) {
        const double* row = x.data() + static_cast<size_t>(j) * t;
        double* orow = out.data() + static_cast<size_t>(j) * t_out;
        for (int to = 0; to < t_out; ++to) {
            double best = row[to * pool];
            for (int r = 1; r < pool && to * pool + r < t; ++r)
                best = std::max(best, row[to * pool + r]);
            orow[to] = best;
        }
    }
    return out;
}

std::vector<double> dense_forward(const std::vector<double>& x, const Tensor& weights,
                                  const Tensor& bias, bool tanh_activation) {
    if (weights.shape.size() != 2 || weights.shape[0] != x.size())
        throw ConfigError("dense: weight shape mismatch");
    const size_t n_out = weights.shape[1];
    if (bias.size() != n_out) throw ConfigError("dense: bias size mismatch");
    std::vector<double> out(bias.data);
    for (size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* wrow = weights.data.data() + i * n_out;
        for (size_t j = 0; j < n_out; ++j) out[j] += xi * wrow[j];
    }
    if (tanh_activation)
        for (double& v : out) v = std::tanh(v);
    return out;
}

const std::vector<double>& forward(const Network& net, const double* input,
                                   ForwardCache& cache) {
    const auto& layers = net.spec.layers;
    cache.act.resize(layers.size() + 1);
    cache.act[0].assign(input, input + static_cast<size_t>(net.spec.d) * net.spec.T);

    for (size_t l = 0; l < layers.size(); ++l) {
        const LayerSpec& ls = layers[l];
        const std::vector<double>& in = cache.act[l];
        std::vector<double>& out = cache.act[l + 1];
        out.resize(ls.output_size());
        switch (ls.kind) {
            case LayerKind::Conv1d: {
                conv_pre(in.data(), ls.m_in, ls.t_in, net.params.layers[l].weights,
                         net.params.layers[l].bias, ls.m_out, out.data());
                for (double& v : out) v = std::tanh(v);
                break;
            }
            case LayerKind::MaxPool: {
                for (int j = 0; j < ls.m_in; ++j) {
                    const double* row = in.data() + static_cast<size_t>(j) * ls.t_in;
                    double* orow = out.data() + static_cast<size_t>(j) * ls.t_out;
                    for (int to = 0; to < ls.t_out; ++to) {
                        double best = row[to * ls.pool];
                        for (int r = 1; r < ls.pool && to * ls.pool + r < ls.t_in; ++r)
                            best = std::max(best, row[to * ls.pool + r]);
                        orow[to] = best;
                    }
                }
                break;
            }
            case LayerKind::Dense:
            case LayerKind::Output: {
                // Conv -> dense transition reuses the row-major layout as the
                // flattened vector, no copy needed.
                const Tensor& w = net.params.layers[l].weights;
                const Tensor& b = net.params.layers[l].bias;
                std::copy(b.data.begin(), b.data.end(), out.begin());
                const size_t n_out = static_cast<size_t>(ls.n_out);
                for (size_t i = 0; i < in.size(); ++i) {
                    const double xi = in[i];
                    if (xi == 0.0) continue;
                    const double* wrow = w.data.data() + i * n_out;
                    for (size_t j = 0; j < n_out; ++j) out[j] += xi * wrow[j];
                }
                if (ls.kind == LayerKind::Dense)
                    for (double& v : out) v = std::tanh(v);
                break;
            }
        }
#ifndef NDEBUG
        for (double v : out) assert(std::isfinite(v));
#endif
    }
    return cache.act.back();
}

int argmax_class(const std::vector<double>& logits) {
    int best = 0;
    for (int j = 1; j < static_cast<int>(logits.size()); ++j)
        if (logits[static_cast<size_t>(j)] > logits[static_cast<size_t>(best)]) best = j;
    return best;
}

int predict(const Network& net, const double* input, ForwardCache& cache) {
    return argmax_class(forward(net, input, cache));
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (size_t j = 0; j < logits.size(); ++j) {
        out[j] = std::exp(logits[j] - m);
        sum += out[j];
    }
    for (double& v : out) v /= sum;
    return out;
}

double weighted_cross_entropy(const std::vector<double>& logits, int label,
                              const std::vector<double>& weights) {
    if (label < 0 || static_cast<size_t>(label) >= logits.size())
        throw ConfigError("cross entropy: label out of range");
    if (weights.size() != logits.size())
        throw ConfigError("cross entropy: weight vector size mismatch");
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double y : logits) sum += std::exp(y - m);
    const double logsumexp = m + std::log(sum);
    return weights[static_cast<size_t>(label)] * (logsumexp - logits[static_cast<size_t>(label)]);
}

double backward(const Network& net, int label, const std::vector<double>& weights,
                ForwardCache& cache, Parameters& accum) {
    const auto& layers = net.spec.layers;
    const std::vector<double>& logits = cache.act.back();
    const double loss = weighted_cross_entropy(logits, label, weights);

    cache.grad.resize(layers.size() + 1);
    // d loss / d logits = w_z * (softmax - onehot(z))
    {
        std::vector<double>& g = cache.grad[layers.size()];
        g = softmax(logits);
        const double wz = weights[static_cast<size_t>(label)];
        for (double& v : g) v *= wz;
        g[static_cast<size_t>(label)] -= wz;
    }

    for (size_t l = layers.size(); l-- > 0;) {
        const LayerSpec& ls = layers[l];
        const std::vector<double>& in = cache.act[l];
        const std::vector<double>& out = cache.act[l + 1];
        std::vector<double>& gout = cache.grad[l + 1];
        std::vector<double>& gin = cache.grad[l];
        gin.assign(in.size(), 0.0);

        switch (ls.kind) {
            case LayerKind::Conv1d: {
                // tanh backprop into the pre-activation gradient, in place.
                for (size_t idx = 0; idx < gout.size(); ++idx)
                    gout[idx] *= 1.0 - out[idx] * out[idx];
                const Tensor& k = net.params.layers[l].weights;
                Tensor& gk = accum.layers[l].weights;
                Tensor& gb = accum.layers[l].bias;
                const int S = ls.kernel;
                const int c = (S - 1) / 2;
                for (int j = 0; j < ls.m_out; ++j) {
                    const double* gj = gout.data() + static_cast<size_t>(j) * ls.t_out;
                    double bsum = 0.0;
                    for (int t = 0; t < ls.t_out; ++t) bsum += gj[t];
                    gb[static_cast<size_t>(j)] += bsum;
                }
                for (int i = 0; i < ls.m_in; ++i) {
                    const double* xi = in.data() + static_cast<size_t>(i) * ls.t_in;
                    double* gxi = gin.data() + static_cast<size_t>(i) * ls.t_in;
                    for (int j = 0; j < ls.m_out; ++j) {
                        const double* gj = gout.data() + static_cast<size_t>(j) * ls.t_out;
                        const size_t base =
                            (static_cast<size_t>(i) * static_cast<size_t>(ls.m_out) + j) * S;
                        for (int s = 0; s < S; ++s) {
                            const int shift = c - s;
                            const int t_lo = std::max(0, -shift);
                            const int t_hi = std::min(ls.t_in, ls.t_in - shift);
                            double ksum = 0.0;
                            const double w = k.data[base + static_cast<size_t>(s)];
                            for (int t = t_lo; t < t_hi; ++t) {
                                ksum += gj[t] * xi[t + shift];
                                gxi[t + shift] += w * gj[t];
                            }
                            gk.data[base + static_cast<size_t>(s)] += ksum;
                        }
                    }
                }
                break;
            }
            case LayerKind::MaxPool: {
                // Route the gradient to the first maximal element per block.
                for (int j = 0; j < ls.m_in; ++j) {
                    const double* row = in.data() + static_cast<size_t>(j) * ls.t_in;
                    double* grow = gin.data() + static_cast<size_t>(j) * ls.t_in;
                    const double* gorow = gout.data() + static_cast<size_t>(j) * ls.t_out;
                    for (int to = 0; to < ls.t_out; ++to) {
                        int best = to * ls.pool;
                        for (int r = 1; r < ls.pool && to * ls.pool + r < ls.t_in; ++r)
                            if (row[to * ls.pool + r] > row[best]) best = to * ls.pool + r;
                        grow[best] += gorow[to];
                    }
                }
                break;
            }
            case LayerKind::Dense:
            case LayerKind::Output: {
                if (ls.kind == LayerKind::Dense)
                    for (size_t idx = 0; idx < gout.size(); ++idx)
                        gout[idx] *= 1.0 - out[idx] * out[idx];
                const Tensor& w = net.params.layers[l].weights;
                Tensor& gw = accum.layers[l].weights;
                Tensor& gb = accum.layers[l].bias;
                const size_t n_out = static_cast<size_t>(ls.n_out);
                for (size_t j = 0; j < n_out; ++j) gb[j] += gout[j];
                for (size_t i = 0; i < in.size(); ++i) {
                    const double xi = in[i];
                    const double* wrow = w.data.data() + i * n_out;
                    double* gwrow = gw.data.data() + i * n_out;
                    double dot = 0.0;
                    for (size_t j = 0; j < n_out; ++j) {
                        gwrow[j] += xi * gout[j];
                        dot += wrow[j] * gout[j];
                    }
                    gin[i] = dot;
                }
                break;
            }
        }
    }
    return loss;
}

}  // namespace pcad
