#include "pcad/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

constexpr uint64_t kTagRestart = 11;
constexpr uint64_t kTagN0 = 13;
constexpr uint64_t kTagNet = 17;
constexpr uint64_t kTagEpochs = 19;

}  // namespace

long ConfusionMatrix::row_sum(int i) const {
    long sum = 0;
    for (int j = 0; j < n; ++j) sum += at(i, j);
    return sum;
}

long ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0L);
}

double ConfusionMatrix::accuracy() const {
    const long all = total();
    if (all == 0) return 0.0;
    long diag = 0;
    for (int i = 0; i < n; ++i) diag += at(i, i);
    return static_cast<double>(diag) / static_cast<double>(all);
}

double ConfusionMatrix::min_class_accuracy() const {
    double worst = 1.0;
    for (int i = 0; i < n; ++i) {
        const long sum = row_sum(i);
        const double acc = sum > 0 ? static_cast<double>(at(i, i)) / static_cast<double>(sum)
                                   : 0.0;
        worst = std::min(worst, acc);
    }
    return worst;
}

int BatchSchedule::size_at(int epoch) const {
    if (growth_epochs <= 0) return std::min(initial, max);
    const int doublings = epoch / growth_epochs;
    long size = initial;
    for (int i = 0; i < doublings && size < max; ++i) size *= 2;
    return static_cast<int>(std::min<long>(size, max));
}

void Hyperparams::validate() const {
    if (n0_star <= 3 || n0_star % 2 != 0)
        throw ConfigError("n0* must be an even number greater than 3");
    if (alpha < 0.0 || alpha >= 1.0) throw ConfigError("alpha must lie in [0, 1)");
    if (lr <= 0.0) throw ConfigError("learning rate must be positive");
    if (batch.initial < 1 || batch.max < batch.initial)
        throw ConfigError("invalid batch schedule");
    if (patience < 1) throw ConfigError("patience must be >= 1");
}

EpochResult train_epoch(Network& net, AdamState& adam, const AdamConfig& adam_config,
                        const DataSet& train, const std::vector<double>& weights,
                        int batch_size, Rng& rng, int epoch_index) {
    if (train.empty()) throw DataError("training set is empty");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");

    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), size_t{0});
    rng.shuffle(order);

    EpochResult result;
    result.confusion = ConfusionMatrix(net.spec.n, epoch_index);

    ForwardCache cache;
    Parameters grads = zero_parameters(net.spec);
    double loss_sum = 0.0;

    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(batch_size)) {
        const size_t end = std::min(order.size(), begin + static_cast<size_t>(batch_size));
        grads.zero();
        for (size_t idx = begin; idx < end; ++idx) {
            const LabeledSegment& seg = train.segments[order[idx]];
            const std::vector<double>& logits = forward(net, seg.data.data(), cache);
            ++result.confusion.at(seg.label, argmax_class(logits));
            loss_sum += backward(net, seg.label, weights, cache, grads);
        }
        const double scale = 1.0 / static_cast<double>(end - begin);
        grads.for_each([scale](Tensor& t) {
            for (double& v : t.data) v *= scale;
        });
        adam_step(net.params, grads, adam, adam_config);
    }
    result.train_loss = loss_sum / static_cast<double>(train.size());
    return result;
}

EvalResult evaluate(const Network& net, const DataSet& data,
                    const std::vector<double>& weights) {
    if (data.empty()) throw DataError("evaluation set is empty");
    ForwardCache cache;
    double loss_sum = 0.0;
    size_t correct = 0;
    for (const LabeledSegment& seg : data.segments) {
        const std::vector<double>& logits = forward(net, seg.data.data(), cache);
        loss_sum += weighted_cross_entropy(logits, seg.label, weights);
        if (argmax_class(logits) == seg.label) ++correct;
    }
    EvalResult r;
    r.loss = loss_sum / static_cast<double>(data.size());
    r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return r;
}

bool training_stopped(const std::vector<double>& validation_losses, int patience) {
    const long n = static_cast<long>(validation_losses.size());
    if (n <= patience) return false;  // nothing precedes the trailing window yet
    double best_before = std::numeric_limits<double>::infinity();
    for (long k = 0; k < n - patience; ++k)
        best_before = std::min(best_before, validation_losses[static_cast<size_t>(k)]);
    for (long k = n - patience; k < n; ++k)
        if (validation_losses[static_cast<size_t>(k)] < best_before) return false;
    return true;
}

std::vector<double> overall_confusion(const std::vector<double>& train_losses,
                                      const std::vector<ConfusionMatrix>& confusions) {
    const size_t epochs = train_losses.size();
    if (epochs < 2 || confusions.size() != epochs)
        throw ConfigError("overall confusion needs at least 2 epochs of matching records");
    const int n = confusions[0].n;
    std::vector<double> v_bar(static_cast<size_t>(n) * n, 0.0);
    for (size_t k = 1; k < epochs; ++k) {
        const double weight = train_losses[k - 1] - train_losses[k];
        for (size_t idx = 0; idx < v_bar.size(); ++idx)
            v_bar[idx] += weight * static_cast<double>(confusions[k].counts[idx]);
    }
    return v_bar;
}

bool reclustering_satisfied(const ConfusionMatrix& last, double alpha) {
    for (int i = 0; i < last.n; ++i)
        if (last.row_sum(i) == 0)
            throw DataError("class " + std::to_string(i) +
                            " received no training inputs in the last epoch");
    return last.min_class_accuracy() >= 1.0 - alpha;
}

std::pair<int, int> select_merge(const std::vector<double>& v_bar, int n) {
    if (n < 2 || v_bar.size() != static_cast<size_t>(n) * n)
        throw ConfigError("select_merge: bad matrix");
    auto at = [&](int i, int j) { return v_bar[static_cast<size_t>(i) * n + j]; };

    int i_drop = -1;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += at(i, j);
        if (sum <= 0.0) throw DataError("select_merge: degenerate row " + std::to_string(i));
        const double acc = at(i, i) / sum;
        if (acc < worst) {
            worst = acc;
            i_drop = i;
        }
    }

    int j_into = -1;
    double most = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        if (j == i_drop) continue;
        if (at(i_drop, j) > most) {
            most = at(i_drop, j);
            j_into = j;
        }
    }
    return {i_drop, j_into};
}

std::vector<int> apply_merge(std::vector<int> label_map, int i_drop, int j_into, int n) {
    if (i_drop == j_into || i_drop < 0 || j_into < 0 || i_drop >= n || j_into >= n)
        throw ConfigError("apply_merge: invalid class pair");
    for (int& v : label_map) {
        if (v == i_drop)
            v = j_into;
        else if (v == n - 1 && i_drop != n - 1)
            v = i_drop;
    }
    validate_label_map(label_map);
    if (label_map_classes(label_map) != n - 1)
        throw ConfigError("apply_merge: class count did not decrease by 1");
    return label_map;
}

std::vector<double> class_weights(const DataSet& data, int n) {
    std::vector<long> counts(static_cast<size_t>(n), 0);
    for (const auto& seg : data.segments) {
        if (seg.label < 0 || seg.label >= n) throw DataError("segment label out of range");
        ++counts[static_cast<size_t>(seg.label)];
    }
    std::vector<double> weights(static_cast<size_t>(n));
    double sum = 0.0;
    for (int z = 0; z < n; ++z) {
        if (counts[static_cast<size_t>(z)] == 0)
            throw DataError("class " + std::to_string(z) + " has no training examples");
        weights[static_cast<size_t>(z)] = 1.0 / static_cast<double>(counts[static_cast<size_t>(z)]);
        sum += weights[static_cast<size_t>(z)];
    }
    const double scale = static_cast<double>(n) / sum;  // mean weight 1
    for (double& w : weights) w *= scale;
    return weights;
}

TrainResult run_training(const DataProvider& provider, const Hyperparams& hyper) {
    hyper.validate();

    TrainResult best;
    TrainRecord record;
    double alpha = hyper.alpha;

    for (int restart = 0; restart <= hyper.max_alpha_restarts; ++restart) {
        record = TrainRecord{};
        record.alpha_used = alpha;
        record.restarts = restart;
        int n_best = 0;
        bool have_net = false;
        TrainResult stored;

        const uint64_t restart_seed =
            derive_seed(derive_seed(hyper.seed, kTagRestart), static_cast<uint64_t>(restart));

        for (int n0 = hyper.n0_star; n0 >= 4; n0 -= 2) {
            if (n0 <= n_best) break;  // early exit: cannot beat the stored net

            SegmentedSplit split = provider(n0);
            if (split.train.empty() || split.val.empty())
                throw DataError("data provider returned an empty train or validation set");

            std::vector<int> label_map(static_cast<size_t>(n0));
            std::iota(label_map.begin(), label_map.end(), 0);
            int n = n0;
            int epochs_in_n0 = 0;
            const uint64_t n0_seed =
                derive_seed(derive_seed(restart_seed, kTagN0), static_cast<uint64_t>(n0));

            while (true) {
                relabel(split.train.segments, label_map);
                relabel(split.val.segments, label_map);

                NetRunRecord run;
                run.n0 = n0;
                run.n = n;
                run.label_map = label_map;
                run.first_epoch = epochs_in_n0;

                const uint64_t net_seed =
                    derive_seed(derive_seed(n0_seed, kTagNet), static_cast<uint64_t>(n));
                Network net;
                net.spec = layout(split.train.d, split.train.T, n);
                net.params = init_parameters(net.spec, net_seed);
                AdamState adam = AdamState::for_network(net.spec);
                AdamConfig adam_config;
                adam_config.lr = hyper.lr;

                const std::vector<double> weights = class_weights(split.train, n);
                Rng epoch_rng(derive_seed(net_seed, kTagEpochs));

                for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
                    EpochResult er =
                        train_epoch(net, adam, adam_config, split.train, weights,
                                    hyper.batch.size_at(epoch), epoch_rng, epoch);
                    run.train_loss.push_back(er.train_loss);
                    run.confusions.push_back(std::move(er.confusion));
                    run.val_loss.push_back(evaluate(net, split.val, weights).loss);
                    if (training_stopped(run.val_loss, hyper.patience)) break;
                }
                epochs_in_n0 += run.epochs();

                const bool satisfied = reclustering_satisfied(run.confusions.back(), alpha);
                if (satisfied) {
                    run.stored = true;
                    run.final_train_accuracy = evaluate(net, split.train, weights).accuracy;
                    run.final_val_accuracy = evaluate(net, split.val, weights).accuracy;
                    stored.net = std::move(net);
                    stored.label_map = label_map;
                    stored.n0 = n0;
                    stored.n = n;
                    stored.train_accuracy = run.final_train_accuracy;
                    stored.validation_accuracy = run.final_val_accuracy;
                    n_best = n;
                    have_net = true;
                    record.runs.push_back(std::move(run));
                    break;
                }

                const bool can_merge = !(n - 1 < 3 || n - 1 <= n_best);
                if (can_merge) {
                    const std::vector<double> v_bar =
                        overall_confusion(run.train_loss, run.confusions);
                    const auto [i_drop, j_into] = select_merge(v_bar, n);
                    label_map = apply_merge(std::move(label_map), i_drop, j_into, n);
                    --n;
                    MergeEvent me;
                    me.n0 = n0;
                    me.at_epoch = epochs_in_n0;
                    me.dropped = i_drop;
                    me.merged_into = j_into;
                    me.new_label_map = label_map;
                    record.merges.push_back(std::move(me));
                }
                record.runs.push_back(std::move(run));
                if (!can_merge) break;
            }
        }

        if (have_net) {
            best = std::move(stored);
            best.record = std::move(record);
            return best;
        }
        alpha = std::min(2.0 * alpha, 0.999);
    }

    throw TrainingFailure("no network satisfied the reclustering criterion after " +
                          std::to_string(hyper.max_alpha_restarts) + " alpha escalations");
}

}  // namespace pcad
