#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qic/adam.hpp"
#include "qic/autoencoder.hpp"
#include "qic/dataset.hpp"
#include "qic/frqi.hpp"
#include "qic/mcqi.hpp"
#include "qic/parallel.hpp"
#include "qic/rng.hpp"
#include "qic/vqc.hpp"

namespace qic {

enum class ClassifierKind { vqc, ac };
enum class EncodingKind { frqi, mcqi };

inline const char* classifier_kind_name(ClassifierKind k) {
    return k == ClassifierKind::vqc ? "vqc" : "ac";
}

inline const char* encoding_kind_name(EncodingKind e) {
    return e == EncodingKind::frqi ? "frqi" : "mcqi";
}

/// Trained parameter vector plus the decision rule around the readout value.
struct ClassifierParams {
    std::vector<double> values;
    double split = 0.0;
    std::optional<std::pair<double, double>> multi_bounds;
    std::optional<double> ac_threshold;
};

struct TrainConfig {
    ClassifierKind classifier = ClassifierKind::vqc;
    int layers = 0;        ///< 0 = classifier default (VQC 5, AC 1)
    int epochs = 0;        ///< 0 = auto (250; 100 for AC on MNIST with n < 3)
    std::uint64_t seed = 0;
    AdamHyper adam;
    int threads = 1;

    bool operator==(const TrainConfig&) const = default;
};

struct TrainedModel {
    ClassifierKind classifier = ClassifierKind::vqc;
    EncodingKind encoding = EncodingKind::frqi;
    LabelKind label_kind = LabelKind::binary;
    AnsatzSpec ansatz;
    int readout = 0;       ///< VQC readout qubit; doubles as the AC latent qubit
    ClassifierParams params;
};

struct TrainHistory {
    std::vector<double> loss;
    TrainedModel model;
    double train_accuracy = 0.0;
    double train_accuracy_default = 0.0;
    double validation_accuracy = 0.0;
    double validation_accuracy_default = 0.0;
};

inline EncodingKind encoding_of(const LabeledImageSet& set) {
    return set.is_color() ? EncodingKind::mcqi : EncodingKind::frqi;
}

inline int encoded_qubits(EncodingKind e, int n) {
    return e == EncodingKind::frqi ? 2 * n + 1 : 2 * n + 3;
}

/// FRQI measures the color qubit, MCQI the value qubit. The same qubit is
/// the autoencoder's latent qubit.
inline int readout_qubit(EncodingKind e, int n) {
    return e == EncodingKind::frqi ? 2 * n : 2 * n + 2;
}

inline std::vector<Statevector> encode_set(const LabeledImageSet& set) {
    std::vector<Statevector> states;
    states.reserve(set.size());
    if (set.is_color())
        for (const auto& img : set.color) states.push_back(mcqi_encode(mcqi_angles(img)));
    else
        for (const auto& img : set.gray) states.push_back(frqi_encode(frqi_angles(img)));
    return states;
}

/// Regression target for a label: binary labels are already +-1, three-class
/// labels 0/1/2 map to -1/0/+1.
inline double vqc_target(int label, LabelKind kind) {
    if (kind == LabelKind::binary) {
        if (label != -1 && label != 1)
            throw std::invalid_argument("vqc_target: binary label must be -1 or +1");
        return static_cast<double>(label);
    }
    if (label < 0 || label > 2)
        throw std::invalid_argument("vqc_target: three-class label must be 0, 1, or 2");
    return static_cast<double>(label - 1);
}

inline std::uint64_t validation_seed(std::uint64_t train_seed) {
    return train_seed + validation_seed_offset;
}

/// Initial ansatz angles: i.i.d. uniform on [0, 2*pi).
inline std::vector<double> init_params(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> params(count);
    for (double& p : params) p = 2.0 * std::numbers::pi * rand_unit(rng);
    return params;
}

inline int resolve_layers(const TrainConfig& cfg) {
    if (cfg.layers > 0) return cfg.layers;
    return cfg.classifier == ClassifierKind::vqc ? 5 : 1;
}

inline int resolve_epochs(const TrainConfig& cfg, const DatasetMeta& meta) {
    if (cfg.epochs > 0) return cfg.epochs;
    const bool mnist_like =
        meta.kind == DatasetKind::mnist || meta.kind == DatasetKind::mnist_corrupted;
    if (cfg.classifier == ClassifierKind::ac && mnist_like && meta.n < 3) return 100;
    return 250;
}

inline std::vector<double> vqc_scores(const std::vector<Statevector>& states,
                                      const CircuitProgram& ansatz,
                                      std::span<const double> params, int readout,
                                      int threads = 1) {
    std::vector<double> ez(states.size());
    parallel_for(states.size(), threads,
                 [&](std::size_t i) { ez[i] = vqc_ez(states[i], ansatz, params, readout); });
    return ez;
}

inline std::vector<double> ac_scores(const std::vector<Statevector>& states,
                                     const CircuitProgram& ansatz,
                                     std::span<const double> params,
                                     const std::vector<int>& trash, int threads = 1) {
    std::vector<double> fid(states.size());
    parallel_for(states.size(), threads,
                 [&](std::size_t i) { fid[i] = ac_fidelity(states[i], ansatz, params, trash); });
    return fid;
}

inline double split_accuracy(const std::vector<double>& ez, const std::vector<int>& labels,
                             double split) {
    if (ez.empty() || ez.size() != labels.size())
        throw std::invalid_argument("split_accuracy: bad inputs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ez.size(); ++i)
        if (vqc_classify(ez[i], split) == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ez.size());
}

inline double bounds_accuracy(const std::vector<double>& ez, const std::vector<int>& labels,
                              double b1, double b2) {
    if (ez.empty() || ez.size() != labels.size())
        throw std::invalid_argument("bounds_accuracy: bad inputs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ez.size(); ++i)
        if (vqc_classify_multi(ez[i], b1, b2) == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ez.size());
}

inline double threshold_accuracy(const std::vector<double>& fidelities,
                                 const std::vector<int>& labels, double threshold) {
    if (fidelities.empty() || fidelities.size() != labels.size())
        throw std::invalid_argument("threshold_accuracy: bad inputs");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < fidelities.size(); ++i)
        if (ac_classify(fidelities[i], threshold) == labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(fidelities.size());
}

/// Grid-search the binary split over 101 points in [-1, 1]; ties keep the
/// lowest split.
inline double calibrate_split(const std::vector<double>& ez, const std::vector<int>& labels) {
    double best_split = -1.0;
    double best_acc = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double s = -1.0 + 0.02 * i;
        const double acc = split_accuracy(ez, labels, s);
        if (acc > best_acc) {
            best_acc = acc;
            best_split = s;
        }
    }
    return best_split;
}

/// Grid-search ascending bound pairs over the interior grid points of
/// [-1, 1]; ties keep the first pair in (b1, b2) scan order.
inline std::pair<double, double> calibrate_bounds(const std::vector<double>& ez,
                                                  const std::vector<int>& labels) {
    std::pair<double, double> best{-1.0 / 3.0, 1.0 / 3.0};
    double best_acc = -1.0;
    for (int i = 1; i < 100; ++i) {
        const double b1 = -1.0 + 0.02 * i;
        for (int j = i + 1; j < 100; ++j) {
            const double b2 = -1.0 + 0.02 * j;
            const double acc = bounds_accuracy(ez, labels, b1, b2);
            if (acc > best_acc) {
                best_acc = acc;
                best = {b1, b2};
            }
        }
    }
    return best;
}

/// Grid-search the fidelity threshold over 101 points in [0, 1]; ties keep
/// the lowest threshold.
inline double calibrate_threshold(const std::vector<double>& fidelities,
                                  const std::vector<int>& labels) {
    double best_threshold = 0.0;
    double best_acc = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double thr = 0.01 * i;
        const double acc = threshold_accuracy(fidelities, labels, thr);
        if (acc > best_acc) {
            best_acc = acc;
            best_threshold = thr;
        }
    }
    return best_threshold;
}

namespace detail {

/// Mean loss and mean gradient over the given sample indices, evaluated
/// concurrently per sample and reduced in index order.
template <typename SampleFn>
std::pair<double, std::vector<double>> batch_loss_gradient(std::size_t batch_size,
                                                           std::size_t num_params,
                                                           int threads, SampleFn&& sample) {
    std::vector<double> losses(batch_size);
    std::vector<std::vector<double>> grads(batch_size);
    parallel_for(batch_size, threads, [&](std::size_t i) {
        auto [loss, grad] = sample(i);
        losses[i] = loss;
        grads[i] = std::move(grad);
    });
    double loss_sum = 0.0;
    std::vector<double> grad_mean(num_params, 0.0);
    for (std::size_t i = 0; i < batch_size; ++i) {
        loss_sum += losses[i];
        for (std::size_t p = 0; p < num_params; ++p) grad_mean[p] += grads[i][p];
    }
    const double inv = 1.0 / static_cast<double>(batch_size);
    for (double& g : grad_mean) g *= inv;
    return {loss_sum * inv, std::move(grad_mean)};
}

}  // namespace detail

/// Full-batch Adam training. One step per epoch over the mean loss of the
/// training set (AC: its positive-class subset), then the decision rule is
/// calibrated on the training set. Accuracy is reported for both the
/// default rule (split 0, bounds +-1/3, threshold 0.5) and the calibrated
/// one, on the training and validation sets.
inline TrainHistory train(const LabeledImageSet& train_set, const LabeledImageSet& validation_set,
                          const TrainConfig& cfg) {
    if (train_set.size() == 0) throw std::invalid_argument("train: empty training set");
    if (validation_set.size() == 0) throw std::invalid_argument("train: empty validation set");
    if (train_set.label_kind != validation_set.label_kind ||
        train_set.is_color() != validation_set.is_color())
        throw std::invalid_argument("train: training and validation sets disagree");
    if (cfg.classifier == ClassifierKind::ac && train_set.label_kind != LabelKind::binary)
        throw std::invalid_argument("train: the autoencoder handles binary labels only");

    const EncodingKind encoding = encoding_of(train_set);
    const int n = train_set.meta.n;
    const AnsatzSpec spec{encoded_qubits(encoding, n), resolve_layers(cfg)};
    const int readout = readout_qubit(encoding, n);
    const int epochs = resolve_epochs(cfg, train_set.meta);
    const CircuitProgram ansatz = build_ansatz(spec);

    const std::vector<Statevector> states = encode_set(train_set);
    const std::vector<Statevector> valid_states = encode_set(validation_set);

    std::vector<double> params = init_params(spec.num_params(), cfg.seed);
    AdamState adam(params.size(), cfg.adam);

    TrainHistory history;
    history.loss.reserve(epochs);

    const bool is_vqc = cfg.classifier == ClassifierKind::vqc;
    std::vector<double> targets;
    std::vector<std::size_t> positives;
    std::vector<int> trash;
    if (is_vqc) {
        targets.reserve(train_set.size());
        for (int label : train_set.labels)
            targets.push_back(vqc_target(label, train_set.label_kind));
    } else {
        for (std::size_t i = 0; i < train_set.size(); ++i)
            if (train_set.labels[i] == +1) positives.push_back(i);
        if (positives.empty())
            throw std::invalid_argument("train: autoencoder needs positive samples");
        for (int q = 0; q < spec.num_qubits; ++q)
            if (q != readout) trash.push_back(q);
    }

    for (int epoch = 0; epoch < epochs; ++epoch) {
        auto [loss, grad] =
            is_vqc ? detail::batch_loss_gradient(
                         states.size(), params.size(), cfg.threads,
                         [&](std::size_t i) {
                             return vqc_sample_loss_gradient(states[i], targets[i], ansatz,
                                                             params, readout);
                         })
                   : detail::batch_loss_gradient(
                         positives.size(), params.size(), cfg.threads, [&](std::size_t i) {
                             return ac_sample_loss_gradient(states[positives[i]], ansatz,
                                                            params, trash);
                         });
        if (!std::isfinite(loss))
            throw std::runtime_error("train: loss became non-finite at epoch " +
                                     std::to_string(epoch));
        history.loss.push_back(loss);
        adam_step(params, grad, adam);
    }

    TrainedModel model{cfg.classifier, encoding, train_set.label_kind, spec, readout, {}};
    model.params.values = std::move(params);

    if (is_vqc) {
        const auto train_ez = vqc_scores(states, ansatz, model.params.values, readout,
                                         cfg.threads);
        const auto valid_ez = vqc_scores(valid_states, ansatz, model.params.values, readout,
                                         cfg.threads);
        if (train_set.label_kind == LabelKind::binary) {
            history.train_accuracy_default = split_accuracy(train_ez, train_set.labels, 0.0);
            history.validation_accuracy_default =
                split_accuracy(valid_ez, validation_set.labels, 0.0);
            model.params.split = calibrate_split(train_ez, train_set.labels);
            history.train_accuracy =
                split_accuracy(train_ez, train_set.labels, model.params.split);
            history.validation_accuracy =
                split_accuracy(valid_ez, validation_set.labels, model.params.split);
        } else {
            history.train_accuracy_default =
                bounds_accuracy(train_ez, train_set.labels, -1.0 / 3.0, 1.0 / 3.0);
            history.validation_accuracy_default =
                bounds_accuracy(valid_ez, validation_set.labels, -1.0 / 3.0, 1.0 / 3.0);
            model.params.multi_bounds = calibrate_bounds(train_ez, train_set.labels);
            const auto [b1, b2] = *model.params.multi_bounds;
            history.train_accuracy = bounds_accuracy(train_ez, train_set.labels, b1, b2);
            history.validation_accuracy =
                bounds_accuracy(valid_ez, validation_set.labels, b1, b2);
        }
    } else {
        const auto train_fid =
            ac_scores(states, ansatz, model.params.values, trash, cfg.threads);
        const auto valid_fid =
            ac_scores(valid_states, ansatz, model.params.values, trash, cfg.threads);
        history.train_accuracy_default = threshold_accuracy(train_fid, train_set.labels, 0.5);
        history.validation_accuracy_default =
            threshold_accuracy(valid_fid, validation_set.labels, 0.5);
        model.params.ac_threshold = calibrate_threshold(train_fid, train_set.labels);
        history.train_accuracy =
            threshold_accuracy(train_fid, train_set.labels, *model.params.ac_threshold);
        history.validation_accuracy =
            threshold_accuracy(valid_fid, validation_set.labels, *model.params.ac_threshold);
    }

    history.model = std::move(model);
    return history;
}

/// Accuracy of a trained model on a fresh set, using its calibrated rule.
inline double evaluate(const TrainedModel& model, const LabeledImageSet& set, int threads = 1) {
    if (set.size() == 0) throw std::invalid_argument("evaluate: empty set");
    if (set.label_kind != model.label_kind || encoding_of(set) != model.encoding)
        throw std::invalid_argument("evaluate: set does not match the model");
    const CircuitProgram ansatz = build_ansatz(model.ansatz);
    const auto states = encode_set(set);
    if (model.classifier == ClassifierKind::vqc) {
        const auto ez = vqc_scores(states, ansatz, model.params.values, model.readout, threads);
        if (model.label_kind == LabelKind::binary)
            return split_accuracy(ez, set.labels, model.params.split);
        const auto [b1, b2] = model.params.multi_bounds.value_or(
            std::pair<double, double>{-1.0 / 3.0, 1.0 / 3.0});
        return bounds_accuracy(ez, set.labels, b1, b2);
    }
    std::vector<int> trash;
    for (int q = 0; q < model.ansatz.num_qubits; ++q)
        if (q != model.readout) trash.push_back(q);
    const auto fid = ac_scores(states, ansatz, model.params.values, trash, threads);
    return threshold_accuracy(fid, set.labels, model.params.ac_threshold.value_or(0.5));
}

}  // namespace qic
