// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/inference.hpp"

#include <random>

#include "otafc/errors.hpp"

namespace otafc {
namespace {

struct Outcome {
  bool ota_correct;
  bool digital_correct;
};

Outcome run_sample(const SyntheticTask& task, const OtaParams& params, const ChannelSet& true_ch,
                   const NoiseModel& noise, std::uint64_t seed, int index) {
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(index)}));
  std::uniform_int_distribution<int> pick(0, task.num_classes() - 1);
  const int label = pick(rng);
  const auto& mean = task.class_means[static_cast<std::size_t>(label)];
  CVec x = mean;
  if (task.sample_noise_var > 0.0) {
    x += complex_normal_matrix(rng, mean.size(), 1, task.sample_noise_var);
  }
  const CVec digital = task.layer.w * x + task.layer.bias;
  const CVec ota = ota_forward(x, params, true_ch, noise, task.layer.bias, rng);
  return {task.classify(ota) == label, task.classify(digital) == label};
}

void check_samples(const SyntheticTask& task, int num_samples) {
  if (num_samples < 1) throw ValidationError("accuracy needs at least one sample");
  if (task.num_classes() < 2) throw ValidationError("a task needs at least two classes");
}

}  // namespace

int SyntheticTask::classify(const CVec& layer_output) const {
  const Eigen::VectorXd scores = (classifier_head * (layer_output - layer.bias)).real();
  Eigen::Index best = 0;
  scores.maxCoeff(&best);
  return static_cast<int>(best);
}

SyntheticTask SyntheticTask::make(const TargetLayer& layer, int num_classes,
                                  double sample_noise_var, std::uint64_t seed) {
  if (num_classes < 2) throw ValidationError("a task needs at least two classes");
  SyntheticTask t;
  t.layer = layer;
  t.sample_noise_var = sample_noise_var;
  Rng rng(seed);
  const Eigen::Index n_in = layer.w.cols();
  CMat means(num_classes, n_in);
  for (int c = 0; c < num_classes; ++c) {
    const CVec m = complex_normal_matrix(rng, n_in, 1, 1.0);
    t.class_means.push_back(m);
    means.row(c) = m.adjoint();
  }
  const CMat pinv = layer.w.completeOrthogonalDecomposition().pseudoInverse();
  t.classifier_head = means * pinv;
  return t;
}

CVec ota_forward(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                 const NoiseModel& noise, const CVec& bias, Rng& rng) {
  const CVec s = params.f1 * x;
  CVec u = true_ch.h[1] * s;
  for (int l = 1; l <= true_ch.num_groups(); ++l) {
    u += complex_normal_matrix(rng, u.size(), 1, noise.relay(l));
    const CVec v = params.gain(l).cwiseProduct(u);
    u = true_ch.h[static_cast<std::size_t>(l) + 1] * v;
  }
  u += true_ch.direct() * s;
  u += complex_normal_matrix(rng, u.size(), 1, noise.rx_var);
  return params.f2 * u + bias;
}

CVec ota_forward(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                 const NoiseModel& noise, const CVec& bias, std::uint64_t seed) {
  Rng rng(seed);
  return ota_forward(x, params, true_ch, noise, bias, rng);
}

CVec ota_forward_noiseless(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                           const CVec& bias) {
  return params.f2 * (effective_channel(true_ch, params) * (params.f1 * x)) + bias;
}

AccuracyResult accuracy(const SyntheticTask& task, const OtaParams& params,
                        const ChannelSet& true_ch, const NoiseModel& noise, int num_samples,
                        std::uint64_t seed) {
  check_samples(task, num_samples);
  long ota = 0;
  long digital = 0;
#pragma omp parallel for schedule(static) reduction(+ : ota, digital)
  for (int i = 0; i < num_samples; ++i) {
    const Outcome o = run_sample(task, params, true_ch, noise, seed, i);
    ota += o.ota_correct;
    digital += o.digital_correct;
  }
  return {static_cast<double>(ota) / num_samples, static_cast<double>(digital) / num_samples};
}

AccuracyResult accuracy_serial(const SyntheticTask& task, const OtaParams& params,
                               const ChannelSet& true_ch, const NoiseModel& noise,
                               int num_samples, std::uint64_t seed) {
  check_samples(task, num_samples);
  long ota = 0;
  long digital = 0;
  for (int i = 0; i < num_samples; ++i) {
    const Outcome o = run_sample(task, params, true_ch, noise, seed, i);
    ota += o.ota_correct;
    digital += o.digital_correct;
  }
  return {static_cast<double>(ota) / num_samples, static_cast<double>(digital) / num_samples};
}

}  // namespace otafc
