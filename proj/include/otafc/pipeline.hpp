// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "otafc/channel.hpp"

namespace otafc {

/// Externally trained image classifier whose complex FC layer is realized over the air:
///
///   conv -> flatten -> R2C -> CReLU -> CBN -> power norm -> FC (OTA) -> CReLU -> C2R -> head
///
/// R2C pairs consecutive reals (2i, 2i+1) into feature i; C2R interleaves them back.
/// CReLU applies ReLU to real and imaginary parts independently. CBN is the inference-mode
/// affine map gamma (z - mean) / sqrt(var + eps) + beta. Power normalization scales the
/// whole batch to unit average power per feature.
///
/// Weight file (little-endian):
///   char[8]  "OTAFCNN1"
///   u32      tensor count
///   per tensor: u32 name length, name bytes, u32 dtype (0 = float32, 1 = complex64),
///               u32 rank, u32 dims[rank], payload (complex64 = interleaved re, im float32)
/// Tensors: conv.weight f32 [C,1,k,k], conv.bias f32 [C], bn.mean c64 [N], bn.var f32 [N],
///          bn.gamma c64 [N], bn.beta c64 [N], fc.weight c64 [N,N], fc.bias c64 [N],
///          head.weight f32 [classes, 2N], head.bias f32 [classes].
struct ImportedPipeline {
  std::vector<Eigen::MatrixXd> conv_kernels;  ///< one k x k kernel per output channel
  Eigen::VectorXd conv_bias;
  int conv_stride = 4;
  int conv_padding = 1;
  CVec bn_mean;
  Eigen::VectorXd bn_var;
  CVec bn_gamma;
  CVec bn_beta;
  double bn_eps = 1e-5;
  CMat fc_weight;
  CVec fc_bias;
  Eigen::MatrixXd head_weight;
  Eigen::VectorXd head_bias;

  int features() const { return static_cast<int>(fc_weight.cols()); }
  /// Per-axis conv output size for a square input of side n.
  int conv_output_side(int n) const;
  void validate(int image_side) const;
};

ImportedPipeline load_pipeline(const std::filesystem::path& path);
void save_pipeline(const ImportedPipeline& pipeline, const std::filesystem::path& path);

/// Class scores of the fully digital network, one column per image.
Eigen::MatrixXd digital_forward(const ImportedPipeline& pipeline,
                                const std::vector<Eigen::MatrixXd>& images);

/// Same network with the FC layer replaced by a noisy analog pass; image b uses
/// the stream derive_seed(seed, {b}).
Eigen::MatrixXd imported_forward(const ImportedPipeline& pipeline,
                                 const std::vector<Eigen::MatrixXd>& images,
                                 const OtaParams& params, const ChannelSet& true_ch,
                                 const NoiseModel& noise, std::uint64_t seed);

Eigen::MatrixXd imported_forward_noiseless(const ImportedPipeline& pipeline,
                                           const std::vector<Eigen::MatrixXd>& images,
                                           const OtaParams& params, const ChannelSet& true_ch);

/// Complex features entering the FC layer (after power normalization), one column per image.
CMat pipeline_features(const ImportedPipeline& pipeline, const std::vector<Eigen::MatrixXd>& images);

}  // namespace otafc
