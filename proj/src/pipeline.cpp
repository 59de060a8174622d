// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/pipeline.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "otafc/errors.hpp"
#include "otafc/inference.hpp"
#include "otafc/rng.hpp"

namespace otafc {
namespace {

constexpr char kMagic[8] = {'O', 'T', 'A', 'F', 'C', 'N', 'N', '1'};
enum : std::uint32_t { kFloat32 = 0, kComplex64 = 1 };

struct Tensor {
  std::uint32_t dtype = kFloat32;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;  // complex64 stored interleaved

  std::size_t elements() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ValidationError("truncated weight file");
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
         std::uint32_t{b[3]} << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

const Tensor& require(const std::map<std::string, Tensor>& t, const std::string& name,
                      std::uint32_t dtype, std::size_t rank) {
  const auto it = t.find(name);
  if (it == t.end()) throw ValidationError("weight file lacks tensor " + name);
  if (it->second.dtype != dtype || it->second.dims.size() != rank) {
    throw ValidationError("tensor " + name + " has the wrong dtype or rank");
  }
  return it->second;
}

Eigen::VectorXd real_vector(const Tensor& t) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.values.size()));
  for (std::size_t i = 0; i < t.values.size(); ++i) v(static_cast<Eigen::Index>(i)) = t.values[i];
  return v;
}

CVec complex_vector(const Tensor& t) {
  CVec v(static_cast<Eigen::Index>(t.values.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = {t.values[static_cast<std::size_t>(2 * i)], t.values[static_cast<std::size_t>(2 * i + 1)]};
  }
  return v;
}

Tensor real_tensor(std::vector<std::uint32_t> dims, const double* data) {
  Tensor t{kFloat32, std::move(dims), {}};
  t.values.resize(t.elements());
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<float>(data[i]);
  return t;
}

Tensor complex_tensor(std::vector<std::uint32_t> dims, const std::complex<double>* data) {
  Tensor t{kComplex64, std::move(dims), {}};
  const std::size_t n = t.elements();
  t.values.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t.values[2 * i] = static_cast<float>(data[i].real());
    t.values[2 * i + 1] = static_cast<float>(data[i].imag());
  }
  return t;
}

CVec crelu(const CVec& z) {
  CVec out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out(i) = {std::max(z(i).real(), 0.0), std::max(z(i).imag(), 0.0)};
  }
  return out;
}

CVec conv_r2c(const ImportedPipeline& p, const Eigen::MatrixXd& image) {
  const int side = p.conv_output_side(static_cast<int>(image.rows()));
  const auto k = static_cast<int>(p.conv_kernels.front().rows());
  std::vector<double> flat;
  flat.reserve(p.conv_kernels.size() * static_cast<std::size_t>(side * side));
  for (std::size_t c = 0; c < p.conv_kernels.size(); ++c) {
    for (int oy = 0; oy < side; ++oy) {
      for (int ox = 0; ox < side; ++ox) {
        double acc = p.conv_bias(static_cast<Eigen::Index>(c));
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const int iy = oy * p.conv_stride - p.conv_padding + ky;
            const int ix = ox * p.conv_stride - p.conv_padding + kx;
            if (iy < 0 || ix < 0 || iy >= image.rows() || ix >= image.cols()) continue;
            acc += p.conv_kernels[c](ky, kx) * image(iy, ix);
          }
        }
        flat.push_back(acc);
      }
    }
  }
  CVec z(static_cast<Eigen::Index>(flat.size() / 2));
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = {flat[static_cast<std::size_t>(2 * i)], flat[static_cast<std::size_t>(2 * i + 1)]};
  }
  return z;
}

Eigen::VectorXd readout(const ImportedPipeline& p, const CVec& fc_out) {
  const CVec a = crelu(fc_out);
  Eigen::VectorXd r(2 * a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    r(2 * i) = a(i).real();
    r(2 * i + 1) = a(i).imag();
  }
  return p.head_weight * r + p.head_bias;
}

}  // namespace

int ImportedPipeline::conv_output_side(int n) const {
  const auto k = conv_kernels.empty() ? 0 : static_cast<int>(conv_kernels.front().rows());
  return (n + 2 * conv_padding - k) / conv_stride + 1;
}

void ImportedPipeline::validate(int image_side) const {
  if (conv_kernels.empty()) throw ValidationError("pipeline has no conv kernels");
  for (const auto& k : conv_kernels) {
    if (k.rows() != k.cols() || k.rows() != conv_kernels.front().rows()) {
      throw ValidationError("conv kernels must be square and equally sized");
    }
  }
  if (conv_bias.size() != static_cast<Eigen::Index>(conv_kernels.size())) {
    throw ValidationError("conv bias does not match channel count");
  }
  const int side = conv_output_side(image_side);
  const long reals = static_cast<long>(conv_kernels.size()) * side * side;
  const Eigen::Index n = fc_weight.cols();
  if (side < 1 || reals % 2 != 0 || reals / 2 != n) {
    throw ValidationError("conv output of " + std::to_string(reals) +
                          " reals does not feed an FC layer with " + std::to_string(n) +
                          " complex inputs");
  }
  if (fc_weight.rows() != n || fc_bias.size() != n || bn_mean.size() != n ||
      bn_var.size() != n || bn_gamma.size() != n || bn_beta.size() != n) {
    throw ValidationError("complex layer shapes are inconsistent");
  }
  if (head_weight.cols() != 2 * n || head_bias.size() != head_weight.rows()) {
    throw ValidationError("readout layer shapes are inconsistent");
  }
}

ImportedPipeline load_pipeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open weight file " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw ValidationError("not an OTAFCNN1 weight file: " + path.string());
  }
  std::map<std::string, Tensor> tensors;
  const std::uint32_t count = read_u32(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(read_u32(in), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
      throw ValidationError("truncated weight file");
    }
    Tensor t;
    t.dtype = read_u32(in);
    if (t.dtype != kFloat32 && t.dtype != kComplex64) {
      throw ValidationError("tensor " + name + " has unknown dtype");
    }
    t.dims.resize(read_u32(in));
    for (auto& d : t.dims) d = read_u32(in);
    t.values.resize(t.elements() * (t.dtype == kComplex64 ? 2 : 1));
    for (auto& v : t.values) v = std::bit_cast<float>(read_u32(in));
    tensors.emplace(std::move(name), std::move(t));
  }

  ImportedPipeline p;
  const Tensor& cw = require(tensors, "conv.weight", kFloat32, 4);
  if (cw.dims[1] != 1 || cw.dims[2] != cw.dims[3]) {
    throw ValidationError("conv.weight must be [C, 1, k, k]");
  }
  const auto k = static_cast<Eigen::Index>(cw.dims[2]);
  for (std::uint32_t c = 0; c < cw.dims[0]; ++c) {
    Eigen::MatrixXd kernel(k, k);
    for (Eigen::Index y = 0; y < k; ++y) {
      for (Eigen::Index x = 0; x < k; ++x) {
        kernel(y, x) = cw.values[static_cast<std::size_t>((c * k + y) * k + x)];
      }
    }
    p.conv_kernels.push_back(kernel);
  }
  p.conv_bias = real_vector(require(tensors, "conv.bias", kFloat32, 1));
  p.bn_mean = complex_vector(require(tensors, "bn.mean", kComplex64, 1));
  p.bn_var = real_vector(require(tensors, "bn.var", kFloat32, 1));
  p.bn_gamma = complex_vector(require(tensors, "bn.gamma", kComplex64, 1));
  p.bn_beta = complex_vector(require(tensors, "bn.beta", kComplex64, 1));

  const Tensor& fw = require(tensors, "fc.weight", kComplex64, 2);
  p.fc_weight.resize(fw.dims[0], fw.dims[1]);
  for (Eigen::Index r = 0; r < p.fc_weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.fc_weight.cols(); ++c) {
      const auto idx = static_cast<std::size_t>(2 * (r * p.fc_weight.cols() + c));
      p.fc_weight(r, c) = {fw.values[idx], fw.values[idx + 1]};
    }
  }
  p.fc_bias = complex_vector(require(tensors, "fc.bias", kComplex64, 1));

  const Tensor& hw = require(tensors, "head.weight", kFloat32, 2);
  p.head_weight.resize(hw.dims[0], hw.dims[1]);
  for (Eigen::Index r = 0; r < p.head_weight.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.head_weight.cols(); ++c) {
      p.head_weight(r, c) = hw.values[static_cast<std::size_t>(r * p.head_weight.cols() + c)];
    }
  }
  p.head_bias = real_vector(require(tensors, "head.bias", kFloat32, 1));
  return p;
}

void save_pipeline(const ImportedPipeline& p, const std::filesystem::path& path) {
  std::vector<std::pair<std::string, Tensor>> out;
  const auto k = static_cast<std::uint32_t>(p.conv_kernels.front().rows());
  std::vector<double> conv;
  for (const auto& kernel : p.conv_kernels) {
    for (Eigen::Index y = 0; y < kernel.rows(); ++y) {
      for (Eigen::Index x = 0; x < kernel.cols(); ++x) conv.push_back(kernel(y, x));
    }
  }
  const auto channels = static_cast<std::uint32_t>(p.conv_kernels.size());
  const auto n = static_cast<std::uint32_t>(p.fc_weight.cols());
  out.emplace_back("conv.weight", real_tensor({channels, 1, k, k}, conv.data()));
  out.emplace_back("conv.bias", real_tensor({channels}, p.conv_bias.data()));
  out.emplace_back("bn.mean", complex_tensor({n}, p.bn_mean.data()));
  out.emplace_back("bn.var", real_tensor({n}, p.bn_var.data()));
  out.emplace_back("bn.gamma", complex_tensor({n}, p.bn_gamma.data()));
  out.emplace_back("bn.beta", complex_tensor({n}, p.bn_beta.data()));
  const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> fw =
      p.fc_weight;
  out.emplace_back("fc.weight", complex_tensor({static_cast<std::uint32_t>(fw.rows()), n}, fw.data()));
  out.emplace_back("fc.bias", complex_tensor({n}, p.fc_bias.data()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> hw = p.head_weight;
  out.emplace_back("head.weight", real_tensor({static_cast<std::uint32_t>(hw.rows()),
                                               static_cast<std::uint32_t>(hw.cols())},
                                              hw.data()));
  out.emplace_back("head.bias", real_tensor({static_cast<std::uint32_t>(p.head_bias.size())},
                                            p.head_bias.data()));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write weight file " + path.string());
  f.write(kMagic, 8);
  write_u32(f, static_cast<std::uint32_t>(out.size()));
  for (const auto& [name, t] : out) {
    write_u32(f, static_cast<std::uint32_t>(name.size()));
    f.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(f, t.dtype);
    write_u32(f, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) write_u32(f, d);
    for (float v : t.values) write_u32(f, std::bit_cast<std::uint32_t>(v));
  }
  if (!f) throw std::runtime_error("failed writing weight file " + path.string());
}

CMat pipeline_features(const ImportedPipeline& p, const std::vector<Eigen::MatrixXd>& images) {
  if (images.empty()) return CMat(p.features(), 0);
  for (const auto& img : images) {
    if (img.rows() != img.cols()) throw ValidationError("images must be square");
    p.validate(static_cast<int>(img.rows()));
  }
  CMat z(p.features(), static_cast<Eigen::Index>(images.size()));
  const CVec inv_std = (p.bn_var.array() + p.bn_eps).rsqrt().cast<std::complex<double>>();
  for (std::size_t b = 0; b < images.size(); ++b) {
    const CVec f = crelu(conv_r2c(p, images[b]));
    z.col(static_cast<Eigen::Index>(b)) =
        p.bn_gamma.cwiseProduct((f - p.bn_mean).cwiseProduct(inv_std)) + p.bn_beta;
  }
  const double power = z.squaredNorm() / static_cast<double>(z.size());
  if (power > 0.0) z /= std::sqrt(power);
  return z;
}

Eigen::MatrixXd digital_forward(const ImportedPipeline& p,
                                const std::vector<Eigen::MatrixXd>& images) {
  const CMat z = pipeline_features(p, images);
  Eigen::MatrixXd scores(p.head_weight.rows(), z.cols());
  for (Eigen::Index b = 0; b < z.cols(); ++b) {
    scores.col(b) = readout(p, p.fc_weight * z.col(b) + p.fc_bias);
  }
  return scores;
}

Eigen::MatrixXd imported_forward(const ImportedPipeline& p,
                                 const std::vector<Eigen::MatrixXd>& images,
                                 const OtaParams& params, const ChannelSet& true_ch,
                                 const NoiseModel& noise, std::uint64_t seed) {
  const CMat z = pipeline_features(p, images);
  Eigen::MatrixXd scores(p.head_weight.rows(), z.cols());
  for (Eigen::Index b = 0; b < z.cols(); ++b) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    scores.col(b) = readout(p, ota_forward(z.col(b), params, true_ch, noise, p.fc_bias, rng));
  }
  return scores;
}

Eigen::MatrixXd imported_forward_noiseless(const ImportedPipeline& p,
                                           const std::vector<Eigen::MatrixXd>& images,
                                           const OtaParams& params, const ChannelSet& true_ch) {
  const CMat z = pipeline_features(p, images);
  Eigen::MatrixXd scores(p.head_weight.rows(), z.cols());
  for (Eigen::Index b = 0; b < z.cols(); ++b) {
    scores.col(b) = readout(p, ota_forward_noiseless(z.col(b), params, true_ch, p.fc_bias));
  }
  return scores;
}

}  // namespace otafc
