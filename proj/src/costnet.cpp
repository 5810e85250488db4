// Copyright (c) 2026 The igprm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "igprm/costnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <random>

#include "igprm/error.hpp"
#include "igprm/simd/kernels.hpp"

namespace igprm::costnet
{

using json = nlohmann::json;

namespace
{

constexpr char kMagic[4] = {'I', 'G', 'P', 'W'};

const char * const kConvNames[] = {
  "enc0.conv1", "enc0.conv2", "enc1.conv1", "enc1.conv2", "bott.conv1", "bott.conv2",
  "dec1.conv1", "dec1.conv2", "dec0.conv1", "dec0.conv2",
};

std::string shape_str(const std::vector<std::uint32_t> & s)
{
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += (i ? ", " : "") + std::to_string(s[i]);
  }
  return out + "]";
}

class ByteWriter
{
public:
  void u8(std::uint8_t v) {buf_.push_back(v);}
  void u16(std::uint16_t v)
  {
    u8(static_cast<std::uint8_t>(v & 0xff));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v)
  {
    for (int i = 0; i < 4; ++i) {
      u8(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
  }
  void bytes(const void * p, std::size_t n)
  {
    const auto * b = static_cast<const std::uint8_t *>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void f32(std::span<const float> v)
  {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(v.data(), v.size() * sizeof(float));
    } else {
      for (float f : v) {
        u32(std::bit_cast<std::uint32_t>(f));
      }
    }
  }
  std::vector<std::uint8_t> take() {return std::move(buf_);}

private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader
{
public:
  explicit ByteReader(std::span<const std::uint8_t> b)
  : b_(b) {}

  void need(std::size_t n, const char * what) const
  {
    if (b_.size() - pos_ < n) {
      throw Error(Errc::TruncatedFile, std::string("file ends inside ") + what);
    }
  }
  std::uint8_t u8(const char * what)
  {
    need(1, what);
    return b_[pos_++];
  }
  std::uint16_t u16(const char * what)
  {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(b_[pos_] | (b_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char * what)
  {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::string str(std::size_t n, const char * what)
  {
    need(n, what);
    std::string s(reinterpret_cast<const char *>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void f32(std::span<float> out, const char * what)
  {
    need(out.size() * 4, what);
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(out.data(), b_.data() + pos_, out.size() * 4);
      pos_ += out.size() * 4;
    } else {
      for (auto & f : out) {
        f = std::bit_cast<float>(u32(what));
      }
    }
  }

private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<TensorSpec> NetSpec::layout() const
{
  const auto [w0, w1, w2] = widths;
  const std::uint32_t in_out[10][2] = {
    {static_cast<std::uint32_t>(in_channels()), static_cast<std::uint32_t>(w0)},
    {static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0)},
    {static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w1)},
    {static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1)},
    {static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w2)},
    {static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2)},
    {static_cast<std::uint32_t>(w2 + w1), static_cast<std::uint32_t>(w1)},
    {static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1)},
    {static_cast<std::uint32_t>(w1 + w0), static_cast<std::uint32_t>(w0)},
    {static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0)},
  };
  std::vector<TensorSpec> out;
  for (int i = 0; i < 10; ++i) {
    const std::string base = kConvNames[i];
    out.push_back({base + ".weight", {in_out[i][1], in_out[i][0], 3, 3}});
    out.push_back({base + ".bias", {in_out[i][1]}});
  }
  out.push_back({"head.weight", {1, static_cast<std::uint32_t>(w0), 1, 1}});
  out.push_back({"head.bias", {1}});
  return out;
}

json NetSpec::descriptor() const
{
  json names = json::array();
  for (const auto & t : layout()) {
    names.push_back(t.name);
  }
  return json{{"k", k}, {"widths", widths}, {"tensors", names}};
}

std::size_t Tensor::numel() const
{
  std::size_t n = 1;
  for (auto d : shape) {
    n *= d;
  }
  return n;
}

const Tensor * Container::find(std::string_view name) const
{
  for (const auto & t : tensors) {
    if (t.name == name) {
      return &t;
    }
  }
  return nullptr;
}

std::vector<std::uint8_t> serialize_container(const Container & c)
{
  ByteWriter w;
  w.bytes(kMagic, 4);
  w.u32(kFormatVersion);
  const std::string desc = c.descriptor.dump();
  w.u32(static_cast<std::uint32_t>(desc.size()));
  w.bytes(desc.data(), desc.size());
  for (const auto & t : c.tensors) {
    if (t.data.size() != t.numel()) {
      throw Error(Errc::ShapeMismatch, "tensor '" + t.name + "' data does not match its shape");
    }
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.bytes(t.name.data(), t.name.size());
    w.u8(static_cast<std::uint8_t>(t.shape.size()));
    for (auto d : t.shape) {
      w.u32(d);
    }
    w.f32(t.data);
  }
  return w.take();
}

void write_container(const std::filesystem::path & path, const Container & c)
{
  const auto bytes = serialize_container(c);
  // write-then-rename so readers never see a partial file
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(Errc::IoError, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(Errc::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

Container parse_container(std::span<const std::uint8_t> bytes)
{
  ByteReader r(bytes);
  if (r.str(4, "magic") != std::string(kMagic, 4)) {
    throw Error(Errc::BadMagic, "not an IGPW file");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion) {
    throw Error(Errc::VersionUnsupported, "IGPW version " + std::to_string(version));
  }
  const std::uint32_t desc_len = r.u32("descriptor length");
  Container c;
  try {
    c.descriptor = json::parse(r.str(desc_len, "descriptor"));
  } catch (const json::parse_error & e) {
    throw Error(Errc::ShapeMismatch, std::string("descriptor is not valid JSON: ") + e.what());
  }
  if (!c.descriptor.contains("tensors") || !c.descriptor["tensors"].is_array()) {
    throw Error(Errc::ShapeMismatch, "descriptor lacks a tensor order");
  }
  const auto & order = c.descriptor["tensors"];
  for (std::size_t i = 0; i < order.size(); ++i) {
    Tensor t;
    const std::uint16_t name_len = r.u16("tensor name length");
    t.name = r.str(name_len, "tensor name");
    if (t.name != order[i].get<std::string>()) {
      throw Error(
        Errc::ShapeMismatch,
        "tensor '" + t.name + "' appears where the descriptor lists '" +
        order[i].get<std::string>() + "'");
    }
    const std::uint8_t ndim = r.u8("tensor rank");
    for (std::uint8_t d = 0; d < ndim; ++d) {
      t.shape.push_back(r.u32("tensor dims"));
    }
    t.data.resize(t.numel());
    r.f32(t.data, "tensor data");
    c.tensors.push_back(std::move(t));
  }
  return c;
}

Container read_container(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  const std::vector<std::uint8_t> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_container(bytes);
}

Model::Model(NetSpec spec, std::vector<Tensor> tensors)
: spec_(spec)
{
  if (spec_.k < 1) {
    throw Error(Errc::ShapeMismatch, "embedding width k must be positive");
  }
  std::map<std::string, Tensor *> by_name;
  for (auto & t : tensors) {
    by_name[t.name] = &t;
  }
  for (const auto & want : spec_.layout()) {
    auto it = by_name.find(want.name);
    if (it == by_name.end()) {
      throw Error(Errc::ShapeMismatch, "missing tensor '" + want.name + "'");
    }
    Tensor & t = *it->second;
    if (t.shape != want.shape) {
      throw Error(
        Errc::ShapeMismatch,
        "tensor '" + want.name + "' has shape " + shape_str(t.shape) + ", expected " +
        shape_str(want.shape));
    }
    if (t.data.size() != t.numel()) {
      throw Error(Errc::ShapeMismatch, "tensor '" + want.name + "' data length mismatch");
    }
    tensors_.push_back(std::move(t));
    by_name.erase(it);
  }
  if (!by_name.empty()) {
    throw Error(Errc::ShapeMismatch, "unexpected tensor '" + by_name.begin()->first + "'");
  }
}

Model model_from_container(const Container & c)
{
  NetSpec spec;
  try {
    spec.k = c.descriptor.at("k").get<int>();
    spec.widths = c.descriptor.at("widths").get<std::array<int, 3>>();
  } catch (const json::exception & e) {
    throw Error(Errc::ShapeMismatch, std::string("descriptor lacks k/widths: ") + e.what());
  }
  return Model(spec, c.tensors);
}

Model load_weights(const std::filesystem::path & path)
{
  return model_from_container(read_container(path));
}

void save_weights(const std::filesystem::path & path, const Model & model)
{
  write_container(path, Container{model.spec().descriptor(), model.tensors()});
}

Model random_model(const NetSpec & spec, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<Tensor> tensors;
  for (const auto & ts : spec.layout()) {
    Tensor t{ts.name, ts.shape, {}};
    t.data.resize(t.numel());
    if (ts.shape.size() == 4) {
      const double fan_in = static_cast<double>(ts.shape[1]) * ts.shape[2] * ts.shape[3];
      std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
      for (auto & v : t.data) {
        v = static_cast<float>(normal(rng));
      }
    } else {
      std::normal_distribution<double> normal(0.0, 0.05);
      for (auto & v : t.data) {
        v = static_cast<float>(normal(rng));
      }
    }
    tensors.push_back(std::move(t));
  }
  return Model(spec, std::move(tensors));
}

Model zero_model(const NetSpec & spec)
{
  std::vector<Tensor> tensors;
  for (const auto & ts : spec.layout()) {
    Tensor t{ts.name, ts.shape, {}};
    t.data.assign(t.numel(), 0.0f);
    tensors.push_back(std::move(t));
  }
  return Model(spec, std::move(tensors));
}

namespace
{

/// C x H x W activation block.
struct Activation
{
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<float> data;

  Activation() = default;
  Activation(int c_, int h_, int w_)
  : c(c_), h(h_), w(w_), data(static_cast<std::size_t>(c_) * h_ * w_, 0.0f) {}

  std::size_t plane() const {return static_cast<std::size_t>(h) * w;}
  float * ch(int i) {return data.data() + i * plane();}
  const float * ch(int i) const {return data.data() + i * plane();}
};

Activation conv3x3_relu(const Activation & in, const Tensor & weight, const Tensor & bias)
{
  const auto & kern = simd::kernels();
  const int out_c = static_cast<int>(weight.shape[0]);
  const std::size_t ps = static_cast<std::size_t>(in.w) + 2;
  const std::size_t padded_plane = ps * (static_cast<std::size_t>(in.h) + 2);

  std::vector<float> padded(padded_plane * in.c, 0.0f);
  for (int c = 0; c < in.c; ++c) {
    float * dst = padded.data() + c * padded_plane;
    const float * src = in.ch(c);
    for (int y = 0; y < in.h; ++y) {
      std::copy_n(src + static_cast<std::size_t>(y) * in.w, in.w, dst + (y + 1) * ps + 1);
    }
  }

  Activation out(out_c, in.h, in.w);
  for (int o = 0; o < out_c; ++o) {
    float * dst = out.ch(o);
    std::fill_n(dst, out.plane(), bias.data[o]);
    const float * wo = weight.data.data() + static_cast<std::size_t>(o) * in.c * 9;
    for (int c = 0; c < in.c; ++c) {
      kern.conv3x3_accum_f32(
        padded.data() + c * padded_plane, ps, wo + c * 9, dst,
        static_cast<std::size_t>(in.w), static_cast<std::size_t>(in.h));
    }
  }
  kern.relu_f32(out.data.data(), out.data.size());
  return out;
}

Activation maxpool2x2(const Activation & in)
{
  Activation out(in.c, in.h / 2, in.w / 2);
  for (int c = 0; c < in.c; ++c) {
    const float * src = in.ch(c);
    float * dst = out.ch(c);
    for (int y = 0; y < out.h; ++y) {
      const float * r0 = src + static_cast<std::size_t>(2 * y) * in.w;
      const float * r1 = r0 + in.w;
      for (int x = 0; x < out.w; ++x) {
        dst[static_cast<std::size_t>(y) * out.w + x] =
          std::max(std::max(r0[2 * x], r0[2 * x + 1]), std::max(r1[2 * x], r1[2 * x + 1]));
      }
    }
  }
  return out;
}

/// [nearest-upsample(low) ; skip] along channels.
Activation upsample_concat(const Activation & low, const Activation & skip)
{
  Activation out(low.c + skip.c, skip.h, skip.w);
  for (int c = 0; c < low.c; ++c) {
    const float * src = low.ch(c);
    float * dst = out.ch(c);
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        dst[static_cast<std::size_t>(y) * out.w + x] = src[static_cast<std::size_t>(y / 2) * low.w + x / 2];
      }
    }
  }
  std::copy(skip.data.begin(), skip.data.end(), out.data.begin() + low.c * out.plane());
  return out;
}

float sigmoid_open(float z)
{
  // keep the result strictly inside (0, 1) after rounding to float
  constexpr float lo = std::numeric_limits<float>::min();
  const float hi = std::nextafter(1.0f, 0.0f);
  const double s = 1.0 / (1.0 + std::exp(-static_cast<double>(z)));
  return std::clamp(static_cast<float>(s), lo, hi);
}

}  // namespace

std::vector<float> Model::forward(const ChannelStack & channels, std::span<const float> embedding) const
{
  if (channels.width % 4 != 0 || channels.height % 4 != 0 || channels.width <= 0 || channels.height <= 0) {
    throw Error(Errc::DimensionMismatch, "map width and height must be positive multiples of 4");
  }
  if (channels.data.size() !=
    static_cast<std::size_t>(ChannelStack::kPlanes) * channels.width * channels.height)
  {
    throw Error(Errc::DimensionMismatch, "channel stack must hold 4 planes");
  }
  if (static_cast<int>(embedding.size()) != spec_.k) {
    throw Error(
      Errc::DimensionMismatch,
      "embedding has " + std::to_string(embedding.size()) + " entries, model expects " +
      std::to_string(spec_.k));
  }

  Activation x(spec_.in_channels(), channels.height, channels.width);
  std::copy(channels.data.begin(), channels.data.end(), x.data.begin());
  for (int i = 0; i < spec_.k; ++i) {
    std::fill_n(x.ch(ChannelStack::kPlanes + i), x.plane(), embedding[i]);
  }

  // tensor(2i) is conv i's weight, tensor(2i + 1) its bias
  auto conv = [&](const Activation & in, int i) {
      return conv3x3_relu(in, tensor(2 * i), tensor(2 * i + 1));
    };

  Activation e0 = conv(conv(x, 0), 1);
  Activation e1 = conv(conv(maxpool2x2(e0), 2), 3);
  Activation b = conv(conv(maxpool2x2(e1), 4), 5);
  Activation d1 = conv(conv(upsample_concat(b, e1), 6), 7);
  Activation d0 = conv(conv(upsample_concat(d1, e0), 8), 9);

  const Tensor & hw = tensor(20);
  const Tensor & hb = tensor(21);
  const auto & kern = simd::kernels();
  std::vector<float> out(d0.plane(), hb.data[0]);
  for (int c = 0; c < d0.c; ++c) {
    kern.axpy_f32(hw.data[c], d0.ch(c), out.data(), out.size());
  }
  for (auto & v : out) {
    v = sigmoid_open(v);
  }
  return out;
}

CostMap Model::predict(const ChannelStack & channels, std::span<const float> embedding) const
{
  const auto plane = forward(channels, embedding);
  CostMap cost(channels.width, channels.height);
  std::copy(plane.begin(), plane.end(), cost.values().begin());
  return cost;
}

}  // namespace igprm::costnet
