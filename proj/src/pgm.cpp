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

#include "igprm/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "igprm/error.hpp"

namespace igprm::pgm
{
namespace
{

class HeaderReader
{
public:
  explicit HeaderReader(const std::string & buf)
  : buf_(buf) {}

  void skip_space_and_comments()
  {
    while (pos_ < buf_.size()) {
      if (std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
        ++pos_;
      } else if (buf_[pos_] == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n') {
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  long next_int(const std::filesystem::path & path)
  {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[pos_]))) {
      ++pos_;
    }
    if (start == pos_ || pos_ - start > 9) {
      throw Error(Errc::UnreadableMap, "malformed PGM header in " + path.string());
    }
    return std::stol(buf_.substr(start, pos_ - start));
  }

  std::size_t pos() const {return pos_;}
  void advance(std::size_t n) {pos_ += n;}

private:
  const std::string & buf_;
  std::size_t pos_ = 0;
};

std::uint8_t to_8bit(long v, long maxval)
{
  if (maxval == 255) {
    return static_cast<std::uint8_t>(v);
  }
  return static_cast<std::uint8_t>(std::lround(static_cast<double>(v) * 255.0 / maxval));
}

}  // namespace

GrayImage read(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::UnreadableMap, "cannot open " + path.string());
  }
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '2')) {
    throw Error(Errc::UnreadableMap, "not a PGM file: " + path.string());
  }
  const bool binary = buf[1] == '5';
  HeaderReader hdr(buf);
  hdr.advance(2);
  const long width = hdr.next_int(path);
  const long height = hdr.next_int(path);
  const long maxval = hdr.next_int(path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(Errc::UnreadableMap, "invalid PGM dimensions in " + path.string());
  }

  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  img.pixels.resize(n);

  if (binary) {
    // exactly one whitespace byte separates maxval from the raster
    hdr.advance(1);
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (buf.size() < hdr.pos() + n * bpp) {
      throw Error(Errc::UnreadableMap, "truncated raster in " + path.string());
    }
    const auto * raw = reinterpret_cast<const unsigned char *>(buf.data() + hdr.pos());
    for (std::size_t i = 0; i < n; ++i) {
      long v = bpp == 1 ? raw[i] : (static_cast<long>(raw[2 * i]) << 8) | raw[2 * i + 1];
      if (v > maxval) {
        throw Error(Errc::UnreadableMap, "pixel exceeds maxval in " + path.string());
      }
      img.pixels[i] = to_8bit(v, maxval);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      long v = hdr.next_int(path);
      if (v > maxval) {
        throw Error(Errc::UnreadableMap, "pixel exceeds maxval in " + path.string());
      }
      img.pixels[i] = to_8bit(v, maxval);
    }
  }
  return img;
}

void write(
  const std::filesystem::path & path, int width, int height,
  std::span<const std::uint8_t> pixels)
{
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::InvalidArgument, "pixel count does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::IoError, "cannot write " + path.string());
  }
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char *>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) {
    throw Error(Errc::IoError, "write failed for " + path.string());
  }
}

void write_environment(const std::filesystem::path & path, const EnvironmentMap & env)
{
  std::vector<std::uint8_t> px;
  px.reserve(env.cells().size());
  for (CellClass c : env.cells()) {
    switch (c) {
      case CellClass::Free: px.push_back(kFreeGray); break;
      case CellClass::Wall: px.push_back(kWallGray); break;
      case CellClass::StepLow: px.push_back(kStepLowGray); break;
      case CellClass::StepHigh: px.push_back(kStepHighGray); break;
    }
  }
  write(path, env.width(), env.height(), px);
}

EnvironmentMap read_environment(const std::filesystem::path & path, MapKind kind)
{
  const GrayImage img = read(path);
  EnvironmentMap env(img.width, img.height, kind);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t v = img.pixels[static_cast<std::size_t>(y) * img.width + x];
      CellClass c;
      switch (v) {
        case kFreeGray: c = CellClass::Free; break;
        case kWallGray: c = CellClass::Wall; break;
        case kStepLowGray: c = CellClass::StepLow; break;
        case kStepHighGray: c = CellClass::StepHigh; break;
        default:
          throw Error(
            Errc::UnreadableMap,
            "gray value " + std::to_string(v) + " is not a cell class code in " + path.string());
      }
      env.set(x, y, c);
    }
  }
  return env;
}

void write_cost(const std::filesystem::path & path, const CostMap & cost)
{
  std::vector<std::uint8_t> px;
  px.reserve(cost.values().size());
  for (float v : cost.values()) {
    const double clamped = std::clamp(static_cast<double>(v), 0.0, 1.0);
    px.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0)));
  }
  write(path, cost.width(), cost.height(), px);
}

CostMap read_cost(const std::filesystem::path & path)
{
  const GrayImage img = read(path);
  CostMap cost(img.width, img.height);
  auto values = cost.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<float>(img.pixels[i] / 255.0);
  }
  return cost;
}

}  // namespace igprm::pgm
