// Copyright 2026 The ADACL Authors. All Rights Reserved.
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

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "adacl/model.hpp"

namespace adacl {
namespace {

constexpr std::array<char, 8> kMagic = {'A', 'D', 'A', 'C', 'L', '0', '0', '1'};
// Checkpoints never hold more tensors than the architecture defines.
constexpr std::uint32_t kMaxTensors = 64;
constexpr std::uint32_t kMaxRank = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw DataError(std::string("checkpoint: truncated while reading ") + what);
  }
  return static_cast<std::uint32_t>(bytes[0]) |
         static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 |
         static_cast<std::uint32_t>(bytes[3]) << 24;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams<float>& params) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(params.channels()));
  put_u32(out, static_cast<std::uint32_t>(params.tensors().size()));
  for (const auto& t : params.tensors()) {
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t extent : t.shape()) {
      put_u32(out, static_cast<std::uint32_t>(extent));
    }
  }
  for (const auto& t : params.tensors()) {
    for (float v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw DataError("checkpoint: write failed");
}

ModelParams<float> read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("checkpoint: bad magic (expected ADACL001)");
  }
  const std::uint32_t channels = get_u32(in, "channel count");
  if (channels != 1 && channels != 3) {
    throw DataError("checkpoint: unsupported channel count " +
                    std::to_string(channels));
  }
  const std::uint32_t count = get_u32(in, "tensor count");
  if (count == 0 || count > kMaxTensors) {
    throw DataError("checkpoint: implausible tensor count " +
                    std::to_string(count));
  }
  std::vector<Shape> shapes(count);
  for (auto& shape : shapes) {
    const std::uint32_t rank = get_u32(in, "tensor rank");
    if (rank == 0 || rank > kMaxRank) {
      throw DataError("checkpoint: implausible tensor rank " +
                      std::to_string(rank));
    }
    for (std::uint32_t d = 0; d < rank; ++d) {
      shape.push_back(get_u32(in, "tensor extent"));
    }
  }
  if (shapes != parameter_shapes(channels)) {
    throw DataError("checkpoint: tensor shapes do not match the " +
                    std::to_string(channels) + "-channel architecture");
  }
  std::vector<Tensor<float>> tensors;
  for (const auto& shape : shapes) {
    std::vector<float> data(element_count(shape));
    for (float& v : data) v = std::bit_cast<float>(get_u32(in, "weights"));
    tensors.emplace_back(shape, std::move(data));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("checkpoint: trailing bytes after parameter data");
  }
  return ModelParams<float>(channels, std::move(tensors));
}

void save_checkpoint(const std::string& path, const ModelParams<float>& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("checkpoint: cannot open " + path + " for writing");
  write_checkpoint(out, params);
}

ModelParams<float> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path);
  return read_checkpoint(in);
}

}  // namespace adacl
