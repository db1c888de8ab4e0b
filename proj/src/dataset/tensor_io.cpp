// Copyright 2026 The roomrelight Authors
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

#include "roomrelight/dataset/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

namespace roomrelight::dataset {
namespace {

static_assert(sizeof(float) == 4);

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace

std::size_t FeatureTensor::element_count() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Eigen::MatrixXd FeatureTensor::to_matrix() const {
  if (shape.size() != 2) throw std::invalid_argument("FeatureTensor::to_matrix: tensor is not 2-D");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(shape[0]), static_cast<Eigen::Index>(shape[1]));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data[static_cast<std::size_t>(r * m.cols() + c)];
  }
  return m;
}

FeatureTensor FeatureTensor::from_matrix(const Eigen::MatrixXd& m) {
  FeatureTensor t;
  t.shape = {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())};
  t.data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data.push_back(static_cast<float>(m(r, c)));
  }
  return t;
}

void write_tensor(const std::filesystem::path& path, const FeatureTensor& tensor) {
  if (tensor.element_count() != tensor.data.size()) {
    throw std::invalid_argument(fmt::format("write_tensor: shape holds {} elements but data has {}",
                                            tensor.element_count(), tensor.data.size()));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("write_tensor: cannot open {}", path.string()));
  const nlohmann::json header = {{"shape", tensor.shape}, {"dtype", "f32"}, {"byte_order", "little"}};
  out << header.dump() << '\n';
  std::vector<std::uint32_t> words(tensor.data.size());
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = to_little(std::bit_cast<std::uint32_t>(tensor.data[i]));
  out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 4));
  if (!out) throw std::runtime_error(fmt::format("write_tensor: write failed for {}", path.string()));
}

FeatureTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("read_tensor: cannot open {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(fmt::format("read_tensor: {} has no header", path.string()));
  FeatureTensor t;
  try {
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.at("dtype") != "f32" || header.at("byte_order") != "little") {
      throw std::runtime_error("unsupported dtype or byte order");
    }
    t.shape = header.at("shape").get<std::vector<std::size_t>>();
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("read_tensor: bad header in {}: {}", path.string(), e.what()));
  }
  const std::size_t n = t.element_count();
  std::vector<std::uint32_t> words(n);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(n * 4));
  if (static_cast<std::size_t>(in.gcount()) != n * 4 || in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(fmt::format("read_tensor: payload of {} does not match shape", path.string()));
  }
  t.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.data[i] = std::bit_cast<float>(to_little(words[i]));
  return t;
}

}  // namespace roomrelight::dataset
