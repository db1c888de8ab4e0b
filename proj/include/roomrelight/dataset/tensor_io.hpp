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

#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace roomrelight::dataset {

/// Row-major float tensor as stored on disk: one JSON header line
/// {"shape": [...], "dtype": "f32", "byte_order": "little"} followed by the
/// raw little-endian payload.
struct FeatureTensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  [[nodiscard]] std::size_t element_count() const;
  /// Rows x columns of a 2-D tensor (float to double, exact).
  [[nodiscard]] Eigen::MatrixXd to_matrix() const;
  static FeatureTensor from_matrix(const Eigen::MatrixXd& m);
};

/// Throws std::runtime_error naming the path on I/O failure and
/// std::invalid_argument when data and shape disagree.
void write_tensor(const std::filesystem::path& path, const FeatureTensor& tensor);
/// Throws std::runtime_error naming the path on I/O failure, a malformed
/// header, an unsupported dtype or byte order, or a payload whose size does
/// not match the shape.
FeatureTensor read_tensor(const std::filesystem::path& path);

}  // namespace roomrelight::dataset
