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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace roomrelight::dsp {

inline constexpr std::size_t kNumT60Bands = 7;
inline constexpr std::size_t kNumEqBands = 6;
inline constexpr double kReferenceBandHz = 1000.0;

enum class BandSetKind { kT60, kEq };

/// One of the two canonical octave band sets.
///
///   T60: {125, 250, 500, 1000, 2000, 4000, 8000} Hz
///   EQ:  {62.5, 125, 250, 500, 2000, 4000} Hz (relative to the 1 kHz band)
class BandSet {
 public:
  static const BandSet& t60();
  static const BandSet& eq();
  static const BandSet& of(BandSetKind kind);

  [[nodiscard]] BandSetKind kind() const { return kind_; }
  [[nodiscard]] std::span<const double> centers() const { return centers_; }
  [[nodiscard]] std::size_t size() const { return centers_.size(); }
  [[nodiscard]] double center(std::size_t i) const { return centers_[i]; }
  [[nodiscard]] std::optional<std::size_t> index_of(double center_hz) const;
  [[nodiscard]] std::string_view name() const;

  bool operator==(const BandSet& other) const { return kind_ == other.kind_; }

 private:
  BandSet(BandSetKind kind, std::vector<double> centers);

  BandSetKind kind_;
  std::vector<double> centers_;
};

inline double octave_lower_edge(double center) { return center / std::sqrt(2.0); }
inline double octave_upper_edge(double center) { return center * std::sqrt(2.0); }

/// Per-band values over a canonical band set (T60 in seconds, EQ in dB),
/// with a validity mask for values that could not be measured reliably.
class BandProfile {
 public:
  BandProfile(const BandSet& bands, std::vector<double> values);
  BandProfile(const BandSet& bands, std::vector<double> values, std::vector<bool> valid);

  static BandProfile uniform(const BandSet& bands, double value);

  [[nodiscard]] const BandSet& bands() const { return *bands_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double value(std::size_t i) const { return values_[i]; }
  [[nodiscard]] bool valid(std::size_t i) const { return valid_[i]; }
  [[nodiscard]] const std::vector<bool>& validity() const { return valid_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool all_valid() const;
  [[nodiscard]] bool any_valid() const;

  void set(std::size_t i, double value, bool is_valid = true);

 private:
  const BandSet* bands_;
  std::vector<double> values_;
  std::vector<bool> valid_;
};

}  // namespace roomrelight::dsp
