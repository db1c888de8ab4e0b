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

#include "roomrelight/dsp/bands.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace roomrelight::dsp {

BandSet::BandSet(BandSetKind kind, std::vector<double> centers)
    : kind_(kind), centers_(std::move(centers)) {}

const BandSet& BandSet::t60() {
  static const BandSet set(BandSetKind::kT60, {125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0});
  return set;
}

const BandSet& BandSet::eq() {
  static const BandSet set(BandSetKind::kEq, {62.5, 125.0, 250.0, 500.0, 2000.0, 4000.0});
  return set;
}

const BandSet& BandSet::of(BandSetKind kind) { return kind == BandSetKind::kT60 ? t60() : eq(); }

std::optional<std::size_t> BandSet::index_of(double center_hz) const {
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (std::abs(centers_[i] - center_hz) < 1e-9 * centers_[i]) return i;
  }
  return std::nullopt;
}

std::string_view BandSet::name() const { return kind_ == BandSetKind::kT60 ? "t60" : "eq"; }

BandProfile::BandProfile(const BandSet& bands, std::vector<double> values)
    : BandProfile(bands, std::move(values), std::vector<bool>(bands.size(), true)) {}

BandProfile::BandProfile(const BandSet& bands, std::vector<double> values, std::vector<bool> valid)
    : bands_(&bands), values_(std::move(values)), valid_(std::move(valid)) {
  if (values_.size() != bands.size() || valid_.size() != bands.size()) {
    throw std::invalid_argument("BandProfile: expected " + std::to_string(bands.size()) +
                                " values for the " + std::string(bands.name()) + " band set, got " +
                                std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (valid_[i] && !std::isfinite(values_[i])) {
      throw std::invalid_argument("BandProfile: non-finite value in band " + std::to_string(i));
    }
  }
}

BandProfile BandProfile::uniform(const BandSet& bands, double value) {
  return BandProfile(bands, std::vector<double>(bands.size(), value));
}

bool BandProfile::all_valid() const {
  return std::all_of(valid_.begin(), valid_.end(), [](bool v) { return v; });
}

bool BandProfile::any_valid() const {
  return std::any_of(valid_.begin(), valid_.end(), [](bool v) { return v; });
}

void BandProfile::set(std::size_t i, double value, bool is_valid) {
  values_.at(i) = value;
  valid_.at(i) = is_valid;
}

}  // namespace roomrelight::dsp
