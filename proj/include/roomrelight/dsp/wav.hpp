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

#include <filesystem>

#include "roomrelight/dsp/audio.hpp"

namespace roomrelight::dsp {

enum class WavFormat { kPcm16, kFloat32 };

/// Reads a PCM (8/16/24/32-bit) or IEEE float (32/64-bit) WAV file.
/// Multi-channel files are averaged down to mono. Throws std::runtime_error
/// naming the path on I/O or format errors.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Writes a mono WAV. PCM16 output is clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavFormat format = WavFormat::kFloat32);

/// Band-limited sample-rate conversion (Hann-windowed sinc, 32 zero
/// crossings per side).
AudioBuffer resample(const AudioBuffer& x, int target_rate);

}  // namespace roomrelight::dsp
