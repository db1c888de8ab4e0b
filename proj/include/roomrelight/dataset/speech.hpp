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
#include <cstdint>
#include <string>
#include <vector>

#include "roomrelight/dsp/audio.hpp"

namespace roomrelight::dataset {

/// One dry speech recording.
struct SpeechSource {
  std::string speaker_id;
  std::string name;
  dsp::AudioBuffer audio;
};

/// Voice of a synthetic speaker, drawn once per speaker id.
struct VoiceParams {
  double f0_hz = 120.0;
  double tract_scale = 1.0;  ///< formant frequencies are divided by this
  double tilt = 0.9;         ///< one-pole coefficient shaping the glottal source
  double breath = 0.05;      ///< aspiration noise relative to the pulse train
};

VoiceParams voice_for_speaker(std::size_t speaker, std::uint64_t seed);

/// Speech-like test signal: words of two to four vowel syllables (glottal
/// pulse train through three formant resonators, with an optional noise
/// onset) separated by pauses. Exactly round(seconds * fs) samples, peak
/// 0.5. This is synthetic material for exercising the pipeline when no
/// recorded speech is available.
dsp::AudioBuffer synth_speech(const VoiceParams& voice, double seconds, std::uint64_t seed, int sample_rate = 16000);

/// One recording per speaker, ids "synth_spk00", "synth_spk01", ...
/// Throws std::invalid_argument if n_speakers is 0 or minutes_each is not
/// positive.
std::vector<SpeechSource> synth_speech_corpus(std::size_t n_speakers, double minutes_each, std::uint64_t seed,
                                              int sample_rate = 16000);

}  // namespace roomrelight::dataset
