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
#include <optional>
#include <random>

#include "roomrelight/analysis/impulse_response.hpp"
#include "roomrelight/dataset/tensor_io.hpp"
#include "roomrelight/dsp/audio.hpp"
#include "roomrelight/dsp/bands.hpp"

namespace roomrelight::dataset {

inline constexpr int kFeatureRate = 16000;

struct ExampleOptions {
  double clip_s = 4.0;
  double gate_dbfs = -45.0;      ///< minimum RMS of an eligible window
  double window_step_s = 0.05;   ///< spacing of candidate window starts
  int n_mel = 32;
  int fft_window = 256;
  double overlap = 0.5;
};

/// Labels measured from an impulse response.
struct IrLabels {
  dsp::BandProfile t60;
  dsp::BandProfile eq;
};

/// estimate_t60 and extract_eq of `ir`. An IR with no usable decay gets an
/// all-invalid T60 profile rather than an exception.
IrLabels measure_labels(const analysis::ImpulseResponse& ir);

struct Example {
  FeatureTensor features;  ///< n_mel x frames log-Mel spectrogram
  IrLabels labels;
  double snr_db = 0.0;           ///< requested; +inf for a noiseless clip
  double measured_snr_db = 0.0;  ///< clip power over injected noise power
  std::size_t window_start = 0;  ///< first sample of the clip in the reverberant signal
};

/// Reverberant, optionally noisy 4 s feature clip.
///
/// Inputs not at 16 kHz are resampled. The speech is convolved with the IR,
/// a window is drawn uniformly from the candidate starts whose RMS reaches
/// gate_dbfs, and noise (a random stretch of `noise`, looped if short, or
/// white noise when none is given) is scaled to `snr_db` over that window.
/// An infinite snr_db adds nothing. Labels come from measure_labels on the
/// resampled IR.
///
/// Throws std::invalid_argument if the speech is shorter than the clip and
/// std::runtime_error if no window passes the activity gate.
Example make_example(const dsp::AudioBuffer& speech, const analysis::ImpulseResponse& ir,
                     const dsp::AudioBuffer* noise, double snr_db, std::mt19937_64& rng,
                     const ExampleOptions& options = {});

/// Same, with labels already measured on the (16 kHz) IR.
Example make_example(const dsp::AudioBuffer& speech, const analysis::ImpulseResponse& ir, const IrLabels& labels,
                     const dsp::AudioBuffer* noise, double snr_db, std::mt19937_64& rng,
                     const ExampleOptions& options = {});

/// `ir` at 16 kHz with its direct index carried over.
analysis::ImpulseResponse to_feature_rate(const analysis::ImpulseResponse& ir);

}  // namespace roomrelight::dataset
