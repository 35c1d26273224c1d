#pragma once

#include "pga/common.hpp"

#include <filesystem>
#include <stdexcept>

namespace pga {

// Mono PCM audio. Samples nominally lie in [-1, 1].
struct AudioSignal {
  ArrayX<double> samples;
  int sample_rate = 8000;

  Eigen::Index size() const { return samples.size(); }
};

enum class SampleFormat { Pcm16, Float32 };

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a mono RIFF/WAVE file holding 16-bit PCM or 32-bit IEEE float.
// 16-bit samples are divided by 32768. If `format` is non-null it receives
// the on-disk sample format.
AudioSignal read_wav(const std::filesystem::path& path, SampleFormat* format = nullptr);

// Writes a mono WAV file. 16-bit output rounds half away from zero and
// saturates; the return value is the number of saturated samples.
std::size_t write_wav(const std::filesystem::path& path, const AudioSignal& signal,
                      SampleFormat format = SampleFormat::Pcm16);

// The signal exactly as it would read back after write_wav in `format`.
AudioSignal quantize(const AudioSignal& signal, SampleFormat format);

// clean + s * noise[0 : len(clean)], with s chosen so the overall SNR equals
// `target_db`. Powers are measured over the full clean length.
AudioSignal mix_at_snr(const AudioSignal& clean, const AudioSignal& noise, double target_db);

// The noise scale mix_at_snr would apply.
double mix_scale(const AudioSignal& clean, const AudioSignal& noise, double target_db);

}  // namespace pga
