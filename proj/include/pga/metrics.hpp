#pragma once

#include "pga/audio.hpp"

#include <string>

namespace pga {

inline constexpr double kOverallSnrMinDb = -40.0;
inline constexpr double kOverallSnrMaxDb = 60.0;
inline constexpr double kSegSnrMinDb = -10.0;
inline constexpr double kSegSnrMaxDb = 35.0;
// A frame is scored when its clean RMS exceeds this fraction of the global clean RMS.
inline constexpr double kSegSilenceRatio = 1e-5;

// 10 log10(sum clean^2 / sum (clean - test)^2), clamped to [-40, 60] dB.
double overall_snr(const AudioSignal& clean, const AudioSignal& test);

struct SegmentalSnr {
  double mean_db = 0;
  std::size_t frames_scored = 0;
};

// Mean of per-frame SNRs (each clamped to [-10, 35] dB) over non-silent
// clean frames. Frames are full windows [t*hop, t*hop + frame_len).
SegmentalSnr segmental_snr(const AudioSignal& clean, const AudioSignal& test, int frame_len, int hop);

inline double snrseg(const AudioSignal& clean, const AudioSignal& test, int frame_len, int hop) {
  return segmental_snr(clean, test, frame_len, hop).mean_db;
}

struct EvalReport {
  double snrseg_in = 0;
  double snrseg_out = 0;
  double snrseg_improvement = 0;
  double snr_in = 0;
  double snr_out = 0;
  double snr_improvement = 0;
  std::size_t frames_scored = 0;

  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

EvalReport improvement(const AudioSignal& clean, const AudioSignal& noisy, const AudioSignal& enhanced,
                       int frame_len = 100, int hop = 50);

}  // namespace pga
