#pragma once

#include "pga/common.hpp"
#include "pga/stft.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace pga {

inline constexpr double kNoisePsdFloor = 1e-12;

// Per-bin noise power |D[k]|^2 averaged over leading speech-free frames.
template <typename Scalar>
struct NoiseProfile {
  ArrayX<Scalar> psd;
  int frames_used = 0;
};

template <typename Scalar>
NoiseProfile<Scalar> estimate_from_silence(std::span<const FrameSpectrum<Scalar>> frames, int m) {
  if (m < 1) throw std::invalid_argument("silence frame count must be >= 1");
  if (static_cast<std::size_t>(m) > frames.size()) throw std::invalid_argument("not enough silence frames");

  const Eigen::Index n = frames.front().size();
  ArrayX<Scalar> sum = ArrayX<Scalar>::Zero(n);
  for (int t = 0; t < m; ++t) {
    if (frames[t].size() != n) throw std::invalid_argument("silence frames differ in length");
    sum += frames[t].mag.square();
  }
  return {(sum / Scalar(m)).max(Scalar(kNoisePsdFloor)), m};
}

template <typename Scalar>
NoiseProfile<Scalar> estimate_from_silence(const std::vector<FrameSpectrum<Scalar>>& frames, int m) {
  return estimate_from_silence(std::span<const FrameSpectrum<Scalar>>(frames), m);
}

// gamma[k] = |Y[k]|^2 / |D[k]|^2, clamped to [1e-6, 1e6].
template <typename Scalar>
ArrayX<Scalar> a_posteriori_snr(const FrameSpectrum<Scalar>& spec, const NoiseProfile<Scalar>& noise) {
  if (spec.size() != noise.psd.size()) throw std::invalid_argument("bin count mismatch between frame and noise profile");
  return (spec.mag.square() / noise.psd).max(Scalar(kSnrClampMin)).min(Scalar(kSnrClampMax));
}

}  // namespace pga
