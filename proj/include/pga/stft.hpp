#pragma once

// Short-time analysis/synthesis: periodic windows, N-point DFT of arbitrary
// length (no zero padding) and weighted overlap-add with squared-window
// normalisation.

#include "pga/common.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pga {

enum class WindowKind { Hamming, Hann, Rect };

inline std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Hamming: return "hamming";
    case WindowKind::Hann: return "hann";
    case WindowKind::Rect: return "rect";
  }
  return "unknown";
}

inline WindowKind window_from_string(std::string_view name) {
  if (name == "hamming") return WindowKind::Hamming;
  if (name == "hann") return WindowKind::Hann;
  if (name == "rect") return WindowKind::Rect;
  throw std::invalid_argument("unknown window kind: " + std::string(name));
}

struct AnalysisConfig {
  int frame_len = 100;
  int hop = 50;
  WindowKind window = WindowKind::Hamming;
  int sample_rate = 8000;

  int num_bins() const { return frame_len; }
  int half_bins() const { return frame_len / 2 + 1; }

  void validate() const {
    if (frame_len < 2) throw std::invalid_argument("frame_len must be >= 2");
    if (hop < 1 || hop > frame_len) throw std::invalid_argument("hop must lie in [1, frame_len]");
    if (sample_rate <= 0) throw std::invalid_argument("sample_rate must be positive");
  }
};

// DFT-even (periodic) window of length n.
template <typename Scalar = double>
ArrayX<Scalar> make_window(WindowKind kind, int n) {
  ArrayX<Scalar> w(n);
  const Scalar step = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(n);
  for (int i = 0; i < n; ++i) {
    switch (kind) {
      case WindowKind::Hamming: w[i] = Scalar(0.54) - Scalar(0.46) * std::cos(step * i); break;
      case WindowKind::Hann: w[i] = Scalar(0.5) - Scalar(0.5) * std::cos(step * i); break;
      case WindowKind::Rect: w[i] = Scalar(1); break;
    }
  }
  return w;
}

// Number of analysis frames for a signal of `length` samples, including the
// zero-padded tail frame when the last full frame stops short of the end.
inline Eigen::Index frame_count(Eigen::Index length, const AnalysisConfig& cfg) {
  if (length < cfg.frame_len) return 0;
  const Eigen::Index full = (length - cfg.frame_len) / cfg.hop + 1;
  const Eigen::Index covered = (full - 1) * cfg.hop + cfg.frame_len;
  return covered < length ? full + 1 : full;
}

template <typename Scalar>
FrameMatrix<Scalar> frame_signal(const ArrayX<Scalar>& samples, const AnalysisConfig& cfg) {
  cfg.validate();
  if (samples.size() < cfg.frame_len) throw std::invalid_argument("signal too short");

  const Eigen::Index n = cfg.frame_len;
  const Eigen::Index count = frame_count(samples.size(), cfg);
  const ArrayX<Scalar> window = make_window<Scalar>(cfg.window, cfg.frame_len);

  FrameMatrix<Scalar> frames = FrameMatrix<Scalar>::Zero(n, count);
  for (Eigen::Index t = 0; t < count; ++t) {
    const Eigen::Index start = t * cfg.hop;
    const Eigen::Index avail = std::min<Eigen::Index>(n, samples.size() - start);
    frames.col(t).head(avail) =
        (samples.segment(start, avail) * window.head(avail)).matrix();
  }
  return frames;
}

// One frame's DFT with polar caches. bins[k] == mag[k] * exp(i * phase[k]).
template <typename Scalar>
struct FrameSpectrum {
  ArrayXc<Scalar> bins;
  ArrayX<Scalar> mag;
  ArrayX<Scalar> phase;
  Eigen::Index frame_index = 0;

  static FrameSpectrum from_bins(ArrayXc<Scalar> bins, Eigen::Index frame_index = 0) {
    FrameSpectrum spec;
    spec.mag = bins.abs();
    spec.phase = bins.arg();
    spec.bins = std::move(bins);
    spec.frame_index = frame_index;
    return spec;
  }

  Eigen::Index size() const { return bins.size(); }
};

// N-point transform, unscaled forward and 1/N inverse. Holds a plan cache,
// so one instance should not be shared between threads.
template <typename Scalar>
class Dft {
 public:
  explicit Dft(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("DFT length must be positive");
  }

  int size() const { return n_; }

  template <typename Derived>
  FrameSpectrum<Scalar> forward(const Eigen::DenseBase<Derived>& frame, Eigen::Index frame_index = 0) {
    if (frame.size() != n_) throw std::invalid_argument("frame length does not match DFT length");
    const ArrayX<Scalar> input = frame.derived().template cast<Scalar>().array();
    ArrayXc<Scalar> bins(n_);
    fft_.fwd(bins.data(), input.data(), n_);
    return FrameSpectrum<Scalar>::from_bins(std::move(bins), frame_index);
  }

  // Real part of the inverse transform.
  ArrayX<Scalar> inverse(const ArrayXc<Scalar>& bins) {
    if (bins.size() != n_) throw std::invalid_argument("spectrum length does not match DFT length");
    ArrayXc<Scalar> out(n_);
    fft_.inv(out.data(), bins.data(), n_);
    return out.real();
  }

  ArrayX<Scalar> inverse(const FrameSpectrum<Scalar>& spec) { return inverse(spec.bins); }

 private:
  int n_;
  Eigen::FFT<Scalar> fft_;
};

template <typename Derived>
auto forward(const Eigen::DenseBase<Derived>& frame) {
  using Scalar = typename Derived::Scalar;
  Dft<Scalar> dft(static_cast<int>(frame.size()));
  return dft.forward(frame);
}

template <typename Scalar>
ArrayX<Scalar> inverse(const FrameSpectrum<Scalar>& spec) {
  Dft<Scalar> dft(static_cast<int>(spec.size()));
  return dft.inverse(spec);
}

inline constexpr double kOlaNormFloor = 1e-8;

// Weighted overlap-add. Each frame is multiplied by the synthesis window and
// the sum is divided per sample by sum_t w^2[n - t*hop]. With unity spectral
// gain this reconstructs the analysed signal wherever the denominator exceeds
// the floor. The result is truncated to `length` when it is non-negative.
template <typename Scalar>
ArrayX<Scalar> overlap_add(const FrameMatrix<Scalar>& frames, const AnalysisConfig& cfg,
                           Eigen::Index length = -1) {
  cfg.validate();
  if (frames.cols() < 1) throw std::invalid_argument("overlap_add needs at least one frame");
  if (frames.rows() != cfg.frame_len) throw std::invalid_argument("frame length does not match config");

  const Eigen::Index n = cfg.frame_len;
  const Eigen::Index total = (frames.cols() - 1) * cfg.hop + n;
  const ArrayX<Scalar> window = make_window<Scalar>(cfg.window, cfg.frame_len);
  const ArrayX<Scalar> window_sq = window.square();

  ArrayX<Scalar> acc = ArrayX<Scalar>::Zero(total);
  ArrayX<Scalar> norm = ArrayX<Scalar>::Zero(total);
  for (Eigen::Index t = 0; t < frames.cols(); ++t) {
    const Eigen::Index start = t * cfg.hop;
    acc.segment(start, n) += frames.col(t).array() * window;
    norm.segment(start, n) += window_sq;
  }
  ArrayX<Scalar> out = acc / norm.max(Scalar(kOlaNormFloor));
  if (length >= 0 && length < total) out.conservativeResize(length);
  return out;
}

// Magnitude spectrogram in dB, frames x (N/2 + 1), floored at `db_floor`.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> spectrogram(const ArrayX<Scalar>& samples,
                                                                  const AnalysisConfig& cfg,
                                                                  Scalar db_floor = Scalar(-80)) {
  const FrameMatrix<Scalar> frames = frame_signal(samples, cfg);
  const int half = cfg.half_bins();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(frames.cols(), half);
  Dft<Scalar> dft(cfg.frame_len);
  for (Eigen::Index t = 0; t < frames.cols(); ++t) {
    const auto spec = dft.forward(frames.col(t), t);
    const ArrayX<Scalar> db = Scalar(20) * (spec.mag.head(half) + Scalar(1e-12)).log10();
    out.row(t) = db.max(db_floor).matrix().transpose();
  }
  return out;
}

}  // namespace pga
