#pragma once

// Probabilistic geometric gain. With
//   c_YD = (gamma + rho^2 - xi) / (2 sqrt(gamma rho))
//   c_XD = (gamma - rho^2 - xi) / (2 sqrt(xi rho))
// the gain is H = sqrt((1 - c_YD^2) / (1 - c_XD^2)). At rho = 1 this is the
// classical geometric-approach gain.
//
// Guards, in order: rho is floored; the ratio (1 - c_YD^2) / (1 - c_XD^2) is
// used as is when finite and non-negative (this includes the case where both
// cosines lie outside [-1, 1]); a negative ratio, where exactly one cosine is
// out of range and H would be imaginary, is replaced by its magnitude; a
// non-finite ratio falls back to clamping both cosines to [-(1 - delta),
// 1 - delta]; finally H is clamped to [h_floor, h_ceil]. Every firing is
// recorded in GainDiagnostics::guards.

#include "pga/common.hpp"
#include "pga/stft.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace pga {

struct GainGuards {
  double cos_delta = 1e-6;
  double h_floor = 0.05;
  double h_ceil = 10.0;
  double rho_floor = 0.05;

  void validate() const {
    if (!(cos_delta > 0.0 && cos_delta < 1.0)) throw std::invalid_argument("cos_delta must lie in (0, 1)");
    if (!(h_floor >= 0.0 && h_floor <= h_ceil)) throw std::invalid_argument("need 0 <= h_floor <= h_ceil");
    if (!(rho_floor > 0.0 && rho_floor <= 1.0)) throw std::invalid_argument("rho_floor must lie in (0, 1]");
  }
};

enum GuardFlag : std::uint8_t {
  kGuardNone = 0,
  kGuardRhoFloored = 1 << 0,
  kGuardCosYdOutOfRange = 1 << 1,
  kGuardCosXdOutOfRange = 1 << 2,
  kGuardCosineClamped = 1 << 3,
  kGuardGainFloored = 1 << 4,
  kGuardGainCeiled = 1 << 5,
  kGuardNegativeRatio = 1 << 6,
};

inline constexpr int kGuardFlagCount = 7;

inline const char* guard_name(int bit) {
  static constexpr const char* names[kGuardFlagCount] = {
      "rho_floored", "cos_yd_out_of_range", "cos_xd_out_of_range",
      "cosine_clamped", "gain_floored", "gain_ceiled", "negative_ratio"};
  return (bit >= 0 && bit < kGuardFlagCount) ? names[bit] : "unknown";
}

template <typename Scalar>
struct GainInputs {
  Scalar gamma;
  Scalar xi;
  Scalar rho;
};

template <typename Scalar>
struct GainDiagnostics {
  Scalar c_yd = 0;   // as evaluated, before any clamping
  Scalar c_xd = 0;
  Scalar ratio = 0;  // (1 - c_yd^2) / (1 - c_xd^2) before guards; may be negative or non-finite
  Scalar h = 0;
  std::uint8_t guards = kGuardNone;

  bool fired(GuardFlag flag) const { return (guards & flag) != 0; }
};

template <typename Scalar>
GainDiagnostics<Scalar> h_pga(const GainInputs<Scalar>& in, const GainGuards& guards) {
  if (!std::isfinite(in.gamma) || !std::isfinite(in.xi) || !std::isfinite(in.rho))
    throw std::domain_error("non-finite gain input");
  if (!(in.gamma > Scalar(0)) || !(in.xi > Scalar(0))) throw std::domain_error("gain inputs gamma and xi must be positive");

  GainDiagnostics<Scalar> d;
  Scalar rho = in.rho;
  if (rho < Scalar(guards.rho_floor)) {
    rho = Scalar(guards.rho_floor);
    d.guards |= kGuardRhoFloored;
  }

  const Scalar rho_sq = rho * rho;
  d.c_yd = (in.gamma + rho_sq - in.xi) / (Scalar(2) * std::sqrt(in.gamma * rho));
  d.c_xd = (in.gamma - rho_sq - in.xi) / (Scalar(2) * std::sqrt(in.xi * rho));
  if (std::abs(d.c_yd) > Scalar(1)) d.guards |= kGuardCosYdOutOfRange;
  if (std::abs(d.c_xd) > Scalar(1)) d.guards |= kGuardCosXdOutOfRange;

  d.ratio = (Scalar(1) - d.c_yd * d.c_yd) / (Scalar(1) - d.c_xd * d.c_xd);
  Scalar ratio = d.ratio;
  if (ratio < Scalar(0)) {
    ratio = -ratio;
    d.guards |= kGuardNegativeRatio;
  }
  if (!std::isfinite(ratio)) {
    const Scalar bound = Scalar(1) - Scalar(guards.cos_delta);
    const Scalar cy = std::clamp(d.c_yd, -bound, bound);
    const Scalar cx = std::clamp(d.c_xd, -bound, bound);
    ratio = (Scalar(1) - cy * cy) / (Scalar(1) - cx * cx);
    d.guards |= kGuardCosineClamped;
  }

  Scalar h = std::sqrt(ratio);
  if (h < Scalar(guards.h_floor)) {
    h = Scalar(guards.h_floor);
    d.guards |= kGuardGainFloored;
  } else if (h > Scalar(guards.h_ceil)) {
    h = Scalar(guards.h_ceil);
    d.guards |= kGuardGainCeiled;
  }
  d.h = h;
  return d;
}

// Gains for the non-redundant bins 0..N/2 of an N-point spectrum.
template <typename Scalar>
struct HalfSpectrumGain {
  ArrayX<Scalar> h;
  Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> guards;
};

template <typename Scalar>
HalfSpectrumGain<Scalar> h_pga_half(const ArrayX<Scalar>& gamma, const ArrayX<Scalar>& xi,
                                    const ArrayX<Scalar>& rho, const GainGuards& guards) {
  const Eigen::Index n = gamma.size();
  if (xi.size() != n || rho.size() != n) throw std::invalid_argument("gain input vectors differ in length");
  const Eigen::Index half = n / 2 + 1;
  HalfSpectrumGain<Scalar> out{ArrayX<Scalar>(half), Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>(half)};
  for (Eigen::Index k = 0; k < half; ++k) {
    const auto d = h_pga<Scalar>({gamma[k], xi[k], rho[k]}, guards);
    out.h[k] = d.h;
    out.guards[k] = d.guards;
  }
  return out;
}

// Expands half-spectrum gains to N bins so that h[N - k] == h[k].
template <typename Scalar>
ArrayX<Scalar> mirror_half_spectrum(const ArrayX<Scalar>& half, Eigen::Index n) {
  if (half.size() != n / 2 + 1) throw std::invalid_argument("half spectrum must hold N/2 + 1 bins");
  ArrayX<Scalar> full(n);
  full.head(half.size()) = half;
  for (Eigen::Index k = half.size(); k < n; ++k) full[k] = half[n - k];
  return full;
}

// Scales each bin's magnitude by h[k] and keeps its phase.
template <typename Scalar>
FrameSpectrum<Scalar> apply_gain(const FrameSpectrum<Scalar>& spec, const ArrayX<Scalar>& h) {
  if (h.size() != spec.size()) throw std::invalid_argument("gain length does not match spectrum");
  if ((h < Scalar(0)).any() || !h.isFinite().all()) throw std::invalid_argument("gain must be finite and non-negative");
  FrameSpectrum<Scalar> out;
  out.bins = spec.bins * h.template cast<std::complex<Scalar>>();
  out.mag = spec.mag * h;
  out.phase = spec.phase;
  out.frame_index = spec.frame_index;
  return out;
}

}  // namespace pga
