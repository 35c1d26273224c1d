#pragma once

// Speech-presence machinery feeding the confidence parameter rho:
// a priori SNR proxy, local/global spectral smoothing, the three presence
// probabilities and rho = sqrt(1 - P_local * P_global * P_frame).

#include "pga/common.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace pga {

enum class XiEstimator {
  AsWritten,         // xi = (1 - alpha) * gamma
  DecisionDirected,  // xi = alpha * |X_prev|^2 / |D|^2 + (1 - alpha) * max(gamma - 1, 0)
};

struct PresenceConfig {
  double xi_min_db = -10.0;
  double xi_max_db = -5.0;
  double xi_peak_db = 10.0;
  int w_local = 1;
  int w_global = 15;
  double alpha_xi = 0.7;
  XiEstimator xi_estimator = XiEstimator::AsWritten;

  void validate() const {
    if (!(xi_min_db < xi_max_db)) throw std::invalid_argument("xi_min must be below xi_max");
    if (w_local < 0 || w_global < 0) throw std::invalid_argument("smoothing half-widths must be non-negative");
    if (w_local > w_global) throw std::invalid_argument("w_local must not exceed w_global");
    if (!(alpha_xi >= 0.0 && alpha_xi < 1.0)) throw std::invalid_argument("alpha_xi must lie in [0, 1)");
  }
};

// Linear power ratios, converted once from the dB configuration.
template <typename Scalar = double>
struct PresenceThresholds {
  Scalar xi_min;
  Scalar xi_max;
  Scalar xi_peak;

  static PresenceThresholds from(const PresenceConfig& cfg) {
    cfg.validate();
    return {Scalar(db_to_power(cfg.xi_min_db)), Scalar(db_to_power(cfg.xi_max_db)),
            Scalar(db_to_power(cfg.xi_peak_db))};
  }
};

template <typename Scalar>
ArrayX<Scalar> a_priori_proxy(const ArrayX<Scalar>& gamma, Scalar alpha) {
  return (Scalar(1) - alpha) * gamma;
}

template <typename Scalar>
ArrayX<Scalar> decision_directed_xi(const ArrayX<Scalar>& gamma, const ArrayX<Scalar>& prev_clean_snr,
                                    Scalar alpha) {
  const ArrayX<Scalar> ml = (gamma - Scalar(1)).max(Scalar(0));
  return (alpha * prev_clean_snr + (Scalar(1) - alpha) * ml)
      .max(Scalar(kSnrClampMin))
      .min(Scalar(kSnrClampMax));
}

// Unit-sum Hann taps h(-w..w), h(i) proportional to 1 + cos(pi * i / (w + 1)).
template <typename Scalar = double>
ArrayX<Scalar> hann_taps(int w) {
  if (w < 0) throw std::invalid_argument("window half-width must be non-negative");
  ArrayX<Scalar> taps(2 * w + 1);
  for (int i = -w; i <= w; ++i)
    taps[i + w] = Scalar(0.5) * (Scalar(1) + std::cos(std::numbers::pi_v<Scalar> * i / Scalar(w + 1)));
  return taps / taps.sum();
}

// xi_smoothed[k] = sum_i h(i) * xi[k - i], replicating the boundary bins.
template <typename Scalar>
ArrayX<Scalar> smooth_xi(const ArrayX<Scalar>& xi, int w) {
  const Eigen::Index n = xi.size();
  if (w < 0 || w >= n) throw std::invalid_argument("smoothing half-width must lie in [0, N)");
  if (w == 0) return xi;

  const ArrayX<Scalar> taps = hann_taps<Scalar>(w);
  ArrayX<Scalar> out = ArrayX<Scalar>::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar acc = 0;
    for (int i = -w; i <= w; ++i) {
      const Eigen::Index j = std::clamp<Eigen::Index>(k - i, 0, n - 1);
      acc += taps[i + w] * xi[j];
    }
    out[k] = acc;
  }
  return out;
}

// Log-linear ramp from 0 at xi_min to 1 at xi_max.
template <typename Scalar>
Scalar presence_ramp(Scalar xi, Scalar lo, Scalar hi) {
  if (xi <= lo) return Scalar(0);
  if (xi >= hi) return Scalar(1);
  return std::log(xi / lo) / std::log(hi / lo);
}

template <typename Scalar>
ArrayX<Scalar> p_psi(const ArrayX<Scalar>& xi_smoothed, const PresenceThresholds<Scalar>& th) {
  return xi_smoothed.unaryExpr([&](Scalar x) { return presence_ramp(x, th.xi_min, th.xi_max); });
}

template <typename Scalar>
Scalar xi_frame_mean(const ArrayX<Scalar>& xi) {
  if (xi.size() < 1) throw std::invalid_argument("empty xi vector");
  return xi.mean();
}

// Interpolation between xi_peak*xi_min and xi_peak*xi_max. The middle branch
// divides by log(xi_max / xi_min) and is clamped to [0, 1].
template <typename Scalar>
Scalar onset_mu(Scalar xi_frame, const PresenceThresholds<Scalar>& th) {
  const Scalar lo = th.xi_peak * th.xi_min;
  const Scalar hi = th.xi_peak * th.xi_max;
  if (xi_frame <= lo) return Scalar(0);
  if (xi_frame >= hi) return Scalar(1);
  const Scalar mu = std::log(xi_frame / lo) / std::log(th.xi_max / th.xi_min);
  return std::clamp(mu, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar p_frame(Scalar xi_frame, Scalar xi_frame_prev, const PresenceThresholds<Scalar>& th) {
  if (xi_frame < th.xi_min) return Scalar(0);
  if (xi_frame > xi_frame_prev && xi_frame > th.xi_min) return Scalar(1);
  return onset_mu(xi_frame, th);
}

template <typename Scalar>
ArrayX<Scalar> rho(const ArrayX<Scalar>& p_local, const ArrayX<Scalar>& p_global, Scalar p_frame) {
  if (p_local.size() != p_global.size()) throw std::invalid_argument("probability vectors differ in length");
  return (Scalar(1) - p_local * p_global * p_frame).max(Scalar(0)).sqrt();
}

template <typename Scalar>
struct PresenceState {
  ArrayX<Scalar> xi;
  ArrayX<Scalar> xi_local;
  ArrayX<Scalar> xi_global;
  Scalar xi_frame = 0;
  Scalar xi_frame_prev = 0;
  ArrayX<Scalar> p_local;
  ArrayX<Scalar> p_global;
  Scalar p_frame = 0;
  ArrayX<Scalar> rho;
  Eigen::Index frame_index = 0;
};

// Carries xi_frame(t-1) (and, for the decision-directed estimator, the
// previous clean-speech SNR) from frame to frame. Feed frames in order.
template <typename Scalar = double>
class PresenceTracker {
 public:
  explicit PresenceTracker(const PresenceConfig& cfg)
      : cfg_(cfg), th_(PresenceThresholds<Scalar>::from(cfg)), xi_frame_prev_(th_.xi_min) {}

  const PresenceConfig& config() const { return cfg_; }
  const PresenceThresholds<Scalar>& thresholds() const { return th_; }

  PresenceState<Scalar> update(const ArrayX<Scalar>& gamma) {
    const Scalar alpha = Scalar(cfg_.alpha_xi);
    PresenceState<Scalar> s;
    s.frame_index = frame_index_++;
    if (cfg_.xi_estimator == XiEstimator::DecisionDirected) {
      if (prev_clean_snr_.size() != gamma.size())
        prev_clean_snr_ = ArrayX<Scalar>::Ones(gamma.size());
      s.xi = decision_directed_xi(gamma, prev_clean_snr_, alpha);
    } else {
      s.xi = a_priori_proxy(gamma, alpha);
    }
    s.xi_local = smooth_xi(s.xi, cfg_.w_local);
    s.xi_global = smooth_xi(s.xi, cfg_.w_global);
    s.p_local = p_psi(s.xi_local, th_);
    s.p_global = p_psi(s.xi_global, th_);
    s.xi_frame = xi_frame_mean(s.xi);
    s.xi_frame_prev = xi_frame_prev_;
    s.p_frame = p_frame(s.xi_frame, s.xi_frame_prev, th_);
    s.rho = rho(s.p_local, s.p_global, s.p_frame);
    xi_frame_prev_ = s.xi_frame;
    return s;
  }

  // Stores |X_hat|^2 / |D|^2 = h^2 * gamma for the decision-directed estimator.
  void record_gain(const ArrayX<Scalar>& gain, const ArrayX<Scalar>& gamma) {
    prev_clean_snr_ = gain.square() * gamma;
  }

 private:
  PresenceConfig cfg_;
  PresenceThresholds<Scalar> th_;
  Scalar xi_frame_prev_;
  ArrayX<Scalar> prev_clean_snr_;
  Eigen::Index frame_index_ = 0;
};

}  // namespace pga
