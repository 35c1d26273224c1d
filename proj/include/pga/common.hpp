#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>

namespace pga {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ArrayXc = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

// Frames are stored column-wise: one column per frame, frame_len rows.
template <typename Scalar>
using FrameMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Bounds applied to every SNR-like ratio so downstream logs and roots stay finite.
inline constexpr double kSnrClampMin = 1e-6;
inline constexpr double kSnrClampMax = 1e6;

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace pga
