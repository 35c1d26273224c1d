#pragma once

#include "pga/stft.hpp"

#include <iosfwd>

namespace pga {

using SpectrogramMatrix = Eigen::MatrixXd;  // frames x (N/2 + 1), dB

// Header row bin_0..bin_{K-1}, then one row per frame.
void write_spectrogram_csv(std::ostream& out, const SpectrogramMatrix& spec);

// Binary 8-bit PGM (P5). Time runs left to right, frequency bottom to top.
// Values map linearly from [db_floor, max] to [0, 255].
void write_spectrogram_pgm(std::ostream& out, const SpectrogramMatrix& spec, double db_floor);

}  // namespace pga
