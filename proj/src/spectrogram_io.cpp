#include "pga/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

namespace pga {

void write_spectrogram_csv(std::ostream& out, const SpectrogramMatrix& spec) {
  for (Eigen::Index k = 0; k < spec.cols(); ++k) out << (k ? "," : "") << "bin_" << k;
  out << '\n' << std::setprecision(8);
  for (Eigen::Index t = 0; t < spec.rows(); ++t) {
    for (Eigen::Index k = 0; k < spec.cols(); ++k) out << (k ? "," : "") << spec(t, k);
    out << '\n';
  }
}

void write_spectrogram_pgm(std::ostream& out, const SpectrogramMatrix& spec, double db_floor) {
  const Eigen::Index width = spec.rows();
  const Eigen::Index height = spec.cols();
  const double top = spec.size() ? std::max(spec.maxCoeff(), db_floor) : db_floor;
  const double range = top - db_floor;

  out << "P5\n" << width << ' ' << height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(width));
  for (Eigen::Index y = 0; y < height; ++y) {
    const Eigen::Index bin = height - 1 - y;
    for (Eigen::Index t = 0; t < width; ++t) {
      const double v = range > 0.0 ? (spec(t, bin) - db_floor) / range : 0.0;
      row[static_cast<std::size_t>(t)] = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

}  // namespace pga
