#include "pga/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pga {
namespace {

void require_same_length(const AudioSignal& a, const AudioSignal& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

double snr_db(double signal_energy, double error_energy, double lo, double hi) {
  if (error_energy <= 0.0) return hi;
  return std::clamp(10.0 * std::log10(signal_energy / error_energy), lo, hi);
}

}  // namespace

double overall_snr(const AudioSignal& clean, const AudioSignal& test) {
  require_same_length(clean, test);
  const double signal = clean.samples.square().sum();
  if (!(signal > 0.0)) throw std::invalid_argument("clean signal is identically zero");
  const double error = (clean.samples - test.samples).square().sum();
  return snr_db(signal, error, kOverallSnrMinDb, kOverallSnrMaxDb);
}

SegmentalSnr segmental_snr(const AudioSignal& clean, const AudioSignal& test, int frame_len, int hop) {
  require_same_length(clean, test);
  if (frame_len < 1 || hop < 1) throw std::invalid_argument("frame_len and hop must be positive");
  if (clean.size() < frame_len) throw std::invalid_argument("no scoreable frames: signal shorter than one frame");

  const double global_rms = std::sqrt(clean.samples.square().mean());
  const double threshold = kSegSilenceRatio * global_rms;
  const Eigen::Index count = (clean.size() - frame_len) / hop + 1;

  SegmentalSnr out;
  double sum = 0.0;
  for (Eigen::Index t = 0; t < count; ++t) {
    const auto c = clean.samples.segment(t * hop, frame_len);
    const auto e = c - test.samples.segment(t * hop, frame_len);
    const double energy = c.square().sum();
    if (!(std::sqrt(energy / frame_len) > threshold)) continue;
    sum += snr_db(energy, e.square().sum(), kSegSnrMinDb, kSegSnrMaxDb);
    ++out.frames_scored;
  }
  if (out.frames_scored == 0) throw std::invalid_argument("no scoreable frames");
  out.mean_db = sum / static_cast<double>(out.frames_scored);
  return out;
}

EvalReport improvement(const AudioSignal& clean, const AudioSignal& noisy, const AudioSignal& enhanced,
                       int frame_len, int hop) {
  require_same_length(clean, noisy);
  require_same_length(clean, enhanced);
  EvalReport r;
  const SegmentalSnr seg_in = segmental_snr(clean, noisy, frame_len, hop);
  const SegmentalSnr seg_out = segmental_snr(clean, enhanced, frame_len, hop);
  r.snrseg_in = seg_in.mean_db;
  r.snrseg_out = seg_out.mean_db;
  r.snrseg_improvement = r.snrseg_out - r.snrseg_in;
  r.snr_in = overall_snr(clean, noisy);
  r.snr_out = overall_snr(clean, enhanced);
  r.snr_improvement = r.snr_out - r.snr_in;
  r.frames_scored = seg_out.frames_scored;
  return r;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["snrseg_in"] = snrseg_in;
  j["snrseg_out"] = snrseg_out;
  j["snrseg_improvement"] = snrseg_improvement;
  j["snr_in"] = snr_in;
  j["snr_out"] = snr_out;
  j["snr_improvement"] = snr_improvement;
  j["frames_scored"] = frames_scored;
  return j.dump();
}

std::string EvalReport::csv_header() {
  return "snrseg_in,snrseg_out,snrseg_improvement,snr_in,snr_out,snr_improvement,frames_scored";
}

std::string EvalReport::to_csv_row() const {
  std::ostringstream os;
  os << std::setprecision(10) << snrseg_in << ',' << snrseg_out << ',' << snrseg_improvement << ',' << snr_in << ','
     << snr_out << ',' << snr_improvement << ',' << frames_scored;
  return os.str();
}

}  // namespace pga
