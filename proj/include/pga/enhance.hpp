#pragma once

#include "pga/audio.hpp"
#include "pga/gain.hpp"
#include "pga/noise.hpp"
#include "pga/presence.hpp"
#include "pga/stft.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pga {

enum class Method { PGA, GA };

// Which a priori SNR drives the gain. Presence reuses the quantity computed
// for the presence probabilities.
enum class GainXiSource { Presence, DecisionDirected };

struct EnhancerConfig {
  AnalysisConfig analysis;
  PresenceConfig presence;
  GainGuards guards;
  int silence_frames = 6;
  Method method = Method::PGA;
  GainXiSource gain_xi = GainXiSource::Presence;

  void validate() const;
};

// Per-frame record of everything that went into the gain. Vectors cover the
// non-redundant bins 0..N/2.
struct FrameTrace {
  Eigen::Index frame = 0;
  ArrayX<double> gamma;
  ArrayX<double> xi;
  ArrayX<double> p_local;
  ArrayX<double> p_global;
  ArrayX<double> rho;
  ArrayX<double> h;
  Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> guards;
  double p_frame = 0;
  double xi_frame = 0;
  double input_energy = 0;   // sum |Y|^2 / N
  double output_energy = 0;  // sum |X_hat|^2 / N
};

struct GuardCounts {
  std::array<std::size_t, kGuardFlagCount> fired{};
  std::size_t bins = 0;

  void add(std::uint8_t flags);
  std::size_t total() const;
};

struct EnhanceResult {
  AudioSignal output;
  std::vector<FrameTrace> trace;
  GuardCounts guard_counts;
  NoiseProfile<double> noise;
};

EnhanceResult enhance(const AudioSignal& noisy, const EnhancerConfig& cfg);

enum class TraceLayout { PerFrame, PerBin };

// PerFrame: header gamma,xi,p_local,p_global,p_frame,rho,h with bin-averaged
// vectors. PerBin: frame,bin followed by the same columns and a guards bitmask.
void write_trace_csv(std::ostream& out, const std::vector<FrameTrace>& trace,
                     TraceLayout layout = TraceLayout::PerFrame);

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

// Human-readable summary of every tunable.
std::string describe(const EnhancerConfig& cfg);

// Applies flat key=value lines ('#' starts a comment) to `cfg`. Throws
// std::invalid_argument naming the offending line on unknown keys or bad values.
void apply_config_text(std::string_view text, EnhancerConfig& cfg);
void apply_config_file(const std::filesystem::path& path, EnhancerConfig& cfg);

}  // namespace pga
