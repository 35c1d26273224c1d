// pga: mix, enhance, eval and spectrogram export.
// Exit codes: 0 success, 1 processing error, 2 usage error.

#include "pga/pga.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitProcessing = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<pga::SampleFormat> parse_format(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "pcm16") return pga::SampleFormat::Pcm16;
  if (name == "float32") return pga::SampleFormat::Float32;
  throw UsageError("unknown sample format: " + name);
}

std::string lower_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

struct MixArgs {
  std::string clean, noise, out, format = "auto";
  double snr = 0.0;
};

int run_mix(const MixArgs& a) {
  const auto requested = parse_format(a.format);
  pga::SampleFormat clean_format{};
  const pga::AudioSignal clean = pga::read_wav(a.clean, &clean_format);
  const pga::AudioSignal noise = pga::read_wav(a.noise);
  const pga::SampleFormat format = requested.value_or(clean_format);

  const pga::AudioSignal mixed = pga::mix_at_snr(clean, noise, a.snr);
  const std::size_t clipped = pga::write_wav(a.out, mixed, format);
  const double achieved = pga::overall_snr(clean, pga::quantize(mixed, format));
  std::cout << std::fixed << std::setprecision(6) << "target SNR   " << a.snr << " dB\n"
            << "achieved SNR " << achieved << " dB\n"
            << "noise scale  " << pga::mix_scale(clean, noise, a.snr) << '\n';
  if (clipped) std::cout << "clipped samples " << clipped << '\n';
  return 0;
}

struct EnhanceArgs {
  std::string in, out, method = "pga", trace, config, format = "auto";
  bool trace_bins = false;
  bool verbose = false;
};

int run_enhance(const EnhanceArgs& a) {
  pga::EnhancerConfig cfg;
  if (!a.config.empty()) pga::apply_config_file(a.config, cfg);
  cfg.method = pga::method_from_string(a.method);
  const auto requested = parse_format(a.format);

  pga::SampleFormat in_format{};
  const pga::AudioSignal noisy = pga::read_wav(a.in, &in_format);
  cfg.analysis.sample_rate = noisy.sample_rate;
  if (a.verbose) std::cout << pga::describe(cfg);

  const pga::EnhanceResult result = pga::enhance(noisy, cfg);
  const std::size_t clipped = pga::write_wav(a.out, result.output, requested.value_or(in_format));

  if (!a.trace.empty()) {
    std::ofstream trace(a.trace);
    if (!trace) throw std::runtime_error("cannot open trace file " + a.trace);
    pga::write_trace_csv(trace, result.trace, a.trace_bins ? pga::TraceLayout::PerBin : pga::TraceLayout::PerFrame);
  }

  if (a.verbose) {
    std::cout << "frames          " << result.trace.size() << '\n';
    for (int b = 0; b < pga::kGuardFlagCount; ++b)
      std::cout << "guard " << std::left << std::setw(20) << pga::guard_name(b) << std::right
                << result.guard_counts.fired[static_cast<std::size_t>(b)] << " / " << result.guard_counts.bins << '\n';
  }
  if (clipped) std::cout << "clipped samples " << clipped << '\n';
  return 0;
}

struct EvalArgs {
  std::string clean, noisy, enhanced;
  bool json = false;
  bool csv = false;
  int frame_len = 100;
  int hop = 50;
};

int run_eval(const EvalArgs& a) {
  const pga::AudioSignal clean = pga::read_wav(a.clean);
  const pga::AudioSignal noisy = pga::read_wav(a.noisy);
  const pga::AudioSignal enhanced = pga::read_wav(a.enhanced);
  if (clean.size() != noisy.size() || clean.size() != enhanced.size()) {
    std::cerr << "error: length mismatch: clean " << clean.size() << ", noisy " << noisy.size() << ", enhanced "
              << enhanced.size() << " samples\n";
    return kExitProcessing;
  }
  const pga::EvalReport r = pga::improvement(clean, noisy, enhanced, a.frame_len, a.hop);
  if (a.json) {
    std::cout << r.to_json() << '\n';
  } else if (a.csv) {
    std::cout << pga::EvalReport::csv_header() << '\n' << r.to_csv_row() << '\n';
  } else {
    std::cout << std::fixed << std::setprecision(2) << "metric        input   output  improvement\n"
              << "SNRSeg (dB) " << std::setw(8) << r.snrseg_in << ' ' << std::setw(8) << r.snrseg_out << ' '
              << std::setw(12) << r.snrseg_improvement << '\n'
              << "SNR (dB)    " << std::setw(8) << r.snr_in << ' ' << std::setw(8) << r.snr_out << ' '
              << std::setw(12) << r.snr_improvement << '\n'
              << "frames scored " << r.frames_scored << '\n';
  }
  return 0;
}

struct SpectrogramArgs {
  std::string in, out;
  double db_floor = -80.0;
  int frame_len = 100;
  int hop = 50;
};

int run_spectrogram(const SpectrogramArgs& a) {
  const std::string ext = lower_extension(a.out);
  if (ext != ".csv" && ext != ".pgm") throw UsageError("unsupported output extension '" + ext + "' (use .csv or .pgm)");

  const pga::AudioSignal signal = pga::read_wav(a.in);
  pga::AnalysisConfig cfg;
  cfg.frame_len = a.frame_len;
  cfg.hop = a.hop;
  cfg.sample_rate = signal.sample_rate;
  const pga::SpectrogramMatrix spec = pga::spectrogram(signal.samples, cfg, a.db_floor);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + a.out + " for writing");
  if (ext == ".csv") pga::write_spectrogram_csv(out, spec);
  else pga::write_spectrogram_pgm(out, spec, a.db_floor);
  std::cout << spec.rows() << " frames x " << spec.cols() << " bins\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic geometric spectral subtraction for noisy speech"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Add noise to clean speech at a target SNR");
  mix_cmd->add_option("--clean", mix.clean, "Clean speech WAV")->required();
  mix_cmd->add_option("--noise", mix.noise, "Noise WAV (at least as long as the clean file)")->required();
  mix_cmd->add_option("--snr", mix.snr, "Target overall SNR in dB")->required();
  mix_cmd->add_option("--out", mix.out, "Output WAV")->required();
  mix_cmd->add_option("--format", mix.format, "auto|pcm16|float32 (auto follows --clean)")
      ->check(CLI::IsMember({"auto", "pcm16", "float32"}));

  EnhanceArgs enh;
  auto* enh_cmd = app.add_subcommand("enhance", "Enhance a noisy WAV file");
  enh_cmd->add_option("--in", enh.in, "Noisy input WAV")->required();
  enh_cmd->add_option("--out", enh.out, "Enhanced output WAV")->required();
  enh_cmd->add_option("--method", enh.method, "pga or ga")->check(CLI::IsMember({"pga", "ga"}));
  enh_cmd->add_option("--trace", enh.trace, "Write the per-frame trace CSV here");
  enh_cmd->add_flag("--trace-bins", enh.trace_bins, "Write one trace row per (frame, bin)");
  enh_cmd->add_option("--config", enh.config, "key=value configuration file");
  enh_cmd->add_option("--format", enh.format, "auto|pcm16|float32 (auto follows --in)")
      ->check(CLI::IsMember({"auto", "pcm16", "float32"}));
  enh_cmd->add_flag("-v,--verbose", enh.verbose, "Print the configuration and guard statistics");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Segmental and overall SNR improvement");
  eval_cmd->add_option("--clean", ev.clean, "Clean reference WAV")->required();
  eval_cmd->add_option("--noisy", ev.noisy, "Noisy WAV")->required();
  eval_cmd->add_option("--enhanced", ev.enhanced, "Enhanced WAV")->required();
  eval_cmd->add_flag("--json", ev.json, "Single-line JSON output");
  eval_cmd->add_flag("--csv", ev.csv, "CSV header and row");
  eval_cmd->add_option("--frame-len", ev.frame_len, "SNRSeg frame length in samples")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--hop", ev.hop, "SNRSeg hop in samples")->check(CLI::PositiveNumber);

  SpectrogramArgs sg;
  auto* sg_cmd = app.add_subcommand("spectrogram", "Export a magnitude spectrogram as CSV or PGM");
  sg_cmd->add_option("--in", sg.in, "Input WAV")->required();
  sg_cmd->add_option("--out", sg.out, "Output .csv or .pgm")->required();
  sg_cmd->add_option("--db-floor", sg.db_floor, "Lower dB bound");
  sg_cmd->add_option("--frame-len", sg.frame_len, "Frame length in samples")->check(CLI::PositiveNumber);
  sg_cmd->add_option("--hop", sg.hop, "Hop in samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*mix_cmd) return run_mix(mix);
    if (*enh_cmd) return run_enhance(enh);
    if (*eval_cmd) return run_eval(ev);
    if (*sg_cmd) return run_spectrogram(sg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProcessing;
  }
  return kExitUsage;
}
