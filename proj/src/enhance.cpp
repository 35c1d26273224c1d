#include "pga/enhance.hpp"

#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pga {

void EnhancerConfig::validate() const {
  analysis.validate();
  presence.validate();
  guards.validate();
  if (silence_frames < 1) throw std::invalid_argument("silence_frames must be >= 1");
  if (presence.w_global >= analysis.frame_len)
    throw std::invalid_argument("w_global must be smaller than the frame length");
}

void GuardCounts::add(std::uint8_t flags) {
  ++bins;
  for (int b = 0; b < kGuardFlagCount; ++b)
    if (flags & (1u << b)) ++fired[b];
}

std::size_t GuardCounts::total() const { return std::accumulate(fired.begin(), fired.end(), std::size_t{0}); }

EnhanceResult enhance(const AudioSignal& noisy, const EnhancerConfig& cfg) {
  cfg.validate();
  if (!noisy.samples.isFinite().all()) throw std::invalid_argument("non-finite samples in input");

  const AnalysisConfig& ac = cfg.analysis;
  const Eigen::Index needed = static_cast<Eigen::Index>(cfg.silence_frames) * ac.hop + ac.frame_len;
  if (noisy.size() < needed || frame_count(noisy.size(), ac) < cfg.silence_frames + 1)
    throw std::invalid_argument("input too short: need at least " + std::to_string(needed) + " samples");

  const FrameMatrix<double> frames = frame_signal(noisy.samples, ac);
  const Eigen::Index count = frames.cols();
  const Eigen::Index n = ac.frame_len;
  const Eigen::Index half = ac.half_bins();

  Dft<double> dft(ac.frame_len);
  std::vector<FrameSpectrum<double>> spectra;
  spectra.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index t = 0; t < count; ++t) spectra.push_back(dft.forward(frames.col(t), t));

  EnhanceResult result;
  result.noise = estimate_from_silence(spectra, cfg.silence_frames);
  result.trace.reserve(static_cast<std::size_t>(count));

  PresenceTracker<double> tracker(cfg.presence);
  const double alpha = cfg.presence.alpha_xi;
  ArrayX<double> prev_clean_snr = ArrayX<double>::Ones(n);

  FrameMatrix<double> synth(n, count);
  for (Eigen::Index t = 0; t < count; ++t) {
    const FrameSpectrum<double>& spec = spectra[static_cast<std::size_t>(t)];
    const ArrayX<double> gamma = a_posteriori_snr(spec, result.noise);
    const PresenceState<double> state = tracker.update(gamma);

    const ArrayX<double> xi = cfg.gain_xi == GainXiSource::DecisionDirected
                                  ? decision_directed_xi(gamma, prev_clean_snr, alpha)
                                  : state.xi;
    const ArrayX<double> rho = cfg.method == Method::GA ? ArrayX<double>::Ones(n) : state.rho;

    const HalfSpectrumGain<double> g = h_pga_half(gamma, xi, rho, cfg.guards);
    const ArrayX<double> h = mirror_half_spectrum(g.h, n);
    const FrameSpectrum<double> enhanced = apply_gain(spec, h);
    synth.col(t) = dft.inverse(enhanced).matrix();

    tracker.record_gain(h, gamma);
    prev_clean_snr = h.square() * gamma;

    FrameTrace tr;
    tr.frame = t;
    tr.gamma = gamma.head(half);
    tr.xi = xi.head(half);
    tr.p_local = state.p_local.head(half);
    tr.p_global = state.p_global.head(half);
    tr.rho = rho.head(half);
    tr.h = g.h;
    tr.guards = g.guards;
    tr.p_frame = state.p_frame;
    tr.xi_frame = state.xi_frame;
    tr.input_energy = spec.mag.square().sum() / double(n);
    tr.output_energy = enhanced.mag.square().sum() / double(n);
    for (Eigen::Index k = 0; k < half; ++k) result.guard_counts.add(g.guards[k]);
    result.trace.push_back(std::move(tr));
  }

  result.output.sample_rate = noisy.sample_rate;
  result.output.samples = overlap_add(synth, ac, noisy.size());
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<FrameTrace>& trace, TraceLayout layout) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  if (layout == TraceLayout::PerFrame) {
    out << "gamma,xi,p_local,p_global,p_frame,rho,h\n";
    for (const FrameTrace& f : trace) {
      out << f.gamma.mean() << ',' << f.xi.mean() << ',' << f.p_local.mean() << ',' << f.p_global.mean() << ','
          << f.p_frame << ',' << f.rho.mean() << ',' << f.h.mean() << '\n';
    }
  } else {
    out << "frame,bin,gamma,xi,p_local,p_global,p_frame,rho,h,guards\n";
    for (const FrameTrace& f : trace) {
      for (Eigen::Index k = 0; k < f.h.size(); ++k) {
        out << f.frame << ',' << k << ',' << f.gamma[k] << ',' << f.xi[k] << ',' << f.p_local[k] << ','
            << f.p_global[k] << ',' << f.p_frame << ',' << f.rho[k] << ',' << f.h[k] << ','
            << static_cast<int>(f.guards[k]) << '\n';
      }
    }
  }
  out.flags(flags);
  out.precision(precision);
}

std::string_view to_string(Method method) { return method == Method::GA ? "ga" : "pga"; }

Method method_from_string(std::string_view name) {
  if (name == "pga") return Method::PGA;
  if (name == "ga") return Method::GA;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

std::string describe(const EnhancerConfig& cfg) {
  std::ostringstream os;
  const auto& a = cfg.analysis;
  const auto& p = cfg.presence;
  const auto& g = cfg.guards;
  os << "method          " << to_string(cfg.method) << '\n'
     << "frame           " << a.frame_len << " samples\n"
     << "hop             " << a.hop << " samples (overlap " << 100.0 * (a.frame_len - a.hop) / a.frame_len << "%)\n"
     << "window          " << to_string(a.window) << '\n'
     << "silence_frames  " << cfg.silence_frames << '\n'
     << "xi_min          " << p.xi_min_db << " dB\n"
     << "xi_max          " << p.xi_max_db << " dB\n"
     << "xi_peak         " << p.xi_peak_db << " dB\n"
     << "w_local         " << p.w_local << '\n'
     << "w_global        " << p.w_global << '\n'
     << "alpha_xi        " << p.alpha_xi << '\n'
     << "xi_estimator    " << (p.xi_estimator == XiEstimator::DecisionDirected ? "decision_directed" : "as_written")
     << '\n'
     << "gain_xi         " << (cfg.gain_xi == GainXiSource::DecisionDirected ? "decision_directed" : "presence")
     << '\n'
     << "h_floor         " << g.h_floor << '\n'
     << "h_ceil          " << g.h_ceil << '\n'
     << "rho_floor       " << g.rho_floor << '\n'
     << "cos_delta       " << g.cos_delta << '\n';
  return os.str();
}

}  // namespace pga
