#include "pga/audio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace pga {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::int16_t to_pcm16(double x, bool& clipped) {
  const double scaled = std::round(x * 32768.0);  // half away from zero
  clipped = scaled > 32767.0 || scaled < -32768.0;
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

AudioSignal read_wav(const std::filesystem::path& path, SampleFormat* format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError("malformed header: not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || len > avail) throw WavError("malformed header: truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      tag = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (tag == kFormatExtensible) {
        if (len < 26) throw WavError("malformed header: truncated extensible fmt chunk");
        tag = read_u16(f + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, avail);  // tolerate streamed files with a bogus length
      have_data = true;
      break;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) throw WavError("malformed header: missing fmt chunk");
  if (!have_data) throw WavError("malformed header: missing data chunk");
  if (channels != 1) throw WavError("unsupported channel count " + std::to_string(channels) + " (mono only)");
  if (rate == 0) throw WavError("malformed header: zero sample rate");

  AudioSignal out;
  out.sample_rate = static_cast<int>(rate);
  if (tag == kFormatPcm && bits == 16) {
    const std::size_t n = data_len / 2;
    if (n == 0) throw WavError("empty audio");
    out.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      out.samples[static_cast<Eigen::Index>(i)] = static_cast<std::int16_t>(read_u16(data + 2 * i)) / 32768.0;
    if (format) *format = SampleFormat::Pcm16;
  } else if (tag == kFormatFloat && bits == 32) {
    const std::size_t n = data_len / 4;
    if (n == 0) throw WavError("empty audio");
    out.samples.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      out.samples[static_cast<Eigen::Index>(i)] = std::bit_cast<float>(read_u32(data + 4 * i));
    if (format) *format = SampleFormat::Float32;
  } else {
    throw WavError("unsupported codec (format tag " + std::to_string(tag) + ", " + std::to_string(bits) +
                   " bits); expected 16-bit PCM or 32-bit float");
  }
  return out;
}

std::size_t write_wav(const std::filesystem::path& path, const AudioSignal& signal, SampleFormat format) {
  if (signal.sample_rate <= 0) throw WavError("sample rate must be positive");
  const bool pcm = format == SampleFormat::Pcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const std::uint32_t data_len = static_cast<std::uint32_t>(signal.size()) * bytes_per_sample;

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(signal.sample_rate) * bytes_per_sample);
  put_u16(out, bytes_per_sample);
  put_u16(out, static_cast<std::uint16_t>(8 * bytes_per_sample));
  put_tag(out, "data");
  put_u32(out, data_len);

  std::size_t clipped = 0;
  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    if (pcm) {
      bool c = false;
      put_u16(out, static_cast<std::uint16_t>(to_pcm16(signal.samples[i], c)));
      clipped += c;
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(signal.samples[i])));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw WavError("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw WavError("write failed for " + path.string());
  return clipped;
}

AudioSignal quantize(const AudioSignal& signal, SampleFormat format) {
  AudioSignal out = signal;
  if (format == SampleFormat::Pcm16) {
    bool c = false;
    out.samples = signal.samples.unaryExpr([&](double x) { return to_pcm16(x, c) / 32768.0; });
  } else {
    out.samples = signal.samples.cast<float>().cast<double>();
  }
  return out;
}

double mix_scale(const AudioSignal& clean, const AudioSignal& noise, double target_db) {
  if (clean.sample_rate != noise.sample_rate) throw std::invalid_argument("sample rates differ");
  if (noise.size() < clean.size()) throw std::invalid_argument("noise is shorter than clean speech");
  if (clean.size() == 0) throw std::invalid_argument("zero-power clean signal");
  const double p_clean = clean.samples.square().mean();
  const double p_noise = noise.samples.head(clean.size()).square().mean();
  if (!(p_clean > 0.0)) throw std::invalid_argument("zero-power clean signal");
  if (!(p_noise > 0.0)) throw std::invalid_argument("zero-power noise signal");
  return std::sqrt(p_clean / (p_noise * db_to_power(target_db)));
}

AudioSignal mix_at_snr(const AudioSignal& clean, const AudioSignal& noise, double target_db) {
  const double s = mix_scale(clean, noise, target_db);
  AudioSignal out = clean;
  out.samples = clean.samples + s * noise.samples.head(clean.size());
  return out;
}

}  // namespace pga
