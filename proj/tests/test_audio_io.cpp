#include "pga/audio.hpp"
#include "pga/metrics.hpp"
#include "test_signals.hpp"

#include <doctest.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <unistd.h>

using pga::AudioSignal;
using pga::SampleFormat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pga_audio_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const char* name) const { return path / name; }
};

void put16(std::vector<unsigned char>& b, unsigned v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
}
void put32(std::vector<unsigned char>& b, unsigned v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
}
void tag(std::vector<unsigned char>& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Hand-assembled WAV so the reader is not only tested against the writer.
std::vector<unsigned char> wav_bytes(unsigned format_tag, unsigned channels, unsigned bits,
                                     const std::vector<unsigned char>& data, bool extensible = false) {
  std::vector<unsigned char> fmt;
  put16(fmt, extensible ? 0xFFFE : format_tag);
  put16(fmt, channels);
  put32(fmt, 8000);
  put32(fmt, 8000 * channels * bits / 8);
  put16(fmt, channels * bits / 8);
  put16(fmt, bits);
  if (extensible) {
    put16(fmt, 22);
    put16(fmt, bits);
    put32(fmt, 4);
    put16(fmt, format_tag);
    const unsigned char guid_tail[14] = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                         0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};
    fmt.insert(fmt.end(), guid_tail, guid_tail + 14);
  }
  std::vector<unsigned char> b;
  tag(b, "RIFF");
  put32(b, static_cast<unsigned>(4 + 8 + fmt.size() + 8 + data.size()));
  tag(b, "WAVE");
  tag(b, "fmt ");
  put32(b, static_cast<unsigned>(fmt.size()));
  b.insert(b.end(), fmt.begin(), fmt.end());
  tag(b, "LIST");  // unrelated chunk the reader must skip
  put32(b, 3);
  b.insert(b.end(), {'a', 'b', 'c', 0});
  tag(b, "data");
  put32(b, static_cast<unsigned>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

void dump(const fs::path& p, const std::vector<unsigned char>& b) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::vector<unsigned char> slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("wav round trips") {
  TempDir dir;
  const auto sig = testsig::uniform_noise(5000, 12, 0.99);
  SUBCASE("pcm16 within one quantisation step") {
    CHECK(pga::write_wav(dir / "a.wav", sig, SampleFormat::Pcm16) == 0);
    SampleFormat fmt = SampleFormat::Float32;
    const auto back = pga::read_wav(dir / "a.wav", &fmt);
    CHECK(fmt == SampleFormat::Pcm16);
    CHECK(back.sample_rate == 8000);
    REQUIRE(back.size() == sig.size());
    CHECK((back.samples - sig.samples).abs().maxCoeff() <= 1.0 / 32768.0);
    CHECK((back.samples == pga::quantize(sig, SampleFormat::Pcm16).samples).all());
  }
  SUBCASE("float32 is bit exact") {
    AudioSignal f = sig;
    f.samples = sig.samples.cast<float>().cast<double>();
    f.sample_rate = 16000;
    pga::write_wav(dir / "f.wav", f, SampleFormat::Float32);
    SampleFormat fmt = SampleFormat::Pcm16;
    const auto back = pga::read_wav(dir / "f.wav", &fmt);
    CHECK(fmt == SampleFormat::Float32);
    CHECK(back.sample_rate == 16000);
    CHECK(std::memcmp(back.samples.data(), f.samples.data(), sizeof(double) * f.samples.size()) == 0);
  }
  SUBCASE("writing is deterministic") {
    pga::write_wav(dir / "x.wav", sig);
    pga::write_wav(dir / "y.wav", sig);
    CHECK(slurp(dir / "x.wav") == slurp(dir / "y.wav"));
    CHECK(slurp(dir / "x.wav").size() == 44 + 2 * 5000);
  }
}

TEST_CASE("pcm16 quantisation rules") {
  AudioSignal s{pga::ArrayX<double>(7), 8000};
  s.samples << 0.5 / 32768.0, -0.5 / 32768.0, 1.5 / 32768.0, 1.0, -1.0, 2.0, -3.0;
  const auto q = pga::quantize(s, SampleFormat::Pcm16);
  CHECK(q.samples[0] == 1.0 / 32768.0);   // half away from zero
  CHECK(q.samples[1] == -1.0 / 32768.0);
  CHECK(q.samples[2] == 2.0 / 32768.0);
  CHECK(q.samples[3] == 32767.0 / 32768.0);
  CHECK(q.samples[4] == -1.0);
  CHECK(q.samples[5] == 32767.0 / 32768.0);
  CHECK(q.samples[6] == -1.0);

  TempDir dir;
  CHECK(pga::write_wav(dir / "c.wav", s, SampleFormat::Pcm16) == 3);  // 1.0, 2.0, -3.0 saturate
}

TEST_CASE("reading hand-built files") {
  TempDir dir;
  SUBCASE("pcm16 samples") {
    std::vector<unsigned char> d;
    for (unsigned v : {0u, 0x4000u, 0x8000u, 0x7FFFu}) put16(d, v);
    dump(dir / "p.wav", wav_bytes(1, 1, 16, d));
    const auto s = pga::read_wav(dir / "p.wav");
    REQUIRE(s.size() == 4);
    CHECK(s.samples[0] == 0.0);
    CHECK(s.samples[1] == 0.5);
    CHECK(s.samples[2] == -1.0);
    CHECK(s.samples[3] == 32767.0 / 32768.0);
  }
  SUBCASE("extensible float") {
    std::vector<unsigned char> d;
    float v = 0.25f;
    unsigned bits;
    std::memcpy(&bits, &v, 4);
    put32(d, bits);
    dump(dir / "e.wav", wav_bytes(3, 1, 32, d, true));
    SampleFormat fmt = SampleFormat::Pcm16;
    const auto s = pga::read_wav(dir / "e.wav", &fmt);
    CHECK(fmt == SampleFormat::Float32);
    CHECK(s.samples[0] == 0.25);
  }
  SUBCASE("empty audio") {
    dump(dir / "z.wav", wav_bytes(1, 1, 16, {}));
    CHECK_THROWS_WITH_AS(pga::read_wav(dir / "z.wav"), "empty audio", pga::WavError);
  }
  SUBCASE("stereo is refused") {
    std::vector<unsigned char> d(8, 0);
    dump(dir / "s.wav", wav_bytes(1, 2, 16, d));
    CHECK_THROWS_AS(pga::read_wav(dir / "s.wav"), pga::WavError);
  }
  SUBCASE("unsupported codecs") {
    std::vector<unsigned char> d(6, 0);
    dump(dir / "u8.wav", wav_bytes(1, 1, 8, d));
    CHECK_THROWS_AS(pga::read_wav(dir / "u8.wav"), pga::WavError);
    dump(dir / "alaw.wav", wav_bytes(6, 1, 8, d));
    CHECK_THROWS_AS(pga::read_wav(dir / "alaw.wav"), pga::WavError);
    dump(dir / "p24.wav", wav_bytes(1, 1, 24, d));
    CHECK_THROWS_AS(pga::read_wav(dir / "p24.wav"), pga::WavError);
  }
  SUBCASE("malformed headers") {
    dump(dir / "junk.wav", {'n', 'o', 't', ' ', 'a', ' ', 'w', 'a', 'v', 'e', 'f', 'i', 'l', 'e'});
    CHECK_THROWS_AS(pga::read_wav(dir / "junk.wav"), pga::WavError);
    auto b = wav_bytes(1, 1, 16, {0, 0});
    b.resize(20);  // cut inside the fmt chunk
    dump(dir / "cut.wav", b);
    CHECK_THROWS_AS(pga::read_wav(dir / "cut.wav"), pga::WavError);
    CHECK_THROWS_AS(pga::read_wav(dir / "missing.wav"), pga::WavError);
  }
}

TEST_CASE("mix_scale examples") {
  const auto clean = testsig::white_noise(8000, 1);
  AudioSignal noise = testsig::white_noise(9000, 2);
  noise.samples *= std::sqrt(clean.samples.square().mean() / noise.samples.head(8000).square().mean());
  CHECK(pga::mix_scale(clean, noise, 0.0) == doctest::Approx(1.0));
  CHECK(pga::mix_scale(clean, noise, 10.0) == doctest::Approx(std::pow(10.0, -0.5)));
  CHECK(pga::mix_scale(clean, noise, 10.0) == doctest::Approx(0.31623).epsilon(1e-5));
}

TEST_CASE("mix_at_snr closed loop") {
  const auto clean = testsig::synthetic_sentence(2.0, 0.3, 5);
  const auto noise = testsig::uniform_noise(20000, 6);
  for (double target = -20.0; target <= 10.0; target += 2.5) {
    const auto mixed = pga::mix_at_snr(clean, noise, target);
    CHECK(mixed.size() == clean.size());
    CHECK(std::abs(pga::overall_snr(clean, mixed) - target) < 1e-6);
  }
}

TEST_CASE("mix errors") {
  const auto clean = testsig::white_noise(1000, 1);
  CHECK_THROWS_AS(pga::mix_at_snr(clean, testsig::white_noise(999, 2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pga::mix_at_snr(clean, AudioSignal{pga::ArrayX<double>::Zero(1000), 8000}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pga::mix_at_snr(AudioSignal{pga::ArrayX<double>::Zero(1000), 8000}, clean, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pga::mix_at_snr(clean, testsig::white_noise(1000, 2, 0.1, 16000), 0.0), std::invalid_argument);
}
