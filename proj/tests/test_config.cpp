#include "pga/enhance.hpp"

#include <doctest.h>

#include <fstream>

using pga::EnhancerConfig;

TEST_CASE("defaults") {
  const EnhancerConfig cfg;
  CHECK(cfg.analysis.frame_len == 100);
  CHECK(cfg.analysis.hop == 50);
  CHECK(cfg.analysis.window == pga::WindowKind::Hamming);
  CHECK(cfg.silence_frames == 6);
  CHECK(cfg.method == pga::Method::PGA);
  CHECK(cfg.guards.h_floor == 0.05);
  CHECK(cfg.guards.h_ceil == 10.0);
  CHECK(cfg.guards.rho_floor == 0.05);
  CHECK(cfg.guards.cos_delta == 1e-6);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("every key is applied") {
  EnhancerConfig cfg;
  pga::apply_config_text(R"(# overrides
xi_min_db = -12
xi_max_db=-4.5
xi_peak_db = 8   # trailing comment
w_local = 2
w_global = 10
alpha_xi = 0.9
xi_estimator = decision_directed
gain_xi = decision_directed
silence_frames = 4
method = ga
frame_len = 128
hop = 32
window = hann
cos_delta = 1e-5
h_floor = 0.1
h_ceil = 1
rho_floor = 0.2
)",
                         cfg);
  CHECK(cfg.presence.xi_min_db == -12.0);
  CHECK(cfg.presence.xi_max_db == -4.5);
  CHECK(cfg.presence.xi_peak_db == 8.0);
  CHECK(cfg.presence.w_local == 2);
  CHECK(cfg.presence.w_global == 10);
  CHECK(cfg.presence.alpha_xi == 0.9);
  CHECK(cfg.presence.xi_estimator == pga::XiEstimator::DecisionDirected);
  CHECK(cfg.gain_xi == pga::GainXiSource::DecisionDirected);
  CHECK(cfg.silence_frames == 4);
  CHECK(cfg.method == pga::Method::GA);
  CHECK(cfg.analysis.frame_len == 128);
  CHECK(cfg.analysis.hop == 32);
  CHECK(cfg.analysis.window == pga::WindowKind::Hann);
  CHECK(cfg.guards.cos_delta == 1e-5);
  CHECK(cfg.guards.h_floor == 0.1);
  CHECK(cfg.guards.h_ceil == 1.0);
  CHECK(cfg.guards.rho_floor == 0.2);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("empty text and comments change nothing") {
  EnhancerConfig cfg;
  pga::apply_config_text("\n# nothing\n   \n", cfg);
  CHECK(cfg.presence.xi_min_db == -10.0);
  CHECK(cfg.presence.w_global == 15);
}

TEST_CASE("errors name the line") {
  EnhancerConfig cfg;
  CHECK_THROWS_WITH(pga::apply_config_text("w_local = 1\nbogus = 3\n", cfg), doctest::Contains("config line 2"));
  CHECK_THROWS_WITH(pga::apply_config_text("w_local = one", cfg), doctest::Contains("config line 1"));
  CHECK_THROWS_AS(pga::apply_config_text("alpha_xi", cfg), std::invalid_argument);
  CHECK_THROWS_AS(pga::apply_config_text("method = wiener", cfg), std::invalid_argument);
  CHECK_THROWS_AS(pga::apply_config_text("window = kaiser", cfg), std::invalid_argument);
  CHECK_THROWS_AS(pga::apply_config_text("w_global = 1.5", cfg), std::invalid_argument);
}

TEST_CASE("config file") {
  const auto path = std::filesystem::temp_directory_path() / "pga_test_config.cfg";
  {
    std::ofstream f(path);
    f << "alpha_xi = 0.5\n";
  }
  EnhancerConfig cfg;
  pga::apply_config_file(path, cfg);
  CHECK(cfg.presence.alpha_xi == 0.5);
  std::filesystem::remove(path);
  CHECK_THROWS(pga::apply_config_file(path, cfg));
}
