#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latsim/errors.hpp"
#include "latsim/radio_env.hpp"

using namespace latsim;

TEST_CASE("absorbing and forced transitions") {
  RngStream rng(1, 0);
  PuTrafficModel stay_idle{0.0, 0.5};
  for (int i = 0; i < 100; ++i) {
    CHECK(step_pu_state(stay_idle, PuState::Idle, rng) == PuState::Idle);
  }
  PuTrafficModel force_idle{0.3, 1.0};
  for (int i = 0; i < 100; ++i) {
    CHECK(step_pu_state(force_idle, PuState::Busy, rng) == PuState::Idle);
  }
}

TEST_CASE("each step consumes exactly one draw") {
  RngStream rng(3, 0);
  PuTrafficModel model{0.2, 0.2};
  PuState s = PuState::Idle;
  for (int i = 0; i < 50; ++i) s = step_pu_state(model, s, rng);
  CHECK(rng.draws() == 50);
}

TEST_CASE("empirical busy fraction converges to the stationary value") {
  PuTrafficModel model{0.2, 0.2};
  CHECK(stationary_busy_fraction(model) == doctest::Approx(0.5));
  RngStream rng(2024, 0);
  PuState s = initial_pu_state(model, rng);
  std::uint64_t busy = 0;
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i > 0) s = step_pu_state(model, s, rng);
    busy += s == PuState::Busy ? 1 : 0;
  }
  const double fraction = static_cast<double>(busy) / static_cast<double>(n);
  CHECK(std::abs(fraction - 0.5) < 0.005);
}

TEST_CASE("asymmetric chain hits p01 / (p01 + p10)") {
  PuTrafficModel model{0.1, 0.3};
  CHECK(stationary_busy_fraction(model) == doctest::Approx(0.25));
  RngStream rng(99, 0);
  PuState s = initial_pu_state(model, rng);
  std::uint64_t busy = 0;
  const std::uint64_t n = 400000;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i > 0) s = step_pu_state(model, s, rng);
    busy += s == PuState::Busy ? 1 : 0;
  }
  CHECK(static_cast<double>(busy) / n == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("traffic model validation") {
  const PuTrafficModel negative{-0.1, 0.5};
  CHECK_THROWS_AS(negative.validate(), ConfigError);
  const PuTrafficModel above_one{0.5, 1.5};
  CHECK_THROWS_AS(above_one.validate(), ConfigError);
  const PuTrafficModel degenerate{0.0, 1.0};
  CHECK_NOTHROW(degenerate.validate());
}

TEST_CASE("rsi power is chi_sq times transmit power") {
  CHECK(rsi_power(RsiModel{0.0}, 5.0) == 0.0);
  CHECK(rsi_power(RsiModel{0.1}, 2.0) == doctest::Approx(0.2));
}

TEST_CASE("chi_sq 0.9 corresponds to -0.46 dB") {
  CHECK(10.0 * std::log10(0.9) == doctest::Approx(-0.46).epsilon(0.005));
  CHECK(std::pow(10.0, -0.46 / 10.0) == doctest::Approx(0.9).epsilon(0.001));
}

TEST_CASE("expected received power adds the active sources") {
  RadioParams p;
  p.noise_power = 1.0;
  p.pu_rx_power = 0.5;
  p.tx_power = 2.0;
  RsiModel rsi{0.1};
  CHECK(expected_rx_power(p, PuState::Idle, false, rsi) == doctest::Approx(1.0));
  CHECK(expected_rx_power(p, PuState::Busy, true, rsi) == doctest::Approx(1.7));
}

TEST_CASE("perfect cancelation makes the sensor blind to its own signal") {
  RadioParams p;
  p.noise_power = 1.3;
  RsiModel rsi{0.0};
  for (double tx : {0.0, 1.0, 50.0, 4000.0}) {
    p.tx_power = tx;
    CHECK(expected_rx_power(p, PuState::Idle, true, rsi) ==
          expected_rx_power(p, PuState::Idle, false, rsi));
  }
}

TEST_CASE("additivity: active minus silent equals the RSI power") {
  RngStream rng(17, 0);
  for (int i = 0; i < 200; ++i) {
    RadioParams p;
    p.noise_power = 0.1 + rng.next_unit() * 5.0;
    p.pu_rx_power = rng.next_unit() * 3.0;
    p.tx_power = rng.next_unit() * 100.0;
    RsiModel rsi{rng.next_unit()};
    const double diff = expected_rx_power(p, PuState::Busy, true, rsi) -
                        expected_rx_power(p, PuState::Busy, false, rsi);
    CHECK(diff == doctest::Approx(rsi_power(rsi, p.tx_power)).epsilon(1e-12));
  }
}

TEST_CASE("slot sample means converge to the expected power") {
  RadioParams p;
  p.noise_power = 1.0;
  p.pu_rx_power = 1.0;
  RsiModel rsi{0.0};
  const std::size_t n = 100000;

  RngStream rng_idle(31, 1);
  auto idle = gen_slot_samples(p, PuState::Idle, false, rsi, n, rng_idle);
  double sum = 0.0;
  for (double v : idle) sum += v;
  CHECK(std::abs(sum / n - 1.0) < 0.01);

  RngStream rng_busy(31, 2);
  auto busy = gen_slot_samples(p, PuState::Busy, false, rsi, n, rng_busy);
  sum = 0.0;
  for (double v : busy) sum += v;
  CHECK(std::abs(sum / n - 2.0) < 0.02);
}

TEST_CASE("zero total power yields all-zero energies") {
  RadioParams p;
  p.noise_power = 0.0;  // degenerate limit, guarded elsewhere by validation
  RsiModel rsi{0.0};
  RngStream rng(1, 1);
  auto samples = gen_slot_samples(p, PuState::Idle, false, rsi, 100, rng);
  for (double v : samples) CHECK(v == 0.0);
}

TEST_CASE("same seed gives bit-identical sample sequences") {
  RadioParams p;
  RsiModel rsi{0.05};
  RngStream a(77, 4);
  RngStream b(77, 4);
  auto sa = gen_slot_samples(p, PuState::Busy, true, rsi, 1000, a);
  auto sb = gen_slot_samples(p, PuState::Busy, true, rsi, 1000, b);
  CHECK(sa == sb);
}

TEST_CASE("fading families keep the expected-power contract") {
  RadioParams p;
  p.tx_power = 10.0;
  const double want = 0.5;  // chi_sq 0.05 * tx 10
  for (RsiFamily family : {RsiFamily::Rayleigh, RsiFamily::Rician}) {
    RsiModel rsi{0.05, family, 2.0};
    RngStream rng(123, 9);
    double sum = 0.0;
    const int slots = 200000;
    for (int i = 0; i < slots; ++i) sum += rsi_slot_power(rsi, p.tx_power, rng);
    CHECK(sum / slots == doctest::Approx(want).epsilon(0.02));
  }
}
