#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

#include "config_file.hpp"
#include "csv.hpp"
#include "latsim/errors.hpp"

using namespace latsim;
using namespace latsim::cli;

namespace {

struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& value) : name(n) {
    setenv(name.c_str(), value.c_str(), 1);
  }
  ~EnvGuard() { unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("empty config resolves to the documented defaults") {
  const ResolvedConfig c = resolve_config_text("");
  CHECK(c.scenario.radio.noise_power == 1.0);
  CHECK(c.scenario.radio.pu_rx_power == 1.0);
  CHECK(c.scenario.radio.tx_power == 100.0);
  CHECK(c.scenario.radio.link_gain == 1.0);
  CHECK(c.scenario.radio.su_link_snr == 100.0);  // link_gain * tx / noise
  CHECK(c.scenario.rsi.chi_sq == 0.01);
  CHECK(c.scenario.rsi.family == RsiFamily::Gaussian);
  CHECK(c.scenario.traffic.p_idle_to_busy == 0.05);
  CHECK(c.scenario.traffic.p_busy_to_idle == 0.05);
  CHECK(c.scenario.n_samples_per_slot == 100);
  CHECK(c.scenario.pd_target == 0.96);
  CHECK(c.scenario.n_slots == 100000);
  CHECK(c.scenario.warmup_slots == 100);
  CHECK(c.scenario.seed == 12345);
  CHECK(c.scenario.protocol.kind == ProtocolKind::Lat);
  CHECK(c.scenario.protocol.dsa.su_rx_power == 1.0);  // mirrors pu_rx_power
  CHECK(c.sweep.grid_points == 40);
  CHECK(c.sweep.tx_power_min == 10.0);
  CHECK(c.sweep.tx_power_max == 100000.0);
  CHECK(c.sweep.chi_sq_list == std::vector<double>{0.1, 0.01, 0.001});
  CHECK(c.sweep.tau_list.size() == 10);
}

TEST_CASE("dB keys convert to linear") {
  const ResolvedConfig c = resolve_config_text("[rsi]\nchi_sq_db = -20\n");
  CHECK(c.scenario.rsi.chi_sq == doctest::Approx(0.01));
  const ResolvedConfig d = resolve_config_text("[radio]\ntx_power_db = 20\n");
  CHECK(d.scenario.radio.tx_power == doctest::Approx(100.0));
  CHECK(d.scenario.radio.su_link_snr == doctest::Approx(100.0));
}

TEST_CASE("out-of-range values raise errors naming the key") {
  try {
    resolve_config_text("[sensing]\npd_target = 1.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pd_target") != std::string::npos);
  }
  try {
    resolve_config_text("[traffic]\np_idle_to_busy = -0.2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("p_idle_to_busy") != std::string::npos);
  }
}

TEST_CASE("unknown keys, wrong sections and duplicates are rejected") {
  try {
    resolve_config_text("[radio]\nnoise_flour = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("noise_flour") != std::string::npos);
  }
  CHECK_THROWS_AS(resolve_config_text("[sim]\ntx_power = 5\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("[radio]\ntx_power = 5\ntx_power = 6\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("[radio]\ntx_power = 5\ntx_power_db = 7\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("tx_power: 5\n"), ConfigError);
}

TEST_CASE("malformed numbers are rejected") {
  CHECK_THROWS_AS(resolve_config_text("[radio]\ntx_power = fast\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("[sim]\nn_slots = -3\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("[dsa]\nfd_abort = maybe\n"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const ResolvedConfig c = resolve_config_text(
      "# a comment\n\n[radio]\ntx_power = 50 ; trailing note\n\n; another\n");
  CHECK(c.scenario.radio.tx_power == 50.0);
}

TEST_CASE("environment variables override file values") {
  EnvGuard guard("LATSIM_PD_TARGET", "0.9");
  const ResolvedConfig c = resolve_config_text("[sensing]\npd_target = 0.8\n");
  CHECK(c.scenario.pd_target == 0.9);
}

TEST_CASE("explicit su_link_snr wins over the derived value") {
  const ResolvedConfig c =
      resolve_config_text("[radio]\ntx_power = 50\nsu_link_snr = 7\n");
  CHECK(c.scenario.radio.su_link_snr == 7.0);
}

TEST_CASE("su_rx_power follows pu_rx_power unless pinned") {
  const ResolvedConfig a = resolve_config_text("[radio]\npu_rx_power = 0.25\n");
  CHECK(a.scenario.protocol.dsa.su_rx_power == 0.25);
  const ResolvedConfig b =
      resolve_config_text("[radio]\npu_rx_power = 0.25\n[dsa]\nsu_rx_power = 2\n");
  CHECK(b.scenario.protocol.dsa.su_rx_power == 2.0);
}

TEST_CASE("warmup must leave slots to count") {
  CHECK_THROWS_AS(resolve_config_text("[sim]\nn_slots = 50\nwarmup_slots = 50\n"), ConfigError);
  CHECK_NOTHROW(resolve_config_text("[sim]\nn_slots = 51\nwarmup_slots = 50\n"));
}

TEST_CASE("list keys parse and validate") {
  const ResolvedConfig c =
      resolve_config_text("[sweep]\nchi_sq_db_list = -10, -20\ntau_list = 0.1,0.3\n");
  REQUIRE(c.sweep.chi_sq_list.size() == 2);
  CHECK(c.sweep.chi_sq_list[0] == doctest::Approx(0.1));
  CHECK(c.sweep.chi_sq_list[1] == doctest::Approx(0.01));
  CHECK_THROWS_AS(resolve_config_text("[sweep]\ntau_list = 0.5, 1.5\n"), ConfigError);
  CHECK_THROWS_AS(resolve_config_text("[sweep]\nchi_sq_list = \n"), ConfigError);
}

TEST_CASE("protocol and family enums") {
  CHECK(resolve_config_text("[protocol]\nprotocol = dsa\n").scenario.protocol.kind ==
        ProtocolKind::Dsa);
  CHECK(resolve_config_text("[rsi]\nrsi_family = rayleigh\n").scenario.rsi.family ==
        RsiFamily::Rayleigh);
  CHECK_THROWS_AS(resolve_config_text("[protocol]\nprotocol = csma\n"), ConfigError);
}

TEST_CASE("manifest round-trips to the identical configuration") {
  const ResolvedConfig original = resolve_config_text(
      "[radio]\ntx_power = 123.456789012345\nlink_gain = 0.37\n"
      "[rsi]\nchi_sq = 0.0123\nrsi_family = rician\nrician_k = 2.5\n"
      "[sim]\nn_slots = 7777\nseed = 99\nwarmup_slots = 11\n"
      "[protocol]\nprotocol = lbt\n[lbt]\nsensing_fraction = 0.23\n");
  const std::string manifest =
      render_manifest(original, ManifestMeta{"run", "x.ini", "outdir"});
  const ResolvedConfig reloaded = resolve_config_text(manifest);
  CHECK(reloaded.scenario.radio.tx_power == original.scenario.radio.tx_power);
  CHECK(reloaded.scenario.radio.su_link_snr == original.scenario.radio.su_link_snr);
  CHECK(reloaded.scenario.rsi.chi_sq == original.scenario.rsi.chi_sq);
  CHECK(reloaded.scenario.rsi.family == original.scenario.rsi.family);
  CHECK(reloaded.scenario.rsi.rician_k == original.scenario.rsi.rician_k);
  CHECK(reloaded.scenario.n_slots == original.scenario.n_slots);
  CHECK(reloaded.scenario.seed == original.scenario.seed);
  CHECK(reloaded.scenario.warmup_slots == original.scenario.warmup_slots);
  CHECK(reloaded.scenario.protocol.kind == original.scenario.protocol.kind);
  CHECK(reloaded.scenario.protocol.lbt.sensing_fraction ==
        original.scenario.protocol.lbt.sensing_fraction);
  CHECK(reloaded.sweep.chi_sq_list == original.sweep.chi_sq_list);
  CHECK(reloaded.sweep.tau_list == original.sweep.tau_list);
}

TEST_CASE("csv numbers use 12 significant digits") {
  CHECK(csv_number(0.123456789012345) == "0.123456789012");
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(2.0 / 3.0) == "0.666666666667");
}
