#pragma once

#include <stdexcept>
#include <string>

namespace latsim {

/// Invalid scenario/sweep configuration. Raised before any simulation runs;
/// the message names the offending key and the accepted range.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A metric whose denominator is empty on the given trace (e.g. collision
/// ratio on a trace with no PU-busy slots). Raised instead of returning 0 or
/// NaN so that downstream checks cannot silently pass on degenerate data.
class UndefinedMetricError : public std::runtime_error {
 public:
  explicit UndefinedMetricError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latsim
