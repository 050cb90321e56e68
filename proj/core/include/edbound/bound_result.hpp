#pragma once

#include <optional>
#include <string>

namespace edbound {

enum class Direction { kLower, kUpper };

inline const char* to_string(Direction d) { return d == Direction::kLower ? "lower" : "upper"; }

/// Energy per source symbol (nats-scaled) produced by one bounding method.
struct BoundResult {
  double energy = 0.0;
  Direction direction = Direction::kLower;
  std::string method;
  std::optional<std::string> branch;
};

}  // namespace edbound
