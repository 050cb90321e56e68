#pragma once

#include <stdexcept>
#include <string>

namespace edbound {

/// Malformed input: a value that violates a type invariant or precondition.
class RejectError : public std::invalid_argument {
 public:
  explicit RejectError(const std::string& what) : std::invalid_argument(what) {}
};

/// Well-formed query whose feasible set is empty, e.g. an analog energy above
/// the cap that keeps the quantizer fidelity chain increasing.
class InfeasibleError : public std::domain_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace edbound
