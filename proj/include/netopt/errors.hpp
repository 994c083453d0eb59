#pragma once

#include <stdexcept>
#include <string>

namespace netopt {

/// Pair (i, j) outside 0 <= i < j < n.
class InvalidPairError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A statistic or metric that needs a connected graph received a disconnected one.
class DisconnectedGraphError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed model parameters (alpha outside [0,1], density out of range, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input (edge lists, distance matrices, assignments, rationals).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netopt
