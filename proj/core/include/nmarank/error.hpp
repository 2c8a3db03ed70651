#ifndef NMARANK_ERROR_HPP_
#define NMARANK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nmarank {

// Invalid hyperparameters, MCMC settings or command-line options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent trial data (parse errors, invariant violations,
// disconnected networks at fit time, unreadable sample files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A chain produced a non-finite log target. The message carries a dump of
// the offending state.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmarank

#endif  // NMARANK_ERROR_HPP_
