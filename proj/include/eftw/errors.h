// include/eftw/errors.h

// Copyright 2026  The eftw-rbm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EFTW_ERRORS_H_
#define EFTW_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eftw {

/// Dimensions of two operands disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file on disk does not follow the expected binary or text layout.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration value or precondition on user input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters left the finite range during training.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, std::string block, double max_magnitude)
      : std::runtime_error("training diverged at epoch " +
                           std::to_string(epoch) + " in block '" + block +
                           "' (max |value| = " + std::to_string(max_magnitude) +
                           ")"),
        epoch_(epoch),
        block_(std::move(block)),
        max_magnitude_(max_magnitude) {}

  int epoch() const { return epoch_; }
  const std::string &block() const { return block_; }
  double max_magnitude() const { return max_magnitude_; }

 private:
  int epoch_;
  std::string block_;
  double max_magnitude_;
};

inline void check_dim(std::ptrdiff_t got, std::ptrdiff_t want,
                      const char *what) {
  if (got != want)
    throw ShapeError(std::string(what) + ": expected dimension " +
                     std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace eftw

#endif  // EFTW_ERRORS_H_
