// Copyright 2026 The learnspec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace learnspec {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (e.g. negative Hz).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid BankConfig, TrainConfig, StftConfig, dataset layout, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf encountered in inputs or intermediate values.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Fewer samples than one analysis window.
class InputTooShortError : public Error {
 public:
  InputTooShortError(std::size_t n_samples, std::size_t window)
      : Error("input of " + std::to_string(n_samples) +
              " samples is shorter than window of " + std::to_string(window)),
        n_samples_(n_samples),
        window_(window) {}

  std::size_t n_samples() const { return n_samples_; }
  std::size_t window() const { return window_; }

 private:
  std::size_t n_samples_;
  std::size_t window_;
};

// Caller broke an API precondition: shape mismatch, label out of range.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Malformed file. Carries the byte offset (binary) or line number (text).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace learnspec
