/*
 * Copyright 2026 The gbs-toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GBS_ERRORS_HPP
#define GBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gbs {

/// Bad input: shapes, ranges, malformed files, inconsistent arguments.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

/// Missing or inconsistent configuration tables (docking weights, epsilons).
class ConfigError : public ValidationError {
public:
  explicit ConfigError(const std::string &what) : ValidationError(what) {}
};

/// Numerical failure: spectrum out of range, unphysical state, truncation.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

/// Takagi values of an encoded matrix fall outside [0, 1).
class SpectrumError : public NumericalError {
public:
  SpectrumError(const std::string &what, double value)
      : NumericalError(what), value_(value) {}
  double value() const { return value_; }

private:
  double value_;
};

/// An enumeration or kernel size limit would be exceeded.
class GuardError : public NumericalError {
public:
  explicit GuardError(const std::string &what) : NumericalError(what) {}
};

/// Sampling window captured too little probability mass.
class TruncationError : public NumericalError {
public:
  TruncationError(const std::string &what, double captured_mass)
      : NumericalError(what), captured_mass_(captured_mass) {}
  double captured_mass() const { return captured_mass_; }

private:
  double captured_mass_;
};

/// An internal consistency check failed; indicates a bug upstream.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string &what) : std::logic_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace gbs

#endif // GBS_ERRORS_HPP
