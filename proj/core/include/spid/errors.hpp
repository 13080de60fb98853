// Copyright 2026 The spid Authors
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

#ifndef SPID_ERRORS_HPP_
#define SPID_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace spid {

// Base class for all errors thrown by the library. `code()` is a stable,
// machine-parsable identifier; the CLI prints it on a single line so scripts
// can branch on failures without scraping prose.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// A link shorter than the geometric tolerance; unit directions are undefined.
class DegenerateLinkError : public Error {
 public:
  explicit DegenerateLinkError(const std::string& what)
      : Error("DegenerateLink", what) {}
};

// A non-finite value surfaced in a state, force, loss, or gradient.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what)
      : Error("NonFinite", what) {}
};

// Mismatched array lengths, leaf counts, or tape ownership.
class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what)
      : Error("DimensionMismatch", what) {}
};

// The tape encountered an operation id it does not know how to replay.
class UnregisteredPrimitiveError : public Error {
 public:
  explicit UnregisteredPrimitiveError(const std::string& what)
      : Error("UnregisteredPrimitive", what) {}
};

// An optimization run left the finite-loss regime.
class DivergedError : public Error {
 public:
  explicit DivergedError(const std::string& what) : Error("Diverged", what) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& what)
      : Error("EmptyInput", what) {}
};

class InsufficientPointsError : public Error {
 public:
  explicit InsufficientPointsError(const std::string& what)
      : Error("InsufficientPoints", what) {}
};

class NonMonotonicTimeError : public Error {
 public:
  explicit NonMonotonicTimeError(const std::string& what)
      : Error("NonMonotonicTime", what) {}
};

class IndexOutOfRangeError : public Error {
 public:
  explicit IndexOutOfRangeError(const std::string& what)
      : Error("IndexOutOfRange", what) {}
};

// A loss or feature builder was asked to serve a task kind it does not fit.
class KindMismatchError : public Error {
 public:
  explicit KindMismatchError(const std::string& what)
      : Error("KindMismatch", what) {}
};

// Attempt to read a ground-truth parameter file that evaluation keeps hidden.
class HiddenParamsError : public Error {
 public:
  explicit HiddenParamsError(const std::string& what)
      : Error("HiddenParams", what) {}
};

// Missing or malformed configuration keys and files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("Config", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("Io", what) {}
};

}  // namespace spid

#endif  // SPID_ERRORS_HPP_
