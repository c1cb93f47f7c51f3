// Copyright 2026 The ccreid Authors.
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

#ifndef CCREID_ERROR_H_
#define CCREID_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccreid {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message)
      : Error(Format(source, line, message)), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  static std::string Format(const std::string& source, std::size_t line,
                            const std::string& message) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::size_t line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inconsistent data across records (e.g. conflicting track labels).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccreid

#endif  // CCREID_ERROR_H_
