// Copyright 2026 The BinSeeker Authors. All Rights Reserved.
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

#ifndef BINSEEKER_ERROR_H_
#define BINSEEKER_ERROR_H_

#include <stdexcept>
#include <string>

namespace binseeker {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interchange document is not syntactically valid.
class MalformedDocument : public Error {
 public:
  using Error::Error;
};

// Document parsed but a function violates a structural rule. The message
// names the function and the rule.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& function_id, const std::string& rule)
      : Error("function '" + function_id + "': " + rule),
        function_id_(function_id),
        rule_(rule) {}

  const std::string& function_id() const { return function_id_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string function_id_;
  std::string rule_;
};

class UnknownArchitecture : public Error {
 public:
  using Error::Error;
};

// Bounded simple-path enumeration gave up; callers fall back to the
// fixed-point reaching-definitions solver.
class PathExplosion : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedModel : public Error {
 public:
  using Error::Error;
};

class MalformedSignature : public Error {
 public:
  using Error::Error;
};

class MissingMicroOps : public Error {
 public:
  using Error::Error;
};

class TooFewFamilies : public Error {
 public:
  using Error::Error;
};

class MTooLarge : public Error {
 public:
  using Error::Error;
};

class SingleClassInput : public Error {
 public:
  using Error::Error;
};

}  // namespace binseeker

#endif  // BINSEEKER_ERROR_H_
