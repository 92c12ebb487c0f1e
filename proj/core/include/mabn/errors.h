// Copyright 2026 The MABN Authors.
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

#ifndef MABN_ERRORS_H_
#define MABN_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace mabn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed network or clustering.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A neighbor-fraction exposure was requested for a unit with no neighbors.
class IsolatedUnitError : public Error {
 public:
  using Error::Error;
};

// Fewer than two legitimate exposure super arms.
class ConditionViolation : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured search budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownArmError : public Error {
 public:
  using Error::Error;
};

// Non-finite value inside the policy. Reaching this is a bug.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Operation called on a state that cannot serve it (e.g. zero rounds).
class StateError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration. `key()` names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A replication aborted; the message carries the round and the cause.
class ReplicationError : public Error {
 public:
  ReplicationError(long long round, const std::string& cause)
      : Error("round " + std::to_string(round) + ": " + cause), round_(round) {}
  long long round() const { return round_; }

 private:
  long long round_;
};

class IoError : public Error {
 public:
  IoError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace mabn

#endif  // MABN_ERRORS_H_
