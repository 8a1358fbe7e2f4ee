// Copyright 2026 The histfilter Authors
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

#ifndef HISTFILTER_ERRORS_H_
#define HISTFILTER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace histfilter {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid GameConfig.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller broke a precondition (illegal action, terminal state, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A public state whose play sequence is malformed.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// A history was required but the public state admits none.
class EmptyBeliefError : public Error {
 public:
  using Error::Error;
};

// Enumeration or table size cap exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Internal invariant broken. Seeing one of these is a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace histfilter

#endif  // HISTFILTER_ERRORS_H_
