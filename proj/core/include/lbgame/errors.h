// Copyright 2026 The lbgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LBGAME_ERRORS_H_
#define LBGAME_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lbgame {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A server's arrival rate reached or exceeded its service rate.
class UnstableServer : public Error {
 public:
  UnstableServer(int server, double mu, double beta);
  int server() const { return server_; }

 private:
  int server_;
};

// Pure unit-weight potential requested on a fractional or weighted state.
class NotPureUnitWeight : public Error {
 public:
  using Error::Error;
};

// A client's demand cannot be placed on the servers it can see.
class InfeasibleLoad : public Error {
 public:
  using Error::Error;
};

// The requested initial strategy violates server stability.
class InfeasibleInitial : public Error {
 public:
  using Error::Error;
};

// The step bound is undefined (epsilon = 0).
class UnboundedFor : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed its configured size cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// Every grid point violates stability.
class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

// Malformed scenario or report document. `where` is a byte offset or a JSON
// pointer into the document.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// A well-formed document that violates a model invariant. `constraint` names
// the violated invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& constraint, const std::string& what);
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace lbgame

#endif  // LBGAME_ERRORS_H_
