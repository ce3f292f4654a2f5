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

#include "lbgame/errors.h"

#include <sstream>

namespace lbgame {
namespace {

std::string DescribeUnstable(int server, double mu, double beta) {
  std::ostringstream out;
  out.precision(17);
  out << "server " << server << " is unstable: arrival rate " << beta
      << " >= service rate " << mu;
  return out.str();
}

}  // namespace

UnstableServer::UnstableServer(int server, double mu, double beta)
    : Error(DescribeUnstable(server, mu, beta)), server_(server) {}

ParseError::ParseError(const std::string& where, const std::string& what)
    : Error("parse error at " + where + ": " + what), where_(where) {}

ValidationError::ValidationError(const std::string& constraint,
                                 const std::string& what)
    : Error("validation failed [" + constraint + "]: " + what),
      constraint_(constraint) {}

}  // namespace lbgame
