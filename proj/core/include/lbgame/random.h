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

#ifndef LBGAME_RANDOM_H_
#define LBGAME_RANDOM_H_

#include <array>
#include <cstdint>
#include <limits>

namespace lbgame {

// xoshiro256** seeded through splitmix64. Streams are fixed by the algorithm,
// so any implementation reproduces the same draws from the same seed.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform in [0, 1) from the top 53 bits.
  double NextDouble();
  double Uniform(double lo, double hi);
  // Box-Muller, one normal per call (two uniforms consumed).
  double Gaussian(double mean, double sigma);

 private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t SplitMix64(std::uint64_t& state);

}  // namespace lbgame

#endif  // LBGAME_RANDOM_H_
