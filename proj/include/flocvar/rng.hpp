// Copyright 2026 The flocvar Authors.
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

#ifndef FLOCVAR_RNG_HPP_
#define FLOCVAR_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace flocvar {

// Mixes (seed, stream) into an independent 64-bit seed (splitmix64 finalizer).
// Nested substreams are derived by chaining: derive_seed(derive_seed(s, a), b).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// A seeded Mersenne twister with platform-independent variate conversions.
// The std:: distributions are implementation-defined, so uniforms and
// exponentials are derived from raw engine output here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform_open()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace flocvar

#endif  // FLOCVAR_RNG_HPP_
