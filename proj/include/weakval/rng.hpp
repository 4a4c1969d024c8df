// Copyright 2026 The weakval authors
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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace weakval {

std::uint64_t splitmix64(std::uint64_t x);

/// Seedable stream generator used by every sampling path. The engine is
/// mt19937_64 seeded through a splitmix64 avalanche, so numerically adjacent
/// stream seeds (seed ^ index derivation) give decorrelated streams. The
/// samplers below avoid std::*_distribution on purpose: their output is part
/// of the reproducibility contract and the standard distributions are not
/// bit-stable across library implementations.
class SplitRng {
  public:
    static constexpr const char* kAlgorithm = "splitmix64-mt19937_64";

    explicit SplitRng(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed)) {}

    /// Independent stream for a worker/row: reseeds with seed ^ index.
    SplitRng derive(std::uint64_t index) const { return SplitRng(seed_ ^ index); }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exact Binomial(n, p) by counting n Bernoulli trials. O(n), but a
    /// detector map needs a single draw so simplicity wins over BTPE.
    long long binomial(long long n, double p);

    /// Exact Poisson(mean) via multiplicative Knuth sampling; means above 30
    /// are split in halves first (Poisson is infinitely divisible).
    long long poisson(double mean);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Walker alias table for O(1) categorical sampling over fixed weights.
class AliasTable {
  public:
    /// Weights must be non-negative with a positive sum.
    explicit AliasTable(const std::vector<double>& weights);

    std::size_t sample(SplitRng& rng) const;

    std::size_t size() const { return prob_.size(); }

  private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

}  // namespace weakval
