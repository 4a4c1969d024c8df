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

#include "weakval/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace weakval {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

long long SplitRng::binomial(long long n, double p) {
    if (n < 0) {
        throw std::invalid_argument("binomial: n must be non-negative");
    }
    if (p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    long long k = 0;
    for (long long i = 0; i < n; ++i) {
        k += uniform() < p;
    }
    return k;
}

long long SplitRng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson: mean must be finite and non-negative");
    }
    if (mean == 0.0) {
        return 0;
    }
    // Knuth's product method degrades for large means; split first.
    long long total = 0;
    while (mean > 30.0) {
        mean *= 0.5;
        total += poisson(mean);
    }
    const double limit = std::exp(-mean);
    long long k = 0;
    double prod = 1.0;
    do {
        ++k;
        prod *= uniform();
    } while (prod > limit);
    return total + k - 1;
}

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) {
        throw std::invalid_argument("AliasTable: empty weight vector");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("AliasTable: negative weight");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("AliasTable: weights sum to zero");
    }
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);

    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / sum;
    }
    // Vose's stable construction: index queues keep the build deterministic.
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        const std::uint32_t l = large.back();
        small.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::uint32_t i : large) {
        prob_[i] = 1.0;
    }
    for (std::uint32_t i : small) {
        prob_[i] = 1.0;  // numerical leftovers
    }
}

std::size_t AliasTable::sample(SplitRng& rng) const {
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    std::size_t idx = static_cast<std::size_t>(u);
    if (idx >= prob_.size()) {
        idx = prob_.size() - 1;
    }
    const double frac = u - static_cast<double>(idx);
    return frac < prob_[idx] ? idx : alias_[idx];
}

}  // namespace weakval
