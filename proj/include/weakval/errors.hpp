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

#include <stdexcept>
#include <string>

namespace weakval {

/// Pre- and post-selection are orthogonal within tolerance; the weak value
/// has no finite limit. Carries the offending overlap magnitude.
class DivergentWeakValueError : public std::domain_error {
  public:
    DivergentWeakValueError(double abs_overlap, double tolerance)
        : std::domain_error("divergent weak value: |<psi_f|psi_i>| = " +
                            std::to_string(abs_overlap) + " <= tolerance " +
                            std::to_string(tolerance)),
          abs_overlap_(abs_overlap) {}

    double abs_overlap() const noexcept { return abs_overlap_; }

  private:
    double abs_overlap_;
};

/// The post-selected state has (numerically) zero norm.
class VanishingPostselectionError : public std::domain_error {
  public:
    explicit VanishingPostselectionError(double norm)
        : std::domain_error("vanishing post-selection probability: D = " +
                            std::to_string(norm)) {}
};

/// A meter-response routine restricted to real weak values received a
/// weak value with a non-negligible imaginary part.
class UnsupportedImaginaryError : public std::domain_error {
  public:
    explicit UnsupportedImaginaryError(double imag_part)
        : std::domain_error("meter model supports real weak values only; Im = " +
                            std::to_string(imag_part)) {}
};

/// The cubic meter relation has no faithful real preimage for the
/// requested centroid (saturated regime, or outside the search bracket).
class InversionFailureError : public std::domain_error {
  public:
    explicit InversionFailureError(const std::string& what)
        : std::domain_error(what) {}
};

/// Too few counts remain after background subtraction to form a centroid.
class InsufficientCountsError : public std::runtime_error {
  public:
    explicit InsufficientCountsError(const std::string& what)
        : std::runtime_error(what) {}
};

/// A quantity that is non-negative by construction came out negative
/// beyond numerical tolerance.
class InternalConsistencyError : public std::logic_error {
  public:
    explicit InternalConsistencyError(const std::string& what)
        : std::logic_error(what) {}
};

/// The requested tolerance cannot produce a validity region covering the
/// projector eigenvalue range [0, 1].
class DegenerateRegionError : public std::domain_error {
  public:
    explicit DegenerateRegionError(const std::string& what)
        : std::domain_error(what) {}
};

/// Malformed configuration file, flag, or key. Messages name the field.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace weakval
