// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "superint/jets.hpp"
#include "superint/systems.hpp"

namespace superint {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct SampleDomain {
  Interval xi;
  Interval eta;
  Interval momentum{-2.0, 2.0};
  double min_abs_g = 1e-3;
  // Exclusions; a zero value disables the corresponding test.
  double min_abs_diff = 0.0;  // |xi - eta| >= min_abs_diff
  double min_abs_sum = 0.0;   // |xi + eta| >= min_abs_sum
  double min_sum = 0.0;       // xi + eta >= min_sum (when nonzero)

  // Coordinate tests only (no box bounds, no metric check).
  bool admits_shape(double xi_v, double eta_v) const;
  // Box, shape exclusions and |g| >= min_abs_g.
  bool admits(const SystemFns& fns, double xi_v, double eta_v) const;
};

SampleDomain default_domain(SystemClass c);

// Seedable 64-bit generator. uniform() uses the top 53 bits so draws are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double uniform(const Interval& i) { return uniform(i.lo, i.hi); }
  std::uint64_t next() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Draws n admissible phase points. Points where H, A or B cannot be evaluated
// are rejected too. Throws SamplingError for a degenerate metric or when more
// than 90% of draws are rejected.
std::vector<PhasePoint> sample_points(const SystemSpec& spec, const SampleDomain& domain, int n,
                                      Rng& rng);
std::vector<PhasePoint> sample_points(const SystemSpec& spec, int n, Rng& rng);

// Coordinates only, for momentum-independent checks (curvature, revolution).
std::vector<std::pair<double, double>> sample_coordinates(const SystemSpec& spec,
                                                          const SampleDomain& domain, int n,
                                                          Rng& rng);

// Class tag with all eight parameters uniform in [lo, hi].
SystemSpec random_spec(SystemClass c, Rng& rng, double lo = -2.0, double hi = 2.0);

}  // namespace superint
