// Copyright 2026 The ldplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LDPLAB_RNG_HPP_
#define LDPLAB_RNG_HPP_

#include <cstdint>
#include <vector>

#include "ldplab/math.hpp"

namespace ldplab {

// Counter-based generator: output i is a pure function of (key, i), where the
// key is derived from a (seed, stream) pair. Identical (seed, stream) pairs
// reproduce identical draws regardless of what other streams do, so
// replications can be farmed out to any number of workers without changing
// results. The word function is splitmix64.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed, uint64_t stream = 0)
      : key_(derive_key(finalize(seed + 0x9E3779B97F4A7C15ull), stream)) {}

  uint64_t next_u64() { return finalize(key_ + kGamma * ++counter_); }

  // Uniform on (0, 1), never returns an endpoint.
  double next_double() {
    return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Standard normal via the inverse CDF.
  double next_gaussian() { return norm_quantile(next_double()); }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [0, bound).
  int next_int(int bound) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(bound)) >>
                            64);
  }

  // Random sign in {-1, +1}.
  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Sorted sample of `s` distinct indices from [0, d) (selection sampling).
  std::vector<int> sample_without_replacement(int d, int s) {
    std::vector<int> out;
    out.reserve(s);
    int chosen = 0;
    for (int j = 0; j < d && chosen < s; ++j) {
      if (next_double() * (d - j) < s - chosen) {
        out.push_back(j);
        ++chosen;
      }
    }
    return out;
  }

  // Independent generator; distinct ids give independent streams.
  SeededRng substream(uint64_t id) const {
    SeededRng child(*this);
    child.key_ = derive_key(key_, id);
    child.counter_ = 0;
    return child;
  }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static uint64_t finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static uint64_t derive_key(uint64_t key, uint64_t id) {
    return finalize(key ^ finalize(id * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

// Random probability vector of length m: normalized Exp(1) draws plus a
// floor that keeps all entries strictly positive.
inline std::vector<double> random_pmf(SeededRng& rng, int m, double floor = 0.0) {
  std::vector<double> p(m);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    p[i] = floor - std::log(rng.next_double());
    total += p[i];
  }
  for (int i = 0; i < m; ++i) p[i] /= total;
  return p;
}

}  // namespace ldplab

#endif  // LDPLAB_RNG_HPP_
