/*
 * Copyright 2026 The X-SHAP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef XSHAP_COALITIONS_HPP_
#define XSHAP_COALITIONS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace xshap {

// Binary mask over the m features; true means the feature takes the value of
// the explained observation.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::size_t m, bool active = false)
      : mask_(m, active ? 1 : 0) {}
  explicit Coalition(std::vector<std::uint8_t> mask);

  // Parses "101" style strings, feature 0 first.
  static Coalition FromString(const std::string& bits);

  std::size_t size() const { return mask_.size(); }
  bool active(std::size_t j) const { return mask_[j] != 0; }
  void set(std::size_t j, bool on) { mask_[j] = on ? 1 : 0; }
  std::size_t popcount() const;

  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::string ToString() const;

  friend bool operator==(const Coalition&, const Coalition&) = default;
  friend auto operator<=>(const Coalition&, const Coalition&) = default;

 private:
  std::vector<std::uint8_t> mask_;
};

Coalition Complement(const Coalition& c);

// s!(m-s-1)!/m!, the weight of a size-s coalition in the exact Shapley sum.
double ShapleyWeight(std::size_t m, std::size_t s);

// (m-1) / (binom(m,s) s (m-s)), the Shapley kernel used as regression weight.
// Undefined (infinite) for s in {0, m}.
double KernelWeight(std::size_t m, std::size_t s);

struct CoalitionPlan {
  std::size_t m = 0;
  std::vector<Coalition> coalitions;
  std::vector<double> weights;

  std::size_t size() const { return coalitions.size(); }
};

// Coalitions by decreasing kernel weight: every size-1 mask followed by its
// complement, then size 2 paired with size m-2, and so on. Masks inside a
// round follow lexicographic order of their active index sets. Stops after
// min(budget, 2^m - 2) distinct masks.
CoalitionPlan EnumerateCoalitions(std::size_t m, std::size_t budget);

// 2^m - 2 saturated to SIZE_MAX.
std::size_t ProperCoalitionCount(std::size_t m);

}  // namespace xshap

#endif  // XSHAP_COALITIONS_HPP_
