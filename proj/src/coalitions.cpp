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

#include "xshap/coalitions.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "xshap/error.hpp"

namespace xshap {
namespace {

// Exact for every n where the result fits in 64 bits.
double Binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 62) {
    std::uint64_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      result = result * (n - k + i) / i;
    }
    return static_cast<double>(result);
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

// Advances idx (strictly increasing, values < m) to the next combination in
// lexicographic order. Returns false after the last one.
bool NextCombination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t s = idx.size();
  std::size_t i = s;
  while (i > 0) {
    --i;
    if (idx[i] < m - s + i) {
      ++idx[i];
      for (std::size_t k = i + 1; k < s; ++k) idx[k] = idx[k - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Coalition::Coalition(std::vector<std::uint8_t> mask) : mask_(std::move(mask)) {
  for (auto& b : mask_) b = b ? 1 : 0;
}

Coalition Coalition::FromString(const std::string& bits) {
  std::vector<std::uint8_t> mask;
  mask.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      ThrowInvalidArgument("Coalition: bad mask character '" +
                           std::string(1, ch) + "'");
    }
    mask.push_back(ch == '1');
  }
  return Coalition(std::move(mask));
}

std::size_t Coalition::popcount() const {
  std::size_t n = 0;
  for (auto b : mask_) n += b;
  return n;
}

std::string Coalition::ToString() const {
  std::string out;
  out.reserve(mask_.size());
  for (auto b : mask_) out.push_back(b ? '1' : '0');
  return out;
}

Coalition Complement(const Coalition& c) {
  std::vector<std::uint8_t> mask(c.mask());
  for (auto& b : mask) b = 1 - b;
  return Coalition(std::move(mask));
}

double ShapleyWeight(std::size_t m, std::size_t s) {
  if (m == 0 || s >= m) {
    ThrowInvalidArgument("ShapleyWeight: need 0 <= s <= m-1, got m=" +
                         std::to_string(m) + " s=" + std::to_string(s));
  }
  // s!(m-s-1)!/m! = 1 / (m * binom(m-1, s))
  return 1.0 / (static_cast<double>(m) * Binomial(m - 1, s));
}

double KernelWeight(std::size_t m, std::size_t s) {
  if (s == 0 || s >= m) {
    ThrowInvalidArgument("KernelWeight: need 1 <= s <= m-1, got m=" +
                         std::to_string(m) + " s=" + std::to_string(s));
  }
  return static_cast<double>(m - 1) /
         (Binomial(m, s) * static_cast<double>(s) *
          static_cast<double>(m - s));
}

std::size_t ProperCoalitionCount(std::size_t m) {
  if (m >= std::numeric_limits<std::size_t>::digits) {
    return std::numeric_limits<std::size_t>::max();
  }
  return (std::size_t{1} << m) - 2;
}

CoalitionPlan EnumerateCoalitions(std::size_t m, std::size_t budget) {
  if (m == 0) ThrowInvalidArgument("EnumerateCoalitions: m must be positive");
  if (budget < 2) {
    ThrowInvalidArgument("EnumerateCoalitions: budget must be >= 2, got " +
                         std::to_string(budget));
  }
  CoalitionPlan plan;
  plan.m = m;
  const std::size_t limit = std::min(budget, ProperCoalitionCount(m));

  auto emit = [&](Coalition c) {
    const double w = KernelWeight(m, c.popcount());
    plan.coalitions.push_back(std::move(c));
    plan.weights.push_back(w);
  };

  for (std::size_t s = 1; 2 * s <= m && plan.size() < limit; ++s) {
    const bool self_paired = (2 * s == m);
    std::set<std::vector<std::uint8_t>> seen;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    do {
      Coalition c(m);
      for (std::size_t j : idx) c.set(j, true);
      if (self_paired && seen.count(c.mask())) continue;
      Coalition comp = Complement(c);
      if (self_paired) {
        seen.insert(c.mask());
        seen.insert(comp.mask());
      }
      emit(std::move(c));
      if (plan.size() >= limit) break;
      emit(std::move(comp));
      if (plan.size() >= limit) break;
    } while (NextCombination(idx, m));
  }
  return plan;
}

}  // namespace xshap
