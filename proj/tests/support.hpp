#pragma once

#include <random>
#include <vector>

#include "lccp/instance.hpp"

namespace lccp::testing {

/// Symmetric travel times drawn uniformly from [1, 100]; usually violates
/// the triangle inequality.
inline Instance random_nonmetric(int n, std::mt19937_64& rng, double crit_low, double crit_high) {
  std::uniform_real_distribution<double> t(1.0, 100.0), q(crit_low, crit_high);
  std::vector<double> travel(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) travel[i * n + j] = travel[j * n + i] = t(rng);
  std::vector<double> crit(n);
  for (auto& c : crit) c = q(rng);
  return Instance(std::move(travel), std::move(crit));
}

/// Mixed suite member: even indices Euclidean (metric), odd ones random.
/// Critical-time ranges cycle through tight, medium and loose settings.
inline Instance suite_instance(int index, int n, std::uint64_t seed) {
  static constexpr double ranges[][2] = {{40, 120}, {80, 200}, {150, 400}, {60, 90}};
  const auto& r = ranges[index % 4];
  if (index % 2 == 0) return generate_euclidean(n, seed, 100.0, r[0], r[1]);
  std::mt19937_64 rng(seed);
  return random_nonmetric(n, rng, r[0], r[1]);
}

inline std::vector<double> random_duals(int n, std::mt19937_64& rng, double high = 1.0) {
  std::uniform_real_distribution<double> d(-0.2, high);
  std::vector<double> duals(n);
  for (auto& v : duals) v = d(rng);
  return duals;
}

}  // namespace lccp::testing
