#pragma once

// Slow reference implementations used only to check the library.

#include <cmath>
#include <random>
#include <vector>

#include "dnfl/boolcore.hpp"
#include "dnfl/dist.hpp"

namespace naive {

using dnfl::Mask;

/// E_mu[f phi_a] for every a by direct double loop, O(4^n), from the
/// definitions of the weights and basis functions.
inline std::vector<double> mu_transform(const std::vector<double>& table,
                                        const dnfl::ProductDistribution& mu) {
  const std::size_t N = table.size();
  std::vector<double> out(N, 0.0);
  const int n = mu.n();
  for (Mask a = 0; a < N; ++a) {
    for (Mask x = 0; x < N; ++x) {
      double w = 1.0, phi = 1.0;
      for (int i = 0; i < n; ++i) {
        const double xi = (x >> i) & 1 ? 1.0 : -1.0;
        const double m = mu.mu()[i];
        w *= (1.0 + m * xi) / 2.0;
        if ((a >> i) & 1) phi *= (xi - m) / std::sqrt(1.0 - m * m);
      }
      out[a] += w * table[x] * phi;
    }
  }
  return out;
}

/// 2^-n sum_x f(x) (-1)^{#i in a with x_i = -1}, written without any library
/// parity helper.
inline std::vector<double> uniform_transform(const std::vector<double>& table) {
  const std::size_t N = table.size();
  std::vector<double> out(N, 0.0);
  for (Mask a = 0; a < N; ++a) {
    double s = 0.0;
    for (Mask x = 0; x < N; ++x) {
      int minus = 0;
      for (Mask b = a; b; b &= b - 1) {
        const int i = __builtin_ctzll(b);
        if (!((x >> i) & 1)) ++minus;
      }
      s += (minus % 2 ? -1.0 : 1.0) * table[x];
    }
    out[a] = s / static_cast<double>(N);
  }
  return out;
}

inline std::vector<double> random_boolean_table(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> t(std::size_t{1} << n);
  for (auto& v : t) v = coin(rng) ? 1.0 : -1.0;
  return t;
}

inline dnfl::ProductDistribution random_mu(int n, double c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0 + c, 1.0 - c);
  std::vector<double> mu(n);
  for (auto& m : mu) m = u(rng);
  return dnfl::ProductDistribution(mu);
}

/// Pr_mu[f(x with x_i=1) != f(x with x_i=-1)] straight from the definition.
inline double influence(const std::vector<double>& table,
                        const dnfl::ProductDistribution& mu, int i) {
  double p = 0.0;
  const Mask bit = Mask{1} << i;
  for (Mask x = 0; x < table.size(); ++x) {
    if (table[x | bit] != table[x & ~bit]) p += dnfl::point_weight(mu, x);
  }
  return p;
}

/// Random monotone boolean function: upward closure of random seeds.
inline std::vector<double> random_monotone_table(int n, std::mt19937_64& rng) {
  const std::size_t N = std::size_t{1} << n;
  std::uniform_int_distribution<Mask> pick(0, N - 1);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<Mask> mins;
  for (int k = count(rng); k > 0; --k) mins.push_back(pick(rng));
  std::vector<double> t(N, -1.0);
  for (Mask x = 0; x < N; ++x) {
    for (Mask m : mins) {
      if ((x & m) == m) t[x] = 1.0;
    }
  }
  return t;
}

}  // namespace naive
