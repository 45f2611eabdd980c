#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lde/env.hpp"
#include "lde/random.hpp"

namespace lde::fixtures {

// The 2x3 table used throughout the examples: r(s0) = (1, 0, 0.5),
// r(s1) = (0.2, 0.8, 0.5).
inline EnvTable toy_env() {
  Eigen::MatrixXd r(2, 3);
  r << 1.0, 0.0, 0.5, 0.2, 0.8, 0.5;
  return EnvTable::from_rewards(r);
}

inline Eigen::MatrixXd uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi,
                                      Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng);
  }
  return m;
}

inline Policy random_policy(std::size_t n_states, std::size_t n_actions, Rng& rng) {
  Eigen::MatrixXd m = uniform_matrix(n_states, n_actions, 0.0, 1.0, rng);
  for (Eigen::Index s = 0; s < m.rows(); ++s) m.row(s) /= m.row(s).sum();
  return Policy(std::move(m));
}

inline std::vector<HistoricalRecord> random_records(std::size_t n, std::size_t n_states,
                                                    std::size_t n_actions, Rng& rng) {
  std::uniform_int_distribution<std::size_t> ds(0, n_states - 1), da(0, n_actions - 1);
  std::uniform_real_distribution<double> reward(-1.0, 2.0), prob(0.05, 1.0);
  std::vector<HistoricalRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({ds(rng), da(rng), reward(rng), prob(rng)});
  return out;
}

// Every size-m subset of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == m) {
      out.push_back(cur);
      return;
    }
    for (std::size_t a = start; a < n; ++a) {
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace lde::fixtures
