// helpers.hpp
// Shared test utilities: closeness checks and independent brute-force
// oracles kept deliberately separate from the library's implementation
// paths they cross-check.

#pragma once

#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "qeraser/qeraser.hpp"

namespace testutil {

inline void check_close(double actual, double expected, double tolerance) {
  INFO("actual " << actual << " expected " << expected << " tol " << tolerance);
  REQUIRE(std::abs(actual - expected) <= tolerance);
}

inline void check_rel(double actual, double expected, double rel_tolerance) {
  INFO("actual " << actual << " expected " << expected << " rel tol " << rel_tolerance);
  REQUIRE(std::abs(actual - expected) <= rel_tolerance * std::max(1e-300, std::abs(expected)));
}

// Brute-force partial trace: naive digit decomposition and a double loop
// over all matrix entries. Independent of the library's stride-based path.
inline qeraser::CMatrix ptrace_oracle(const qeraser::DensityOperator& rho,
                                      const std::vector<std::string>& keep) {
  const qeraser::SystemLayout& lay = rho.layout();
  std::vector<std::size_t> kp;
  for (const std::string& l : keep) kp.push_back(lay.position_of(l));
  std::size_t kd = 1;
  for (std::size_t p : kp) kd *= lay.at(p).dim;
  qeraser::CMatrix out(kd);
  for (std::size_t i = 0; i < lay.total_dim(); ++i) {
    const std::vector<std::size_t> di = lay.decompose(i);
    for (std::size_t j = 0; j < lay.total_dim(); ++j) {
      const std::vector<std::size_t> dj = lay.decompose(j);
      bool env_equal = true;
      for (std::size_t p = 0; p < lay.size(); ++p) {
        const bool kept = std::find(kp.begin(), kp.end(), p) != kp.end();
        if (!kept && di[p] != dj[p]) {
          env_equal = false;
          break;
        }
      }
      if (!env_equal) continue;
      std::size_t r = 0, c = 0;
      for (std::size_t p : kp) {
        r = r * lay.at(p).dim + di[p];
        c = c * lay.at(p).dim + dj[p];
      }
      out.at(r, c) += rho.matrix().at(i, j);
    }
  }
  return out;
}

inline qeraser::StateVector random_state(const qeraser::SystemLayout& lay,
                                         qeraser::SplitMix64& rng) {
  std::vector<qeraser::cplx> amps(lay.total_dim());
  for (qeraser::cplx& z : amps) z = rng.next_complex_normal();
  return qeraser::StateVector(lay, std::move(amps), false).normalized_copy();
}

}  // namespace testutil
