#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "efsolver/problem.hpp"

namespace efsolver {

struct Verified {};

// A y-point of branch `branch` that falsifies its formula at the given x, or
// (when `equality` is set) an equality row violated by more than 1e-7.
struct Counterexample {
  std::size_t branch = 0;
  std::vector<double> point;
  std::optional<std::size_t> equality;
};

// Bisection hit the depth or box limit before deciding a branch.
struct Unknown {
  std::size_t branch = 0;
  int depth = 0;
};

using VerifyResult = std::variant<Verified, Counterexample, Unknown>;

struct VerifyOptions {
  int depth = 25;
  std::size_t max_boxes = 2'000'000;  // per branch
  double equality_tolerance = 1e-7;
};

// Checks exists-part x against every branch by interval branch and bound
// over y, independently of how x was found.
VerifyResult verify_solution(const Problem& p, const Eigen::VectorXd& x,
                             const VerifyOptions& options = {});

inline VerifyResult verify_solution(const Problem& p, const Eigen::VectorXd& x,
                                    int depth) {
  VerifyOptions o;
  o.depth = depth;
  return verify_solution(p, x, o);
}

}  // namespace efsolver
