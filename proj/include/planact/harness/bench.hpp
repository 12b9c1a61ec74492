#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::harness {

struct BenchProblem {
  std::string name;
  std::string scene_path;
  std::vector<pddl::Literal> goal;
  /// Objects to relocate.
  std::size_t size = 0;
};

/// Pick-and-place problems over the shipped scenes, one to three objects.
std::vector<BenchProblem> default_bench_problems();

struct BenchRow {
  std::string problem;
  std::size_t size = 0;
  std::size_t trial = 0;
  /// "deferred" or "full".
  std::string mode;
  std::size_t plan_calls = 0;
  double wall_ms = 0.0;
  std::size_t plan_length = 0;
  bool solved = false;
};

/// Deferred and full-certification planning on every problem, `trials`
/// seeds each. Rows come in (problem, trial, deferred, full) order.
std::vector<BenchRow> bench_deferral(const pddl::Domain& domain, const std::vector<pddl::StreamSpec>& streams,
                                     const std::vector<BenchProblem>& problems, std::size_t trials = 5,
                                     std::uint64_t seed = 0);

std::string bench_to_csv(const std::vector<BenchRow>& rows);

}  // namespace planact::harness
