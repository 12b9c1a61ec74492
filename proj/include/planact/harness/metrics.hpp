#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace planact::harness {

struct TaskMetrics {
  std::string task;
  /// Successes over attempts.
  double sr = 0.0;
  /// Mean path length over successful attempts (0 when none succeeded).
  double mean_length = 0.0;
  std::optional<double> l_gt;
};

/// (1/n) * sum_i (mean_length_i / l_gt_i) * sr_i over all n records.
/// Throws MissingGroundTruth when a record has no positive l_gt or the list
/// is empty.
double compute_aspl(const std::vector<TaskMetrics>& records);

/// Tasks per anomaly family in the scenario suite.
const std::map<std::string, std::size_t>& family_sizes();

/// Aggregates per-attempt outcomes of one task.
TaskMetrics summarize(const std::string& task, const std::vector<bool>& success,
                      const std::vector<std::size_t>& lengths, std::optional<double> l_gt);

}  // namespace planact::harness
