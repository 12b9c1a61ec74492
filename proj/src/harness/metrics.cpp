#include "planact/harness/metrics.hpp"

#include "planact/common/error.hpp"

namespace planact::harness {

double compute_aspl(const std::vector<TaskMetrics>& records) {
  if (records.empty()) throw MissingGroundTruth("no task records");
  double sum = 0.0;
  for (const TaskMetrics& r : records) {
    if (!r.l_gt || *r.l_gt <= 0.0) throw MissingGroundTruth("task " + r.task + " has no ground-truth path length");
    if (r.sr > 0.0) sum += r.mean_length / *r.l_gt * r.sr;
  }
  return sum / static_cast<double>(records.size());
}

const std::map<std::string, std::size_t>& family_sizes() {
  static const std::map<std::string, std::size_t> sizes = {
      {"object_loss", 10}, {"action_blocking", 5}, {"state_change", 5}};
  return sizes;
}

TaskMetrics summarize(const std::string& task, const std::vector<bool>& success,
                      const std::vector<std::size_t>& lengths, std::optional<double> l_gt) {
  TaskMetrics m{task, 0.0, 0.0, l_gt};
  std::size_t wins = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < success.size(); ++i) {
    if (!success[i]) continue;
    ++wins;
    total += static_cast<double>(lengths.at(i));
  }
  if (!success.empty()) m.sr = static_cast<double>(wins) / static_cast<double>(success.size());
  if (wins > 0) m.mean_length = total / static_cast<double>(wins);
  return m;
}

}  // namespace planact::harness
