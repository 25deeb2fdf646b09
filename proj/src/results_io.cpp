#include <ostream>

#include "zoomcast/io.hpp"

namespace zoomcast {

namespace {

std::string status_of(const EpochReport& r) {
  if (r.degraded) return "degraded";
  return r.status == AllocationStatus::kOk ? "ok" : "infeasible";
}

std::string objective_of(const EpochReport& r) {
  if (r.planned_objective.is_neg_inf()) return "-inf";
  return format_number(r.planned_objective.units());
}

}  // namespace

void write_results_header(std::ostream& out) {
  out << "epoch,allocator,seed,user,realized_utility,goodput_bps,rate_index,"
         "similarity,slots_used,planned_objective,status\n";
}

void write_results(std::ostream& out, std::span<const EpochReport> reports) {
  for (const EpochReport& r : reports) {
    const std::string head = std::to_string(r.epoch_index) + "," +
                             std::string(allocator_name(r.allocator)) + "," +
                             std::to_string(r.seed) + ",";
    const std::string tail = "," + format_number(r.similarity) + "," +
                             std::to_string(r.slots_used) + "," + objective_of(r) +
                             "," + status_of(r) + "\n";
    for (const auto& [id, u] : r.realized_utility) {
      out << head << id << ',' << format_number(u) << ','
          << format_number(r.goodput_bps.at(id)) << ',' << r.rate_index.at(id) << tail;
    }
    out << head << "all," << format_number(r.total_realized) << ','
        << format_number(r.mean_goodput_bps) << ",-1" << tail;
  }
}

}  // namespace zoomcast
