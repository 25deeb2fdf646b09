#include <cmath>
#include <map>
#include <numeric>

#include "zoomcast/errors.hpp"
#include "zoomcast/simulator.hpp"

namespace zoomcast {

double similarity(std::span<const UserRequest> requests) {
  std::map<TileId, int> viewers;
  int participants = 0;
  for (const UserRequest& r : requests) {
    if (r.roi.empty()) continue;
    ++participants;
    for (TileId g : r.roi) viewers[g] += 1;
  }
  if (participants == 0) throw ContractError("similarity needs a non-empty RoI");
  double sum = 0.0;
  for (const UserRequest& r : requests) {
    if (r.roi.empty()) continue;
    double shared = 0.0;
    for (TileId g : r.roi) {
      const int v = viewers[g];
      if (v > 1) shared += static_cast<double>(v) / participants;
    }
    sum += shared / static_cast<double>(r.roi.size());
  }
  return sum / participants;
}

GoodputSummary goodput(std::span<const EpochReport> reports, double epoch_s) {
  GoodputSummary out;
  if (reports.empty()) return out;
  std::map<UserId, double> bits;
  for (const EpochReport& r : reports) {
    for (const auto& [id, bps] : r.goodput_bps) bits[id] += bps * epoch_s;
  }
  const double elapsed = epoch_s * static_cast<double>(reports.size());
  double sum = 0.0;
  for (const auto& [id, b] : bits) {
    out.per_user_bps[id] = b / elapsed;
    sum += b / elapsed;
  }
  if (!bits.empty()) out.average_bps = sum / static_cast<double>(bits.size());
  return out;
}

double fairness(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / values.size());
}

double fairness(const EpochReport& report) {
  std::vector<double> values;
  for (const auto& [id, u] : report.realized_utility) values.push_back(u);
  return fairness(values);
}

}  // namespace zoomcast
