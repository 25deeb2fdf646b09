#include "zoomcast/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "zoomcast/bench.hpp"
#include "zoomcast/errors.hpp"
#include "zoomcast/io.hpp"
#include "zoomcast/planner.hpp"
#include "zoomcast/simulator.hpp"
#include "zoomcast/trace_gen.hpp"

namespace zoomcast {

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioFlags {
  std::string scenario;
  std::string trace;
  std::string allocator;
  std::optional<double> epsilon;
  std::optional<int> budget_slots;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, bool with_allocator) {
  cmd->add_option("--scenario", f.scenario, "scenario YAML file")->required();
  cmd->add_option("--trace", f.trace, "RoI/zoom/channel trace file");
  if (with_allocator) {
    cmd->add_option("--allocator", f.allocator,
                    "optimal, naive, unicast, multicast or approximation");
  }
  cmd->add_option("--epsilon", f.epsilon, "approximation accuracy in (0, 1)");
  cmd->add_option("--budget-slots", f.budget_slots, "slots per frame (T)");
}

Scenario load(const ScenarioFlags& f) {
  Scenario sc = parse_scenario(f.scenario);
  if (!f.trace.empty()) sc.trace = parse_trace(f.trace);
  if (!f.allocator.empty()) {
    auto kind = parse_allocator(f.allocator);
    if (!kind) throw UsageError("unknown allocator '" + f.allocator + "'");
    sc.allocator = *kind;
  }
  if (f.epsilon) sc.approximation.epsilon = *f.epsilon;
  if (f.budget_slots) {
    if (*f.budget_slots < 0) throw UsageError("--budget-slots must be >= 0");
    sc.slot.slots_per_frame = *f.budget_slots;
  }
  try {
    sc.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  return sc;
}

std::string mbps(std::int64_t bps) { return format_number(bps / 1e6); }

int solve(const ScenarioFlags& f, std::ostream& out) {
  const Scenario sc = load(f);
  std::vector<UserRequest> requests;
  for (const UserRequest& u : sc.users) {
    if (!u.roi.empty()) requests.push_back(u);
  }
  PlanOptions options;
  options.allocator = sc.allocator;
  options.approximation = sc.approximation;
  options.policy = &sc.utility_policy();
  const EpochPlan planned = plan_epoch(sc.ladders, requests, sc.slot, options);
  const AllocationResult& r = planned.result;

  out << "allocator: " << allocator_name(sc.allocator) << "\n";
  out << "status: "
      << (planned.degraded ? "infeasible at minimum bounds"
                           : r.status == AllocationStatus::kOk ? "ok" : "infeasible")
      << "\n";
  out << "objective: " << r.objective << "\n";
  out << "slots: " << r.plan.total_slots << " of " << sc.slot.slots_per_frame << "\n";
  if (!planned.bounds.empty()) {
    out << "lower bounds:";
    for (const auto& [id, l] : planned.bounds) out << " " << id << "=" << l;
    out << "\n";
  }
  out << "plan:\n";
  for (const TransmissionEntry& e : r.plan.entries) {
    out << "  tile " << e.tile << " level " << e.level << " at " << mbps(e.link_rate_bps)
        << " Mb/s, " << e.slots << " slots";
    if (e.recipient) out << ", to user " << *e.recipient;
    out << "\n";
  }
  for (const auto& [id, u] : r.per_user_utility) {
    out << "user " << id << " utility " << u << "\n";
  }
  return r.status == AllocationStatus::kOk ? kOk : kDomain;
}

void write_csv(const std::string& path, std::ostream& fallback,
               std::span<const EpochReport> reports) {
  if (path.empty()) {
    write_results_header(fallback);
    write_results(fallback, reports);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  write_results_header(file);
  write_results(file, reports);
}

struct Summary {
  double utility = 0.0;
  double goodput_bps = 0.0;
  double fairness = 0.0;
  int unplanned_epochs = 0;
};

Summary summarize(std::span<const EpochReport> reports, double epoch_s) {
  Summary s;
  if (reports.empty()) return s;
  std::map<UserId, double> per_user;
  for (const EpochReport& r : reports) {
    s.utility += r.total_realized;
    if (r.status != AllocationStatus::kOk) ++s.unplanned_epochs;
    for (const auto& [id, u] : r.realized_utility) per_user[id] += u;
  }
  s.utility /= static_cast<double>(reports.size());
  s.goodput_bps = goodput(reports, epoch_s).average_bps;
  std::vector<double> means;
  for (const auto& [id, u] : per_user) means.push_back(u / reports.size());
  s.fairness = fairness(means);
  return s;
}

int simulate(const ScenarioFlags& f, std::optional<std::uint64_t> seed,
             const std::string& out_path, std::ostream& out) {
  Scenario sc = load(f);
  if (seed) sc.seed = *seed;
  const std::vector<EpochReport> reports = run_simulation(sc);
  write_csv(out_path, out, reports);
  if (!out_path.empty()) {
    const Summary s = summarize(reports, sc.epoch_s);
    out << "allocator " << allocator_name(sc.allocator) << ", seed " << sc.seed << ", "
        << reports.size() << " epochs\n";
    out << "mean utility " << format_number(s.utility) << ", mean goodput "
        << format_number(s.goodput_bps / 1e6) << " Mb/s, utility stddev "
        << format_number(s.fairness) << ", unplanned epochs " << s.unplanned_epochs
        << "\n";
  }
  return kOk;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      throw UsageError("bad --seeds value '" + text + "'");
    }
  };
  if (text.find(',') != std::string::npos) {
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ',');) seeds.push_back(number(part));
  } else if (auto dash = text.find('-'); dash != std::string::npos) {
    const std::uint64_t lo = number(text.substr(0, dash));
    const std::uint64_t hi = number(text.substr(dash + 1));
    if (hi < lo) throw UsageError("bad --seeds range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    const std::uint64_t count = number(text);
    for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw UsageError("--seeds selects no seed");
  return seeds;
}

int compare(const ScenarioFlags& f, const std::string& seeds_text,
            const std::string& out_path, unsigned threads, std::ostream& out) {
  const Scenario base = load(f);
  const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
  std::vector<AllocatorKind> kinds(all_allocators().begin(), all_allocators().end());
  if (!f.allocator.empty()) kinds = {base.allocator};

  struct Job {
    AllocatorKind kind;
    std::uint64_t seed;
    std::vector<EpochReport> reports;
  };
  std::vector<Job> jobs;
  for (AllocatorKind k : kinds) {
    for (std::uint64_t s : seeds) jobs.push_back({k, s, {}});
  }
  std::atomic<std::size_t> next{0};
  std::mutex failure_lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) {
      try {
        Scenario sc = base;
        sc.allocator = jobs[j].kind;
        sc.seed = jobs[j].seed;
        jobs[j].reports = run_simulation(sc);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, jobs.size()); ++t) {
    pool.emplace_back(worker);
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw UsageError("cannot write " + out_path);
    write_results_header(file);
    for (const Job& j : jobs) write_results(file, j.reports);
  }

  out << std::left << std::setw(15) << "allocator" << std::setw(14) << "utility"
      << std::setw(16) << "goodput_mbps" << std::setw(12) << "stddev"
      << "unplanned_epochs\n";
  for (AllocatorKind k : kinds) {
    Summary total;
    for (const Job& j : jobs) {
      if (j.kind != k) continue;
      const Summary s = summarize(j.reports, base.epoch_s);
      total.utility += s.utility / seeds.size();
      total.goodput_bps += s.goodput_bps / seeds.size();
      total.fairness += s.fairness / seeds.size();
      total.unplanned_epochs += s.unplanned_epochs;
    }
    out << std::left << std::setw(15) << allocator_name(k) << std::setw(14)
        << format_number(std::round(total.utility * 1e4) / 1e4) << std::setw(16)
        << format_number(std::round(total.goodput_bps / 1e2) / 1e4) << std::setw(12)
        << format_number(std::round(total.fairness * 1e4) / 1e4)
        << total.unplanned_epochs << "\n";
  }
  return kOk;
}

std::pair<int, int> parse_size(const std::string& text, const std::string& flag) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError(flag + " expects WxH, got '" + text + "'");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tile-level multicast allocation for zoomable video"};
  app.require_subcommand(1);

  ScenarioFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "allocate one epoch and print the plan");
  add_scenario_flags(solve_cmd, solve_flags, true);

  ScenarioFlags sim_flags;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the epoch simulator");
  add_scenario_flags(sim_cmd, sim_flags, true);
  sim_cmd->add_option("--seed", sim_seed, "random seed (overrides the scenario)");
  sim_cmd->add_option("--out", sim_out, "results CSV (default: stdout)");

  ScenarioFlags cmp_flags;
  std::string cmp_seeds = "20";
  std::string cmp_out;
  unsigned cmp_threads = 0;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "run allocators across seeds");
  add_scenario_flags(cmp_cmd, cmp_flags, true);
  cmp_cmd->add_option("--seeds", cmp_seeds, "count N (1..N), range A-B or list A,B,C");
  cmp_cmd->add_option("--out", cmp_out, "joined results CSV");
  cmp_cmd->add_option("--threads", cmp_threads, "worker threads (0: all cores)");

  std::string gen_grid = "16x9";
  std::string gen_roi = "6x3";
  std::string gen_scenario;
  TraceGenConfig gen;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen-trace", "generate an RoI trace");
  gen_cmd->add_option("--grid", gen_grid, "tile grid WxH");
  gen_cmd->add_option("--scenario", gen_scenario, "take the grid from a scenario");
  gen_cmd->add_option("--users", gen.users, "number of users");
  gen_cmd->add_option("--similarity", gen.similarity, "target similarity in [0, 1]");
  gen_cmd->add_option("--duration", gen.duration_s, "trace length in seconds");
  gen_cmd->add_option("--interval", gen.interval_s, "seconds between layouts");
  gen_cmd->add_option("--roi", gen_roi, "RoI size WxH in tiles");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen_out, "trace file (default: stdout)");

  std::string bench_sweep = "500,1000,2000,4000";
  BenchConfig bench;
  bool bench_skip_naive = false;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time naive vs improved DP");
  bench_cmd->add_option("--sweep", bench_sweep, "comma-separated slot budgets");
  bench_cmd->add_option("--repeats", bench.repeats, "runs per point (minimum kept)");
  bench_cmd->add_option("--seed", bench.seed, "instance seed");
  bench_cmd->add_flag("--no-naive", bench_skip_naive, "time only the improved DP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return solve(solve_flags, out);
    if (*sim_cmd) return simulate(sim_flags, sim_seed, sim_out, out);
    if (*cmp_cmd) return compare(cmp_flags, cmp_seeds, cmp_out, cmp_threads, out);
    if (*gen_cmd) {
      if (!gen_scenario.empty()) {
        gen.grid = parse_scenario(gen_scenario).grid;
      } else {
        auto [c, r] = parse_size(gen_grid, "--grid");
        gen.grid = {c, r};
      }
      auto [w, h] = parse_size(gen_roi, "--roi");
      gen.roi_width = w;
      gen.roi_height = h;
      const std::string text = serialize_trace(generate_trace(gen));
      if (gen_out.empty()) {
        out << text;
      } else {
        std::ofstream file(gen_out);
        if (!file) throw UsageError("cannot write " + gen_out);
        file << text;
      }
      return kOk;
    }
    if (*bench_cmd) {
      bench.budgets.clear();
      std::stringstream in(bench_sweep);
      for (std::string part; std::getline(in, part, ',');) {
        try {
          bench.budgets.push_back(std::stoi(part));
        } catch (const std::exception&) {
          throw UsageError("bad --sweep value '" + part + "'");
        }
      }
      bench.naive = !bench_skip_naive;
      const BenchReport r = run_bench(bench);
      out << std::left << std::setw(8) << "T" << std::setw(14) << "naive_ms"
          << "optimal_ms\n";
      for (const BenchPoint& p : r.points) {
        out << std::setw(8) << p.budget << std::setw(14)
            << (p.naive_ms ? format_number(std::round(*p.naive_ms * 100) / 100) : "-")
            << format_number(std::round(p.optimal_ms * 100) / 100)
            << (p.objectives_match ? "" : "  OBJECTIVE MISMATCH") << "\n";
      }
      out << "optimal linear fit R^2: " << format_number(r.optimal_r2) << "\n";
      if (r.naive_ratio) {
        out << "naive t(max)/t(max/4): " << format_number(*r.naive_ratio) << "\n";
      }
      if (r.extra_ms) {
        out << "optimal at T=" << *bench.extra_budget << ": "
            << format_number(std::round(*r.extra_ms * 100) / 100) << " ms\n";
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kUsage;
}

}  // namespace zoomcast
