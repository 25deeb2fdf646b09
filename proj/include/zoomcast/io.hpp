#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zoomcast/simulator.hpp"

namespace zoomcast {

inline constexpr const char* kScenarioFormat = "zoomcast-scenario/1";
inline constexpr const char* kTraceHeader = "zoomcast-trace v1";

// Scenario documents are YAML. Errors are reported as ParseError with the
// 1-based line and the offending field.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);
// Emits per-level tile byte sizes, so parsing the output reproduces the
// scenario exactly.
std::string serialize_scenario(const Scenario& scenario);

// Trace documents are line oriented:
//   zoomcast-trace v1
//   <time_s> <user> roi <x> <y> <w> <h>
//   <time_s> <user> zoom <level>
//   <time_s> <user> channel <p_1> ... <p_k>
// Blank lines and lines starting with '#' are ignored.
std::vector<TraceEvent> parse_trace(const std::string& path);
std::vector<TraceEvent> parse_trace_text(const std::string& text);
std::string serialize_trace(std::span<const TraceEvent> events);

// CSV with one row per (epoch, user) and one "all" row per epoch.
void write_results_header(std::ostream& out);
void write_results(std::ostream& out, std::span<const EpochReport> reports);

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace zoomcast
