#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "zoomcast/errors.hpp"
#include "zoomcast/io.hpp"

namespace zoomcast {

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InternalError("cannot format number");
  return std::string(buf, end);
}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                       const std::string& message) {
  throw ParseError(node.IsDefined() ? line_of(node) : 0, field, message);
}

template <class T>
T read(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    fail(node, field, "cannot read '" + node.Scalar() + "'");
  }
}

double read_positive(const YAML::Node& node, const std::string& field) {
  const double v = read<double>(node, field);
  if (!(v > 0.0) || !std::isfinite(v)) fail(node, field, "must be positive");
  return v;
}

YAML::Node require(const YAML::Node& parent, const std::string& key) {
  YAML::Node node = parent[key];
  if (!node) fail(parent, key, "missing");
  return node;
}

template <class T>
std::vector<T> read_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(node, field, "expected a list");
  std::vector<T> out;
  for (std::size_t k = 0; k < node.size(); ++k) {
    out.push_back(read<T>(node[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!known.contains(key)) {
      fail(kv.first, where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

std::int64_t bps_from_mbps(double mbps) { return std::llround(mbps * 1e6); }

// Per-tile values given as a scalar or one entry per tile.
std::vector<double> per_tile(const YAML::Node& node, const std::string& field,
                             std::size_t tiles) {
  if (node.IsScalar()) return std::vector<double>(tiles, read<double>(node, field));
  std::vector<double> v = read_list<double>(node, field);
  if (v.size() != tiles) {
    fail(node, field, "needs " + std::to_string(tiles) + " entries");
  }
  return v;
}

Scenario parse_root(const YAML::Node& root) {
  if (!root.IsMap()) fail(root, "document", "expected a mapping");
  reject_unknown(root,
                 {"format", "rates_mbps", "slot_us", "frame_rate", "slots_per_frame",
                  "epoch_s", "duration_s", "gop_length", "frame_profile", "grid",
                  "ladder", "tile_variation", "utility", "users", "allocator",
                  "epsilon", "seed", "adapt_rates"},
                 "");
  const YAML::Node format = require(root, "format");
  if (read<std::string>(format, "format") != kScenarioFormat) {
    fail(format, "format", std::string("expected ") + kScenarioFormat);
  }

  Scenario sc;
  if (YAML::Node n = root["rates_mbps"]) {
    if (!n.IsSequence() || n.size() == 0) fail(n, "rates_mbps", "expected a list");
    sc.rate_set.clear();
    for (std::size_t k = 0; k < n.size(); ++k) {
      sc.rate_set.push_back(
          bps_from_mbps(read_positive(n[k], "rates_mbps[" + std::to_string(k) + "]")));
    }
  }
  double slot_us = 9.0;
  if (YAML::Node n = root["slot_us"]) slot_us = read_positive(n, "slot_us");
  double frame_rate = 25.0;
  if (YAML::Node n = root["frame_rate"]) frame_rate = read_positive(n, "frame_rate");
  sc.slot = SlotBudget::for_frame_rate(frame_rate, std::llround(slot_us * 1000.0));
  if (YAML::Node n = root["slots_per_frame"]) {
    sc.slot.slots_per_frame = read<int>(n, "slots_per_frame");
    if (sc.slot.slots_per_frame < 0) fail(n, "slots_per_frame", "must be >= 0");
  }
  if (YAML::Node n = root["epoch_s"]) sc.epoch_s = read_positive(n, "epoch_s");
  if (YAML::Node n = root["duration_s"]) sc.duration_s = read_positive(n, "duration_s");
  if (YAML::Node n = root["gop_length"]) {
    sc.gop_length = read<int>(n, "gop_length");
    if (sc.gop_length < 1) fail(n, "gop_length", "must be >= 1");
  }
  if (YAML::Node n = root["frame_profile"]) {
    sc.frame_profile = read_list<double>(n, "frame_profile");
  }

  const YAML::Node grid = require(root, "grid");
  reject_unknown(grid, {"cols", "rows"}, "grid");
  sc.grid.cols = read<int>(require(grid, "cols"), "grid.cols");
  sc.grid.rows = read<int>(require(grid, "rows"), "grid.rows");
  if (sc.grid.cols < 1 || sc.grid.rows < 1) fail(grid, "grid", "must be non-empty");
  const auto tiles = static_cast<std::size_t>(sc.grid.tile_count());

  std::vector<double> variation(tiles, 1.0);
  if (YAML::Node n = root["tile_variation"]) {
    variation = per_tile(n, "tile_variation", tiles);
  }
  const YAML::Node ladder = require(root, "ladder");
  if (!ladder.IsSequence() || ladder.size() == 0) {
    fail(ladder, "ladder", "expected a non-empty list of levels");
  }
  sc.ladders.assign(tiles, TileLadder{});
  for (std::size_t g = 0; g < tiles; ++g) sc.ladders[g].tile_id = static_cast<TileId>(g + 1);
  for (std::size_t m = 0; m < ladder.size(); ++m) {
    const YAML::Node level = ladder[m];
    const std::string field = "ladder[" + std::to_string(m) + "]";
    if (!level.IsMap()) fail(level, field, "expected a mapping");
    reject_unknown(level, {"width", "height", "mbps", "tile_bytes"}, field);
    LevelInfo info;
    if (YAML::Node n = level["width"]) info.width = read<int>(n, field + ".width");
    if (YAML::Node n = level["height"]) info.height = read<int>(n, field + ".height");
    sc.level_info.push_back(info);
    const YAML::Node mbps = level["mbps"];
    const YAML::Node bytes = level["tile_bytes"];
    if (bool(mbps) == bool(bytes)) {
      fail(level, field, "give exactly one of mbps or tile_bytes");
    }
    for (std::size_t g = 0; g < tiles; ++g) {
      std::int64_t size = 0;
      if (mbps) {
        const double rate = read_positive(mbps, field + ".mbps");
        size = std::llround(rate * 1e6 / 8.0 / frame_rate /
                            static_cast<double>(tiles) * variation[g]);
      }
      sc.ladders[g].sizes.push_back(size);
    }
    if (bytes) {
      const std::vector<double> b = per_tile(bytes, field + ".tile_bytes", tiles);
      for (std::size_t g = 0; g < tiles; ++g) {
        if (b[g] != std::floor(b[g])) fail(bytes, field + ".tile_bytes", "must be whole bytes");
        sc.ladders[g].sizes.back() = static_cast<std::int64_t>(b[g]);
      }
    }
  }
  for (const TileLadder& t : sc.ladders) {
    try {
      t.validate();
    } catch (const ContractError& e) {
      fail(ladder, "ladder", e.what());
    }
  }
  const int levels = static_cast<int>(ladder.size());

  if (YAML::Node u = root["utility"]) {
    reject_unknown(u, {"mode", "weights"}, "utility");
    const std::string mode = read<std::string>(require(u, "mode"), "utility.mode");
    if (mode == "table") {
      const YAML::Node w = require(u, "weights");
      std::vector<double> weights = read_list<double>(w, "utility.weights");
      if (static_cast<int>(weights.size()) != levels) {
        fail(w, "utility.weights", "needs one weight per level");
      }
      try {
        sc.policy = std::make_shared<LevelWeightUtility>(std::move(weights));
      } catch (const ContractError& e) {
        fail(w, "utility.weights", e.what());
      }
    } else if (mode != "size") {
      fail(u["mode"], "utility.mode", "expected size or table");
    }
  }

  const YAML::Node users = require(root, "users");
  if (!users.IsSequence()) fail(users, "users", "expected a list");
  for (std::size_t k = 0; k < users.size(); ++k) {
    const YAML::Node u = users[k];
    const std::string field = "users[" + std::to_string(k) + "]";
    if (!u.IsMap()) fail(u, field, "expected a mapping");
    reject_unknown(u, {"id", "rate_mbps", "roi", "tiles", "level", "loss", "max_rate_mbps"},
                   field);
    UserRequest r;
    r.user_id = read<int>(require(u, "id"), field + ".id");
    r.link_rate_bps = bps_from_mbps(read_positive(require(u, "rate_mbps"), field + ".rate_mbps"));
    if (std::find(sc.rate_set.begin(), sc.rate_set.end(), r.link_rate_bps) ==
        sc.rate_set.end()) {
      fail(u["rate_mbps"], field + ".rate_mbps", "not in rates_mbps");
    }
    if (u["roi"] && u["tiles"]) fail(u, field, "give roi or tiles, not both");
    if (YAML::Node roi = u["roi"]) {
      std::vector<int> v = read_list<int>(roi, field + ".roi");
      if (v.size() != 4) fail(roi, field + ".roi", "expected [x, y, w, h]");
      try {
        r.roi = sc.grid.tiles_in({v[0], v[1], v[2], v[3]});
      } catch (const ContractError& e) {
        fail(roi, field + ".roi", e.what());
      }
    } else if (YAML::Node t = u["tiles"]) {
      r.roi = read_list<int>(t, field + ".tiles");
      for (TileId g : r.roi) {
        if (g < 1 || g > static_cast<TileId>(tiles)) {
          fail(t, field + ".tiles", "unknown tile " + std::to_string(g));
        }
      }
    }
    normalize_roi(r.roi);
    r.requested_level = levels;
    if (YAML::Node n = u["level"]) {
      r.requested_level = read<int>(n, field + ".level");
      if (r.requested_level < 1 || r.requested_level > levels) {
        fail(n, field + ".level", "outside the ladder");
      }
    }
    r.guaranteed_level = r.requested_level;
    if (YAML::Node n = u["loss"]) {
      sc.loss.per_user_rate_loss[r.user_id] = read_list<double>(n, field + ".loss");
      if (sc.loss.per_user_rate_loss[r.user_id].size() != sc.rate_set.size()) {
        fail(n, field + ".loss", "needs one probability per rate");
      }
    }
    if (YAML::Node n = u["max_rate_mbps"]) {
      const std::int64_t cap = bps_from_mbps(read_positive(n, field + ".max_rate_mbps"));
      auto it = std::find(sc.rate_set.begin(), sc.rate_set.end(), cap);
      if (it == sc.rate_set.end()) fail(n, field + ".max_rate_mbps", "not in rates_mbps");
      sc.loss.max_rate_index[r.user_id] = static_cast<int>(it - sc.rate_set.begin());
    }
    sc.users.push_back(std::move(r));
  }

  if (YAML::Node n = root["allocator"]) {
    const std::string name = read<std::string>(n, "allocator");
    auto kind = parse_allocator(name);
    if (!kind) fail(n, "allocator", "unknown allocator '" + name + "'");
    sc.allocator = *kind;
  }
  if (YAML::Node n = root["epsilon"]) {
    sc.approximation.epsilon = read<double>(n, "epsilon");
    if (!(sc.approximation.epsilon > 0.0 && sc.approximation.epsilon < 1.0)) {
      fail(n, "epsilon", "must lie in (0, 1)");
    }
  }
  if (YAML::Node n = root["seed"]) sc.seed = read<std::uint64_t>(n, "seed");
  if (YAML::Node n = root["adapt_rates"]) sc.adapt_rates = read<bool>(n, "adapt_rates");

  try {
    sc.validate();
  } catch (const ContractError& e) {
    fail(root, "scenario", e.what());
  }
  return sc;
}

YAML::Node load(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, "document", e.msg);
  }
}

void emit_number(YAML::Emitter& out, double v) { out << format_number(v); }

void emit_numbers(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) emit_number(out, x);
  out << YAML::EndSeq;
}

double mbps(std::int64_t bps) { return static_cast<double>(bps) / 1e6; }

}  // namespace

Scenario parse_scenario_text(const std::string& text) { return parse_root(load(text)); }

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "path", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << kScenarioFormat;
  out << YAML::Key << "rates_mbps" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (std::int64_t r : sc.rate_set) emit_number(out, mbps(r));
  out << YAML::EndSeq;
  out << YAML::Key << "slot_us" << YAML::Value;
  emit_number(out, static_cast<double>(sc.slot.slot_duration_ns) / 1000.0);
  out << YAML::Key << "frame_rate" << YAML::Value;
  emit_number(out, sc.slot.frame_rate);
  out << YAML::Key << "slots_per_frame" << YAML::Value << sc.slot.slots_per_frame;
  out << YAML::Key << "epoch_s" << YAML::Value;
  emit_number(out, sc.epoch_s);
  out << YAML::Key << "duration_s" << YAML::Value;
  emit_number(out, sc.duration_s);
  out << YAML::Key << "gop_length" << YAML::Value << sc.gop_length;
  if (!sc.frame_profile.empty()) {
    out << YAML::Key << "frame_profile" << YAML::Value;
    emit_numbers(out, sc.frame_profile);
  }
  out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "cols" << YAML::Value << sc.grid.cols << YAML::Key << "rows"
      << YAML::Value << sc.grid.rows << YAML::EndMap;

  out << YAML::Key << "ladder" << YAML::Value << YAML::BeginSeq;
  const int levels = sc.ladders.empty() ? 0 : sc.ladders.front().levels();
  for (int m = 1; m <= levels; ++m) {
    out << YAML::Flow << YAML::BeginMap;
    if (!sc.level_info.empty()) {
      const LevelInfo& info = sc.level_info[static_cast<std::size_t>(m - 1)];
      out << YAML::Key << "width" << YAML::Value << info.width << YAML::Key
          << "height" << YAML::Value << info.height;
    }
    std::vector<std::int64_t> sizes;
    for (const TileLadder& t : sc.ladders) sizes.push_back(t.size(m));
    out << YAML::Key << "tile_bytes" << YAML::Value;
    if (std::all_of(sizes.begin(), sizes.end(),
                    [&](std::int64_t s) { return s == sizes.front(); })) {
      out << sizes.front();
    } else {
      out << YAML::Flow << YAML::BeginSeq;
      for (std::int64_t s : sizes) out << s;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (auto* table = dynamic_cast<const LevelWeightUtility*>(sc.policy.get())) {
    out << YAML::Key << "utility" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "mode" << YAML::Value << "table" << YAML::Key << "weights"
        << YAML::Value;
    emit_numbers(out, table->weights());
    out << YAML::EndMap;
  } else if (sc.policy && !dynamic_cast<const SizeProportionalUtility*>(sc.policy.get())) {
    throw ContractError("custom utility policies cannot be serialized");
  }

  out << YAML::Key << "users" << YAML::Value << YAML::BeginSeq;
  for (const UserRequest& u : sc.users) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << u.user_id;
    out << YAML::Key << "rate_mbps" << YAML::Value;
    emit_number(out, mbps(u.link_rate_bps));
    out << YAML::Key << "tiles" << YAML::Value << YAML::Flow << u.roi;
    out << YAML::Key << "level" << YAML::Value << u.requested_level;
    if (auto it = sc.loss.per_user_rate_loss.find(u.user_id);
        it != sc.loss.per_user_rate_loss.end()) {
      out << YAML::Key << "loss" << YAML::Value;
      emit_numbers(out, it->second);
    }
    if (auto it = sc.loss.max_rate_index.find(u.user_id);
        it != sc.loss.max_rate_index.end()) {
      out << YAML::Key << "max_rate_mbps" << YAML::Value;
      emit_number(out, mbps(sc.rate_set[static_cast<std::size_t>(it->second)]));
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "allocator" << YAML::Value
      << std::string(allocator_name(sc.allocator));
  out << YAML::Key << "epsilon" << YAML::Value;
  emit_number(out, sc.approximation.epsilon);
  out << YAML::Key << "seed" << YAML::Value << sc.seed;
  out << YAML::Key << "adapt_rates" << YAML::Value << sc.adapt_rates;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace zoomcast
