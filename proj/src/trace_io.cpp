#include <charconv>
#include <fstream>
#include <sstream>

#include "zoomcast/errors.hpp"
#include "zoomcast/io.hpp"

namespace zoomcast {

namespace {

template <class T>
T number(const std::string& token, int line, const std::string& field) {
  T value{};
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, field, "cannot read '" + token + "'");
  }
  return value;
}

}  // namespace

std::vector<TraceEvent> parse_trace_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header = false;
  std::vector<TraceEvent> events;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok.front().starts_with('#')) continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] + " " + tok[1] != kTraceHeader) {
        throw ParseError(line, "header", std::string("expected '") + kTraceHeader + "'");
      }
      header = true;
      continue;
    }
    if (tok.size() < 3) throw ParseError(line, "record", "expected time, user and kind");
    TraceEvent ev;
    ev.time_s = number<double>(tok[0], line, "time");
    if (ev.time_s < 0) throw ParseError(line, "time", "must be >= 0");
    if (!events.empty() && ev.time_s < events.back().time_s) {
      throw ParseError(line, "time", "times must not decrease");
    }
    ev.user_id = number<int>(tok[1], line, "user");
    const std::string& kind = tok[2];
    const std::size_t payload = tok.size() - 3;
    if (kind == "roi") {
      if (payload != 4) throw ParseError(line, "roi", "expected x y w h");
      ev.kind = TraceKind::kRoi;
      ev.rect = {number<int>(tok[3], line, "roi.x"), number<int>(tok[4], line, "roi.y"),
                 number<int>(tok[5], line, "roi.w"), number<int>(tok[6], line, "roi.h")};
      if (ev.rect.width < 1 || ev.rect.height < 1 || ev.rect.x < 0 || ev.rect.y < 0) {
        throw ParseError(line, "roi", "rectangle must be non-empty and non-negative");
      }
    } else if (kind == "zoom") {
      if (payload != 1) throw ParseError(line, "zoom", "expected one level");
      ev.kind = TraceKind::kZoom;
      ev.level = number<int>(tok[3], line, "zoom.level");
      if (ev.level < 1) throw ParseError(line, "zoom.level", "must be >= 1");
    } else if (kind == "channel") {
      if (payload == 0) throw ParseError(line, "channel", "expected loss probabilities");
      ev.kind = TraceKind::kChannel;
      for (std::size_t k = 3; k < tok.size(); ++k) {
        const double p = number<double>(tok[k], line, "channel");
        if (!(0.0 <= p && p <= 1.0)) throw ParseError(line, "channel", "outside [0, 1]");
        ev.channel.push_back(p);
      }
    } else {
      throw ParseError(line, "kind", "unknown record kind '" + kind + "'");
    }
    events.push_back(std::move(ev));
  }
  if (!header) throw ParseError(line, "header", "empty trace");
  return events;
}

std::vector<TraceEvent> parse_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "path", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace_text(buf.str());
}

std::string serialize_trace(std::span<const TraceEvent> events) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (const TraceEvent& ev : events) {
    out << format_number(ev.time_s) << ' ' << ev.user_id << ' ';
    switch (ev.kind) {
      case TraceKind::kRoi:
        out << "roi " << ev.rect.x << ' ' << ev.rect.y << ' ' << ev.rect.width << ' '
            << ev.rect.height;
        break;
      case TraceKind::kZoom:
        out << "zoom " << ev.level;
        break;
      case TraceKind::kChannel:
        out << "channel";
        for (double p : ev.channel) out << ' ' << format_number(p);
        break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace zoomcast
