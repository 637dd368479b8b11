#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ismpath/core.hpp"
#include "ismpath/refpath.hpp"
#include "ismpath/sim.hpp"

namespace ismpath {

/// Parses the plain-text path format: one segment per line, '#' comments.
///   segment line <x0> <y0> <x1> <y1>
///   segment arc <cx> <cy> <radius> <start_deg> <sweep_deg>
/// Parameter ranges are assigned proportionally to segment arc length.
inline std::shared_ptr<const ReferencePath> parse_path_text(
    const std::string& text) {
  std::vector<PathSegment> segs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;  // blank line
    const auto bad = [&](const std::string& why) {
      raise(Errc::config,
            "path file line " + std::to_string(lineno) + ": " + why);
    };
    if (head != "segment") bad("expected 'segment', got '" + head + "'");
    std::string kind;
    if (!(ls >> kind)) bad("missing segment kind");
    PathSegment seg;
    if (kind == "line") {
      LineGeom g;
      if (!(ls >> g.start.x >> g.start.y >> g.end.x >> g.end.y)) {
        bad("line needs: x0 y0 x1 y1");
      }
      if ((g.end - g.start).norm() < 1e-12) bad("line has zero length");
      seg.geometry = g;
    } else if (kind == "arc") {
      ArcGeom g;
      double start_deg = 0.0, sweep_deg = 0.0;
      if (!(ls >> g.center.x >> g.center.y >> g.radius >> start_deg >>
            sweep_deg)) {
        bad("arc needs: cx cy radius start_deg sweep_deg");
      }
      if (!(g.radius > 0.0)) bad("arc radius must be positive");
      if (sweep_deg == 0.0) bad("arc sweep must be nonzero");
      g.start_angle = start_deg * kPi / 180.0;
      g.sweep = sweep_deg * kPi / 180.0;
      seg.geometry = g;
    } else {
      bad("unknown segment kind '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) bad("unexpected trailing token '" + extra + "'");
    segs.push_back(seg);
  }
  if (segs.empty()) raise(Errc::config, "path file defines no segments");

  double total = 0.0;
  for (const auto& s : segs) total += s.length();
  double acc = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    segs[i].s_begin = acc / total;
    acc += segs[i].length();
    segs[i].s_end = i + 1 == segs.size() ? 1.0 : acc / total;
  }
  return std::make_shared<const ReferencePath>(std::move(segs));
}

/// Resolves a built-in path name or loads a path file from disk. The single
/// built-in is "paper-benchmark", the S-curve the benchmark suite runs.
inline std::shared_ptr<const ReferencePath> load_path(
    const std::string& name_or_file) {
  if (name_or_file == "paper-benchmark") return build_benchmark_path();
  std::ifstream in(name_or_file);
  if (!in) raise(Errc::io, "cannot open path file: " + name_or_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_path_text(buf.str());
}

}  // namespace ismpath
