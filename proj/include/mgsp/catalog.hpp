// Copyright 2026 the mgsp authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "mgsp/graph.hpp"

namespace mgsp {
namespace catalog {

inline MetricGraph interval(double len = 1.0) {
  return build_graph({{0, len}}, {{{0, End::Source}}, {{0, End::Target}}});
}

inline MetricGraph path(const std::vector<double>& lengths) {
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  int n = static_cast<int>(lengths.size());
  for (int i = 0; i < n; ++i) edges.push_back(Edge{i, lengths[i], i, 0});
  vertices.push_back({{0, End::Source}});
  for (int i = 0; i + 1 < n; ++i)
    vertices.push_back({{i, End::Target}, {i + 1, End::Source}});
  vertices.push_back({{n - 1, End::Target}});
  return MetricGraph(std::move(edges), std::move(vertices));
}

inline MetricGraph star(int m, const std::vector<double>& lengths = {}) {
  std::vector<Edge> edges;
  Vertex center;
  std::vector<Vertex> vertices;
  for (int i = 0; i < m; ++i) {
    double len = lengths.empty() ? 1.0 : lengths.at(i);
    edges.push_back(Edge{i, len, i, 0});
    center.push_back({i, End::Source});
    vertices.push_back({{i, End::Target}});
  }
  vertices.push_back(std::move(center));
  return MetricGraph(std::move(edges), std::move(vertices));
}

inline MetricGraph loop(double len = 1.0) {
  return build_graph({{0, len}}, {{{0, End::Source}, {0, End::Target}}});
}

inline MetricGraph figure8(double l1 = 1.0, double l2 = 1.0) {
  return build_graph({{0, l1}, {1, l2}},
                     {{{0, End::Source}, {0, End::Target}, {1, End::Source}, {1, End::Target}}});
}

inline MetricGraph lasso(double loop_len = 1.0, double stick = 1.0) {
  return build_graph({{0, loop_len}, {1, stick}},
                     {{{0, End::Source}, {0, End::Target}, {1, End::Source}},
                      {{1, End::Target}}});
}

inline MetricGraph pumpkin(int p, const std::vector<double>& lengths = {}) {
  std::vector<Edge> edges;
  Vertex a, b;
  for (int i = 0; i < p; ++i) {
    double len = lengths.empty() ? 1.0 : lengths.at(i);
    edges.push_back(Edge{i, len, i, 0});
    a.push_back({i, End::Source});
    b.push_back({i, End::Target});
  }
  return MetricGraph(std::move(edges), {std::move(a), std::move(b)});
}

/// Two 3-pumpkins connected by a bridge edge.
inline MetricGraph pumpkin_dumbbell(double pumpkin_len = 1.0, double bridge = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < 3; ++i) edges.push_back(Edge{i, pumpkin_len, i, 0});
  edges.push_back(Edge{3, bridge, 3, 0});
  for (int i = 4; i < 7; ++i) edges.push_back(Edge{i, pumpkin_len, i, 0});
  Vertex v0, v1, v2, v3;
  for (int i = 0; i < 3; ++i) {
    v0.push_back({i, End::Source});
    v1.push_back({i, End::Target});
  }
  v1.push_back({3, End::Source});
  v2.push_back({3, End::Target});
  for (int i = 4; i < 7; ++i) {
    v2.push_back({i, End::Source});
    v3.push_back({i, End::Target});
  }
  return MetricGraph(std::move(edges), {v0, v1, v2, v3});
}

inline MetricGraph dumbbell(double l1 = 1.0, double bridge = 1.0, double l2 = 1.0) {
  return build_graph(
      {{0, l1}, {1, bridge}, {2, l2}},
      {{{0, End::Source}, {0, End::Target}, {1, End::Source}},
       {{1, End::Target}, {2, End::Source}, {2, End::Target}}});
}

/// beta loops at a single vertex.
inline MetricGraph flower(const std::vector<double>& lengths) {
  std::vector<Edge> edges;
  Vertex center;
  for (int i = 0; i < static_cast<int>(lengths.size()); ++i) {
    edges.push_back(Edge{i, lengths[i], i, 0});
    center.push_back({i, End::Source});
    center.push_back({i, End::Target});
  }
  return MetricGraph(std::move(edges), {std::move(center)});
}

/// Flower with pendant edges: `loops` loops and `pendants` pendant edges at
/// one central vertex. Lengths: loops first, then pendants; default 1.
inline MetricGraph stower(int loops, int pendants, const std::vector<double>& lengths = {}) {
  std::vector<Edge> edges;
  Vertex center;
  std::vector<Vertex> vertices;
  int id = 0;
  for (int i = 0; i < loops; ++i, ++id) {
    double len = lengths.empty() ? 1.0 : lengths.at(id);
    edges.push_back(Edge{id, len, id, 0});
    center.push_back({id, End::Source});
    center.push_back({id, End::Target});
  }
  for (int i = 0; i < pendants; ++i, ++id) {
    double len = lengths.empty() ? 1.0 : lengths.at(id);
    edges.push_back(Edge{id, len, id, 0});
    center.push_back({id, End::Source});
    vertices.push_back({{id, End::Target}});
  }
  vertices.push_back(std::move(center));
  return MetricGraph(std::move(edges), std::move(vertices));
}

/// Windmill W^{2m}: 2m lassos (loop length l, bridge length s) glued at a
/// common center.
inline MetricGraph windmill(int m, double l = 1.0, double s = 1.0) {
  std::vector<Edge> edges;
  std::vector<Vertex> vertices;
  Vertex center;
  int id = 0;
  for (int i = 0; i < 2 * m; ++i) {
    EdgeId loop_id = id++, bridge_id = id++;
    edges.push_back(Edge{loop_id, l, loop_id, 0});
    edges.push_back(Edge{bridge_id, s, bridge_id, 0});
    vertices.push_back({{loop_id, End::Source}, {loop_id, End::Target}, {bridge_id, End::Source}});
    center.push_back({bridge_id, End::Target});
  }
  vertices.push_back(std::move(center));
  return MetricGraph(std::move(edges), std::move(vertices));
}

/// Parses "name:arg1:arg2:..." catalog descriptors, e.g. "interval:1",
/// "star:3", "windmill:1:4:1", "path:1,2,1".
inline MetricGraph parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ParseError("empty catalog descriptor");
  auto num = [&](std::size_t i, double dflt) -> double {
    if (i >= parts.size() || parts[i].empty()) return dflt;
    try {
      return std::stod(parts[i]);
    } catch (...) {
      throw ParseError("bad number in catalog descriptor: " + parts[i]);
    }
  };
  auto numlist = [&](std::size_t i) -> std::vector<double> {
    std::vector<double> out;
    if (i >= parts.size()) return out;
    std::stringstream ls(parts[i]);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        throw ParseError("bad length list: " + parts[i]);
      }
    }
    return out;
  };
  const std::string& name = parts[0];
  if (name == "interval") return interval(num(1, 1.0));
  if (name == "path") {
    auto ls = numlist(1);
    if (ls.empty()) throw ParseError("path needs lengths");
    return path(ls);
  }
  if (name == "star") {
    int m = static_cast<int>(num(1, 3));
    auto ls = numlist(2);
    return star(m, ls);
  }
  if (name == "loop") return loop(num(1, 1.0));
  if (name == "figure8") return figure8(num(1, 1.0), num(2, 1.0));
  if (name == "lasso") return lasso(num(1, 1.0), num(2, 1.0));
  if (name == "pumpkin") {
    int p = static_cast<int>(num(1, 3));
    return pumpkin(p, numlist(2));
  }
  if (name == "pumpkin_dumbbell") return pumpkin_dumbbell(num(1, 1.0), num(2, 1.0));
  if (name == "dumbbell") return dumbbell(num(1, 1.0), num(2, 1.0), num(3, 1.0));
  if (name == "flower") {
    auto ls = numlist(1);
    if (ls.empty()) throw ParseError("flower needs lengths");
    return flower(ls);
  }
  if (name == "stower")
    return stower(static_cast<int>(num(1, 2)), static_cast<int>(num(2, 2)), numlist(3));
  if (name == "windmill")
    return windmill(static_cast<int>(num(1, 1)), num(2, 1.0), num(3, 1.0));
  throw ParseError("unknown catalog graph: " + name);
}

}  // namespace catalog
}  // namespace mgsp
