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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mgsp/graph.hpp"

namespace mgsp {

/// Graph file format: JSON with keys
///   edges:    [{"id": int, "length": number}, ...]
///   vertices: [[{"edge": int, "end": "source"|"target"}, ...], ...]
/// Doubles round-trip losslessly (shortest-representation printing).
inline nlohmann::json graph_to_json(const MetricGraph& g) {
  nlohmann::json j;
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back({{"id", e.id}, {"length", e.length}});
  j["vertices"] = nlohmann::json::array();
  for (const Vertex& v : g.vertices()) {
    nlohmann::json jv = nlohmann::json::array();
    for (const EndpointRef& p : v)
      jv.push_back({{"edge", p.edge},
                    {"end", p.end == End::Source ? "source" : "target"}});
    j["vertices"].push_back(std::move(jv));
  }
  return j;
}

inline MetricGraph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.id = je.at("id").get<EdgeId>();
      e.length = je.at("length").get<double>();
      e.source_id = e.id;
      edges.push_back(e);
    }
    std::vector<Vertex> vertices;
    for (const auto& jv : j.at("vertices")) {
      Vertex v;
      for (const auto& jp : jv) {
        std::string end = jp.at("end").get<std::string>();
        if (end != "source" && end != "target")
          throw ParseError("end must be \"source\" or \"target\"");
        v.push_back({jp.at("edge").get<EdgeId>(),
                     end == "source" ? End::Source : End::Target});
      }
      vertices.push_back(std::move(v));
    }
    return MetricGraph(std::move(edges), std::move(vertices));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

inline std::string graph_to_string(const MetricGraph& g) {
  return graph_to_json(g).dump(2) + "\n";
}

inline MetricGraph graph_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return graph_from_json(j);
}

inline void write_graph_file(const MetricGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << graph_to_string(g);
}

inline MetricGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_string(ss.str());
}

}  // namespace mgsp
