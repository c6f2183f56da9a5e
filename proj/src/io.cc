#include "chroma3d/io.h"

namespace chroma3d {
namespace {

std::string cstr(Color c) { return std::string(1, color_char(c)); }

Color color_of(const Json& j) {
  const auto s = j.get<std::string>();
  if (s.size() != 1 || !parse_color(s[0])) throw FormatError("bad color '" + s + "'");
  return *parse_color(s[0]);
}

MixedColor mixed_of(const Json& j) {
  const auto s = j.get<std::string>();
  auto m = parse_mixed(s);
  if (!m) throw FormatError("bad mixed color '" + s + "'");
  return *m;
}

Int3 xyz_of(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("xyz must have three integers");
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>()};
}

void check_ids(const Json& arr, const char* what) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (arr[i].at("id").get<std::size_t>() != i) throw FormatError(std::string(what) + " ids must be 0..N-1 in order");
  }
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::vertex: return "vertex";
    case NodeKind::edge: return "edge";
    case NodeKind::face: return "face";
    case NodeKind::outer: return "outer";
  }
  return "?";
}

}  // namespace

Json lattice_json(const ColorLattice& lat) {
  const auto& P = lat.primal;
  const auto& D = lat.dual;
  Json j;
  j["format"] = "lattice.v1";
  j["family"] = family_name(lat.family);
  j["d"] = lat.distance;
  j["n"] = lat.num_qubits();
  j["correctable"] = lat.correctable;
  j["coord_scale"] = kCoordScale;
  Json vs = Json::array();
  for (std::size_t i = 0; i < P.vertices.size(); ++i) {
    vs.push_back({{"id", i}, {"xyz", P.vertices[i].xyz}, {"is_corner", P.vertices[i].is_corner}});
  }
  j["vertices"] = std::move(vs);
  Json es = Json::array();
  for (std::size_t i = 0; i < P.edges.size(); ++i) {
    es.push_back({{"id", i}, {"v", P.edges[i].v}, {"color", cstr(P.edges[i].color)}});
  }
  j["edges"] = std::move(es);
  Json fs = Json::array();
  for (std::size_t i = 0; i < P.faces.size(); ++i) {
    fs.push_back({{"id", i}, {"verts", P.faces[i].verts}, {"color", to_string(P.faces[i].color)}});
  }
  j["faces"] = std::move(fs);
  Json cs = Json::array();
  for (std::size_t i = 0; i < P.cells.size(); ++i) {
    cs.push_back({{"id", i}, {"verts", P.cells[i].verts}, {"color", cstr(P.cells[i].color)}});
  }
  j["cells"] = std::move(cs);
  Json bs = Json::array();
  for (std::size_t i = 0; i < P.boundaries.size(); ++i) {
    bs.push_back({{"id", i}, {"color", cstr(P.boundaries[i].color)}, {"faces", P.boundaries[i].faces}});
  }
  j["boundaries"] = std::move(bs);
  Json brs = Json::array();
  for (std::size_t i = 0; i < P.borders.size(); ++i) {
    const auto m = P.borders[i].color;
    brs.push_back({{"id", i}, {"colors", {cstr(m.lo), cstr(m.hi)}}, {"edges", P.borders[i].edges}});
  }
  j["borders"] = std::move(brs);

  Json dual;
  Json dv = Json::array();
  for (std::size_t i = 0; i < D.vertices.size(); ++i) {
    dv.push_back({{"id", i},
                  {"xyz", D.vertices[i].xyz},
                  {"color", cstr(D.vertices[i].color)},
                  {"is_boundary", D.vertices[i].is_boundary}});
  }
  dual["vertices"] = std::move(dv);
  Json de = Json::array();
  for (std::size_t i = 0; i < D.edges.size(); ++i) {
    de.push_back({{"id", i},
                  {"v", D.edges[i].v},
                  {"color", to_string(D.edges[i].color)},
                  {"is_border", D.edges[i].is_border}});
  }
  dual["edges"] = std::move(de);
  Json df = Json::array();
  for (std::size_t i = 0; i < D.faces.size(); ++i) {
    df.push_back({{"id", i}, {"verts", D.faces[i].v}, {"color", cstr(D.faces[i].color)}});
  }
  dual["faces"] = std::move(df);
  Json dc = Json::array();
  for (std::size_t i = 0; i < D.cells.size(); ++i) dc.push_back({{"id", i}, {"verts", D.cells[i].v}});
  dual["cells"] = std::move(dc);
  dual["boundary_vertices"] = D.boundary_vertices;
  j["dual"] = std::move(dual);

  Json qm = Json::array();
  for (int q = 0; q < lat.num_qubits(); ++q) {
    qm.push_back({{"qubit", q}, {"primal_vertex", lat.primal_vertex_of(q)}, {"dual_cell", lat.dual_cell_of(q)}});
  }
  j["qubit_map"] = std::move(qm);
  return j;
}

ColorLattice parse_lattice_json(const Json& j) {
  try {
    if (j.at("format") != "lattice.v1") throw FormatError("not a lattice.v1 document");
    auto fam = parse_family(j.at("family").get<std::string>());
    if (!fam) throw FormatError("unknown family");
    ColorLattice lat{*fam, j.at("d").get<int>(), j.at("correctable").get<bool>(), {}, {}};
    auto& P = lat.primal;
    check_ids(j.at("vertices"), "vertex");
    for (const auto& v : j.at("vertices")) {
      P.vertices.push_back({xyz_of(v.at("xyz")), v.at("is_corner").get<bool>()});
      if (P.vertices.back().is_corner) P.corner_vertices.push_back(static_cast<int>(P.vertices.size()) - 1);
    }
    check_ids(j.at("edges"), "edge");
    for (const auto& e : j.at("edges")) P.edges.push_back({e.at("v").get<std::array<int, 2>>(), color_of(e.at("color"))});
    check_ids(j.at("faces"), "face");
    for (const auto& f : j.at("faces")) P.faces.push_back({f.at("verts").get<std::vector<int>>(), mixed_of(f.at("color"))});
    check_ids(j.at("cells"), "cell");
    for (const auto& c : j.at("cells")) P.cells.push_back({c.at("verts").get<std::vector<int>>(), color_of(c.at("color"))});
    for (const auto& b : j.at("boundaries")) {
      P.boundaries.push_back({color_of(b.at("color")), b.at("faces").get<std::vector<int>>()});
    }
    for (const auto& b : j.at("borders")) {
      const auto& cl = b.at("colors");
      if (!cl.is_array() || cl.size() != 2) throw FormatError("border colors must be a pair");
      P.borders.push_back({mix(color_of(cl[0]), color_of(cl[1])), b.at("edges").get<std::vector<int>>()});
    }
    auto& D = lat.dual;
    const auto& dj = j.at("dual");
    for (const auto& v : dj.at("vertices")) {
      D.vertices.push_back({xyz_of(v.at("xyz")), color_of(v.at("color")), v.at("is_boundary").get<bool>()});
      if (D.vertices.back().is_boundary) {
        D.boundary_vertices.push_back(static_cast<int>(D.vertices.size()) - 1);
      } else {
        ++D.num_bulk_vertices;
      }
    }
    for (const auto& e : dj.at("edges")) {
      D.edges.push_back({e.at("v").get<std::array<int, 2>>(), mixed_of(e.at("color")), e.at("is_border").get<bool>()});
      if (!D.edges.back().is_border) ++D.num_bulk_edges;
    }
    for (const auto& f : dj.at("faces")) D.faces.push_back({f.at("verts").get<std::array<int, 3>>(), color_of(f.at("color"))});
    for (const auto& c : dj.at("cells")) D.cells.push_back({c.at("verts").get<std::array<int, 4>>()});
    const int nv = static_cast<int>(D.vertices.size());
    for (const auto& e : D.edges) {
      for (int v : e.v) {
        if (v < 0 || v >= nv) throw FormatError("dual edge endpoint out of range");
      }
    }
    for (const auto& c : D.cells) {
      for (int v : c.v) {
        if (v < 0 || v >= nv) throw FormatError("dual cell vertex out of range");
      }
    }
    return lat;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed lattice.v1: ") + e.what());
  }
}

Json code_json(const CssCode& code) {
  Json j;
  j["format"] = "code.v1";
  j["n"] = code.n;
  j["k"] = code.k;
  j["rank_x"] = code.rank_x;
  j["rank_z"] = code.rank_z;
  j["x_stabilizers"] = code.x_stabilizers;
  j["z_stabilizers"] = code.z_stabilizers;
  j["logical_x"] = code.logical_x;
  j["logical_z"] = code.logical_z;
  j["bare_z"] = code.bare_z;
  return j;
}

Json node_json(const StageGraph& stage, int node) {
  const NodeRef& r = stage.nodes[node];
  Json j{{"node", node}, {"kind", kind_name(r.kind)}};
  if (r.kind != NodeKind::outer) j["id"] = r.id;
  return j;
}

Json matching_json(const StageGraph& stage, const Matching& m) {
  Json j;
  j["format"] = "matching.v1";
  j["total_weight"] = m.total_weight;
  Json pairs = Json::array();
  for (const auto& p : m.pairs) {
    Json pj{{"a", node_json(stage, p.a)}};
    pj["b"] = p.b == kBoundary ? Json("boundary") : node_json(stage, p.b);
    pj["weight"] = p.weight;
    pj["path"] = p.path;
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json correction_json(const Correction& c) {
  Json j{{"path", to_string(c.path)}, {"failed", c.failed}};
  if (c.failed) j["failure"] = c.failure;
  j["qubits"] = c.qubits;
  j["weight"] = c.weight();
  return j;
}

Json trace_json(const Decoder& decoder, const std::vector<int>& cell_defects, const std::vector<Correction>& traced,
                int selected, const char* basis) {
  static const char* kStage[3] = {"restricted", "mono1", "mono2"};
  static const char* kPayload[3] = {"dual_edge", "dual_face", "qubit"};
  Json j;
  j["format"] = "trace.v1";
  j["family"] = family_name(decoder.lattice().family);
  j["d"] = decoder.lattice().distance;
  j["basis"] = basis;
  j["cell_defects"] = cell_defects;
  Json paths = Json::array();
  for (const auto& c : traced) {
    Json pj = correction_json(c);
    const StageGraph* g[3] = {&decoder.restricted(c.path), &decoder.mono1(c.path), &decoder.mono2(c.path)};
    Json stages = Json::array();
    for (int s = 0; s < 3; ++s) {
      Json sj{{"stage", kStage[s]}, {"payload", kPayload[s]}};
      Json marked = Json::array();
      for (int node : c.marked[s]) marked.push_back(node_json(*g[s], node));
      sj["marked"] = std::move(marked);
      sj["matching"] = matching_json(*g[s], c.stages[s]);
      stages.push_back(std::move(sj));
    }
    pj["stages"] = std::move(stages);
    paths.push_back(std::move(pj));
  }
  j["paths"] = std::move(paths);
  j["selected"] = selected;
  if (selected >= 0) j["correction"] = traced[selected].qubits;
  return j;
}

}  // namespace chroma3d
