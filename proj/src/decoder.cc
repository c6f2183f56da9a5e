#include "chroma3d/decoder.h"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace chroma3d {
namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
}

std::array<DecodingPath, 12> make_paths() {
  std::array<Color, 4> abc = {Color::b, Color::g, Color::r, Color::y};
  std::array<DecodingPath, 12> out{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      std::vector<Color> rest;
      for (int t = 0; t < 4; ++t) {
        if (t != i && t != j) rest.push_back(abc[t]);
      }
      out[k++] = {abc[i], abc[j], rest[0], rest[1]};
      out[k++] = {abc[i], abc[j], rest[1], rest[0]};
    }
  }
  return out;
}

int pair_index(const DecodingPath& p) { return path_index(p) / 2; }

std::vector<int> odd_payloads(const Matching& m, int universe) {
  std::vector<char> flip(universe, 0);
  for (const auto& pair : m.pairs) {
    for (int x : pair.path) flip[x] ^= 1;
  }
  std::vector<int> out;
  for (int i = 0; i < universe; ++i) {
    if (flip[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

const std::array<DecodingPath, 12>& all_paths() {
  static const std::array<DecodingPath, 12> paths = make_paths();
  return paths;
}

int path_index(const DecodingPath& path) {
  const auto& paths = all_paths();
  for (int i = 0; i < 12; ++i) {
    if (paths[i] == path) return i;
  }
  return -1;
}

std::string to_string(const DecodingPath& p) {
  return {color_char(p.c), color_char(p.d), ',', color_char(p.e), ',', color_char(p.f)};
}

std::optional<DecodingPath> parse_path(std::string_view s) {
  std::string compact;
  for (char ch : s) {
    if (ch != ',' && ch != '-' && ch != ' ' && ch != '>') compact += ch;
  }
  if (compact.size() != 4) return std::nullopt;
  auto a = parse_color(compact[0]), b = parse_color(compact[1]);
  auto e = parse_color(compact[2]), f = parse_color(compact[3]);
  if (!a || !b || !e || !f || *a == *b) return std::nullopt;
  const MixedColor pair = mix(*a, *b);
  DecodingPath p{pair.lo, pair.hi, *e, *f};
  if (path_index(p) < 0) return std::nullopt;
  return p;
}

DecodingPath default_single_path(Family family) {
  if (family == Family::cubic) return {Color::b, Color::g, Color::y, Color::r};
  return all_paths().front();
}

StageGraph build_restricted(const DualLattice& dual, Color c, Color d) {
  StageGraph sg;
  sg.vertex_node.assign(dual.vertices.size(), -1);
  sg.edge_node.assign(dual.edges.size(), -1);
  sg.face_node.assign(dual.faces.size(), -1);
  std::vector<char> boundary;
  for (int v = 0; v < static_cast<int>(dual.vertices.size()); ++v) {
    const Color col = dual.vertices[v].color;
    if (col != c && col != d) continue;
    sg.vertex_node[v] = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back({NodeKind::vertex, v});
    boundary.push_back(dual.vertices[v].is_boundary ? 1 : 0);
  }
  std::vector<WeightedGraph::Edge> edges;
  const MixedColor cd = mix(c, d);
  for (int e = 0; e < static_cast<int>(dual.edges.size()); ++e) {
    if (!(dual.edges[e].color == cd)) continue;
    edges.push_back({sg.vertex_node[dual.edges[e].v[0]], sg.vertex_node[dual.edges[e].v[1]], 1, e});
  }
  sg.graph = WeightedGraph(std::move(boundary), std::move(edges));
  return sg;
}

StageGraph build_mono1(const DualLattice& dual, const StageGraph& restricted, Color e) {
  StageGraph sg;
  sg.vertex_node.assign(dual.vertices.size(), -1);
  sg.edge_node.assign(dual.edges.size(), -1);
  sg.face_node.assign(dual.faces.size(), -1);
  std::vector<char> boundary;
  for (const auto& re : restricted.graph.edges()) {
    const int id = re.payload;
    sg.edge_node[id] = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back({NodeKind::edge, id});
    boundary.push_back(dual.edges[id].is_border ? 1 : 0);
  }
  for (int v = 0; v < static_cast<int>(dual.vertices.size()); ++v) {
    if (dual.vertices[v].color != e) continue;
    sg.vertex_node[v] = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back({NodeKind::vertex, v});
    boundary.push_back(dual.vertices[v].is_boundary ? 1 : 0);
  }
  std::unordered_map<std::uint64_t, int> edge_of;
  for (int id = 0; id < static_cast<int>(dual.edges.size()); ++id) {
    edge_of[pair_key(dual.edges[id].v[0], dual.edges[id].v[1])] = id;
  }
  std::vector<WeightedGraph::Edge> edges;
  for (int f = 0; f < static_cast<int>(dual.faces.size()); ++f) {
    const auto& tri = dual.faces[f].v;
    int ev = -1;
    std::vector<int> rest;
    for (int v : tri) {
      if (dual.vertices[v].color == e) ev = v;
      else rest.push_back(v);
    }
    if (ev < 0 || rest.size() != 2) continue;
    const auto it = edge_of.find(pair_key(rest[0], rest[1]));
    if (it == edge_of.end() || sg.edge_node[it->second] < 0) continue;
    edges.push_back({sg.edge_node[it->second], sg.vertex_node[ev], 1, f});
  }
  sg.graph = WeightedGraph(std::move(boundary), std::move(edges));
  return sg;
}

StageGraph build_mono2(const DualLattice& dual, const StageGraph& mono1, Color f) {
  StageGraph sg;
  sg.vertex_node.assign(dual.vertices.size(), -1);
  sg.edge_node.assign(dual.edges.size(), -1);
  sg.face_node.assign(dual.faces.size(), -1);
  std::vector<char> boundary;
  for (const auto& me : mono1.graph.edges()) {
    sg.face_node[me.payload] = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back({NodeKind::face, me.payload});
    boundary.push_back(0);
  }
  for (int v = 0; v < static_cast<int>(dual.vertices.size()); ++v) {
    if (dual.vertices[v].color != f) continue;
    sg.vertex_node[v] = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back({NodeKind::vertex, v});
    boundary.push_back(dual.vertices[v].is_boundary ? 1 : 0);
  }
  std::map<std::array<int, 3>, int> face_of;
  for (int id = 0; id < static_cast<int>(dual.faces.size()); ++id) {
    auto tri = dual.faces[id].v;
    std::sort(tri.begin(), tri.end());
    face_of[tri] = id;
  }
  std::vector<WeightedGraph::Edge> edges;
  int outer = -1;
  for (int q = 0; q < static_cast<int>(dual.cells.size()); ++q) {
    int fv = -1;
    std::array<int, 3> tri{};
    int t = 0;
    for (int v : dual.cells[q].v) {
      if (dual.vertices[v].color == f) fv = v;
      else if (t < 3) tri[t++] = v;
    }
    if (fv < 0 || t != 3) continue;
    int node = -1;
    const auto it = face_of.find(tri);
    if (it != face_of.end()) {
      node = sg.face_node[it->second];
    } else {
      // three boundary vertices: the corner qubit ends on the outer node
      if (outer < 0) {
        outer = static_cast<int>(sg.nodes.size());
        sg.nodes.push_back({NodeKind::outer, -1});
        boundary.push_back(1);
      }
      node = outer;
    }
    if (node < 0) continue;
    edges.push_back({node, sg.vertex_node[fv], 1, q});
  }
  sg.graph = WeightedGraph(std::move(boundary), std::move(edges));
  return sg;
}

Decoder::Decoder(std::shared_ptr<const ColorLattice> lattice)
    : lattice_(std::move(lattice)), code_(extract_code(*lattice_)) {
  const auto& paths = all_paths();
  for (int i = 0; i < 12; ++i) {
    const auto& p = paths[i];
    if (i % 2 == 0) restricted_[i / 2] = build_restricted(lattice_->dual, p.c, p.d);
    mono1_[i] = build_mono1(lattice_->dual, restricted_[i / 2], p.e);
    mono2_[i] = build_mono2(lattice_->dual, mono1_[i], p.f);
  }
}

const StageGraph& Decoder::restricted(const DecodingPath& p) const { return restricted_[pair_index(p)]; }
const StageGraph& Decoder::mono1(const DecodingPath& p) const { return mono1_[path_index(p)]; }
const StageGraph& Decoder::mono2(const DecodingPath& p) const { return mono2_[path_index(p)]; }

Correction Decoder::decode_path(std::span<const int> cell_defects, const DecodingPath& path, bool trace) const {
  Correction out;
  out.path = path;
  if (cell_defects.empty()) return out;
  const auto& dual = lattice_->dual;
  const StageGraph* stage[3] = {&restricted(path), &mono1(path), &mono2(path)};
  const Color added[3] = {path.c, path.e, path.f};

  std::vector<int> carried;  // dual elements lifted from the previous stage
  for (int s = 0; s < 3; ++s) {
    const StageGraph& g = *stage[s];
    std::vector<int> marked;
    for (int x : carried) {
      const int node = s == 1 ? g.edge_node[x] : g.face_node[x];
      if (node >= 0 && !g.graph.is_boundary(node)) marked.push_back(node);
    }
    for (int v : cell_defects) {
      const Color col = dual.vertices[v].color;
      if (col == added[s] || (s == 0 && col == path.d)) marked.push_back(g.vertex_node[v]);
    }
    std::sort(marked.begin(), marked.end());
    Matching m;
    try {
      m = mwpm(syndrome_graph(g.graph, marked));
    } catch (const MatchingError& err) {
      out.failed = true;
      out.failure = std::string("stage ") + std::to_string(s + 1) + ": " + err.what();
      return out;
    }
    const int universe = s == 0 ? static_cast<int>(dual.edges.size())
                         : s == 1 ? static_cast<int>(dual.faces.size())
                                  : static_cast<int>(dual.cells.size());
    carried = odd_payloads(m, universe);
    if (trace) {
      out.marked[s] = std::move(marked);
      out.stages[s] = std::move(m);
    }
  }
  out.qubits = std::move(carried);
  std::vector<int> expect(cell_defects.begin(), cell_defects.end());
  std::sort(expect.begin(), expect.end());
  if (z_syndrome(code_, out.qubits) != expect) {
    out.failed = true;
    out.failure = "correction does not reproduce the syndrome";
  }
  return out;
}

std::vector<Correction> Decoder::decode_each(std::span<const int> cell_defects, bool trace) const {
  std::vector<Correction> out;
  out.reserve(12);
  for (const auto& p : all_paths()) out.push_back(decode_path(cell_defects, p, trace));
  return out;
}

int Decoder::select(const std::vector<Correction>& corrections) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(corrections.size()); ++i) {
    if (corrections[i].failed) continue;
    if (best < 0 || corrections[i].weight() < corrections[best].weight()) best = i;
  }
  return best;
}

Correction Decoder::decode(std::span<const int> cell_defects, const DecodeMode& mode) const {
  if (!mode.all_paths) {
    Correction c = decode_path(cell_defects, mode.path);
    if (c.failed) throw DecoderError("decoding path " + to_string(mode.path) + " failed: " + c.failure);
    return c;
  }
  if (cell_defects.empty()) {
    Correction c;
    c.path = all_paths().front();
    return c;
  }
  auto each = decode_each(cell_defects, false);
  const int best = select(each);
  if (best < 0) throw DecoderError("all 12 decoding paths failed: " + each.front().failure);
  return std::move(each[best]);
}

Correction Decoder::decode_x(std::span<const int> face_defects, const DecodeMode& mode) const {
  const auto merged = merge_face_to_cell(code_, face_defects);
  return decode(merged, mode);
}

}  // namespace chroma3d
