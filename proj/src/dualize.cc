#include <algorithm>
#include <cmath>

#include "chroma3d/lattice.h"

namespace chroma3d {
namespace {

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Int3 even_mean(const std::vector<Int3>& pts) {
  Int3 out{0, 0, 0};
  if (pts.empty()) return out;
  for (int ax = 0; ax < 3; ++ax) {
    double s = 0;
    for (const auto& p : pts) s += static_cast<double>(p[ax]);
    out[ax] = 2 * static_cast<std::int64_t>(std::llround(s / (2.0 * static_cast<double>(pts.size()))));
  }
  return out;
}

}  // namespace

DualLattice dualize(const PrimalLattice& primal) {
  const int nv = static_cast<int>(primal.vertices.size());
  const int nc = static_cast<int>(primal.cells.size());
  const int nb = static_cast<int>(primal.boundaries.size());

  // dual vertex ids: cells first, then boundaries
  std::vector<std::vector<int>> around(nv);
  std::vector<std::vector<int>> boundary_verts(nb);
  for (int c = 0; c < nc; ++c) {
    for (int v : primal.cells[c].verts) around[v].push_back(c);
  }
  std::vector<std::vector<int>> face_boundaries(primal.faces.size());
  for (int b = 0; b < nb; ++b) {
    for (int f : primal.boundaries[b].faces) {
      face_boundaries[f].push_back(nc + b);
      for (int v : primal.faces[f].verts) boundary_verts[b].push_back(v);
    }
    auto& bv = boundary_verts[b];
    std::sort(bv.begin(), bv.end());
    bv.erase(std::unique(bv.begin(), bv.end()), bv.end());
    for (int v : bv) around[v].push_back(nc + b);
  }
  for (auto& a : around) std::sort(a.begin(), a.end());

  DualLattice dual;
  dual.num_bulk_vertices = nc;
  auto vertex_color = [&](int x) { return x < nc ? primal.cells[x].color : primal.boundaries[x - nc].color; };
  for (int c = 0; c < nc; ++c) {
    std::vector<Int3> pts;
    for (int v : primal.cells[c].verts) pts.push_back(primal.vertices[v].xyz);
    dual.vertices.push_back({even_mean(pts), primal.cells[c].color, false});
  }
  for (int b = 0; b < nb; ++b) {
    std::vector<Int3> pts;
    for (int v : boundary_verts[b]) pts.push_back(primal.vertices[v].xyz);
    dual.vertices.push_back({even_mean(pts), primal.boundaries[b].color, true});
    dual.boundary_vertices.push_back(nc + b);
  }

  std::vector<int> bad;
  auto mixed = [&](int a, int b) -> MixedColor {
    if (vertex_color(a) == vertex_color(b)) {
      throw StructureError("adjacent cells or boundaries share a color", {a, b});
    }
    return mix(vertex_color(a), vertex_color(b));
  };

  for (int f = 0; f < static_cast<int>(primal.faces.size()); ++f) {
    const auto& verts = primal.faces[f].verts;
    std::vector<int> sides;
    if (!verts.empty()) {
      std::vector<int> cells;
      for (int c : around[verts.front()]) {
        if (c < nc) cells.push_back(c);
      }
      for (int v : verts) cells = intersect(cells, around[v]);
      sides = cells;
    }
    sides.insert(sides.end(), face_boundaries[f].begin(), face_boundaries[f].end());
    std::sort(sides.begin(), sides.end());
    if (sides.size() != 2) {
      throw StructureError("face does not separate exactly two cells or boundaries", {f});
    }
    dual.edges.push_back({{sides[0], sides[1]}, mixed(sides[0], sides[1]), false});
  }
  dual.num_bulk_edges = static_cast<int>(dual.edges.size());

  for (int k = 0; k < static_cast<int>(primal.borders.size()); ++k) {
    std::vector<int> common;
    bool first = true;
    for (int e : primal.borders[k].edges) {
      for (int v : primal.edges[e].v) {
        std::vector<int> bs;
        for (int x : around[v]) {
          if (x >= nc) bs.push_back(x);
        }
        common = first ? bs : intersect(common, bs);
        first = false;
      }
    }
    if (common.size() != 2) {
      throw StructureError("border does not join exactly two boundaries", {k});
    }
    dual.edges.push_back({{common[0], common[1]}, mixed(common[0], common[1]), true});
  }

  for (int e = 0; e < static_cast<int>(primal.edges.size()); ++e) {
    const auto tri = intersect(around[primal.edges[e].v[0]], around[primal.edges[e].v[1]]);
    if (tri.size() != 3) {
      throw StructureError("edge is not surrounded by exactly three cells or boundaries", {e});
    }
    Color missing = Color::r;
    for (Color c : kColors) {
      if (c != vertex_color(tri[0]) && c != vertex_color(tri[1]) && c != vertex_color(tri[2])) missing = c;
    }
    dual.faces.push_back({{tri[0], tri[1], tri[2]}, missing});
  }

  for (int v = 0; v < nv; ++v) {
    if (around[v].size() != 4) bad.push_back(v);
  }
  if (!bad.empty()) {
    throw StructureError("vertex does not lie in exactly four cells or boundaries", bad);
  }
  for (int v = 0; v < nv; ++v) {
    dual.cells.push_back({{around[v][0], around[v][1], around[v][2], around[v][3]}});
  }
  return dual;
}

}  // namespace chroma3d
