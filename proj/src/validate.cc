#include <algorithm>
#include <set>

#include "chroma3d/lattice.h"

namespace chroma3d {

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void add(std::string name, std::vector<int> offenders, std::string detail = {}) {
    std::sort(offenders.begin(), offenders.end());
    offenders.erase(std::unique(offenders.begin(), offenders.end()), offenders.end());
    ValidationCheck c;
    c.name = std::move(name);
    c.pass = offenders.empty() && detail.empty();
    c.offenders = std::move(offenders);
    c.detail = std::move(detail);
    report_.checks.push_back(std::move(c));
  }

 private:
  ValidationReport& report_;
};

}  // namespace

ValidationReport validate(const ColorLattice& lat) {
  ValidationReport report;
  Checker check(report);
  const auto& P = lat.primal;
  const auto& D = lat.dual;
  const int nv = static_cast<int>(P.vertices.size());
  const int nc = static_cast<int>(P.cells.size());
  const int nb = static_cast<int>(P.boundaries.size());
  auto valid_vertex = [&](int v) { return v >= 0 && v < nv; };

  std::vector<int> valence(nv, 0);
  std::vector<int> bad;
  for (int e = 0; e < static_cast<int>(P.edges.size()); ++e) {
    for (int v : P.edges[e].v) {
      if (valid_vertex(v)) ++valence[v];
      else bad.push_back(e);
    }
  }
  check.add("edge_endpoints", bad);

  bad.clear();
  for (int v = 0; v < nv; ++v) {
    if (valence[v] != (P.vertices[v].is_corner ? 3 : 4)) bad.push_back(v);
  }
  check.add("vertex_valence", bad);

  // cell/boundary incidence recomputed from the primal alone
  std::vector<std::vector<int>> around(nv);
  for (int c = 0; c < nc; ++c) {
    for (int v : P.cells[c].verts) {
      if (valid_vertex(v)) around[v].push_back(c);
    }
  }
  std::vector<std::vector<int>> face_boundary(P.faces.size());
  for (int b = 0; b < nb; ++b) {
    std::set<int> verts;
    for (int f : P.boundaries[b].faces) {
      if (f < 0 || f >= static_cast<int>(P.faces.size())) continue;
      face_boundary[f].push_back(nc + b);
      for (int v : P.faces[f].verts) verts.insert(v);
    }
    for (int v : verts) {
      if (valid_vertex(v)) around[v].push_back(nc + b);
    }
  }
  for (auto& a : around) std::sort(a.begin(), a.end());
  auto color_of = [&](int x) { return x < nc ? P.cells[x].color : P.boundaries[x - nc].color; };
  auto boundaries_of = [&](int v) {
    return static_cast<int>(std::count_if(around[v].begin(), around[v].end(), [&](int x) { return x >= nc; }));
  };

  bad.clear();
  for (int v = 0; v < nv; ++v) {
    if (P.vertices[v].is_corner != (boundaries_of(v) == 3)) bad.push_back(v);
  }
  std::vector<int> flagged;
  for (int v = 0; v < nv; ++v) {
    if (P.vertices[v].is_corner) flagged.push_back(v);
  }
  std::vector<int> listed = P.corner_vertices;
  std::sort(listed.begin(), listed.end());
  check.add("corner_vertices", bad, listed == flagged ? "" : "corner list disagrees with vertex flags");

  // truncated cells on the surface are only required to be even
  std::vector<char> touches_boundary(nc, 0);
  for (int b = 0; b < nb; ++b) {
    for (int f : P.boundaries[b].faces) {
      if (f < 0 || f >= static_cast<int>(P.faces.size()) || P.faces[f].verts.empty()) continue;
      const int v = P.faces[f].verts.front();
      if (!valid_vertex(v)) continue;
      for (int c : around[v]) {
        if (c >= nc) continue;
        const auto& cv = P.cells[c].verts;
        const auto& fv = P.faces[f].verts;
        if (std::all_of(fv.begin(), fv.end(), [&](int u) { return std::binary_search(cv.begin(), cv.end(), u); })) {
          touches_boundary[c] = 1;
        }
      }
    }
  }
  bad.clear();
  for (int c = 0; c < nc; ++c) {
    const auto size = P.cells[c].verts.size();
    if (size == 0 || size % (touches_boundary[c] ? 2 : 4) != 0) bad.push_back(c);
  }
  check.add("cell_size", bad);

  bad.clear();
  for (int f = 0; f < static_cast<int>(P.faces.size()); ++f) {
    if (P.faces[f].verts.size() % 2 != 0 || P.faces[f].verts.size() < 4) bad.push_back(f);
  }
  check.add("face_size_even", bad);

  std::vector<int> bad_sep, bad_color;
  for (int f = 0; f < static_cast<int>(P.faces.size()); ++f) {
    const auto& verts = P.faces[f].verts;
    std::vector<int> sides;
    if (!verts.empty() && valid_vertex(verts.front())) {
      for (int x : around[verts.front()]) {
        if (x >= nc) continue;
        const auto& cv = P.cells[x].verts;
        bool all = std::all_of(verts.begin(), verts.end(),
                               [&](int v) { return std::binary_search(cv.begin(), cv.end(), v); });
        if (all) sides.push_back(x);
      }
    }
    sides.insert(sides.end(), face_boundary[f].begin(), face_boundary[f].end());
    if (sides.size() != 2 || color_of(sides[0]) == color_of(sides[1])) {
      bad_sep.push_back(f);
      continue;
    }
    if (!(mix(color_of(sides[0]), color_of(sides[1])) == P.faces[f].color)) bad_color.push_back(f);
  }
  check.add("cell_coloring", bad_sep);
  check.add("face_color", bad_color);

  bad.clear();
  for (int e = 0; e < static_cast<int>(P.edges.size()); ++e) {
    const auto [u, v] = P.edges[e].v;
    if (!valid_vertex(u) || !valid_vertex(v)) continue;
    std::vector<int> common;
    std::set_intersection(around[u].begin(), around[u].end(), around[v].begin(), around[v].end(),
                          std::back_inserter(common));
    std::set<Color> colors{P.edges[e].color};
    for (int x : common) colors.insert(color_of(x));
    if (common.size() != 3 || colors.size() != 4) bad.push_back(e);
  }
  check.add("edge_color", bad);

  // borders: the two boundaries holding every border edge
  std::vector<std::pair<int, int>> border_pairs;
  bad.clear();
  for (int k = 0; k < static_cast<int>(P.borders.size()); ++k) {
    std::vector<int> common;
    bool first = true;
    for (int e : P.borders[k].edges) {
      if (e < 0 || e >= static_cast<int>(P.edges.size())) continue;
      for (int v : P.edges[e].v) {
        if (!valid_vertex(v)) continue;
        std::vector<int> bs;
        for (int x : around[v]) {
          if (x >= nc) bs.push_back(x - nc);
        }
        if (first) {
          common = bs;
        } else {
          std::vector<int> keep;
          std::set_intersection(common.begin(), common.end(), bs.begin(), bs.end(), std::back_inserter(keep));
          common = keep;
        }
        first = false;
      }
    }
    if (common.size() != 2 || P.boundaries[common[0]].color == P.boundaries[common[1]].color ||
        !(mix(P.boundaries[common[0]].color, P.boundaries[common[1]].color) == P.borders[k].color)) {
      bad.push_back(k);
      continue;
    }
    border_pairs.emplace_back(common[0], common[1]);
  }
  check.add("border_coloring", bad);

  std::string layout;
  std::vector<int> per_color(4, 0);
  for (const auto& b : P.boundaries) ++per_color[static_cast<int>(b.color)];
  if (lat.family == Family::tetrahedral) {
    if (nb != 4 || std::any_of(per_color.begin(), per_color.end(), [](int c) { return c != 1; })) {
      layout = "tetrahedral lattices need four boundaries of four colors";
    }
  } else {
    int pairs = 0;
    for (int c : per_color) {
      if (c == 2) ++pairs;
      else if (c != 0) layout = "each boundary color must appear on exactly two boundaries";
    }
    if (nb != 6 || pairs != 3) layout = "cubic lattices need six boundaries in three color pairs";
    for (const auto& [a, b] : border_pairs) {
      if (P.boundaries[a].color == P.boundaries[b].color) layout = "same-colored boundaries share a border";
    }
  }
  check.add("boundary_layout", {}, layout);

  bad.clear();
  for (int q = 0; q < static_cast<int>(D.cells.size()); ++q) {
    std::set<Color> colors;
    for (int v : D.cells[q].v) {
      if (v >= 0 && v < static_cast<int>(D.vertices.size())) colors.insert(D.vertices[v].color);
    }
    if (colors.size() != 4) bad.push_back(q);
  }
  check.add("dual_cell_colors", bad);

  bad.clear();
  for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) {
    const auto [a, b] = D.edges[e].v;
    if (D.vertices[a].color == D.vertices[b].color ||
        !(mix(D.vertices[a].color, D.vertices[b].color) == D.edges[e].color)) {
      bad.push_back(e);
    }
  }
  check.add("dual_vertex_coloring", bad);

  std::string counts;
  const int expected_n = family_counts(lat.family, lat.distance).n;
  if (nv != expected_n || static_cast<int>(D.cells.size()) != expected_n) {
    counts = "expected " + std::to_string(expected_n) + " qubits, primal has " + std::to_string(nv) +
             ", dual has " + std::to_string(D.cells.size());
  }
  check.add("qubit_count", {}, counts);

  std::string duality;
  if (D.faces.size() != P.edges.size()) duality += "dual faces != primal edges; ";
  if (D.num_bulk_edges != static_cast<int>(P.faces.size())) duality += "bulk dual edges != primal faces; ";
  if (D.edges.size() != P.faces.size() + P.borders.size()) duality += "border edges != borders; ";
  if (D.vertices.size() != P.cells.size() + P.boundaries.size()) duality += "dual vertices != cells + boundaries; ";
  if (D.cells.size() != P.vertices.size()) duality += "dual cells != primal vertices; ";
  check.add("duality_counts", {}, duality);

  bad.clear();
  std::set<std::pair<int, int>> from_primal;
  for (const auto& [a, b] : border_pairs) from_primal.insert({nc + std::min(a, b), nc + std::max(a, b)});
  std::set<std::pair<int, int>> from_dual;
  for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) {
    const auto [a, b] = D.edges[e].v;
    const bool bb = D.vertices[a].is_boundary && D.vertices[b].is_boundary;
    if (bb != D.edges[e].is_border) bad.push_back(e);
    if (bb) from_dual.insert({std::min(a, b), std::max(a, b)});
  }
  check.add("border_edges", bad, from_primal == from_dual ? "" : "boundary-boundary edges differ from borders");

  // qubit bijection: dual cell q sits on the cells/boundaries around primal vertex q
  bad.clear();
  for (int q = 0; q < std::min<int>(nv, D.cells.size()); ++q) {
    std::vector<int> cell(D.cells[q].v.begin(), D.cells[q].v.end());
    if (cell != around[q]) bad.push_back(q);
  }
  check.add("qubit_map", bad);
  return report;
}

}  // namespace chroma3d
