#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "chroma3d/lattice.h"

namespace chroma3d {
namespace {

// Simplicial complex the dual lattice is read off from: sites become dual
// vertices and tetrahedra become qubits.
struct Seed {
  struct Site {
    Int3 pos;
    Color color;
    bool boundary = false;
  };
  std::vector<Site> sites;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<Int3, 4>> corners;  // geometric position of each tet corner
};

Int3 operator+(const Int3& a, const Int3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

Int3 unit(int axis, std::int64_t s) {
  Int3 u{0, 0, 0};
  u[axis] = s;
  return u;
}

// Body-centered lattice in doubled coordinates clipped by four planes, each
// plane collapsing into one boundary site.
Seed tetrahedral_seed(int d) {
  constexpr std::array<Int3, 4> kNormals = {
      Int3{1, 1, 1}, Int3{1, -1, -1}, Int3{-1, 1, -1}, Int3{-1, -1, 1}};
  const int k = (d - 1) / 2;
  std::array<std::int64_t, 4> a{};
  for (int i = 0; i < 4; ++i) {
    a[i] = i + 4 * ((k + 3 - i) / 4);
  }
  auto dot = [](const Int3& n, const Int3& p) { return n[0] * p[0] + n[1] * p[1] + n[2] * p[2]; };
  auto inside = [&](const Int3& p) {
    for (int i = 0; i < 4; ++i) {
      if (dot(kNormals[i], p) > a[i]) return false;
    }
    return true;
  };

  Seed seed;
  for (int i = 0; i < 4; ++i) {
    seed.sites.push_back({Int3{0, 0, 0}, kColors[i], true});
  }
  std::map<Int3, int> site_of;
  auto label = [&](const Int3& p) {
    for (int i = 0; i < 4; ++i) {
      if (dot(kNormals[i], p) == a[i]) return i;
    }
    auto [it, fresh] = site_of.try_emplace(p, static_cast<int>(seed.sites.size()));
    if (fresh) {
      auto residue = ((p[0] + p[1] + p[2]) % 4 + 4) % 4;
      seed.sites.push_back({p, kColors[residue], false});
    }
    return it->second;
  };

  const std::int64_t reach = a[0] + a[1] + a[2] + a[3];
  const Int3 lo{-reach, -reach, -reach};
  const Int3 hi{reach, reach, reach};

  for (auto x = lo[0]; x <= hi[0]; ++x) {
    if (x % 2 != 0) continue;
    for (auto y = lo[1]; y <= hi[1]; ++y) {
      if (y % 2 != 0) continue;
      for (auto z = lo[2]; z <= hi[2]; ++z) {
        if (z % 2 != 0) continue;
        const Int3 p{x, y, z};
        if (!inside(p)) continue;
        for (int ax = 0; ax < 3; ++ax) {
          const Int3 q = p + unit(ax, 2);
          if (!inside(q)) continue;
          for (int bx = 0; bx < 3; ++bx) {
            if (bx == ax) continue;
            const int cx = 3 - ax - bx;
            for (int s : {-1, 1}) {
              const Int3 m = p + unit(ax, 1) + unit(cx, s);
              const Int3 o1 = m + unit(bx, 1);
              const Int3 o2 = m + unit(bx, -1);
              if (!inside(o1) || !inside(o2)) continue;
              std::array<Int3, 4> pts = {p, q, o1, o2};
              std::array<int, 4> ids{};
              bool all_boundary = true;
              for (int t = 0; t < 4; ++t) {
                ids[t] = label(pts[t]);
                all_boundary = all_boundary && seed.sites[ids[t]].boundary;
              }
              if (all_boundary) continue;
              seed.tets.push_back(ids);
              seed.corners.push_back(pts);
            }
          }
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    seed.sites[i].pos = Int3{kNormals[i][0] * a[i], kNormals[i][1] * a[i], kNormals[i][2] * a[i]};
  }
  return seed;
}

// Cubic code: a (d-1)^3 grid with diagonal bonds on odd-parity points, capped
// by face nodes, and six boundary sites glued on top.
Seed cubic_seed(int d) {
  const std::int64_t m = d - 2;
  std::vector<Int3> pts;
  for (std::int64_t z = 0; z <= m; ++z) {
    for (std::int64_t y = 0; y <= m; ++y) {
      for (std::int64_t x = 0; x <= m; ++x) {
        pts.push_back({x, y, z});
      }
    }
  }
  std::set<Int3> face_nodes;
  for (int ax = 0; ax < 3; ++ax) {
    for (std::int64_t out : {std::int64_t{-1}, m + 1}) {
      const int u = (ax + 1) % 3, w = (ax + 2) % 3;
      for (std::int64_t s = 1; s < m; s += 2) {
        for (std::int64_t t = 1; t < m; t += 2) {
          Int3 p{};
          p[ax] = out;
          p[u] = s;
          p[w] = t;
          face_nodes.insert(p);
        }
      }
    }
  }
  pts.insert(pts.end(), face_nodes.begin(), face_nodes.end());

  // classes of the four-coloring by axis of the boundary that lacks them
  auto color_of = [](const Int3& p) {
    const std::int64_t q[3] = {p[0] + 1, p[1], p[2]};
    const std::int64_t s = ((q[0] + q[1] + q[2]) % 2 + 2) % 2;
    const int cls = static_cast<int>(((q[0] + s) % 2 + 2) % 2) * 4 +
                    static_cast<int>(((q[1] + s) % 2 + 2) % 2) * 2 +
                    static_cast<int>(((q[2] + s) % 2 + 2) % 2);
    switch (cls) {
      case 0b000:
        return Color::r;
      case 0b110:
        return Color::b;
      case 0b101:
        return Color::y;
      default:
        return Color::g;
    }
  };
  constexpr std::array<Color, 3> kBoundaryColor = {Color::r, Color::b, Color::y};

  Seed seed;
  for (const auto& p : pts) {
    seed.sites.push_back({p, color_of(p), false});
  }
  const int num_points = static_cast<int>(seed.sites.size());
  for (int ax = 0; ax < 3; ++ax) {
    for (int side = 0; side < 2; ++side) {
      Int3 c{m, m, m};
      c[ax] = side == 0 ? -2 * m - 2 : 4 * m + 2;
      seed.sites.push_back({c, kBoundaryColor[ax], true});
    }
  }
  auto boundary_site = [&](int ax, int side) { return num_points + 2 * ax + side; };
  const int total = static_cast<int>(seed.sites.size());
  std::vector<std::vector<char>> adj(total, std::vector<char>(total, 0));
  auto link = [&](int u, int v) { adj[u][v] = adj[v][u] = 1; };

  for (int i = 0; i < num_points; ++i) {
    for (int j = i + 1; j < num_points; ++j) {
      const Int3& p = seed.sites[i].pos;
      const Int3& q = seed.sites[j].pos;
      int ones = 0, zeros = 0;
      for (int ax = 0; ax < 3; ++ax) {
        const auto diff = std::abs(p[ax] - q[ax]);
        if (diff == 1) ++ones;
        if (diff == 0) ++zeros;
      }
      const bool odd_site = ((p[0] + p[1] + p[2]) % 2 + 2) % 2 == 1;
      if ((ones == 1 && zeros == 2) || (ones == 2 && zeros == 1 && odd_site)) link(i, j);
    }
  }
  for (int ax = 0; ax < 3; ++ax) {
    for (int side = 0; side < 2; ++side) {
      const int bsite = boundary_site(ax, side);
      const std::int64_t face_value = side == 0 ? 0 : m;
      const std::int64_t out_value = side == 0 ? -1 : m + 1;
      for (int i = 0; i < num_points; ++i) {
        Int3 p = seed.sites[i].pos;
        if (p[ax] == out_value) {
          link(i, bsite);
          continue;
        }
        if (p[ax] != face_value || face_nodes.count(p) != 0) continue;
        bool grid = true;
        for (int t = 0; t < 3; ++t) grid = grid && p[t] >= 0 && p[t] <= m;
        if (!grid) continue;
        p[ax] = out_value;
        if (face_nodes.count(p) == 0) link(i, bsite);
      }
    }
  }
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      if (a / 2 != b / 2) link(num_points + a, num_points + b);
    }
  }

  std::vector<std::vector<int>> nbrs(total);
  for (int u = 0; u < total; ++u) {
    for (int v = u + 1; v < total; ++v) {
      if (adj[u][v]) nbrs[u].push_back(v);
    }
  }
  for (int a = 0; a < total; ++a) {
    for (int b : nbrs[a]) {
      for (int c : nbrs[b]) {
        if (!adj[a][c]) continue;
        for (int e : nbrs[c]) {
          if (!adj[a][e] || !adj[b][e]) continue;
          std::array<int, 4> t = {a, b, c, e};
          if (std::all_of(t.begin(), t.end(), [&](int s) { return seed.sites[s].boundary; })) continue;
          seed.tets.push_back(t);
        }
      }
    }
  }

  // boundary corners sit one step outside the tet's extreme bulk point
  for (const auto& t : seed.tets) {
    std::array<Int3, 4> corner{};
    for (int i = 0; i < 4; ++i) {
      const int s = t[i];
      if (!seed.sites[s].boundary) {
        corner[i] = seed.sites[s].pos;
        continue;
      }
      const int ax = (s - num_points) / 2;
      const int side = (s - num_points) % 2;
      bool have = false;
      Int3 best{};
      for (int j = 0; j < 4; ++j) {
        if (seed.sites[t[j]].boundary) continue;
        const Int3& p = seed.sites[t[j]].pos;
        if (!have || (side == 0 ? p[ax] < best[ax] : p[ax] > best[ax])) best = p;
        have = true;
      }
      best[ax] += side == 0 ? -1 : 1;
      corner[i] = best;
    }
    seed.corners.push_back(corner);
  }
  return seed;
}

using Tri = std::array<int, 3>;
using Pair = std::array<int, 2>;

ColorLattice assemble(Family family, int d, Seed seed) {
  const int num_sites = static_cast<int>(seed.sites.size());
  std::vector<int> order(num_sites);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& sa = seed.sites[a];
    const auto& sb = seed.sites[b];
    if (sa.boundary != sb.boundary) return !sa.boundary;
    if (sa.boundary) return a < b;
    return std::tie(sa.pos[2], sa.pos[1], sa.pos[0]) < std::tie(sb.pos[2], sb.pos[1], sb.pos[0]);
  });
  std::vector<int> rank(num_sites);
  for (int i = 0; i < num_sites; ++i) rank[order[i]] = i;

  struct Tet {
    std::array<int, 4> v;
    std::array<Int3, 4> corners;
  };
  std::vector<Tet> tets;
  for (std::size_t t = 0; t < seed.tets.size(); ++t) {
    std::array<std::pair<int, Int3>, 4> vc;
    for (int i = 0; i < 4; ++i) vc[i] = {rank[seed.tets[t][i]], seed.corners[t][i]};
    std::sort(vc.begin(), vc.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Tet tet;
    for (int i = 0; i < 4; ++i) {
      tet.v[i] = vc[i].first;
      tet.corners[i] = vc[i].second;
    }
    tets.push_back(tet);
  }
  std::sort(tets.begin(), tets.end(), [](const Tet& a, const Tet& b) { return a.v < b.v; });
  tets.erase(std::unique(tets.begin(), tets.end(), [](const Tet& a, const Tet& b) { return a.v == b.v; }),
             tets.end());

  std::vector<Seed::Site> sites(num_sites);
  for (int i = 0; i < num_sites; ++i) sites[i] = seed.sites[order[i]];
  auto is_b = [&](int s) { return sites[s].boundary; };
  const int num_bulk = static_cast<int>(
      std::count_if(sites.begin(), sites.end(), [](const Seed::Site& s) { return !s.boundary; }));

  std::map<Pair, std::vector<int>> pair_tets;
  std::map<Tri, std::vector<int>> tri_tets;
  std::vector<std::vector<int>> site_tets(num_sites);
  for (int t = 0; t < static_cast<int>(tets.size()); ++t) {
    const auto& v = tets[t].v;
    for (int i = 0; i < 4; ++i) {
      site_tets[v[i]].push_back(t);
      for (int j = i + 1; j < 4; ++j) {
        pair_tets[{v[i], v[j]}].push_back(t);
        for (int k = j + 1; k < 4; ++k) tri_tets[{v[i], v[j], v[k]}].push_back(t);
      }
    }
  }

  ColorLattice lat{family, d, !(family == Family::cubic && d == 2), {}, {}};
  PrimalLattice& primal = lat.primal;

  for (const auto& tet : tets) {
    Int3 sum{0, 0, 0};
    int nb = 0;
    for (int i = 0; i < 4; ++i) {
      sum = sum + tet.corners[i];
      nb += is_b(tet.v[i]) ? 1 : 0;
    }
    primal.vertices.push_back({Int3{2 * sum[0], 2 * sum[1], 2 * sum[2]}, nb == 3});
  }
  for (int v = 0; v < static_cast<int>(primal.vertices.size()); ++v) {
    if (primal.vertices[v].is_corner) primal.corner_vertices.push_back(v);
  }

  std::map<Tri, int> edge_of_tri;
  for (const auto& [tri, ts] : tri_tets) {
    if (is_b(tri[0]) && is_b(tri[1]) && is_b(tri[2])) continue;
    if (ts.size() != 2) {
      throw StructureError("triangle not shared by exactly two tetrahedra", {tri[0], tri[1], tri[2]});
    }
    Color missing = Color::r;
    for (Color c : kColors) {
      if (c != sites[tri[0]].color && c != sites[tri[1]].color && c != sites[tri[2]].color) missing = c;
    }
    edge_of_tri[tri] = static_cast<int>(primal.edges.size());
    primal.edges.push_back({{ts[0], ts[1]}, missing});
  }

  std::map<Pair, int> face_of_pair;
  for (const auto& [pr, ts] : pair_tets) {
    if (is_b(pr[0]) && is_b(pr[1])) continue;
    // walk the ring of tets around the dual edge
    std::map<int, std::vector<int>> ring;
    for (int t : ts) {
      for (int x : tets[t].v) {
        if (x == pr[0] || x == pr[1]) continue;
        Tri tri = {pr[0], pr[1], x};
        std::sort(tri.begin(), tri.end());
        for (int u : tri_tets[tri]) {
          if (u != t) ring[t].push_back(u);
        }
      }
    }
    std::vector<int> cyc;
    int prev = -1, cur = ts.front();
    while (cyc.size() < ts.size()) {
      cyc.push_back(cur);
      auto nexts = ring[cur];
      std::sort(nexts.begin(), nexts.end());
      int next = -1;
      for (int u : nexts) {
        if (u != prev && std::find(cyc.begin(), cyc.end(), u) == cyc.end()) {
          next = u;
          break;
        }
      }
      if (next < 0) break;
      prev = cur;
      cur = next;
    }
    if (cyc.size() != ts.size()) cyc = ts;
    face_of_pair[pr] = static_cast<int>(primal.faces.size());
    primal.faces.push_back({cyc, mix(sites[pr[0]].color, sites[pr[1]].color)});
  }

  for (int s = 0; s < num_bulk; ++s) {
    primal.cells.push_back({site_tets[s], sites[s].color});
  }
  for (int s = num_bulk; s < num_sites; ++s) {
    PrimalLattice::Boundary bd{sites[s].color, {}};
    for (const auto& [pr, f] : face_of_pair) {
      if (pr[0] == s || pr[1] == s) bd.faces.push_back(f);
    }
    std::sort(bd.faces.begin(), bd.faces.end());
    primal.boundaries.push_back(bd);
  }
  for (const auto& [pr, ts] : pair_tets) {
    if (!(is_b(pr[0]) && is_b(pr[1]))) continue;
    PrimalLattice::Border br{mix(sites[pr[0]].color, sites[pr[1]].color), {}};
    for (const auto& [tri, e] : edge_of_tri) {
      int hits = 0;
      for (int x : tri) hits += (x == pr[0] || x == pr[1]) ? 1 : 0;
      if (hits == 2) br.edges.push_back(e);
    }
    std::sort(br.edges.begin(), br.edges.end());
    primal.borders.push_back(br);
  }

  lat.dual = dualize(primal);
  return lat;
}

}  // namespace

void check_distance(Family family, int d) {
  if (family == Family::tetrahedral && (d < 3 || d % 2 == 0)) {
    throw std::domain_error("tetrahedral distance must be odd and >= 3, got " + std::to_string(d));
  }
  if (family == Family::cubic && (d < 2 || d % 2 != 0)) {
    throw std::domain_error("cubic distance must be even and >= 2, got " + std::to_string(d));
  }
}

ColorLattice build_tetrahedral(int d) {
  check_distance(Family::tetrahedral, d);
  return assemble(Family::tetrahedral, d, tetrahedral_seed(d));
}

ColorLattice build_cubic(int d) {
  check_distance(Family::cubic, d);
  return assemble(Family::cubic, d, cubic_seed(d));
}

ColorLattice build_lattice(Family family, int d) {
  return family == Family::tetrahedral ? build_tetrahedral(d) : build_cubic(d);
}

FamilyCounts family_counts(Family family, int d) {
  check_distance(family, d);
  const long long x = d;
  if (family == Family::tetrahedral) {
    return {static_cast<int>((x * x * x + x) / 2),
            static_cast<int>((5 * x * x * x - 3 * x * x + 7 * x - 9) / 12),
            static_cast<int>((x * x * x + 3 * x * x - x - 3) / 12)};
  }
  return {static_cast<int>(5 * x * x * x - 12 * x * x + 16),
          static_cast<int>((8 * x * x * x - 21 * x * x + 6 * x + 16) / 2),
          static_cast<int>((2 * x * x * x - 3 * x * x - 6 * x + 10) / 2)};
}

}  // namespace chroma3d
