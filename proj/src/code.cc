#include "chroma3d/code.h"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace chroma3d {
namespace {

using Row = std::vector<std::uint64_t>;

Row pack(const QubitSet& s, int n) {
  Row row((n + 63) / 64, 0);
  for (int q : s) row[q / 64] ^= std::uint64_t{1} << (q % 64);
  return row;
}

int word_count(int n) { return (n + 63) / 64; }

// Row-reduces `rows` in place and returns the pivot column of each kept row.
std::vector<int> eliminate(std::vector<Row>& rows, int n) {
  std::vector<int> pivots;
  std::size_t next = 0;
  for (int col = 0; col < n && next < rows.size(); ++col) {
    const int w = col / 64;
    const std::uint64_t bit = std::uint64_t{1} << (col % 64);
    std::size_t pick = next;
    while (pick < rows.size() && !(rows[pick][w] & bit)) ++pick;
    if (pick == rows.size()) continue;
    std::swap(rows[pick], rows[next]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && (rows[r][w] & bit)) {
        for (int i = w; i < word_count(n); ++i) rows[r][i] ^= rows[next][i];
      }
    }
    pivots.push_back(col);
    ++next;
  }
  rows.resize(next);
  return pivots;
}

QubitSet qubits_around(const DualLattice& dual, int a, int b = -1) {
  QubitSet out;
  for (int q = 0; q < static_cast<int>(dual.cells.size()); ++q) {
    const auto& v = dual.cells[q].v;
    const bool has_a = std::find(v.begin(), v.end(), a) != v.end();
    const bool has_b = b < 0 || std::find(v.begin(), v.end(), b) != v.end();
    if (has_a && has_b) out.push_back(q);
  }
  return out;
}

QubitSet unpack(const Row& row, int n) {
  QubitSet out;
  for (int q = 0; q < n; ++q) {
    if (row[q / 64] >> (q % 64) & 1) out.push_back(q);
  }
  return out;
}

// Z operators orthogonal to every face and cell, one per logical qubit,
// pairing with logical_x. Unique up to products of cells. Empty when some
// logical X lies in the span of faces and cells (cubic lattices).
std::vector<QubitSet> bare_logicals(const CssCode& code) {
  const int n = code.n;
  const int words = word_count(n);
  std::vector<Row> rows;
  for (const auto& f : code.z_stabilizers) rows.push_back(pack(f, n));
  for (const auto& c : code.x_stabilizers) rows.push_back(pack(c, n));
  const auto pivots = eliminate(rows, n);
  std::vector<char> is_pivot(n, 0);
  for (int p : pivots) is_pivot[p] = 1;
  std::vector<Row> lx;
  for (const auto& x : code.logical_x) lx.push_back(pack(x, n));
  auto pattern = [&](const Row& v) {
    unsigned bits = 0;
    for (int l = 0; l < code.k; ++l) {
      int par = 0;
      for (int w = 0; w < words; ++w) par ^= __builtin_parityll(v[w] & lx[l][w]);
      bits |= static_cast<unsigned>(par) << l;
    }
    return bits;
  };
  // independent patterns with their vectors, reduced as they arrive
  std::vector<std::pair<unsigned, Row>> basis;
  for (int j = 0; j < n && static_cast<int>(basis.size()) < code.k; ++j) {
    if (is_pivot[j]) continue;
    Row v(words, 0);
    v[j / 64] |= std::uint64_t{1} << (j % 64);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if (rows[r][j / 64] >> (j % 64) & 1) v[pivots[r] / 64] ^= std::uint64_t{1} << (pivots[r] % 64);
    }
    unsigned pat = pattern(v);
    for (const auto& [bp, bv] : basis) {
      if (pat & (bp & -bp)) {
        pat ^= bp;
        for (int w = 0; w < words; ++w) v[w] ^= bv[w];
      }
    }
    if (pat == 0) continue;
    for (auto& [bp, bv] : basis) {
      if (bp & (pat & -pat)) {
        bp ^= pat;
        for (int w = 0; w < words; ++w) bv[w] ^= v[w];
      }
    }
    basis.emplace_back(pat, std::move(v));
  }
  if (static_cast<int>(basis.size()) != code.k) return {};
  std::vector<QubitSet> out(code.k);
  for (const auto& [bp, bv] : basis) {
    if (__builtin_popcount(bp) != 1) throw std::logic_error("bare logical reduction did not reach unit patterns");
    out[__builtin_ctz(bp)] = unpack(bv, n);
  }
  return out;
}

}  // namespace

int gf2_rank(const std::vector<QubitSet>& rows, int n) {
  std::vector<Row> packed;
  packed.reserve(rows.size());
  for (const auto& r : rows) packed.push_back(pack(r, n));
  return static_cast<int>(eliminate(packed, n).size());
}

bool gf2_in_span(const std::vector<QubitSet>& rows, const QubitSet& v, int n) {
  std::vector<Row> packed;
  for (const auto& r : rows) packed.push_back(pack(r, n));
  const auto pivots = eliminate(packed, n);
  Row target = pack(v, n);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const int col = pivots[i];
    if (target[col / 64] & (std::uint64_t{1} << (col % 64))) {
      for (int w = 0; w < word_count(n); ++w) target[w] ^= packed[i][w];
    }
  }
  return std::all_of(target.begin(), target.end(), [](std::uint64_t w) { return w == 0; });
}

QubitSet symmetric_difference(std::span<const int> a, std::span<const int> b) {
  QubitSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int overlap_parity(std::span<const int> a, std::span<const int> b) {
  int count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count % 2;
}

std::pair<std::vector<QubitSet>, std::vector<QubitSet>> logical_operators(const ColorLattice& lattice) {
  const auto& dual = lattice.dual;
  std::vector<int> boundaries = dual.boundary_vertices;
  std::vector<std::array<int, 2>> borders;
  for (int e = dual.num_bulk_edges; e < static_cast<int>(dual.edges.size()); ++e) borders.push_back(dual.edges[e].v);

  std::vector<QubitSet> lx, lz;
  std::vector<Color> logical_colors;
  if (lattice.family == Family::tetrahedral) {
    logical_colors.push_back(dual.vertices[boundaries.front()].color);
  } else {
    for (int b : boundaries) {
      const Color c = dual.vertices[b].color;
      if (std::find(logical_colors.begin(), logical_colors.end(), c) == logical_colors.end()) {
        logical_colors.push_back(c);
      }
    }
  }
  for (Color c : logical_colors) {
    for (int b : boundaries) {
      if (dual.vertices[b].color == c) {
        lx.push_back(qubits_around(dual, b));
        break;
      }
    }
  }
  for (std::size_t i = 0; i < logical_colors.size(); ++i) {
    bool found = false;
    for (const auto& br : borders) {
      if (lattice.family == Family::cubic &&
          (dual.vertices[br[0]].color == logical_colors[i] || dual.vertices[br[1]].color == logical_colors[i])) {
        continue;
      }
      QubitSet z = qubits_around(dual, br[0], br[1]);
      bool pairs = true;
      for (std::size_t j = 0; j < lx.size(); ++j) {
        if (overlap_parity(z, lx[j]) != (i == j ? 1 : 0)) pairs = false;
      }
      if (pairs) {
        lz.push_back(std::move(z));
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("no border pairs with the chosen logical X boundary");
  }
  return {lx, lz};
}

CssCode extract_code(const ColorLattice& lattice) {
  const auto& dual = lattice.dual;
  CssCode code;
  code.n = lattice.num_qubits();
  code.x_stabilizers.resize(dual.num_bulk_vertices);
  code.z_stabilizers.resize(dual.num_bulk_edges);
  code.x_of_qubit.resize(code.n);
  code.z_of_qubit.resize(code.n);

  std::unordered_map<std::uint64_t, int> edge_id;
  auto key = [](int a, int b) { return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b); };
  for (int e = 0; e < dual.num_bulk_edges; ++e) {
    edge_id[key(dual.edges[e].v[0], dual.edges[e].v[1])] = e;
    std::array<int, 2> ends{};
    for (int i = 0; i < 2; ++i) {
      const int v = dual.edges[e].v[i];
      ends[i] = dual.vertices[v].is_boundary ? -1 : v;
    }
    code.z_ends.push_back(ends);
  }
  for (int q = 0; q < code.n; ++q) {
    const auto& v = dual.cells[q].v;
    for (int i = 0; i < 4; ++i) {
      if (!dual.vertices[v[i]].is_boundary) {
        code.x_stabilizers[v[i]].push_back(q);
        code.x_of_qubit[q].push_back(v[i]);
      }
      for (int j = i + 1; j < 4; ++j) {
        auto it = edge_id.find(key(v[i], v[j]));
        if (it == edge_id.end()) continue;
        code.z_stabilizers[it->second].push_back(q);
        code.z_of_qubit[q].push_back(it->second);
      }
    }
  }
  for (auto& z : code.z_of_qubit) std::sort(z.begin(), z.end());

  std::unordered_map<std::uint64_t, int> overlap;
  for (int q = 0; q < code.n; ++q) {
    for (int x : code.x_of_qubit[q]) {
      for (int z : code.z_of_qubit[q]) ++overlap[(static_cast<std::uint64_t>(x) << 32) | z];
    }
  }
  for (const auto& [k, count] : overlap) {
    if (count % 2 != 0) {
      throw std::logic_error("stabilizers anticommute: cell " + std::to_string(k >> 32) + " face " +
                             std::to_string(k & 0xffffffffu));
    }
  }

  code.rank_x = gf2_rank(code.x_stabilizers, code.n);
  code.rank_z = gf2_rank(code.z_stabilizers, code.n);
  code.k = code.n - code.rank_x - code.rank_z;
  std::tie(code.logical_x, code.logical_z) = logical_operators(lattice);
  if (static_cast<int>(code.logical_x.size()) != code.k) {
    throw std::logic_error("logical operator count differs from n - rank(X) - rank(Z)");
  }
  code.bare_z = bare_logicals(code);
  if (code.bare_z.empty()) code.bare_z = code.logical_z;
  return code;
}

std::vector<int> z_syndrome(const CssCode& code, std::span<const int> z_support) {
  std::vector<char> flip(code.x_stabilizers.size(), 0);
  for (int q : z_support) {
    for (int x : code.x_of_qubit[q]) flip[x] ^= 1;
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(flip.size()); ++v) {
    if (flip[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> x_syndrome(const CssCode& code, std::span<const int> x_support) {
  std::vector<char> flip(code.z_stabilizers.size(), 0);
  for (int q : x_support) {
    for (int z : code.z_of_qubit[q]) flip[z] ^= 1;
  }
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(flip.size()); ++e) {
    if (flip[e]) out.push_back(e);
  }
  return out;
}

Syndrome syndrome_of(const CssCode& code, const PauliFrame& frame) {
  return {z_syndrome(code, frame.z_support), x_syndrome(code, frame.x_support)};
}

std::vector<int> merge_face_to_cell(const CssCode& code, std::span<const int> face_defects) {
  std::vector<char> flip(code.x_stabilizers.size(), 0);
  for (int e : face_defects) {
    for (int v : code.z_ends[e]) {
      if (v >= 0) flip[v] ^= 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(flip.size()); ++v) {
    if (flip[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> merge_face_to_cell(const ColorLattice& lattice, std::span<const int> face_defects) {
  const auto& dual = lattice.dual;
  std::vector<char> flip(dual.num_bulk_vertices, 0);
  for (int e : face_defects) {
    for (int v : dual.edges[e].v) {
      if (!dual.vertices[v].is_boundary) flip[v] ^= 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < dual.num_bulk_vertices; ++v) {
    if (flip[v]) out.push_back(v);
  }
  return out;
}

std::vector<bool> logical_outcome(const CssCode& code, const PauliFrame& frame, const PauliFrame& correction) {
  const QubitSet rz = symmetric_difference(frame.z_support, correction.z_support);
  const QubitSet rx = symmetric_difference(frame.x_support, correction.x_support);
  if (!z_syndrome(code, rz).empty()) {
    throw std::logic_error("residual Z error still violates cell stabilizers");
  }
  if (!merge_face_to_cell(code, x_syndrome(code, rx)).empty()) {
    throw std::logic_error("residual X error still violates merged cell syndromes");
  }
  std::vector<bool> fail(code.k, false);
  for (int i = 0; i < code.k; ++i) {
    fail[i] = overlap_parity(rz, code.logical_x[i]) != 0 || overlap_parity(rx, code.bare_z[i]) != 0;
  }
  return fail;
}

PauliFrame parse_frame(std::istream& in, int n) {
  PauliFrame frame;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string op;
    if (!(ss >> op)) continue;
    long long q = -1;
    std::string extra;
    if ((op != "Z" && op != "X") || !(ss >> q) || (ss >> extra)) {
      throw FrameError("line " + std::to_string(lineno) + ": expected 'Z <qubit>' or 'X <qubit>'");
    }
    if (q < 0 || q >= n) {
      throw FrameError("line " + std::to_string(lineno) + ": qubit " + std::to_string(q) + " outside [0, " +
                       std::to_string(n) + ")");
    }
    auto& support = op == "Z" ? frame.z_support : frame.x_support;
    support = symmetric_difference(support, std::vector<int>{static_cast<int>(q)});
  }
  return frame;
}

std::string format_frame(const PauliFrame& frame) {
  std::string out;
  for (int q : frame.z_support) out += "Z " + std::to_string(q) + "\n";
  for (int q : frame.x_support) out += "X " + std::to_string(q) + "\n";
  return out;
}

}  // namespace chroma3d
