#ifndef CHROMA3D_CODE_H_
#define CHROMA3D_CODE_H_

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chroma3d/lattice.h"

namespace chroma3d {

using QubitSet = std::vector<int>;  // ascending, no duplicates

// x_stabilizers[v] lives on bulk dual vertex v, z_stabilizers[e] on bulk dual edge e.
struct CssCode {
  int n = 0;
  int k = 0;
  std::vector<QubitSet> x_stabilizers;
  std::vector<QubitSet> z_stabilizers;
  std::vector<QubitSet> logical_x;
  std::vector<QubitSet> logical_z;
  // Z logicals that also commute with every face-shaped X operator; X-noise
  // runs are read out against these since merged decoding leaves face
  // syndromes. Equal to logical_z where no such operators exist.
  std::vector<QubitSet> bare_z;
  int rank_x = 0;
  int rank_z = 0;
  std::vector<std::vector<int>> x_of_qubit;  // x stabilizers touching each qubit
  std::vector<std::vector<int>> z_of_qubit;
  std::vector<std::array<int, 2>> z_ends;  // bulk dual endpoints of each face stabilizer, -1 on a boundary
};

struct PauliFrame {
  QubitSet z_support;
  QubitSet x_support;
};

struct Syndrome {
  std::vector<int> cell_defects;  // bulk dual vertex ids
  std::vector<int> face_defects;  // bulk dual edge ids
};

int gf2_rank(const std::vector<QubitSet>& rows, int n);
// True when `v` is a GF(2) combination of `rows`.
bool gf2_in_span(const std::vector<QubitSet>& rows, const QubitSet& v, int n);

CssCode extract_code(const ColorLattice& lattice);
std::pair<std::vector<QubitSet>, std::vector<QubitSet>> logical_operators(const ColorLattice& lattice);

Syndrome syndrome_of(const CssCode& code, const PauliFrame& frame);
std::vector<int> z_syndrome(const CssCode& code, std::span<const int> z_support);
std::vector<int> x_syndrome(const CssCode& code, std::span<const int> x_support);
std::vector<int> merge_face_to_cell(const ColorLattice& lattice, std::span<const int> face_defects);

// Per logical qubit: true when the residual flips it. Throws std::logic_error
// if the residual still carries a (cell-level) syndrome.
std::vector<bool> logical_outcome(const CssCode& code, const PauliFrame& frame, const PauliFrame& correction);
std::vector<int> merge_face_to_cell(const CssCode& code, std::span<const int> face_defects);

QubitSet symmetric_difference(std::span<const int> a, std::span<const int> b);
int overlap_parity(std::span<const int> a, std::span<const int> b);

// Text format: one "Z q" or "X q" per line, '#' starts a comment.
PauliFrame parse_frame(std::istream& in, int n);
std::string format_frame(const PauliFrame& frame);

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chroma3d

#endif  // CHROMA3D_CODE_H_
