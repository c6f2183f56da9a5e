#ifndef CHROMA3D_DECODER_H_
#define CHROMA3D_DECODER_H_

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chroma3d/code.h"
#include "chroma3d/lattice.h"
#include "chroma3d/matching.h"

namespace chroma3d {

// Restricted pair {c, d} (c before d alphabetically), then first and second color.
struct DecodingPath {
  Color c;
  Color d;
  Color e;
  Color f;
  bool operator==(const DecodingPath&) const = default;
};

// The 12 paths in selection order: restricted pair alphabetical, then first color.
const std::array<DecodingPath, 12>& all_paths();
int path_index(const DecodingPath& path);
std::string to_string(const DecodingPath& path);  // "bg,y,r"
std::optional<DecodingPath> parse_path(std::string_view s);
DecodingPath default_single_path(Family family);

enum class NodeKind : std::uint8_t { vertex, edge, face, outer };

struct NodeRef {
  NodeKind kind;
  int id;  // dual vertex / dual edge / dual face id
};

// One matching stage: the graph plus what each node stands for in the dual.
struct StageGraph {
  WeightedGraph graph;
  std::vector<NodeRef> nodes;
  std::vector<int> vertex_node;  // dual vertex -> node or -1
  std::vector<int> edge_node;    // dual edge -> node or -1
  std::vector<int> face_node;    // dual face -> node or -1
};

StageGraph build_restricted(const DualLattice& dual, Color c, Color d);
StageGraph build_mono1(const DualLattice& dual, const StageGraph& restricted, Color e);
StageGraph build_mono2(const DualLattice& dual, const StageGraph& mono1, Color f);

struct Correction {
  QubitSet qubits;
  DecodingPath path{};
  bool failed = false;
  std::string failure;
  int weight() const { return static_cast<int>(qubits.size()); }
  // filled only when tracing
  std::array<std::vector<int>, 3> marked;
  std::array<Matching, 3> stages;
};

struct DecodeMode {
  bool all_paths = true;
  DecodingPath path{};
  static DecodeMode all() { return {}; }
  static DecodeMode single(DecodingPath p) { return {false, p}; }
};

class DecoderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Holds the restricted and monochrome graphs of all 12 paths for one lattice.
class Decoder {
 public:
  explicit Decoder(std::shared_ptr<const ColorLattice> lattice);

  const ColorLattice& lattice() const { return *lattice_; }
  const StageGraph& restricted(const DecodingPath& p) const;
  const StageGraph& mono1(const DecodingPath& p) const;
  const StageGraph& mono2(const DecodingPath& p) const;

  Correction decode_path(std::span<const int> cell_defects, const DecodingPath& path, bool trace = false) const;
  Correction decode(std::span<const int> cell_defects, const DecodeMode& mode) const;
  Correction decode_x(std::span<const int> face_defects, const DecodeMode& mode) const;
  // Every path's correction, in path order.
  std::vector<Correction> decode_each(std::span<const int> cell_defects, bool trace) const;
  // Index of the lowest-weight non-failed correction.
  static int select(const std::vector<Correction>& corrections);

 private:
  std::shared_ptr<const ColorLattice> lattice_;
  CssCode code_;
  std::array<StageGraph, 6> restricted_;
  std::array<StageGraph, 12> mono1_;
  std::array<StageGraph, 12> mono2_;
};

}  // namespace chroma3d

#endif  // CHROMA3D_DECODER_H_
