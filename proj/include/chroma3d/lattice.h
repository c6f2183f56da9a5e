#ifndef CHROMA3D_LATTICE_H_
#define CHROMA3D_LATTICE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chroma3d {

enum class Color : std::uint8_t { r = 0, g = 1, b = 2, y = 3 };

inline constexpr std::array<Color, 4> kColors = {Color::r, Color::g, Color::b, Color::y};

char color_char(Color c);
std::optional<Color> parse_color(char ch);

// Unordered pair of distinct colors. `lo` sorts before `hi` alphabetically.
struct MixedColor {
  Color lo;
  Color hi;
  bool operator==(const MixedColor&) const = default;
};

MixedColor mix(Color a, Color b);
std::string to_string(MixedColor m);
std::optional<MixedColor> parse_mixed(std::string_view s);
bool contains(MixedColor m, Color c);
// Colors ordered alphabetically by their letter: b, g, r, y.
bool color_less(Color a, Color b);

enum class Family : std::uint8_t { tetrahedral, cubic };

std::string_view family_name(Family f);
std::optional<Family> parse_family(std::string_view s);

using Int3 = std::array<std::int64_t, 3>;

struct PrimalLattice {
  struct Vertex {
    Int3 xyz;
    bool is_corner = false;
  };
  struct Edge {
    std::array<int, 2> v;
    Color color;
  };
  struct Face {
    std::vector<int> verts;  // cyclic order around the face
    MixedColor color;
  };
  struct Cell {
    std::vector<int> verts;  // ascending
    Color color;
  };
  struct Boundary {
    Color color;
    std::vector<int> faces;
  };
  struct Border {
    MixedColor color;
    std::vector<int> edges;
  };

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<Cell> cells;
  std::vector<Boundary> boundaries;
  std::vector<Border> borders;
  std::vector<int> corner_vertices;
};

// Dual complex. Bulk vertices (primal cells) come first, boundary vertices
// follow; likewise bulk edges (primal faces) precede border edges. Dual faces
// are indexed like primal edges and dual cells like primal vertices.
struct DualLattice {
  struct Vertex {
    Int3 xyz;
    Color color;
    bool is_boundary = false;
  };
  struct Edge {
    std::array<int, 2> v;
    MixedColor color;
    bool is_border = false;
  };
  struct Face {
    std::array<int, 3> v;
    Color color;  // the color absent from its three vertices
  };
  struct Cell {
    std::array<int, 4> v;  // ascending
  };

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<Cell> cells;
  std::vector<int> boundary_vertices;
  int num_bulk_vertices = 0;
  int num_bulk_edges = 0;
};

// Qubit q is primal vertex q and dual cell q.
struct ColorLattice {
  Family family;
  int distance;
  bool correctable;
  PrimalLattice primal;
  DualLattice dual;

  int num_qubits() const { return static_cast<int>(primal.vertices.size()); }
  int primal_vertex_of(int qubit) const { return qubit; }
  int dual_cell_of(int qubit) const { return qubit; }
};

// Every coordinate in lattice.v1 is this many units per lattice step.
inline constexpr int kCoordScale = 8;

class StructureError : public std::runtime_error {
 public:
  StructureError(const std::string& what, std::vector<int> offenders)
      : std::runtime_error(what), offenders_(std::move(offenders)) {}
  const std::vector<int>& offenders() const { return offenders_; }

 private:
  std::vector<int> offenders_;
};

ColorLattice build_tetrahedral(int d);
ColorLattice build_cubic(int d);
ColorLattice build_lattice(Family family, int d);
DualLattice dualize(const PrimalLattice& primal);

struct FamilyCounts {
  int n;
  int faces;  // independent Z generators
  int cells;  // independent X generators
};

FamilyCounts family_counts(Family family, int d);
void check_distance(Family family, int d);

struct ValidationCheck {
  std::string name;
  bool pass = true;
  std::vector<int> offenders;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(std::string_view name) const;
};

ValidationReport validate(const ColorLattice& lattice);

}  // namespace chroma3d

#endif  // CHROMA3D_LATTICE_H_
