#ifndef CHROMA3D_IO_H_
#define CHROMA3D_IO_H_

#include <string>
#include <vector>

#include "chroma3d/code.h"
#include "chroma3d/decoder.h"
#include "chroma3d/lattice.h"
#include "json.hpp"

namespace chroma3d {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json lattice_json(const ColorLattice& lattice);
ColorLattice parse_lattice_json(const Json& j);  // throws FormatError
Json code_json(const CssCode& code);

Json node_json(const StageGraph& stage, int node);
Json matching_json(const StageGraph& stage, const Matching& m);
Json correction_json(const Correction& c);
// `traced` holds every path in path order, decoded with trace on; `selected` is the chosen index or -1.
Json trace_json(const Decoder& decoder, const std::vector<int>& cell_defects, const std::vector<Correction>& traced,
                int selected, const char* basis);

}  // namespace chroma3d

#endif  // CHROMA3D_IO_H_
