#ifndef CHROMA3D_SERVICE_H_
#define CHROMA3D_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "chroma3d/code.h"
#include "chroma3d/decoder.h"
#include "chroma3d/io.h"
#include "chroma3d/sampling.h"

namespace httplib {
class Server;
}

namespace chroma3d {

inline constexpr int kServiceMaxTetrahedral = 9;
inline constexpr int kServiceMaxCubic = 8;

struct LatticeEntry {
  std::shared_ptr<const ColorLattice> lattice;
  CssCode code;
  std::unique_ptr<Decoder> decoder;
  std::string lattice_body;
  std::string code_body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

// Stateless apart from the lattice cache; safe to call from many threads.
class Service {
 public:
  std::shared_ptr<const LatticeEntry> entry(Family family, int d);

  ApiResponse paths() const;
  ApiResponse lattice(const std::string& family, const std::string& d);
  ApiResponse code(const std::string& family, const std::string& d);
  ApiResponse decode(const std::string& request_body);

  // Registers every route plus CORS handling for localhost origins.
  void mount(httplib::Server& server);

 private:
  std::mutex mu_;
  std::map<std::pair<Family, int>, std::shared_ptr<const LatticeEntry>> cache_;
};

bool is_local_origin(const std::string& origin);

// Blocks until the server stops.
int run_server(const std::string& host, int port);

}  // namespace chroma3d

#endif  // CHROMA3D_SERVICE_H_
