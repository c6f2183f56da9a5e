#include "chroma3d/service.h"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <random>

#include "httplib.h"

namespace chroma3d {
namespace {

class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string& msg) : std::runtime_error(msg), status(status) {}
  int status;
};

ApiResponse error_response(int status, const std::string& msg) { return {status, Json{{"error", msg}}}; }

std::string new_trace_id() {
  static std::mutex mu;
  static std::random_device rd;
  static std::mt19937_64 rng((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
  std::lock_guard<std::mutex> lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

ApiResponse internal_error(const std::string& msg) {
  const std::string id = new_trace_id();
  std::cerr << "trace " << id << ": " << msg << "\n";
  return {500, Json{{"error", "decoder failure"}, {"detail", msg}, {"trace_id", id}}};
}

Family family_arg(const std::string& s) {
  auto f = parse_family(s);
  if (!f) throw ApiError(400, "family must be 'tetrahedral' or 'cubic'");
  return *f;
}

int distance_arg(const std::string& s) {
  int d = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, d);
  if (s.empty() || ec != std::errc() || ptr != end) throw ApiError(400, "d must be an integer");
  return d;
}

QubitSet qubit_list(const Json& j, int n) {
  if (!j.is_array()) throw ApiError(400, "errors must be an array of qubit ids");
  QubitSet q;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ApiError(400, "qubit ids must be integers");
    const auto id = v.get<long long>();
    if (id < 0 || id >= n) throw ApiError(400, "qubit id " + std::to_string(id) + " out of range [0, " + std::to_string(n) + ")");
    q.push_back(static_cast<int>(id));
  }
  std::sort(q.begin(), q.end());
  if (std::adjacent_find(q.begin(), q.end()) != q.end()) throw ApiError(400, "duplicate qubit id");
  return q;
}

}  // namespace

bool is_local_origin(const std::string& origin) {
  for (const char* host : {"http://localhost", "http://127.0.0.1", "http://[::1]"}) {
    const std::string h(host);
    if (origin == h) return true;
    if (origin.size() > h.size() && origin.compare(0, h.size(), h) == 0 && origin[h.size()] == ':') {
      const std::string port = origin.substr(h.size() + 1);
      if (!port.empty() && std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) return true;
    }
  }
  return false;
}

std::shared_ptr<const LatticeEntry> Service::entry(Family family, int d) {
  try {
    check_distance(family, d);
  } catch (const std::domain_error& e) {
    throw ApiError(422, e.what());
  }
  const int dmax = family == Family::tetrahedral ? kServiceMaxTetrahedral : kServiceMaxCubic;
  if (d > dmax) throw ApiError(422, "d > " + std::to_string(dmax) + " is not served");

  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find({family, d});
  if (it != cache_.end()) return it->second;
  auto e = std::make_shared<LatticeEntry>();
  e->lattice = std::make_shared<const ColorLattice>(build_lattice(family, d));
  e->code = extract_code(*e->lattice);
  e->decoder = std::make_unique<Decoder>(e->lattice);
  e->lattice_body = lattice_json(*e->lattice).dump();
  e->code_body = code_json(e->code).dump();
  cache_[{family, d}] = e;
  return e;
}

ApiResponse Service::paths() const {
  Json arr = Json::array();
  for (std::size_t i = 0; i < all_paths().size(); ++i) {
    const auto& p = all_paths()[i];
    arr.push_back({{"index", i},
                   {"path", to_string(p)},
                   {"restricted", to_string(mix(p.c, p.d))},
                   {"first", std::string(1, color_char(p.e))},
                   {"second", std::string(1, color_char(p.f))}});
  }
  return {200, arr};
}

ApiResponse Service::lattice(const std::string& family, const std::string& d) {
  try {
    auto e = entry(family_arg(family), distance_arg(d));
    return {200, Json::parse(e->lattice_body)};
  } catch (const ApiError& err) {
    return error_response(err.status, err.what());
  }
}

ApiResponse Service::code(const std::string& family, const std::string& d) {
  try {
    auto e = entry(family_arg(family), distance_arg(d));
    return {200, Json::parse(e->code_body)};
  } catch (const ApiError& err) {
    return error_response(err.status, err.what());
  }
}

ApiResponse Service::decode(const std::string& body) {
  try {
    Json req;
    try {
      req = Json::parse(body);
    } catch (const nlohmann::json::exception&) {
      throw ApiError(400, "body must be JSON");
    }
    if (!req.is_object()) throw ApiError(400, "body must be a JSON object");
    auto str = [&](const char* key, const char* def) {
      if (!req.contains(key)) return std::string(def);
      if (!req[key].is_string()) throw ApiError(400, std::string(key) + " must be a string");
      return req[key].get<std::string>();
    };
    const Family family = family_arg(str("family", "tetrahedral"));
    int d = 3;
    if (req.contains("d")) {
      if (!req["d"].is_number_integer()) throw ApiError(400, "d must be an integer");
      d = req["d"].get<int>();
    }
    const std::string basis_s = str("basis", "z");
    auto basis = parse_basis(basis_s);
    if (!basis) throw ApiError(400, "basis must be 'z' or 'x'");
    const std::string mode_s = str("mode", "all");
    std::optional<DecodingPath> single;
    if (mode_s == "single") {
      single = default_single_path(family);
    } else if (mode_s != "all") {
      single = parse_path(mode_s);
      if (!single) throw ApiError(400, "mode must be 'all', 'single' or a path like 'bg,y,r'");
    }

    auto e = entry(family, d);
    const CssCode& code = e->code;
    const QubitSet errors = qubit_list(req.contains("errors") ? req["errors"] : Json::array(), code.n);

    const bool is_x = *basis == Basis::x;
    std::vector<int> face_defects;
    std::vector<int> cells;
    if (is_x) {
      face_defects = x_syndrome(code, errors);
      cells = merge_face_to_cell(code, face_defects);
    } else {
      cells = z_syndrome(code, errors);
    }

    std::vector<Correction> traced;
    int selected = -1;
    if (single) {
      traced.push_back(e->decoder->decode_path(cells, *single, true));
      if (!traced[0].failed) selected = 0;
    } else {
      traced = e->decoder->decode_each(cells, true);
      selected = Decoder::select(traced);
    }
    if (selected < 0) {
      std::string why;
      for (const auto& c : traced) why += (why.empty() ? "" : "; ") + to_string(c.path) + ": " + c.failure;
      return internal_error("no decoding path succeeded: " + why);
    }
    const QubitSet& corr = traced[selected].qubits;

    // the residual must carry no syndrome at the level the decoder sees
    const QubitSet residual = symmetric_difference(errors, corr);
    const bool cancels = is_x ? merge_face_to_cell(code, x_syndrome(code, residual)).empty()
                              : z_syndrome(code, residual).empty();
    if (!cancels) return internal_error("correction from path " + to_string(traced[selected].path) + " leaves a syndrome");

    PauliFrame frame;
    PauliFrame fix;
    (is_x ? frame.x_support : frame.z_support) = errors;
    (is_x ? fix.x_support : fix.z_support) = corr;
    const std::vector<bool> flips = logical_outcome(code, frame, fix);

    Json out;
    out["family"] = family_name(family);
    out["d"] = d;
    out["basis"] = basis_name(*basis);
    out["mode"] = single ? "single:" + to_string(*single) : "all";
    out["errors"] = errors;
    if (is_x) out["face_defects"] = face_defects;
    out["cell_defects"] = cells;
    out["path"] = to_string(traced[selected].path);
    out["correction"] = corr;
    out["weight"] = corr.size();
    out["syndrome_cancelled"] = true;
    Json logical = Json::array();
    bool failure = false;
    for (std::size_t i = 0; i < flips.size(); ++i) {
      logical.push_back({{"logical", i}, {"flipped", static_cast<bool>(flips[i])}});
      failure = failure || flips[i];
    }
    out["logical"] = std::move(logical);
    out["logical_failure"] = failure;
    out["trace"] = trace_json(*e->decoder, cells, traced, selected, basis_name(*basis));
    return {200, std::move(out)};
  } catch (const ApiError& err) {
    return error_response(err.status, err.what());
  } catch (const std::exception& ex) {
    return internal_error(ex.what());
  }
}

void Service::mount(httplib::Server& svr) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  svr.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (!origin.empty() && is_local_origin(origin)) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });
  svr.Options(R"(/.*)", [](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (!origin.empty() && is_local_origin(origin)) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    } else {
      res.status = 403;
    }
  });
  svr.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  svr.Get("/api/paths", [this, send](const httplib::Request&, httplib::Response& res) { send(res, paths()); });
  svr.Get("/api/lattice", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("family") || !req.has_param("d")) {
      return send(res, error_response(400, "family and d are required"));
    }
    send(res, lattice(req.get_param_value("family"), req.get_param_value("d")));
  });
  svr.Get("/api/code", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("family") || !req.has_param("d")) {
      return send(res, error_response(400, "family and d are required"));
    }
    send(res, code(req.get_param_value("family"), req.get_param_value("d")));
  });
  svr.Post("/api/decode", [this, send](const httplib::Request& req, httplib::Response& res) { send(res, decode(req.body)); });
  svr.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "unknown exception";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    send(res, internal_error(msg));
  });
}

int run_server(const std::string& host, int port) {
  httplib::Server svr;
  Service service;
  service.mount(svr);
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  return svr.listen(host, port) ? 0 : 1;
}

}  // namespace chroma3d
