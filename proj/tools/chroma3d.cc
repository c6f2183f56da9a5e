// chroma3d command line: build, validate, export, decode, sample, subset, threshold, bench, serve.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chroma3d/analysis.h"
#include "chroma3d/io.h"
#include "chroma3d/sampling.h"
#include "chroma3d/service.h"

using namespace chroma3d;

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Family family_or_throw(const std::string& s) {
  auto f = parse_family(s);
  if (!f) throw Usage("--family must be tetrahedral or cubic");
  return *f;
}

DecodeMode mode_or_throw(const std::string& mode, const std::string& path, Family family) {
  if (mode == "all") return DecodeMode::all();
  if (mode != "single") throw Usage("--mode must be all or single");
  if (path.empty()) return DecodeMode::single(default_single_path(family));
  auto p = parse_path(path);
  if (!p) throw Usage("bad --path '" + path + "'");
  return DecodeMode::single(*p);
}

std::vector<Basis> bases_or_throw(const std::string& s) {
  if (s == "both") return {Basis::z, Basis::x};
  auto b = parse_basis(s);
  if (!b) throw Usage("--basis must be z, x or both");
  return {*b};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Usage("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int print_validation(const ValidationReport& rep) {
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    if (!c.offenders.empty()) {
      std::cout << "  offenders:";
      for (std::size_t i = 0; i < c.offenders.size() && i < 10; ++i) std::cout << ' ' << c.offenders[i];
      if (c.offenders.size() > 10) std::cout << " ...";
    }
    std::cout << "\n";
  }
  return rep.ok() ? 0 : 2;
}

// report.v1 file -> curve of one logical (basis average when both bases are present)
Curve curve_from_file(const std::string& path, int logical, bool lower, std::string* family) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    if (j.at("format") != "report.v1") throw FormatError(path + ": not a report.v1 document");
    *family = j.at("family").get<std::string>();
    Curve c{j.at("d").get<int>(), {}};
    const bool avg = j.contains("average");
    for (const auto& pt : j.at(avg ? "average" : "points")) {
      double pl = 0;
      double eps = 0;
      if (pt.contains("logical")) {
        pl = pt["logical"].at(logical).at("p_L").get<double>();
        eps = pt["logical"].at(logical).at("eps").get<double>();
      } else {
        pl = pt.at(lower ? "lower" : "p_L").at(logical).get<double>();
        eps = pt.at("eps").at(logical).get<double>();
      }
      c.points.push_back({pt.at("p_phys").get<double>(), pl, eps});
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D color code lattices and concatenated matching decoders"};
  app.require_subcommand(1);

  std::string family_s = "tetrahedral";
  int d = 3;
  std::string out;
  std::string mode_s = "all";
  std::string path_s;
  std::string basis_s = "both";
  std::vector<double> p_list;
  std::int64_t shots = 10000;
  int wmax = 3;
  std::uint64_t seed = 1;
  int logical = 0;

  auto add_lattice = [&](CLI::App* c) {
    c->add_option("--family", family_s, "tetrahedral or cubic")->capture_default_str();
    c->add_option("-d,--distance", d, "code distance")->capture_default_str();
  };
  auto add_sampling = [&](CLI::App* c) {
    c->add_option("--mode", mode_s, "all or single")->capture_default_str();
    c->add_option("--path", path_s, "path for --mode single, e.g. bg,y,r");
    c->add_option("--basis", basis_s, "z, x or both")->capture_default_str();
    c->add_option("-p", p_list, "physical error rates")->required();
    c->add_option("--seed", seed)->capture_default_str();
    c->add_option("--out", out, "report path (default stdout)");
  };

  auto* build = app.add_subcommand("build", "construct a lattice and print its counts");
  add_lattice(build);
  build->add_option("--out", out, "write lattice.v1 here");

  auto* validate_cmd = app.add_subcommand("validate", "run the structural checks");
  add_lattice(validate_cmd);
  std::string lattice_file;
  validate_cmd->add_option("--lattice", lattice_file, "lattice.v1 file instead of --family/-d");

  auto* export_cmd = app.add_subcommand("export", "write lattice.v1 and code.v1");
  add_lattice(export_cmd);
  std::string out_dir = ".";
  export_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  auto* decode_cmd = app.add_subcommand("decode", "decode a Pauli frame and write trace.v1");
  add_lattice(decode_cmd);
  std::string frame_file;
  decode_cmd->add_option("--frame", frame_file, "frame file: 'Z q' / 'X q' per line")->required();
  decode_cmd->add_option("--mode", mode_s)->capture_default_str();
  decode_cmd->add_option("--path", path_s);
  decode_cmd->add_option("--out", out, "trace prefix (default stdout)");

  auto* sample = app.add_subcommand("sample", "Monte Carlo logical error rates");
  add_lattice(sample);
  add_sampling(sample);
  sample->add_option("--shots", shots)->capture_default_str();
  std::string csv_out;
  sample->add_option("--csv", csv_out, "also write CSV here");

  auto* subset = app.add_subcommand("subset", "subset sampling bounds");
  add_lattice(subset);
  add_sampling(subset);
  subset->add_option("--shots", shots, "samples per non-exhaustive subset")->capture_default_str();
  subset->add_option("--wmax", wmax)->capture_default_str();
  bool exhaustive = false;
  subset->add_flag("--exhaustive", exhaustive, "enumerate every subset up to wmax");
  subset->add_option("--csv", csv_out, "also write CSV here");

  auto* threshold = app.add_subcommand("threshold", "pseudo and cross thresholds");
  add_lattice(threshold);
  std::vector<int> ds;
  std::vector<std::string> reports;
  threshold->add_option("--ds", ds, "distances to simulate");
  threshold->add_option("--report", reports, "report.v1 files instead of simulating");
  threshold->add_option("--mode", mode_s)->capture_default_str();
  threshold->add_option("--path", path_s);
  threshold->add_option("--basis", basis_s)->capture_default_str();
  threshold->add_option("-p", p_list);
  threshold->add_option("--shots", shots)->capture_default_str();
  threshold->add_option("--seed", seed)->capture_default_str();
  threshold->add_option("--logical", logical, "logical qubit index")->capture_default_str();
  threshold->add_option("--out", out, "analysis.v1 path (default stdout)");
  std::string plot_out;
  threshold->add_option("--plot", plot_out, "plot CSV path");

  auto* bench = app.add_subcommand("bench", "decoder timing");
  bench->add_option("--family", family_s)->capture_default_str();
  std::vector<int> bench_ds;
  bench->add_option("--ds", bench_ds, "distances")->required();
  int reps = 200;
  bench->add_option("--reps", reps)->capture_default_str();
  double bench_p = 0.01;
  bench->add_option("-p", bench_p)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--out", out);

  auto* serve = app.add_subcommand("serve", "local HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*serve) return run_server(host, port);

    if (*bench) {
      const Family fam = family_or_throw(family_s);
      for (int x : bench_ds) check_distance(fam, x);
      write_text(out, bench_csv(bench_decode(fam, bench_ds, reps, bench_p, seed)));
      return 0;
    }

    if (*validate_cmd && !lattice_file.empty()) {
      Json j;
      try {
        j = Json::parse(read_text(lattice_file));
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(e.what());
      }
      return print_validation(validate(parse_lattice_json(j)));
    }

    const Family family = family_or_throw(family_s);
    check_distance(family, d);

    if (*threshold) {
      std::vector<Curve> curves;
      std::string mode_name = mode_s;
      if (!reports.empty()) {
        for (const auto& r : reports) {
          std::string fam;
          curves.push_back(curve_from_file(r, logical, false, &fam));
          if (fam != family_name(family)) throw Usage(r + " is for family " + fam);
        }
      } else {
        if (ds.empty() || p_list.empty()) throw Usage("threshold needs --report files or --ds and -p");
        const DecodeMode mode = mode_or_throw(mode_s, path_s, family);
        if (!mode.all_paths) mode_name = "single:" + to_string(mode.path);
        for (int x : ds) {
          check_distance(family, x);
          auto lat = std::make_shared<const ColorLattice>(build_lattice(family, x));
          const CssCode code = extract_code(*lat);
          const Decoder dec(lat);
          SamplingConfig cfg;
          cfg.mode = mode;
          cfg.bases = bases_or_throw(basis_s);
          cfg.p_list = p_list;
          cfg.shots = shots;
          cfg.seed = seed;
          curves.push_back(curve_from_report(run_monte_carlo(dec, code, cfg), logical));
        }
      }
      const Analysis a = analyze(family, mode_name, curves);
      write_text(out, analysis_json(a));
      if (!plot_out.empty()) write_text(plot_out, plot_csv(a.curves));
      return 0;
    }

    auto lat = std::make_shared<const ColorLattice>(build_lattice(family, d));

    if (*build) {
      const auto rep = validate(*lat);
      const auto fc = family_counts(family, d);
      std::cout << family_name(family) << " d=" << d << " n=" << lat->num_qubits() << " primal: "
                << lat->primal.vertices.size() << " vertices, " << lat->primal.edges.size() << " edges, "
                << lat->primal.faces.size() << " faces, " << lat->primal.cells.size() << " cells\n"
                << "dual: " << lat->dual.vertices.size() << " vertices (" << lat->dual.num_bulk_vertices << " bulk), "
                << lat->dual.edges.size() << " edges (" << lat->dual.num_bulk_edges << " bulk), "
                << lat->dual.faces.size() << " faces, " << lat->dual.cells.size() << " cells\n"
                << "expected: n=" << fc.n << " faces=" << fc.faces << " cells=" << fc.cells << "\n"
                << "validation: " << (rep.ok() ? "ok" : "FAILED") << "\n";
      if (!out.empty()) write_text(out, lattice_json(*lat).dump() + "\n");
      return rep.ok() ? 0 : 2;
    }

    if (*validate_cmd) return print_validation(validate(*lat));

    const CssCode code = extract_code(*lat);

    if (*export_cmd) {
      const std::string stem = out_dir + "/" + std::string(family_name(family)) + "_d" + std::to_string(d);
      const Json lj = lattice_json(*lat);
      write_text(stem + ".lattice.json", lj.dump() + "\n");
      write_text(stem + ".code.json", code_json(code).dump() + "\n");
      // the written file must read back as a valid lattice
      const int rc = print_validation(validate(parse_lattice_json(Json::parse(read_text(stem + ".lattice.json")))));
      std::cout << "wrote " << stem << ".lattice.json and " << stem << ".code.json\n";
      return rc;
    }

    const Decoder decoder(lat);

    if (*decode_cmd) {
      std::ifstream f(frame_file);
      if (!f) throw Usage("cannot read " + frame_file);
      const PauliFrame frame = parse_frame(f, code.n);
      const DecodeMode mode = mode_or_throw(mode_s, path_s, family);
      PauliFrame fix;
      Json result{{"family", family_name(family)}, {"d", d}};
      for (Basis b : {Basis::z, Basis::x}) {
        const QubitSet& err = b == Basis::z ? frame.z_support : frame.x_support;
        const auto cells = b == Basis::z ? z_syndrome(code, err) : merge_face_to_cell(code, x_syndrome(code, err));
        std::vector<Correction> traced;
        int sel = -1;
        if (mode.all_paths) {
          traced = decoder.decode_each(cells, true);
          sel = Decoder::select(traced);
        } else {
          traced.push_back(decoder.decode_path(cells, mode.path, true));
          sel = traced[0].failed ? -1 : 0;
        }
        const Json trace = trace_json(decoder, cells, traced, sel, basis_name(b));
        if (out.empty()) {
          std::cout << trace.dump(2) << "\n";
        } else {
          write_text(out + "." + basis_name(b) + ".trace.json", trace.dump(2) + "\n");
        }
        if (sel < 0) throw DecoderError(std::string("every path failed for the ") + basis_name(b) + " part");
        (b == Basis::z ? fix.z_support : fix.x_support) = traced[sel].qubits;
      }
      const auto flips = logical_outcome(code, frame, fix);
      result["correction"] = {{"z", fix.z_support}, {"x", fix.x_support}};
      Json lf = Json::array();
      for (bool x : flips) lf.push_back(x);
      result["logical_flipped"] = lf;
      if (out.empty()) {
        std::cout << result.dump(2) << "\n";
      } else {
        write_text(out + ".correction.json", result.dump(2) + "\n");
      }
      return 0;
    }

    if (*sample || *subset) {
      SamplingConfig cfg;
      cfg.mode = mode_or_throw(mode_s, path_s, family);
      cfg.bases = bases_or_throw(basis_s);
      cfg.p_list = p_list;
      cfg.shots = (*subset && exhaustive) ? 0 : shots;
      cfg.wmax = wmax;
      cfg.seed = seed;
      for (double p : p_list) {
        if (!(p >= 0 && p <= 1)) throw Usage("-p values must lie in [0, 1]");
      }
      if (*subset && (wmax < 0 || wmax > code.n)) throw Usage("--wmax must lie in [0, n]");
      const auto rep = *sample ? run_monte_carlo(decoder, code, cfg) : run_subset_sampling(decoder, code, cfg);
      write_text(out, report_json(rep));
      if (!csv_out.empty()) write_text(csv_out, report_csv(rep));
      return 0;
    }
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FrameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
