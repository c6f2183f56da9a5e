#include "chroma3d/sampling.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace chroma3d {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_id(Basis basis, bool subset, int index) {
  return (static_cast<std::uint64_t>(basis == Basis::x) << 40) | (static_cast<std::uint64_t>(subset) << 39) |
         static_cast<std::uint32_t>(index);
}

std::uint64_t bernoulli_threshold(double p) {
  if (p <= 0) return 0;
  if (p >= 1) return std::numeric_limits<std::uint64_t>::max();
  const long double t = std::ldexp(static_cast<long double>(p), 64);
  if (t >= 18446744073709551615.0L) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(t);
}

// Runs body(shot, tally) for shots [0, total) on `threads` workers; shot i goes to worker i % threads.
template <class Body>
Tally parallel_tally(std::int64_t total, int k, int threads, Body body) {
  threads = std::max(1, static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(total, 1))));
  std::vector<Tally> parts(threads);
  for (auto& t : parts) t.failures.assign(k, 0);
  auto work = [&](int t) {
    for (std::int64_t i = t; i < total; i += threads) body(i, parts[t]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  Tally out;
  out.failures.assign(k, 0);
  for (const auto& t : parts) {
    out.shots += t.shots;
    out.decoder_failures += t.decoder_failures;
    for (int q = 0; q < k; ++q) out.failures[q] += t.failures[q];
  }
  return out;
}

void record(Tally& tally, const std::optional<std::vector<bool>>& fail) {
  ++tally.shots;
  if (!fail) {
    ++tally.decoder_failures;
    for (auto& f : tally.failures) ++f;
    return;
  }
  for (std::size_t q = 0; q < fail->size(); ++q) tally.failures[q] += (*fail)[q] ? 1 : 0;
}

std::vector<Estimate> estimates(const Tally& t, bool exact) {
  std::vector<Estimate> out;
  for (auto f : t.failures) {
    Estimate e = mc_estimate(f, t.shots);
    if (exact) e.eps = 0;
    out.push_back(e);
  }
  return out;
}

// lexicographic successor of a w-combination of [0, n)
bool next_combination(std::vector<int>& c, int n) {
  const int w = static_cast<int>(c.size());
  int i = w - 1;
  while (i >= 0 && c[i] == n - w + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < w; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

const char* basis_name(Basis b) { return b == Basis::z ? "z" : "x"; }

std::optional<Basis> parse_basis(std::string_view s) {
  if (s == "z" || s == "Z") return Basis::z;
  if (s == "x" || s == "X") return Basis::x;
  return std::nullopt;
}

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("CHROMA3D_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return hw;
}

std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t shot) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ shot);
}

Estimate mc_estimate(std::int64_t failures, std::int64_t shots) {
  if (shots <= 0) return {};
  const double p = static_cast<double>(failures) / static_cast<double>(shots);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(shots))};
}

double binomial_pmf(int n, int w, double p) {
  if (w < 0 || w > n) return 0;
  if (p <= 0) return w == 0 ? 1 : 0;
  if (p >= 1) return w == n ? 1 : 0;
  const double logc = std::lgamma(n + 1.0) - std::lgamma(w + 1.0) - std::lgamma(n - w + 1.0);
  return std::exp(logc + w * std::log(p) + (n - w) * std::log1p(-p));
}

std::int64_t binomial_count(int n, int w) {
  if (w < 0 || w > n) return 0;
  w = std::min(w, n - w);
  __int128 c = 1;
  for (int i = 1; i <= w; ++i) {
    c = c * (n - w + i) / i;
    if (c > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(c);
}

std::optional<std::vector<bool>> decode_shot(const Decoder& decoder, const CssCode& code, const DecodeMode& mode,
                                             Basis basis, const QubitSet& error) {
  PauliFrame frame, corr;
  try {
    if (basis == Basis::z) {
      frame.z_support = error;
      corr.z_support = decoder.decode(z_syndrome(code, error), mode).qubits;
    } else {
      frame.x_support = error;
      corr.x_support = decoder.decode_x(x_syndrome(code, error), mode).qubits;
    }
  } catch (const DecoderError&) {
    return std::nullopt;
  }
  return logical_outcome(code, frame, corr);
}

McPoint monte_carlo_point(const Decoder& decoder, const CssCode& code, const DecodeMode& mode, Basis basis,
                          double p, std::int64_t shots, std::uint64_t seed, std::uint64_t stream, int threads) {
  const std::uint64_t thr = bernoulli_threshold(p);
  const int n = code.n;
  McPoint out{basis, p, {}, {}};
  out.tally = parallel_tally(shots, code.k, threads, [&](std::int64_t i, Tally& t) {
    std::mt19937_64 rng(shot_seed(seed, stream, static_cast<std::uint64_t>(i)));
    QubitSet error;
    for (int q = 0; q < n; ++q) {
      if (rng() < thr) error.push_back(q);
    }
    record(t, decode_shot(decoder, code, mode, basis, error));
  });
  out.est = estimates(out.tally, false);
  return out;
}

SamplingReport run_monte_carlo(const Decoder& decoder, const CssCode& code, const SamplingConfig& cfg) {
  SamplingReport r{"mc", decoder.lattice().family, decoder.lattice().distance, code.n, code.k, "", cfg, {}, {}, {}};
  r.mode = cfg.mode.all_paths ? "all" : "single:" + to_string(cfg.mode.path);
  const int threads = cfg.threads > 0 ? cfg.threads : thread_count();
  for (Basis b : cfg.bases) {
    for (std::size_t i = 0; i < cfg.p_list.size(); ++i) {
      r.mc.push_back(monte_carlo_point(decoder, code, cfg.mode, b, cfg.p_list[i], cfg.shots, cfg.seed,
                                       stream_id(b, false, static_cast<int>(i)), threads));
    }
  }
  return r;
}

SubsetWeight subset_failure_rate(const Decoder& decoder, const CssCode& code, const DecodeMode& mode, Basis basis,
                                 int w, std::int64_t m, std::uint64_t seed, int threads) {
  const int n = code.n;
  if (w < 0 || w > n) throw std::invalid_argument("subset weight outside [0, n]");
  if (threads <= 0) threads = thread_count();
  const std::int64_t total = binomial_count(n, w);
  SubsetWeight out{basis, w, m <= 0 || total <= kExhaustiveCap, {}, {}};
  if (out.exhaustive) {
    if (total > kExhaustiveCap) throw std::invalid_argument("subset too large to enumerate exhaustively");
    const int workers = std::max(1, static_cast<int>(std::min<std::int64_t>(threads, total)));
    std::vector<Tally> parts(workers);
    auto work = [&](int t) {
      parts[t].failures.assign(code.k, 0);
      std::vector<int> c(w);
      for (int j = 0; j < w; ++j) c[j] = j;
      std::int64_t idx = 0;
      do {
        if (idx++ % workers == t) record(parts[t], decode_shot(decoder, code, mode, basis, c));
      } while (next_combination(c, n));
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    out.tally.failures.assign(code.k, 0);
    for (const auto& t : parts) {
      out.tally.shots += t.shots;
      out.tally.decoder_failures += t.decoder_failures;
      for (int q = 0; q < code.k; ++q) out.tally.failures[q] += t.failures[q];
    }
  } else {
    out.tally = parallel_tally(m, code.k, threads, [&](std::int64_t i, Tally& t) {
      std::mt19937_64 rng(shot_seed(seed, stream_id(basis, true, w), static_cast<std::uint64_t>(i)));
      std::vector<int> perm(n);
      for (int q = 0; q < n; ++q) perm[q] = q;
      for (int j = 0; j < w; ++j) {
        std::uniform_int_distribution<int> pick(j, n - 1);
        std::swap(perm[j], perm[pick(rng)]);
      }
      QubitSet error(perm.begin(), perm.begin() + w);
      std::sort(error.begin(), error.end());
      record(t, decode_shot(decoder, code, mode, basis, error));
    });
  }
  out.est = estimates(out.tally, out.exhaustive);
  return out;
}

std::vector<SubsetPoint> combine_subsets(const std::vector<SubsetWeight>& weights, int n, int k,
                                         const std::vector<double>& p_list) {
  std::vector<SubsetPoint> out;
  std::vector<Basis> bases;
  for (const auto& sw : weights) {
    if (std::find(bases.begin(), bases.end(), sw.basis) == bases.end()) bases.push_back(sw.basis);
  }
  for (Basis b : bases) {
    for (double p : p_list) {
      SubsetPoint pt{b, p, 1.0, std::vector<double>(k, 0), std::vector<double>(k, 0), {}, {}};
      std::vector<double> var(k, 0);
      for (const auto& sw : weights) {
        if (sw.basis != b) continue;
        const double pw = binomial_pmf(n, sw.w, p);
        pt.delta -= pw;
        for (int q = 0; q < k; ++q) {
          pt.estimate[q] += pw * sw.est[q].p_L;
          var[q] += (pw * sw.est[q].eps) * (pw * sw.est[q].eps);
        }
      }
      pt.delta = std::clamp(pt.delta, 0.0, 1.0);
      for (int q = 0; q < k; ++q) {
        pt.eps[q] = std::sqrt(var[q]);
        pt.lower.push_back(std::max(0.0, pt.estimate[q] - pt.eps[q]));
        pt.upper.push_back(std::min(1.0, pt.estimate[q] + pt.delta + pt.eps[q]));
      }
      out.push_back(std::move(pt));
    }
  }
  return out;
}

SamplingReport run_subset_sampling(const Decoder& decoder, const CssCode& code, const SamplingConfig& cfg) {
  if (cfg.wmax < 0 || cfg.wmax > code.n) throw std::invalid_argument("wmax must lie in [0, n]");
  SamplingReport r{"subset", decoder.lattice().family, decoder.lattice().distance, code.n, code.k, "", cfg, {}, {}, {}};
  r.mode = cfg.mode.all_paths ? "all" : "single:" + to_string(cfg.mode.path);
  const int threads = cfg.threads > 0 ? cfg.threads : thread_count();
  for (Basis b : cfg.bases) {
    for (int w = 0; w <= cfg.wmax; ++w) {
      r.weights.push_back(subset_failure_rate(decoder, code, cfg.mode, b, w, cfg.shots, cfg.seed, threads));
    }
  }
  r.subset = combine_subsets(r.weights, code.n, code.k, cfg.p_list);
  return r;
}

std::vector<Combined> combine_bases(const SamplingReport& report) {
  std::vector<Combined> out;
  const auto& bases = report.config.bases;
  const double nb = static_cast<double>(bases.size());
  for (double p : report.config.p_list) {
    Combined c{p, std::vector<double>(report.k, 0), std::vector<double>(report.k, 0),
               std::vector<double>(report.k, 0), std::vector<double>(report.k, 0)};
    std::vector<double> var(report.k, 0);
    for (const auto& pt : report.mc) {
      if (pt.p != p) continue;
      for (int q = 0; q < report.k; ++q) {
        c.p_L[q] += pt.est[q].p_L / nb;
        var[q] += pt.est[q].eps * pt.est[q].eps / (nb * nb);
      }
    }
    for (const auto& pt : report.subset) {
      if (pt.p != p) continue;
      for (int q = 0; q < report.k; ++q) {
        c.p_L[q] += pt.estimate[q] / nb;
        var[q] += pt.eps[q] * pt.eps[q] / (nb * nb);
        c.lower[q] += pt.lower[q] / nb;
        c.upper[q] += pt.upper[q] / nb;
      }
    }
    for (int q = 0; q < report.k; ++q) {
      c.eps[q] = std::sqrt(var[q]);
      if (report.method == "mc") {
        c.lower[q] = std::max(0.0, c.p_L[q] - c.eps[q]);
        c.upper[q] = std::min(1.0, c.p_L[q] + c.eps[q]);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string report_json(const SamplingReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = "report.v1";
  j["method"] = r.method;
  j["family"] = family_name(r.family);
  j["d"] = r.d;
  j["n"] = r.n;
  j["k"] = r.k;
  j["mode"] = r.mode;
  j["seed"] = r.config.seed;
  j["shots"] = r.config.shots;
  if (r.method == "subset") j["wmax"] = r.config.wmax;
  ordered_json bases = ordered_json::array();
  for (Basis b : r.config.bases) bases.push_back(basis_name(b));
  j["bases"] = bases;
  j["p_list"] = r.config.p_list;
  auto est_json = [](const std::vector<Estimate>& est) {
    ordered_json a = ordered_json::array();
    for (const auto& e : est) a.push_back({{"p_L", e.p_L}, {"eps", e.eps}});
    return a;
  };
  if (r.method == "mc") {
    ordered_json pts = ordered_json::array();
    for (const auto& pt : r.mc) {
      pts.push_back({{"basis", basis_name(pt.basis)},
                     {"p_phys", pt.p},
                     {"shots", pt.tally.shots},
                     {"failures", pt.tally.failures},
                     {"decoder_failures", pt.tally.decoder_failures},
                     {"logical", est_json(pt.est)}});
    }
    j["points"] = pts;
  } else {
    ordered_json ws = ordered_json::array();
    for (const auto& sw : r.weights) {
      ws.push_back({{"basis", basis_name(sw.basis)},
                    {"w", sw.w},
                    {"exhaustive", sw.exhaustive},
                    {"m", sw.tally.shots},
                    {"failures", sw.tally.failures},
                    {"decoder_failures", sw.tally.decoder_failures},
                    {"logical", est_json(sw.est)}});
    }
    j["subsets"] = ws;
    ordered_json pts = ordered_json::array();
    for (const auto& pt : r.subset) {
      pts.push_back({{"basis", basis_name(pt.basis)},
                     {"p_phys", pt.p},
                     {"delta", pt.delta},
                     {"p_L", pt.estimate},
                     {"eps", pt.eps},
                     {"lower", pt.lower},
                     {"upper", pt.upper}});
    }
    j["points"] = pts;
  }
  if (r.config.bases.size() > 1) {
    ordered_json avg = ordered_json::array();
    for (const auto& c : combine_bases(r)) {
      avg.push_back({{"p_phys", c.p}, {"p_L", c.p_L}, {"eps", c.eps}, {"lower", c.lower}, {"upper", c.upper}});
    }
    j["average"] = avg;
  }
  return j.dump(2) + "\n";
}

std::string report_csv(const SamplingReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "family,d,basis,mode,p_phys,k,p_L,eps,lower,upper,method,shots,seed\n";
  auto row = [&](const char* basis, double p, int q, double pl, double eps, double lo, double hi, std::int64_t shots) {
    os << family_name(r.family) << ',' << r.d << ',' << basis << ',' << r.mode << ',' << p << ',' << q << ',' << pl
       << ',' << eps << ',' << lo << ',' << hi << ',' << r.method << ',' << shots << ',' << r.config.seed << '\n';
  };
  for (const auto& pt : r.mc) {
    for (int q = 0; q < r.k; ++q) {
      const auto& e = pt.est[q];
      row(basis_name(pt.basis), pt.p, q, e.p_L, e.eps, std::max(0.0, e.p_L - e.eps), std::min(1.0, e.p_L + e.eps),
          pt.tally.shots);
    }
  }
  for (const auto& pt : r.subset) {
    for (int q = 0; q < r.k; ++q) {
      row(basis_name(pt.basis), pt.p, q, pt.estimate[q], pt.eps[q], pt.lower[q], pt.upper[q], r.config.shots);
    }
  }
  if (r.config.bases.size() > 1) {
    for (const auto& c : combine_bases(r)) {
      for (int q = 0; q < r.k; ++q) row("avg", c.p, q, c.p_L[q], c.eps[q], c.lower[q], c.upper[q], r.config.shots);
    }
  }
  return os.str();
}

}  // namespace chroma3d
