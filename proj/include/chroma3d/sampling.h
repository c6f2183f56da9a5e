#ifndef CHROMA3D_SAMPLING_H_
#define CHROMA3D_SAMPLING_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chroma3d/code.h"
#include "chroma3d/decoder.h"

namespace chroma3d {

// z: phase flips on |+>, x: bit flips on |0>
enum class Basis { z, x };
const char* basis_name(Basis b);
std::optional<Basis> parse_basis(std::string_view s);

inline constexpr std::int64_t kExhaustiveCap = 1000000;

int thread_count();  // CHROMA3D_THREADS, else hardware concurrency

std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t shot);

// Failure counts per logical qubit for one batch of shots.
struct Tally {
  std::int64_t shots = 0;
  std::vector<std::int64_t> failures;
  std::int64_t decoder_failures = 0;  // shots where every path failed
};

struct Estimate {
  double p_L = 0;
  double eps = 0;
};
Estimate mc_estimate(std::int64_t failures, std::int64_t shots);

struct McPoint {
  Basis basis;
  double p;
  Tally tally;
  std::vector<Estimate> est;  // per logical qubit
};

struct SubsetWeight {
  Basis basis;
  int w;
  bool exhaustive;
  Tally tally;
  std::vector<Estimate> est;
};

struct SubsetPoint {
  Basis basis;
  double p;
  double delta;
  std::vector<double> estimate;  // per logical qubit
  std::vector<double> eps;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct SamplingConfig {
  DecodeMode mode;
  std::vector<Basis> bases{Basis::z, Basis::x};
  std::vector<double> p_list;
  std::int64_t shots = 10000;  // per MC point, or per sampled subset
  int wmax = 3;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: thread_count()
};

struct SamplingReport {
  std::string method;  // "mc" or "subset"
  Family family;
  int d;
  int n;
  int k;
  std::string mode;
  SamplingConfig config;
  std::vector<McPoint> mc;
  std::vector<SubsetWeight> weights;
  std::vector<SubsetPoint> subset;
};

// Averaged over the bases present in the report (a single basis is returned as is).
struct Combined {
  double p;
  std::vector<double> p_L;
  std::vector<double> eps;
  std::vector<double> lower;
  std::vector<double> upper;
};
std::vector<Combined> combine_bases(const SamplingReport& report);

McPoint monte_carlo_point(const Decoder& decoder, const CssCode& code, const DecodeMode& mode, Basis basis,
                          double p, std::int64_t shots, std::uint64_t seed, std::uint64_t stream, int threads);
SamplingReport run_monte_carlo(const Decoder& decoder, const CssCode& code, const SamplingConfig& cfg);

// m <= 0 or C(n, w) <= kExhaustiveCap enumerates every support.
SubsetWeight subset_failure_rate(const Decoder& decoder, const CssCode& code, const DecodeMode& mode, Basis basis,
                                 int w, std::int64_t m, std::uint64_t seed, int threads);
SamplingReport run_subset_sampling(const Decoder& decoder, const CssCode& code, const SamplingConfig& cfg);
std::vector<SubsetPoint> combine_subsets(const std::vector<SubsetWeight>& weights, int n, int k,
                                         const std::vector<double>& p_list);

double binomial_pmf(int n, int w, double p);
std::int64_t binomial_count(int n, int w);  // saturates at INT64_MAX

// One decoded shot: failure flag per logical qubit; nullopt when every path failed.
std::optional<std::vector<bool>> decode_shot(const Decoder& decoder, const CssCode& code, const DecodeMode& mode,
                                             Basis basis, const QubitSet& error);

std::string report_json(const SamplingReport& report);
std::string report_csv(const SamplingReport& report);

}  // namespace chroma3d

#endif  // CHROMA3D_SAMPLING_H_
