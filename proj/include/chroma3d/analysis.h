#ifndef CHROMA3D_ANALYSIS_H_
#define CHROMA3D_ANALYSIS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "chroma3d/lattice.h"
#include "chroma3d/sampling.h"

namespace chroma3d {

struct CurvePoint {
  double p;
  double p_L;
  double eps;
};

struct Curve {
  int d;
  std::vector<CurvePoint> points;
};

// Curve of one logical qubit, averaged over the bases in the report.
// Subset reports use the lower bound when `lower` is set.
Curve curve_from_report(const SamplingReport& report, int logical, bool lower = false);

struct Crossing {
  bool found = false;
  double value = 0;
  double lo = 0;  // 68% bootstrap interval
  double hi = 0;
  std::string note;
};

// log-log linear interpolation between the two points bracketing p_L = p
Crossing pseudothreshold(const std::vector<CurvePoint>& points, std::uint64_t seed = 7, int resamples = 2000);
// root of the inverse-variance weighted log-log fit of log(p_L1 / p_L2)
Crossing cross_threshold(const std::vector<CurvePoint>& small_d, const std::vector<CurvePoint>& large_d,
                         std::uint64_t seed = 7, int resamples = 2000);

struct Slope {
  double slope = 0;
  double stderr_ = 0;
  double intercept = 0;
  int used = 0;
};
// least squares in log-log; points with p_L <= 0 are skipped; throws with fewer than 3 left
Slope subthreshold_exponent(const std::vector<CurvePoint>& points);

struct BenchRow {
  Family family;
  int d;
  int n;
  double path_us;      // median, default single path
  double all_us;       // median, 12-path decode
  double path_sum_us;  // median of the summed per-path times
};
std::vector<BenchRow> bench_decode(Family family, const std::vector<int>& distances, int repetitions, double p,
                                   std::uint64_t seed);
std::string bench_csv(const std::vector<BenchRow>& rows);

struct Analysis {
  Family family;
  std::string mode;
  std::vector<Curve> curves;
  Crossing pseudo;
  struct Cross {
    int d1;
    int d2;
    Crossing result;
  };
  std::vector<Cross> crosses;
  struct Exponent {
    int d;
    Slope slope;
  };
  std::vector<Exponent> exponents;
};
// pseudothreshold of the smallest d, crossings of consecutive distances
Analysis analyze(Family family, const std::string& mode, std::vector<Curve> curves);
std::string analysis_json(const Analysis& a);
std::string plot_csv(const std::vector<Curve>& curves);

}  // namespace chroma3d

#endif  // CHROMA3D_ANALYSIS_H_
