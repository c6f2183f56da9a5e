#include "chroma3d/analysis.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace chroma3d {
namespace {

std::vector<CurvePoint> sorted_positive(std::vector<CurvePoint> pts) {
  pts.erase(std::remove_if(pts.begin(), pts.end(), [](const CurvePoint& c) { return !(c.p_L > 0) || !(c.p > 0); }),
            pts.end());
  std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.p < b.p; });
  return pts;
}

std::optional<double> breakeven(const std::vector<CurvePoint>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double g0 = std::log(pts[i].p_L) - std::log(pts[i].p);
    const double g1 = std::log(pts[i + 1].p_L) - std::log(pts[i + 1].p);
    if (g0 < 0 && g1 >= 0) {
      const double x0 = std::log(pts[i].p), x1 = std::log(pts[i + 1].p);
      return std::exp(x0 + g0 / (g0 - g1) * (x1 - x0));
    }
  }
  return std::nullopt;
}

struct LineFit {
  double a = 0;
  double b = 0;
  bool ok = false;
};

LineFit weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0)) return {};
  LineFit f;
  f.b = (sw * sxy - sx * sy) / det;
  f.a = (sy - f.b * sx) / sw;
  f.ok = true;
  return f;
}

struct Paired {
  std::vector<double> x, a, b, ea, eb;
};

Paired pair_curves(const std::vector<CurvePoint>& s, const std::vector<CurvePoint>& l) {
  Paired out;
  std::map<double, CurvePoint> large;
  for (const auto& c : l) large[c.p] = c;
  auto ss = s;
  std::sort(ss.begin(), ss.end(), [](const CurvePoint& u, const CurvePoint& v) { return u.p < v.p; });
  for (const auto& c : ss) {
    auto it = large.find(c.p);
    if (it == large.end() || !(c.p_L > 0) || !(it->second.p_L > 0)) continue;
    out.x.push_back(std::log(c.p));
    out.a.push_back(c.p_L);
    out.b.push_back(it->second.p_L);
    out.ea.push_back(c.eps);
    out.eb.push_back(it->second.eps);
  }
  return out;
}

std::optional<double> crossing_of(const Paired& pc, const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> h, w;
  bool any_var = false;
  for (std::size_t i = 0; i < pc.x.size(); ++i) {
    h.push_back(std::log(a[i]) - std::log(b[i]));
    const double ra = pc.ea[i] / a[i], rb = pc.eb[i] / b[i];
    const double var = ra * ra + rb * rb;
    any_var = any_var || var > 0;
    w.push_back(var);
  }
  for (auto& v : w) v = any_var ? (v > 0 ? 1 / v : 0) : 1;
  const LineFit f = weighted_line(pc.x, h, w);
  if (!f.ok || std::abs(f.b) < 1e-12) return std::nullopt;
  const double root = -f.a / f.b;
  if (root < pc.x.front() || root > pc.x.back()) return std::nullopt;
  return std::exp(root);
}

void percentiles(std::vector<double>& v, Crossing& c) {
  if (v.empty()) {
    c.lo = c.hi = c.value;
    return;
  }
  std::sort(v.begin(), v.end());
  auto at = [&](double q) { return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))]; };
  c.lo = at(0.16);
  c.hi = at(0.84);
}

double resample(std::mt19937_64& rng, double p_l, double eps) {
  std::normal_distribution<double> g(0.0, 1.0);
  return std::max(p_l + eps * g(rng), p_l * 1e-3);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.empty() ? 0 : v[v.size() / 2];
}

}  // namespace

Curve curve_from_report(const SamplingReport& report, int logical, bool lower) {
  Curve c{report.d, {}};
  for (const auto& row : combine_bases(report)) {
    c.points.push_back({row.p, lower ? row.lower[logical] : row.p_L[logical], row.eps[logical]});
  }
  return c;
}

Crossing pseudothreshold(const std::vector<CurvePoint>& points, std::uint64_t seed, int resamples) {
  Crossing out;
  const auto pts = sorted_positive(points);
  if (pts.size() < 2) {
    out.note = "fewer than two points with p_L > 0";
    return out;
  }
  const auto p = breakeven(pts);
  if (!p) {
    const bool below = std::all_of(pts.begin(), pts.end(), [](const CurvePoint& c) { return c.p_L < c.p; });
    out.note = below ? "p_L < p over the whole window (no crossing)" : "no bracket of p_L = p in the window";
    return out;
  }
  out.found = true;
  out.value = *p;
  std::mt19937_64 rng(seed);
  std::vector<double> boot;
  auto trial = pts;
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < pts.size(); ++i) trial[i].p_L = resample(rng, pts[i].p_L, pts[i].eps);
    if (auto q = breakeven(trial)) boot.push_back(*q);
  }
  percentiles(boot, out);
  return out;
}

Crossing cross_threshold(const std::vector<CurvePoint>& small_d, const std::vector<CurvePoint>& large_d,
                         std::uint64_t seed, int resamples) {
  Crossing out;
  const Paired pc = pair_curves(small_d, large_d);
  if (pc.x.size() < 3) {
    out.note = "fewer than three common p values with p_L > 0";
    return out;
  }
  const auto p = crossing_of(pc, pc.a, pc.b);
  if (!p) {
    out.note = "curves do not cross inside the sampled window";
    return out;
  }
  out.found = true;
  out.value = *p;
  std::mt19937_64 rng(seed);
  std::vector<double> boot;
  std::vector<double> a(pc.a.size()), b(pc.b.size());
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = resample(rng, pc.a[i], pc.ea[i]);
      b[i] = resample(rng, pc.b[i], pc.eb[i]);
    }
    if (auto q = crossing_of(pc, a, b)) boot.push_back(*q);
  }
  percentiles(boot, out);
  return out;
}

Slope subthreshold_exponent(const std::vector<CurvePoint>& points) {
  std::vector<double> x, y;
  for (const auto& c : sorted_positive(points)) {
    x.push_back(std::log(c.p));
    y.push_back(std::log(c.p_L));
  }
  if (x.size() < 3) throw std::invalid_argument("exponent fit needs at least 3 points with p_L > 0");
  const LineFit f = weighted_line(x, y, std::vector<double>(x.size(), 1.0));
  if (!f.ok) throw std::invalid_argument("exponent fit needs distinct p values");
  Slope s;
  s.slope = f.b;
  s.intercept = f.a;
  s.used = static_cast<int>(x.size());
  double ss = 0, mx = 0, sxx = 0;
  for (double v : x) mx += v / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.a - f.b * x[i];
    ss += r * r;
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  s.stderr_ = x.size() > 2 ? std::sqrt(ss / static_cast<double>(x.size() - 2) / sxx) : 0;
  return s;
}

std::vector<BenchRow> bench_decode(Family family, const std::vector<int>& distances, int repetitions, double p,
                                   std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (int d : distances) {
    auto lat = std::make_shared<const ColorLattice>(build_lattice(family, d));
    Decoder dec(lat);
    const CssCode code = extract_code(*lat);
    const DecodingPath path = default_single_path(family);
    std::vector<double> single, all, sum;
    for (int r = 0; r < repetitions; ++r) {
      std::mt19937_64 rng(shot_seed(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r)));
      std::bernoulli_distribution flip(p);
      QubitSet err;
      for (int q = 0; q < code.n; ++q) {
        if (flip(rng)) err.push_back(q);
      }
      if (err.empty()) err.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(code.n)));
      const auto syn = z_syndrome(code, err);
      auto t0 = clock::now();
      (void)dec.decode_path(syn, path);
      auto t1 = clock::now();
      (void)dec.decode(syn, DecodeMode::all());
      auto t2 = clock::now();
      double total = 0;
      for (const auto& pp : all_paths()) {
        auto a = clock::now();
        (void)dec.decode_path(syn, pp);
        total += std::chrono::duration<double, std::micro>(clock::now() - a).count();
      }
      single.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      all.push_back(std::chrono::duration<double, std::micro>(t2 - t1).count());
      sum.push_back(total);
    }
    rows.push_back({family, d, code.n, median(single), median(all), median(sum)});
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "family,d,n,path_us,all_paths_us,path_sum_us\n";
  for (const auto& r : rows) {
    os << family_name(r.family) << ',' << r.d << ',' << r.n << ',' << r.path_us << ',' << r.all_us << ','
       << r.path_sum_us << '\n';
  }
  return os.str();
}

Analysis analyze(Family family, const std::string& mode, std::vector<Curve> curves) {
  std::sort(curves.begin(), curves.end(), [](const Curve& a, const Curve& b) { return a.d < b.d; });
  Analysis a{family, mode, curves, {}, {}, {}};
  if (curves.empty()) return a;
  a.pseudo = pseudothreshold(curves.front().points);
  for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
    a.crosses.push_back({curves[i].d, curves[i + 1].d, cross_threshold(curves[i].points, curves[i + 1].points)});
  }
  for (const auto& c : curves) {
    try {
      a.exponents.push_back({c.d, subthreshold_exponent(c.points)});
    } catch (const std::invalid_argument&) {
    }
  }
  return a;
}

std::string analysis_json(const Analysis& a) {
  using nlohmann::ordered_json;
  auto crossing = [](const Crossing& c) {
    ordered_json j{{"found", c.found}};
    if (c.found) {
      j["value"] = c.value;
      j["ci68"] = {c.lo, c.hi};
    } else {
      j["note"] = c.note;
    }
    return j;
  };
  ordered_json j;
  j["format"] = "analysis.v1";
  j["family"] = family_name(a.family);
  j["mode"] = a.mode;
  j["distances"] = ordered_json::array();
  for (const auto& c : a.curves) j["distances"].push_back(c.d);
  if (!a.curves.empty()) {
    j["pseudothreshold"] = crossing(a.pseudo);
    j["pseudothreshold"]["d"] = a.curves.front().d;
  }
  j["cross_thresholds"] = ordered_json::array();
  for (const auto& c : a.crosses) {
    auto cj = crossing(c.result);
    cj["d1"] = c.d1;
    cj["d2"] = c.d2;
    j["cross_thresholds"].push_back(cj);
  }
  j["exponents"] = ordered_json::array();
  for (const auto& e : a.exponents) {
    j["exponents"].push_back({{"d", e.d}, {"slope", e.slope.slope}, {"stderr", e.slope.stderr_}, {"points", e.slope.used}});
  }
  return j.dump(2) + "\n";
}

std::string plot_csv(const std::vector<Curve>& curves) {
  std::ostringstream os;
  os.precision(10);
  os << "d,p,p_L,lower,upper\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.points) {
      os << c.d << ',' << pt.p << ',' << pt.p_L << ',' << std::max(0.0, pt.p_L - pt.eps) << ','
         << std::min(1.0, pt.p_L + pt.eps) << '\n';
    }
  }
  return os.str();
}

}  // namespace chroma3d
