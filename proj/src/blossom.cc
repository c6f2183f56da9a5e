#include <algorithm>

#include "chroma3d/matching.h"

namespace chroma3d {
namespace {

// Primal-dual blossom algorithm, O(n^3). Vertices 0..n-1, blossoms n..2n-1.
// Edge k has endpoints 2k (u side) and 2k+1 (v side).
class Blossom {
 public:
  Blossom(int n, const std::vector<BlossomEdge>& edges, bool max_cardinality)
      : n_(n), edges_(edges), max_cardinality_(max_cardinality) {}

  std::vector<int> solve();

 private:
  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  static int wrap(int j, int size) { return ((j % size) + size) % size; }

  int n_;
  const std::vector<BlossomEdge>& edges_;
  bool max_cardinality_;

  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> childs_;
  std::vector<int> base_;
  std::vector<std::vector<int>> endps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> bestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

void Blossom::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = base_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

int Blossom::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(int base, int k) {
  int v = edges_[k].u;
  int w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  auto& path = childs_[b];
  auto& endps = endps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for (int x : leaves(b)) {
    if (label_[inblossom_[x]] == 2) queue_.push_back(x);
    inblossom_[x] = b;
  }
  std::vector<int> bestedgeto(2 * n_, -1);
  for (int sub : path) {
    std::vector<std::vector<int>> nblists;
    if (!has_bestedges_[sub]) {
      for (int x : leaves(sub)) {
        std::vector<int> list;
        for (int p : neighbend_[x]) list.push_back(p / 2);
        nblists.push_back(std::move(list));
      }
    } else {
      nblists.push_back(bestedges_[sub]);
    }
    for (const auto& list : nblists) {
      for (int kk : list) {
        int i = edges_[kk].u;
        int j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = kk;
        }
      }
    }
    bestedges_[sub].clear();
    has_bestedges_[sub] = 0;
    bestedge_[sub] = -1;
  }
  bestedges_[b].clear();
  for (int kk : bestedgeto) {
    if (kk != -1) bestedges_[b].push_back(kk);
  }
  has_bestedges_[b] = 1;
  bestedge_[b] = -1;
  for (int kk : bestedges_[b]) {
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }
}

void Blossom::expand_blossom(int b, bool endstage) {
  const std::vector<int> children = childs_[b];
  for (int s : children) {
    parent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int x : leaves(s)) inblossom_[x] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    const int size = static_cast<int>(childs_[b].size());
    int j = static_cast<int>(std::find(childs_[b].begin(), childs_[b].end(), entrychild) - childs_[b].begin());
    int jstep, endptrick;
    if (j & 1) {
      j -= size;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[endps_[b][wrap(j - endptrick, size)] ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[endps_[b][wrap(j - endptrick, size)] / 2] = 1;
      j += jstep;
      p = endps_[b][wrap(j - endptrick, size)] ^ endptrick;
      allowedge_[p / 2] = 1;
      j += jstep;
    }
    int bv = childs_[b][wrap(j, size)];
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (childs_[b][wrap(j, size)] != entrychild) {
      bv = childs_[b][wrap(j, size)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int reached = -1;
      for (int x : leaves(bv)) {
        if (label_[x] != 0) {
          reached = x;
          break;
        }
      }
      if (reached >= 0) {
        label_[reached] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(reached, 2, labelend_[reached]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = 0;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
  int t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= n_) augment_blossom(t, v);
  const int size = static_cast<int>(childs_[b].size());
  const int i = static_cast<int>(std::find(childs_[b].begin(), childs_[b].end(), t) - childs_[b].begin());
  int j = i;
  int jstep, endptrick;
  if (i & 1) {
    j -= size;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = childs_[b][wrap(j, size)];
    const int p = endps_[b][wrap(j - endptrick, size)] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = childs_[b][wrap(j, size)];
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(childs_[b].begin(), childs_[b].begin() + i, childs_[b].end());
  std::rotate(endps_[b].begin(), endps_[b].begin() + i, endps_[b].end());
  base_[b] = base_[childs_[b][0]];
}

void Blossom::augment_matching(int k) {
  const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
  for (const auto& sp : ends) {
    int s = sp[0];
    int p = sp[1];
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> Blossom::solve() {
  const int m = static_cast<int>(edges_.size());
  if (m == 0) return std::vector<int>(n_, -1);
  std::int64_t maxweight = 0;
  for (const auto& e : edges_) {
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw MatchingError("blossom edge has invalid endpoints");
    }
    maxweight = std::max(maxweight, e.weight);
  }
  endpoint_.resize(2 * m);
  neighbend_.assign(n_, {});
  for (int k = 0; k < m; ++k) {
    endpoint_[2 * k] = edges_[k].u;
    endpoint_[2 * k + 1] = edges_[k].v;
    neighbend_[edges_[k].u].push_back(2 * k + 1);
    neighbend_[edges_[k].v].push_back(2 * k);
  }
  mate_.assign(n_, -1);
  label_.assign(2 * n_, 0);
  labelend_.assign(2 * n_, -1);
  inblossom_.resize(n_);
  for (int i = 0; i < n_; ++i) inblossom_[i] = i;
  parent_.assign(2 * n_, -1);
  childs_.assign(2 * n_, {});
  base_.assign(2 * n_, -1);
  for (int i = 0; i < n_; ++i) base_[i] = i;
  endps_.assign(2 * n_, {});
  bestedge_.assign(2 * n_, -1);
  bestedges_.assign(2 * n_, {});
  has_bestedges_.assign(2 * n_, 0);
  unused_.clear();
  for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
  dualvar_.assign(2 * n_, 0);
  for (int i = 0; i < n_; ++i) dualvar_[i] = maxweight;
  allowedge_.assign(m, 0);

  for (int stage = 0; stage < n_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n_; b < 2 * n_; ++b) {
      bestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      std::int64_t delta = 0;
      int deltaedge = -1, deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n_; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t kslack = slack(bestedge_[b]);
          if (kslack % 2 != 0) throw MatchingError("blossom slack lost integrality");
          const std::int64_t d = kslack / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dualvar_[b] < delta)) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
      }
      for (int v = 0; v < n_; ++v) {
        if (label_[inblossom_[v]] == 1) {
          dualvar_[v] -= delta;
        } else if (label_[inblossom_[v]] == 2) {
          dualvar_[v] += delta;
        }
      }
      for (int b = n_; b < 2 * n_; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) {
            dualvar_[b] += delta;
          } else if (label_[b] == 2) {
            dualvar_[b] -= delta;
          }
        }
      }
      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        int i = edges_[deltaedge].u;
        int j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n_; b < 2 * n_; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) expand_blossom(b, true);
    }
  }
  std::vector<int> mate(n_, -1);
  for (int v = 0; v < n_; ++v) {
    if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
  }
  return mate;
}

}  // namespace

std::vector<int> max_weight_matching(int num_vertices, const std::vector<BlossomEdge>& edges, bool max_cardinality) {
  Blossom solver(num_vertices, edges, max_cardinality);
  return solver.solve();
}

}  // namespace chroma3d
