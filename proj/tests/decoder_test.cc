#include "chroma3d/decoder.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace chroma3d;

namespace {

struct Fixture {
  std::shared_ptr<const ColorLattice> lat;
  CssCode code;
  std::unique_ptr<Decoder> dec;
};

Fixture make(Family f, int d) {
  Fixture x;
  x.lat = std::make_shared<const ColorLattice>(build_lattice(f, d));
  x.code = extract_code(*x.lat);
  x.dec = std::make_unique<Decoder>(x.lat);
  return x;
}

// corrected iff the residual is a product of face stabilizers
bool trivial_z(const CssCode& code, const QubitSet& residual) {
  return residual.empty() || gf2_in_span(code.z_stabilizers, residual, code.n);
}

}  // namespace

TEST(decoder, twelve_distinct_paths) {
  std::set<std::string> names;
  for (const auto& p : all_paths()) {
    names.insert(to_string(p));
    std::set<Color> cs{p.c, p.d, p.e, p.f};
    EXPECT_EQ(cs.size(), 4u);
    EXPECT_TRUE(color_less(p.c, p.d));
  }
  EXPECT_EQ(names.size(), 12u);
  EXPECT_EQ(to_string(all_paths()[0]), "bg,r,y");
  EXPECT_EQ(path_index(*parse_path("bg,y,r")), 1);
  EXPECT_EQ(parse_path("b-g > y > r"), parse_path("bg,y,r"));
  EXPECT_FALSE(parse_path("bb,y,r"));
  EXPECT_FALSE(parse_path("bg,y"));
  EXPECT_EQ(to_string(default_single_path(Family::cubic)), "bg,y,r");
}

TEST(decoder, empty_syndrome_gives_empty_correction) {
  auto fx = make(Family::tetrahedral, 3);
  const auto c = fx.dec->decode({}, DecodeMode::all());
  EXPECT_FALSE(c.failed);
  EXPECT_TRUE(c.qubits.empty());
}

TEST(decoder, weight_one_z_all_families) {
  for (auto [fam, d] : {std::pair{Family::tetrahedral, 3}, {Family::tetrahedral, 5}, {Family::cubic, 4}}) {
    auto fx = make(fam, d);
    for (int q = 0; q < fx.code.n; ++q) {
      const int e[] = {q};
      const auto c = fx.dec->decode(z_syndrome(fx.code, e), DecodeMode::all());
      EXPECT_TRUE(trivial_z(fx.code, symmetric_difference(e, c.qubits))) << d << " qubit " << q;
      EXPECT_EQ(z_syndrome(fx.code, c.qubits), z_syndrome(fx.code, e));
    }
  }
}

TEST(decoder, tetrahedral_d3_has_failing_weight_two) {
  auto fx = make(Family::tetrahedral, 3);
  int fails = 0;
  for (int a = 0; a < fx.code.n; ++a) {
    for (int b = a + 1; b < fx.code.n; ++b) {
      const int e[] = {a, b};
      const auto c = fx.dec->decode(z_syndrome(fx.code, e), DecodeMode::all());
      fails += !trivial_z(fx.code, symmetric_difference(e, c.qubits));
    }
  }
  EXPECT_GT(fails, 0);
}

TEST(decoder, every_path_reproduces_the_syndrome) {
  auto fx = make(Family::tetrahedral, 5);
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.03);
  for (int t = 0; t < 30; ++t) {
    QubitSet e;
    for (int q = 0; q < fx.code.n; ++q) {
      if (coin(rng)) e.push_back(q);
    }
    const auto syn = z_syndrome(fx.code, e);
    const auto all = fx.dec->decode_each(syn, false);
    ASSERT_EQ(all.size(), 12u);
    for (const auto& c : all) {
      if (!c.failed) EXPECT_EQ(z_syndrome(fx.code, c.qubits), syn) << to_string(c.path);
    }
    const int s = Decoder::select(all);
    ASSERT_GE(s, 0);
    for (const auto& c : all) {
      if (!c.failed) EXPECT_LE(all[s].weight(), c.weight());
    }
  }
}

TEST(decoder, x_errors_weight_one_via_merged_syndrome) {
  auto fx = make(Family::tetrahedral, 3);
  for (int q = 0; q < fx.code.n; ++q) {
    const int e[] = {q};
    const auto c = fx.dec->decode_x(x_syndrome(fx.code, e), DecodeMode::all());
    PauliFrame f, fix;
    f.x_support = {q};
    fix.x_support = c.qubits;
    EXPECT_FALSE(logical_outcome(fx.code, f, fix)[0]) << q;
  }
}

TEST(decoder, cubic_single_path_weight_one) {
  auto fx = make(Family::cubic, 4);
  const auto mode = DecodeMode::single(*parse_path("bg,y,r"));
  for (int q = 0; q < fx.code.n; ++q) {
    const int e[] = {q};
    const auto c = fx.dec->decode(z_syndrome(fx.code, e), mode);
    EXPECT_EQ(c.path, mode.path);
    EXPECT_TRUE(trivial_z(fx.code, symmetric_difference(e, c.qubits))) << q;
  }
}

TEST(decoder, trace_holds_three_stages) {
  auto fx = make(Family::tetrahedral, 3);
  const int e[] = {4};
  const auto c = fx.dec->decode_path(z_syndrome(fx.code, e), all_paths()[0], true);
  ASSERT_FALSE(c.failed);
  EXPECT_FALSE(c.marked[0].empty());
  int parity = 0;
  for (const auto& p : c.stages[2].pairs) parity += static_cast<int>(p.path.size());
  EXPECT_GE(parity, c.weight());
}
