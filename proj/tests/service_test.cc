#include "chroma3d/service.h"

#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"

using namespace chroma3d;

namespace {

class Server : public ::testing::Test {
 protected:
  void SetUp() override {
    service.mount(svr);
    port = svr.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    th = std::thread([this] { svr.listen_after_bind(); });
    svr.wait_until_ready();
  }
  void TearDown() override {
    svr.stop();
    th.join();
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port); }

  httplib::Server svr;
  Service service;
  int port = 0;
  std::thread th;
};

Json body(const httplib::Result& r) { return Json::parse(r->body); }

}  // namespace

TEST_F(Server, health_and_paths) {
  auto c = client();
  auto h = c.Get("/healthz");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->status, 200);
  auto p = c.Get("/api/paths");
  ASSERT_TRUE(p);
  EXPECT_EQ(body(p).size(), 12u);
}

TEST_F(Server, lattice_status_codes) {
  auto c = client();
  auto ok = c.Get("/api/lattice?family=tetrahedral&d=3");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
  EXPECT_EQ(body(ok)["n"], 15);
  EXPECT_EQ(body(ok)["format"], "lattice.v1");
  EXPECT_EQ(c.Get("/api/lattice?family=cubic&d=3")->status, 422);
  EXPECT_EQ(c.Get("/api/lattice?family=tetrahedral&d=11")->status, 422);
  EXPECT_EQ(c.Get("/api/lattice?family=hex&d=3")->status, 400);
  EXPECT_EQ(c.Get("/api/lattice?family=cubic")->status, 400);
  EXPECT_EQ(c.Get("/api/lattice?family=cubic&d=x4")->status, 400);
}

TEST_F(Server, decode_cancels_syndrome) {
  auto c = client();
  const CssCode code = extract_code(build_tetrahedral(5));
  for (const char* basis : {"z", "x"}) {
    Json req{{"family", "tetrahedral"}, {"d", 5}, {"errors", {3, 17}}, {"basis", basis}};
    auto r = c.Post("/api/decode", req.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200) << r->body;
    const Json j = body(r);
    const auto corr = j["correction"].get<QubitSet>();
    const QubitSet err{3, 17};
    // checked here against the code, not the server's own flag
    const auto res = symmetric_difference(err, corr);
    if (std::string(basis) == "z") {
      EXPECT_TRUE(z_syndrome(code, res).empty());
    } else {
      EXPECT_TRUE(merge_face_to_cell(code, x_syndrome(code, res)).empty());
    }
    EXPECT_FALSE(j["logical_failure"].get<bool>());
    EXPECT_EQ(j["trace"]["paths"].size(), 12u);
  }
  Json single{{"family", "cubic"}, {"d", 4}, {"errors", {5}}, {"mode", "single"}};
  auto s = c.Post("/api/decode", single.dump(), "application/json");
  ASSERT_EQ(s->status, 200);
  EXPECT_EQ(body(s)["path"], "bg,y,r");
  EXPECT_EQ(body(s)["trace"]["paths"].size(), 1u);
}

TEST_F(Server, decode_rejects_bad_input) {
  auto c = client();
  auto post = [&](const Json& j) { return c.Post("/api/decode", j.dump(), "application/json")->status; };
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"errors", {15}}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"errors", {-1}}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"errors", {1, 1}}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"errors", {"a"}}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"basis", "y"}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 3}, {"mode", "some"}}), 400);
  EXPECT_EQ(post({{"family", "tetrahedral"}, {"d", 4}, {"errors", {1}}}), 422);
  EXPECT_EQ(c.Post("/api/decode", "{not json", "application/json")->status, 400);
}

TEST_F(Server, cors_only_for_localhost) {
  auto c = client();
  auto a = c.Get("/healthz", {{"Origin", "http://localhost:5173"}});
  EXPECT_EQ(a->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  auto b = c.Get("/healthz", {{"Origin", "http://example.com"}});
  EXPECT_FALSE(b->has_header("Access-Control-Allow-Origin"));
  auto pre = c.Options("/api/decode", {{"Origin", "http://127.0.0.1:3000"}});
  EXPECT_EQ(pre->status, 204);
  EXPECT_TRUE(is_local_origin("http://[::1]:8080"));
  EXPECT_FALSE(is_local_origin("http://localhost.evil.com"));
  EXPECT_FALSE(is_local_origin("http://localhost:80x"));
}

TEST_F(Server, uncorrectable_lattice_still_answers) {
  // d=2: either a syndrome-cancelling correction or a 500 carrying a trace id
  auto c = client();
  const CssCode code = extract_code(build_cubic(2));
  for (int q = 0; q < 8; ++q) {
    Json req{{"family", "cubic"}, {"d", 2}, {"errors", {q}}};
    auto r = c.Post("/api/decode", req.dump(), "application/json");
    ASSERT_TRUE(r);
    if (r->status == 500) {
      EXPECT_EQ(body(r)["trace_id"].get<std::string>().size(), 16u);
      continue;
    }
    ASSERT_EQ(r->status, 200);
    const QubitSet err{q};
    EXPECT_TRUE(z_syndrome(code, symmetric_difference(err, body(r)["correction"].get<QubitSet>())).empty());
  }
}

TEST(service, cache_returns_same_entry) {
  Service s;
  auto a = s.entry(Family::tetrahedral, 3);
  auto b = s.entry(Family::tetrahedral, 3);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), s.entry(Family::cubic, 4).get());
}
