#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "gspin/errors.hpp"

using namespace gspin;
using namespace gspin::cli;

TEST(Cli, IntegerLists) {
  EXPECT_EQ(parse_int_list("2..5"), (std::vector<int>{2, 3, 4, 5}));
  EXPECT_EQ(parse_int_list("8, 16,32"), (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(parse_int_list("2..3,7"), (std::vector<int>{2, 3, 7}));
  EXPECT_THROW(parse_int_list("5..2"), InvalidArgument);
  EXPECT_THROW(parse_int_list("3,,4"), InvalidArgument);
  EXPECT_THROW(parse_int_list("x"), InvalidArgument);
}

TEST(Cli, RealLists) {
  EXPECT_EQ(parse_real_list("1,0.5,-2e-1"), (std::vector<double>{1.0, 0.5, -0.2}));
  EXPECT_THROW(parse_real_list("1,abc"), InvalidArgument);
}

TEST(Cli, VerdictPayload) {
  const CommandOutput out = run_verdict({{3, 4}});
  const auto& rows = out.payload["verdicts"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["d"], 3);
  EXPECT_TRUE(rows[0]["closed_with_pairwise"].get<bool>());
  EXPECT_FALSE(rows[1]["closed_with_pairwise"].get<bool>());
  EXPECT_EQ(out.csv.substr(0, out.csv.find('\n')), "d,closed,chain,a_dim,mu_dim,stabilizer_dim");
  EXPECT_THROW(run_verdict({{11}}), InvalidArgument);
  EXPECT_THROW(run_verdict({}), InvalidArgument);
}

TEST(Cli, InvariantsUseOneBasedSparseEntries) {
  InvariantsParams p;
  p.group = "special-orthogonal";
  p.d = 3;
  p.order = 3;
  const CommandOutput out = run_invariants(p);
  EXPECT_EQ(out.payload["dimension"], 1);
  const std::string text = out.payload["basis"].dump();
  EXPECT_NE(text.find("[1,2,3]"), std::string::npos);
  p.constraints = "bogus";
  EXPECT_THROW(run_invariants(p), InvalidArgument);
}

TEST(Cli, PrecessModels) {
  PrecessParams p;
  p.directions = 100;
  p.t_max = 1.0;
  const CommandOutput q = run_precess(p);
  EXPECT_EQ(q.payload["classification"], "quantum");
  EXPECT_GE(q.payload["min_eigenvalue"].get<double>(), -1e-10);

  p.model = "d4";
  const CommandOutput d4 = run_precess(p);
  EXPECT_LT(d4.payload["norm_drift"].get<double>(), 1e-10);
  p.model = "d5";
  EXPECT_THROW(run_precess(p), InvalidArgument);
}

TEST(Cli, QlimitAndCoherent) {
  QlimitParams q;
  q.n_list = "8,64,512";
  const CommandOutput ql = run_qlimit(q);
  EXPECT_EQ(ql.payload["rows"].size(), 3u);
  const double slope = ql.payload["slope"].get<double>();
  EXPECT_LT(slope, -0.85);
  EXPECT_GT(slope, -1.15);
  q.rule = "other";
  EXPECT_THROW(run_qlimit(q), InvalidArgument);

  CoherentParams c;
  c.angles = 3;
  const CommandOutput co = run_coherent(c);
  EXPECT_EQ(co.payload["overlaps"][1]["overlap"].get<double>(), std::ldexp(1.0, -10));
}

TEST(Cli, EnvelopeAndErrors) {
  const CommandOutput out = run_coherent({});
  const nlohmann::json env = make_envelope("coherent", out, 9, 0.5);
  EXPECT_EQ(env["schema"], kSchemaVersion);
  EXPECT_EQ(env["command"], "coherent");
  EXPECT_EQ(env["seed"], 9);
  EXPECT_TRUE(env.contains("version"));
  EXPECT_TRUE(env.contains("payload"));
  const nlohmann::json err = error_record("guard", "too big");
  EXPECT_EQ(err["error"]["kind"], "guard");
  EXPECT_EQ(err["error"]["message"], "too big");
}
