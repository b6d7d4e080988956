#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
  workbench::Json json() const { return workbench::Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = workbench::runCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string example(const std::string& name) { return std::string(EXAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, CompatExample) {
  auto r = run({"compat", "--a", "(0,2)", "--b", "(1,3)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"compatible\":false,\"extDirection\":\"A_SUB\",\"middle\":[\"(0,3)\",\"(1,2)\"]}\n");
  r = run({"compat", "--a", "(1,3)", "--b", "(0,2)"});
  EXPECT_EQ(r.json()["extDirection"], "B_SUB");
  r = run({"compat", "--a", "(0,1)", "--b", "(2,3)"});
  EXPECT_EQ(r.json()["compatible"], true);
  EXPECT_EQ(r.json()["extDirection"], "NONE");
  EXPECT_TRUE(r.json()["middle"].empty());
}

TEST(Cli, MutateProjectives) {
  auto r = run({"mutate", "--cluster", example("projectives.json"), "--at", "P_1)"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["added"], "M_{1}");
  EXPECT_EQ(r.json()["middle"], workbench::Json::array({"(-inf,1]"}));
  EXPECT_EQ(run({"mutate", "--cluster", "projectives", "--at", "P_1)"}).out, r.out);
}

TEST(Cli, PolygonEnumerate) {
  auto r = run({"polygon", "--n", "2", "--enumerate"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["count"], 5);
  EXPECT_EQ(r.json()["triangulations"].size(), 5u);
  r = run({"polygon", "--n", "3", "--flip-graph"});
  EXPECT_EQ(r.json()["nodes"], 14);
  EXPECT_EQ(r.json()["edges"], 21);
  r = run({"polygon", "--n", "2", "--flip", "1-3"});
  EXPECT_EQ(r.json()["added"], "2-4");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"mutate", "--cluster", "projectives", "--at", "P_1"}).code, 2);
  EXPECT_EQ(run({"mutate", "--cluster", "projectives", "--at", "P_{+inf}"}).code, 2);
  EXPECT_EQ(run({"compat", "--a", "(0", "--b", "(1,2)"}).code, 1);
  EXPECT_EQ(run({"compat", "--a", "(0,1)"}).code, 1);
  EXPECT_EQ(run({"nonsense"}).code, 1);
  EXPECT_EQ(run({"cluster", "verify", "--cluster", "missing.json"}).code, 1);
  EXPECT_EQ(run({"polygon", "--n", "2", "--flip", "2-4"}).code, 2);
  EXPECT_EQ(run({"cpi", "finverse", "--a", "1", "--b", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Infgon) {
  auto r = run({"infgon", "report", "--arcs", example("fountain.arcs.json")});
  EXPECT_EQ(r.json()["kind"], "fountain");
  r = run({"infgon", "noskip", "--l", "1"});
  EXPECT_EQ(r.json()["noSkip"], true);
  r = run({"infgon", "mutate", "--arcs", example("quadrilateral.arcs.json"), "--at", "0-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["added"], "1-3");
  EXPECT_FALSE(r.json().contains("note"));
  r = run({"infgon", "window", "--arcs", example("quadrilateral.arcs.json")});
  EXPECT_TRUE(r.json()["compatibleNonMembers"].empty());
}

TEST(Cli, CPiAndArSpace) {
  auto r = run({"cpi", "fmap", "--object", "1,1/2"});
  EXPECT_EQ(r.json()["symbolic"], "(0,1)");
  r = run({"cpi", "compat", "--u", "0,1/2", "--v", "1/4,3/4"});
  EXPECT_EQ(r.json()["compatible"], false);
  r = run({"cpi", "embed", "--oracle", example("vertical-line.oracle.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"arspace", "classify", "--quiver", example("nonnegative-integers.quiver.json")});
  EXPECT_EQ(r.json()["class"], "CLASS_HALF_BOUNDED");
  r = run({"arspace", "gamma", "--interval", "{0}"});
  EXPECT_EQ(r.json()["degenerate"], true);
  r = run({"arspace", "svg", "--cluster", "tinf"});
  EXPECT_NE(r.out.find("<svg"), std::string::npos);
}

TEST(Cli, VerifyIsDeterministic) {
  std::vector<std::string> args{"--seed", "9", "--budget", "500", "cluster", "verify", "--cluster", "tinf"};
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}
