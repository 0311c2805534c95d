#include <gtest/gtest.h>

#include <sys/wait.h>

#include "ecat/cli.hpp"
#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  for (auto& a : args)
    if (a.size() > 5 && a.ends_with(".ecat")) a = fixture_path(a);
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return Outcome{code, out.str(), err.str()};
}

struct Case {
  std::vector<std::string> args;
  int code;
  std::string needle;  // expected in stdout, or stderr on failure
};

}  // namespace

TEST(Cli, ExitCodes) {
  const std::vector<Case> cases{
      {{"check", "bool_preorder.ecat"}, 0, "# verdict: ok"},
      {{"check", "broken_triangle.ecat"}, 1, "kelly.ecomp_typing at (0, 1, 2)"},
      {{"check", "base_cost.ecat", "--mutations", "5"}, 0, "mutations"},
      {{"check", "bool_vee.ecat", "cost_quasi.ecat", "--jobs", "2"}, 0, "enrichment Q"},
      {{"check", "negative/unknown_statement.ecat"}, 2, "objcts"},
      {{"check"}, 2, ""},
      {{"check", "no_such_file.ecat"}, 2, ""},
      {{"frobnicate", "bool_vee.ecat"}, 2, ""},
      {{"--format", "yaml", "check", "bool_vee.ecat"}, 2, ""},
      {{"rezk", "two_iso_points.ecat"}, 0, "# skeletal = true"},
      {{"rezk", "empty.ecat"}, 2, "declares no enrichment"},
      {{"factorize", "functor_inclusion.ecat"}, 0, "# fully_faithful = true"},
      {{"equivalence", "functor_collapse.ecat"}, 0, ""},
      {{"equivalence", "functor_inclusion.ecat"}, 1, "factor.essentially_surjective at (1)"},
      {{"yoneda-check", "bool_preorder.ecat"}, 0, ""},
      {{"precomp-check", "precomp_collapse.ecat"}, 0, ""},
      {{"kleisli", "monad_top_point.ecat", "--variant", "raw"}, 0, "M_kleisli"},
      {{"kleisli", "monad_z2.ecat"}, 0, "M_comparison"},
      {{"kleisli-ump", "cocone_top_point.ecat"}, 0, "# mediators"},
      {{"kleisli-ump", "cocone_z2.ecat"}, 0, "# mediators = 2"},
      {{"kleisli-ump", "monad_top_point.ecat", "--cocone", "free"}, 1, "extend.object_unique"},
      {{"enum-functors", "functor_inclusion.ecat", "--from", "A", "--to", "P"}, 0, "# count = 6"},
      {{"construct", "opposite", "cost_quasi.ecat"}, 0, "Q_op"},
      {{"construct", "self", "base_bool.ecat"}, 0, ""},
      {{"construct", "full-sub", "bool_preorder.ecat", "--keep", "0,2"}, 0, ""},
      {{"construct", "functor-category", "bool_chain2.ecat"}, 0, "# gaunt = true"},
      {{"construct", "functor-category", "set_z2.ecat"}, 0, "# automorphisms = [2,2]"},
      {{"construct", "change-of-base", "bool_vee.ecat", "base_cost.ecat", "--along", "bool-to-cost"}, 0, "V_C"},
      {{"construct", "change-of-base", "bool_vee.ecat", "--along", "bool-to-cost"}, 2, "needs a cost base"},
      {{"construct", "change-of-base", "bool_vee.ecat", "--along", "collapse"}, 1, "refused = true"},
      {{"construct", "change-of-base", "cost_quasi.ecat", "--along", "collapse"}, 1, "refused = true"},
      {{"construct", "kelly", "set_arrow.ecat"}, 0, ""},
      {{"construct", "sideways", "bool_vee.ecat"}, 2, ""},
      {{"enum-functors", "functor_inclusion.ecat", "--from", "X"}, 2, "'X'"},
  };
  for (const auto& c : cases) {
    Outcome r = invoke(c.args);
    std::string cmd;
    for (const auto& a : c.args) cmd += a + " ";
    EXPECT_EQ(r.code, c.code) << cmd << "\n" << r.out << r.err;
    if (!c.needle.empty())
      EXPECT_TRUE(r.out.find(c.needle) != std::string::npos || r.err.find(c.needle) != std::string::npos)
          << cmd << " lacks '" << c.needle << "'\n" << r.out << r.err;
  }
}

TEST(Cli, TextOutputIsADocument) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"construct", "opposite", "cost_triangle.ecat"},
        {"rezk", "two_iso_points.ecat"},
        {"kleisli", "monad_top_point.ecat"},
        {"factorize", "functor_collapse.ecat"}}) {
    Outcome r = invoke(args);
    ASSERT_EQ(r.code, 0) << r.err;
    auto p = dsl::parse(r.out);
    ASSERT_TRUE(p.ok()) << r.out;
    std::ostringstream out, err;
    dsl::Document doc = p.document;
    for (const auto* it : doc.all<dsl::EnrichmentDecl>()) {
      const auto& e = std::get<dsl::EnrichmentDecl>(it->decl);
      ASSERT_TRUE(e.enrichment) << it->name;
      EXPECT_TRUE(check_enrichment(*e.enrichment).ok()) << it->name;
    }
  }
}

TEST(Cli, JsonOutput) {
  Outcome r = invoke({"--format", "json", "check", "broken_triangle.ecat"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("command"), "check");
  EXPECT_FALSE(j.at("ok").get<bool>());
  bool named = false;
  for (const auto& c : j.at("checks"))
    for (const auto& f : c.at("failures")) named = named || f.at("law") == "kelly.ecomp_typing";
  EXPECT_TRUE(named) << r.out;

  Outcome q = invoke({"--format", "json", "rezk", "two_iso_points.ecat"});
  ASSERT_EQ(q.code, 0);
  auto k = nlohmann::json::parse(q.out);
  EXPECT_EQ(k.at("facts").at("objects"), 1);
  EXPECT_TRUE(k.contains("document"));
}

TEST(Cli, MultiFileInputsShareDeclarations) {
  Outcome r = invoke({"kleisli-ump", "monad_top_point.ecat", "multi/point_cocone.ecat"});
  EXPECT_EQ(r.code, 0) << r.err;
  Outcome alone = invoke({"check", "multi/point_cocone.ecat"});
  EXPECT_EQ(alone.code, 2);
}

TEST(Cli, RealBinary) {
  auto status = [](const std::string& args) {
    std::string cmd = std::string(ECAT_CLI) + " " + args + " > /dev/null 2>&1";
    int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("check " + fixture_path("bool_preorder.ecat")), 0);
  EXPECT_EQ(status("check " + fixture_path("broken_triangle.ecat")), 1);
  EXPECT_EQ(status("check " + fixture_path("negative/missing_brace.ecat")), 2);
  EXPECT_EQ(status("--help"), 0);
}
