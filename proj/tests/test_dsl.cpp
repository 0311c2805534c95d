#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace ecat;
using namespace ecat::testing;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> golden_files() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(ECAT_FIXTURE_DIR))
    if (e.is_regular_file() && e.path().extension() == ".ecat") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

struct Negative {
  std::string file;
  std::uint32_t line, col;
  std::string message;
};

std::vector<Negative> negatives() {
  std::ifstream in(fixture_path("negative/expected.tsv"));
  std::vector<Negative> out;
  std::string row;
  while (std::getline(in, row)) {
    std::stringstream ss(row);
    Negative n;
    std::string line, col;
    std::getline(ss, n.file, '\t');
    std::getline(ss, line, '\t');
    std::getline(ss, col, '\t');
    std::getline(ss, n.message);
    n.line = std::stoul(line);
    n.col = std::stoul(col);
    out.push_back(n);
  }
  return out;
}

const dsl::Diagnostic& first_error(const dsl::ParseResult& p) {
  for (const auto& d : p.diagnostics)
    if (d.severity == dsl::Severity::error) return d;
  throw std::logic_error("no error diagnostic");
}

dsl::Document round_trip(const dsl::Document& doc) { return dsl::parse_or_throw(dsl::serialize(doc)); }

}  // namespace

TEST(Golden, CorpusIsLargeEnough) { EXPECT_GE(golden_files().size(), 30u); }

TEST(Golden, SerializationReproducesEveryFileByteForByte) {
  for (const auto& f : golden_files()) {
    const std::string text = read_file(fixture_path(f));
    auto p = dsl::parse(text);
    ASSERT_TRUE(p.ok()) << f << ": " << dsl::format(first_error(p), f);
    EXPECT_EQ(dsl::serialize(p.document), text) << f;
  }
}

TEST(Golden, SemanticsSurviveARoundTrip) {
  for (const auto& f : golden_files()) {
    auto doc = load_fixture(f);
    auto back = round_trip(doc);
    ASSERT_EQ(back.items.size(), doc.items.size()) << f;
    for (std::size_t i = 0; i < doc.items.size(); ++i) {
      EXPECT_EQ(back.items[i].name, doc.items[i].name);
      EXPECT_EQ(back.items[i].decl.index(), doc.items[i].decl.index());
      if (auto* e = std::get_if<dsl::EnrichmentDecl>(&doc.items[i].decl); e && e->enrichment) {
        const auto& b = std::get<dsl::EnrichmentDecl>(back.items[i].decl);
        ASSERT_TRUE(b.enrichment);
        EXPECT_EQ(b.enrichment->under, e->enrichment->under) << f;
        EXPECT_EQ(b.enrichment->hom_obj, e->enrichment->hom_obj) << f;
      }
      if (auto* F = std::get_if<dsl::FunctorDecl>(&doc.items[i].decl)) {
        const auto& G = std::get<dsl::FunctorDecl>(back.items[i].decl);
        EXPECT_EQ(G.functor.ob_map, F->functor.ob_map);
        EXPECT_EQ(G.functor.e_fun, F->functor.e_fun);
      }
    }
  }
}

TEST(Golden, BrokenKellyDataIsKeptButMarkedUnlawful) {
  auto doc = load_fixture("broken_triangle.ecat");
  auto* e = doc.get<dsl::EnrichmentDecl>("Tri");
  ASSERT_TRUE(e);
  EXPECT_FALSE(e->enrichment);
  ASSERT_TRUE(e->kelly);
  auto r = check_kelly(*e->kelly);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.failures.front().law, "kelly.ecomp_typing");
}

TEST(Negative, EachFileHasItsSpannedDiagnostic) {
  auto ns = negatives();
  EXPECT_GE(ns.size(), 12u);
  for (const auto& n : ns) {
    auto p = dsl::parse(read_file(fixture_path("negative/" + n.file)));
    ASSERT_FALSE(p.ok()) << n.file;
    const auto& d = first_error(p);
    EXPECT_EQ(d.span.begin.line, n.line) << n.file;
    EXPECT_EQ(d.span.begin.col, n.col) << n.file;
    EXPECT_EQ(d.message, n.message) << n.file;
    EXPECT_THROW(dsl::parse_or_throw(read_file(fixture_path("negative/" + n.file)), n.file), dsl::ParseFailure);
  }
}

TEST(Negative, EveryFileIsListed) {
  std::set<std::string> listed, present;
  for (const auto& n : negatives()) listed.insert(n.file);
  for (const auto& e : fs::directory_iterator(fixture_path("negative")))
    if (e.path().extension() == ".ecat") present.insert(e.path().filename().string());
  EXPECT_EQ(listed, present);
}

TEST(Negative, MisspellingsGetSuggestions) {
  const std::map<std::string, std::string> want{
      {"unknown_builtin.ecat", "bool"}, {"unknown_kind.ecat", "functor"}, {"unknown_statement.ecat", "objects"}};
  for (const auto& [file, suggestion] : want) {
    auto p = dsl::parse(read_file(fixture_path("negative/" + file)));
    EXPECT_EQ(first_error(p).suggestion, suggestion) << file;
  }
}

TEST(Suggestion, ClosestNameByEditDistance) {
  EXPECT_EQ(dsl::edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(dsl::edit_distance("", "abc"), 3u);
  EXPECT_EQ(dsl::closest("enrichmnt", dsl::item_kinds()), "enrichment");
  EXPECT_EQ(dsl::closest("zzzzzzzz", dsl::item_kinds()), "");
}

TEST(Json, MirrorsTheDocument) {
  for (const auto& f : golden_files()) {
    auto doc = load_fixture(f);
    auto j = dsl::to_json(doc);
    const auto& items = j.is_array() ? j : j.at("items");
    ASSERT_EQ(items.size(), doc.items.size()) << f;
    for (std::size_t i = 0; i < doc.items.size(); ++i) {
      const auto& it = items[i];
      EXPECT_EQ(it.at("name"), doc.items[i].name);
      EXPECT_EQ(it.at("kind"), dsl::kind_name(doc.items[i].decl));
      if (auto* e = std::get_if<dsl::EnrichmentDecl>(&doc.items[i].decl)) {
        EXPECT_EQ(it.at("lawful").get<bool>(), e->enrichment != nullptr);
        if (!e->enrichment) continue;
        const std::size_t n = e->enrichment->objects();
        ASSERT_EQ(it.at("objects").get<std::size_t>(), n);
        for (ObjId x = 0; x < n; ++x)
          for (ObjId y = 0; y < n; ++y) {
            EXPECT_EQ(it.at("homobj")[x][y].get<ObjId>(), e->enrichment->hom(x, y));
            EXPECT_EQ(it.at("underlying").at("hom")[x][y].get<std::uint32_t>(), e->enrichment->under.hom_size(x, y));
          }
      }
      if (auto* F = std::get_if<dsl::FunctorDecl>(&doc.items[i].decl))
        EXPECT_EQ(it.at("ob").get<std::vector<ObjId>>(), F->functor.ob_map);
    }
  }
}

TEST(Programmatic, RandomSetEnrichmentsRoundTrip) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 20; ++i) {
    auto sets = finset_base(3);
    EnrichPtr E = canonical_set_enrichment(random_category(rng), sets);
    dsl::Document doc;
    doc.add("S", dsl::BaseDecl{sets});
    doc.add("E", dsl::EnrichmentDecl{"S", std::nullopt, E});
    const std::string text = dsl::serialize(doc);
    auto back = dsl::parse_or_throw(text);
    auto* b = back.get<dsl::EnrichmentDecl>("E");
    ASSERT_TRUE(b && b->enrichment) << text;
    EXPECT_EQ(b->enrichment->under, E->under) << text;
    EXPECT_EQ(b->enrichment->hom_obj, E->hom_obj);
    EXPECT_EQ(dsl::serialize(back), text);
  }
}

TEST(Programmatic, ThinEnrichmentsOmitImpliedEntries) {
  dsl::Document doc;
  doc.add("B", dsl::BaseDecl{bool_base()});
  doc.add("P", dsl::EnrichmentDecl{"B", std::nullopt, chain(3)});
  const std::string text = dsl::serialize(doc);
  EXPECT_EQ(text.find("eid"), std::string::npos) << text;
  EXPECT_EQ(text.find("ecomp"), std::string::npos) << text;
  auto back = dsl::parse_or_throw(text);
  EXPECT_EQ(back.get<dsl::EnrichmentDecl>("P")->enrichment->under, chain(3)->under);
}

TEST(Document, DuplicateNamesAreRejected) {
  dsl::Document doc;
  doc.add("B", dsl::BaseDecl{bool_base()});
  EXPECT_THROW(doc.add("B", dsl::BaseDecl{bool_base()}), StructuralError);
}
