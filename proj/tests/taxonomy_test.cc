#include "cdwsd/taxonomy.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace cdwsd;
using cdwsd::testing::load_from_string;
using cdwsd::testing::naive_stats;

namespace {

const char kChain[] =
    "SYNSET\troot\t\tentity\n"
    "SYNSET\tmid\troot\tobject\n"
    "SYNSET\tleaf\tmid\tx\n"
    "SENSE\tx\t1\tleaf\tnoun.thing.0\n";

const char kDiamond[] =
    "SYNSET\ttop\t\ttop\n"
    "SYNSET\tleft\ttop\tleft\n"
    "SYNSET\tright\ttop\tright\n"
    "SYNSET\tbottom\tleft,right\tbottom\n";

std::string perfect_tree(std::uint32_t arity, std::uint32_t height) {
  std::ostringstream out;
  std::vector<std::size_t> level{0};
  std::size_t next = 1;
  out << "SYNSET\tt0\t\tv0\n";
  for (std::uint32_t h = 1; h < height; ++h) {
    std::vector<std::size_t> fresh;
    for (std::size_t parent : level) {
      for (std::uint32_t k = 0; k < arity; ++k) {
        out << "SYNSET\tt" << next << "\tt" << parent << "\tv" << next << "\n";
        fresh.push_back(next++);
      }
    }
    level = std::move(fresh);
  }
  return out.str();
}

}  // namespace

TEST(LoadTaxonomy, ChainOfThree) {
  const Taxonomy t = load_from_string(kChain);
  ASSERT_EQ(t.size(), 3u);
  const SynsetIndex root = t.index_of("root");
  EXPECT_EQ(t.height(root), 3u);
  EXPECT_EQ(t.descendants(root), 3u);
  EXPECT_EQ(t.senses("x").size(), 1u);
  EXPECT_EQ(t.senses("x")[0].synset, t.index_of("leaf"));
}

TEST(LoadTaxonomy, DanglingHypernymFails) {
  EXPECT_THROW(load_from_string("SYNSET\ta\tmissing\tw\n"), ParseError);
}

TEST(LoadTaxonomy, CycleReportsNodeIds) {
  try {
    load_from_string(
        "SYNSET\ta\tc\taw\n"
        "SYNSET\tb\ta\tbw\n"
        "SYNSET\tc\tb\tcw\n");
    FAIL() << "cycle not detected";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cycle"), std::string::npos);
    EXPECT_NE(msg.find("a"), std::string::npos);
    EXPECT_NE(msg.find("b"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
}

TEST(LoadTaxonomy, DuplicateSynsetIdFails) {
  EXPECT_THROW(load_from_string("SYNSET\ta\t\tw\nSYNSET\ta\t\tw\n"), ParseError);
}

TEST(LoadTaxonomy, SyntaxErrorsCarryLineNumbers) {
  try {
    load_from_string("SYNSET\ta\t\tw\nBOGUS\tx\n");
    FAIL() << "bad record accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_from_string("SYNSET\ta\t\t\n"), ParseError);     // empty word list
  EXPECT_THROW(load_from_string("SYNSET\ta\n"), ParseError);         // too few fields
  EXPECT_THROW(load_from_string("SENSE\tw\t0\ta\tk.0\n"), ParseError);  // 0 sense number
  try {
    load_from_string("SYNSET\t\t\tw\n");  // empty id, field starts at column 8
    FAIL() << "empty id accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 8u);
  }
}

TEST(LoadTaxonomy, DuplicateSenseEntriesFail) {
  const std::string base = "SYNSET\ta\t\tw\nSYNSET\tb\t\tw\n";
  EXPECT_THROW(
      load_from_string(base + "SENSE\tw\t1\ta\tnoun.x.0\nSENSE\tw\t1\tb\tnoun.x.1\n"),
      ParseError);
  EXPECT_THROW(
      load_from_string(base + "SENSE\tw\t1\ta\tnoun.x.0\nSENSE\tw\t2\ta\tnoun.x.1\n"),
      ParseError);
  EXPECT_THROW(load_from_string(base + "SENSE\tw\t1\tmissing\tnoun.x.0\n"), ParseError);
}

TEST(LoadTaxonomy, EmptyInputGivesEmptyTaxonomy) {
  const Taxonomy t = load_from_string("# only a comment\n");
  EXPECT_EQ(t.size(), 0u);
  ASSERT_FALSE(t.warnings().empty());
}

TEST(LoadTaxonomy, Binary31Tree) {
  const Taxonomy t = cdwsd::testing::load_fixture("binary31.tax");
  ASSERT_EQ(t.size(), 31u);
  const SynsetIndex root = t.index_of("b1");
  EXPECT_EQ(t.descendants(root), 31u);
  EXPECT_EQ(t.height(root), 5u);
  for (SynsetIndex i = 0; i < t.size(); ++i) {
    if (t.synset(i).hyponyms.empty()) {
      EXPECT_EQ(t.nhyp(i), 0.0);
    } else {
      EXPECT_NEAR(t.nhyp(i), 2.0, 1e-9);
    }
  }
}

TEST(Descendants, LeafCountsItself) {
  const Taxonomy t = load_from_string(kChain);
  EXPECT_EQ(t.descendants(t.index_of("leaf")), 1u);
}

TEST(Descendants, SevenNodeBinaryTree) {
  const Taxonomy t = cdwsd::testing::load_fixture("binary7.tax");
  EXPECT_EQ(t.descendants(t.index_of("a1")), 7u);
  EXPECT_EQ(t.height(t.index_of("a1")), 3u);
}

TEST(Descendants, DiamondCountsSharedNodeOnce) {
  const Taxonomy t = load_from_string(kDiamond);
  EXPECT_EQ(t.descendants(t.index_of("top")), 4u);
  EXPECT_EQ(t.height(t.index_of("top")), 3u);
}

TEST(Descendants, UnknownIdThrows) {
  const Taxonomy t = load_from_string(kChain);
  EXPECT_THROW(t.index_of("nope"), std::out_of_range);
}

TEST(Ancestors, RootIsItsOwnAncestor) {
  const Taxonomy t = load_from_string(kChain);
  const auto a = t.ancestors(t.index_of("root"));
  EXPECT_EQ(a, std::vector<SynsetIndex>{t.index_of("root")});
}

TEST(Ancestors, ChainAndDiamond) {
  const Taxonomy chain = load_from_string(kChain);
  EXPECT_EQ(chain.ancestors(chain.index_of("leaf")).size(), 3u);

  const Taxonomy diamond = load_from_string(kDiamond);
  EXPECT_EQ(diamond.ancestors(diamond.index_of("bottom")).size(), 4u);
}

TEST(SolveNhyp, BinaryTreeCases) {
  EXPECT_NEAR(solve_nhyp(7, 3), 2.0, 1e-9);
  EXPECT_NEAR(solve_nhyp(31, 5), 2.0, 1e-9);
}

TEST(SolveNhyp, DegenerateChains) {
  for (std::uint32_t h = 2; h <= 32; ++h) EXPECT_NEAR(solve_nhyp(h, h), 1.0, 1e-9);
  EXPECT_EQ(solve_nhyp(1, 1), 0.0);
}

TEST(SolveNhyp, QuadraticCase) {
  // 1 + x + x^2 = 10 has the closed-form root (sqrt(37) - 1) / 2.
  const double expected = (std::sqrt(37.0) - 1.0) / 2.0;
  EXPECT_NEAR(solve_nhyp(10, 3), expected, 1e-9);
  EXPECT_NEAR(solve_nhyp(10, 3), 2.5413812651491098, 1e-9);
}

TEST(SolveNhyp, ResidualWithinTolerance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::uint32_t h = 2 + rng() % 15;
    const std::uint32_t d = h + rng() % 1000;
    const double x = solve_nhyp(d, h);
    long double sum = 0.0L, term = 1.0L;
    for (std::uint32_t k = 0; k < h; ++k) {
      sum += term;
      term *= x;
    }
    EXPECT_LE(std::abs(static_cast<double>(sum - d)), 1e-9) << "d=" << d << " h=" << h;
  }
}

TEST(SolveNhyp, RejectsCorruptStats) {
  EXPECT_THROW(solve_nhyp(2, 3), std::invalid_argument);
  EXPECT_THROW(solve_nhyp(0, 1), std::invalid_argument);
}

TEST(SolveNhyp, PerfectKaryTrees) {
  for (std::uint32_t k = 2; k <= 5; ++k) {
    for (std::uint32_t h = 2; h <= 5; ++h) {
      const Taxonomy t = load_from_string(perfect_tree(k, h));
      const SynsetIndex root = t.index_of("t0");
      EXPECT_NEAR(t.nhyp(root), static_cast<double>(k), 1e-9) << "k=" << k << " h=" << h;
    }
  }
}

TEST(Stats, MatchBruteForceOnRandomDags) {
  std::mt19937_64 rng(42);
  cdwsd::testing::RandomTaxonomyOptions opt;
  opt.max_synsets = 60;
  for (int round = 0; round < 50; ++round) {
    const Taxonomy t = load_from_string(cdwsd::testing::random_taxonomy_source(rng, opt));
    for (SynsetIndex c = 0; c < t.size(); ++c) {
      const auto ns = naive_stats(t, c);
      ASSERT_EQ(t.descendants(c), ns.descendants) << t.id(c);
      ASSERT_EQ(t.height(c), ns.height) << t.id(c);
      ASSERT_GE(t.descendants(c), t.height(c));
    }
  }
}

TEST(Stats, AncestorsAndDescendantsAgree) {
  std::mt19937_64 rng(43);
  cdwsd::testing::RandomTaxonomyOptions opt;
  opt.max_synsets = 40;
  for (int round = 0; round < 20; ++round) {
    const Taxonomy t = load_from_string(cdwsd::testing::random_taxonomy_source(rng, opt));
    for (SynsetIndex c = 0; c < t.size(); ++c) {
      const auto down = cdwsd::testing::naive_down_closure(t, c);
      for (SynsetIndex d : down) {
        const auto up = t.ancestors(d);
        ASSERT_TRUE(std::binary_search(up.begin(), up.end(), c))
            << t.id(c) << " reaches " << t.id(d) << " but is not among its ancestors";
      }
    }
  }
}

TEST(LoadTaxonomy, GarbageInputsNeverCrash) {
  std::mt19937_64 rng(321);
  const std::string alphabet = "SYNSET\tENSE\t\n#,abc0123 .";
  for (int round = 0; round < 3000; ++round) {
    std::string text;
    const std::size_t len = rng() % 80;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    try {
      load_from_string(text);
    } catch (const ParseError&) {
    }
  }
}

TEST(Stats, TallTaxonomyOnlyWarns) {
  std::ostringstream out;
  out << "SYNSET\tc0\t\tv0\n";
  for (int i = 1; i < 18; ++i)
    out << "SYNSET\tc" << i << "\tc" << (i - 1) << "\tv" << i << "\n";
  const Taxonomy t = load_from_string(out.str());
  EXPECT_EQ(t.height(t.index_of("c0")), 18u);
  ASSERT_FALSE(t.warnings().empty());
  EXPECT_NE(t.warnings().front().find("16"), std::string::npos);
}
