#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "elkbc/theory.hpp"
#include "oracles.hpp"

namespace elkbc {
namespace {

TEST(Interner, ReservedConceptsComeFirst) {
  Signature sig;
  EXPECT_EQ(sig.concepts.find("owl:Thing"), kTop);
  EXPECT_EQ(sig.concepts.find("owl:Nothing"), kBottom);
  EXPECT_EQ(sig.concept_count(), 2u);
}

TEST(Interner, IsBijective) {
  Interner in;
  const auto a = in.intern("alpha");
  const auto b = in.intern("beta");
  EXPECT_EQ(in.intern("alpha"), a);
  EXPECT_NE(a, b);
  EXPECT_EQ(in.name(in.intern("gamma")), "gamma");
  EXPECT_EQ(in.find(in.name(b)), b);
  EXPECT_FALSE(in.find("delta").has_value());
  EXPECT_THROW(in.name(99), std::out_of_range);
}

TEST(Parse, Gci2Line) {
  const Theory t = parse_normalized("GCI2 P hf GO1\n");
  ASSERT_EQ(t.size(), 1u);
  const auto& ax = t.axioms()[0];
  EXPECT_EQ(ax.variant, Variant::kGci2);
  EXPECT_EQ(t.signature().concepts.name(ax.slots[0]), "P");
  EXPECT_EQ(t.signature().roles.name(ax.slots[1]), "hf");
  EXPECT_EQ(t.signature().concepts.name(ax.slots[2]), "GO1");
}

TEST(Parse, ArityMismatchNamesLine) {
  try {
    parse_normalized("GCI1 A B");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("arity"), std::string::npos);
  }
}

TEST(Parse, UnknownTagReportsLineAndToken) {
  try {
    parse_normalized("GCI0 A B\n\nGCI9 A B\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("GCI9"), std::string::npos);
  }
}

TEST(Parse, CommentsAndBlankLinesAreSkipped) {
  const Theory t = parse_normalized("# header\n\n  GCI0 A B  \n# trailing\n");
  EXPECT_EQ(t.size(), 1u);
}

TEST(Parse, DuplicatesAreDropped) {
  const Theory t = parse_normalized("GCI0 A B\nGCI0 A B\nGCI0 B A\n");
  EXPECT_EQ(t.size(), 2u);
}

TEST(Parse, BottomTargetsBecomeBotVariants) {
  const Theory t = parse_normalized(
      "GCI0 A owl:Nothing\nGCI1 A B owl:Nothing\nGCI3 r A owl:Nothing\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.axioms()[0], NormalizedAxiom::gci0_bot(2));
  EXPECT_EQ(t.axioms()[1].variant, Variant::kGci1Bot);
  EXPECT_EQ(t.axioms()[2].variant, Variant::kGci3Bot);
}

TEST(Parse, EveryVariantTag) {
  const Theory t = parse_normalized(
      "GCI0 A B\nGCI1 A B C\nGCI2 A r B\nGCI3 r A B\nGCI0_BOT A\nGCI1_BOT A B\n"
      "GCI3_BOT r A\nRI0 r s\nRI1 r s t\n");
  const auto stats = signature_stats(t);
  for (auto v : kAllVariants) EXPECT_EQ(stats.count(v), 1u) << variant_tag(v);
  EXPECT_EQ(stats.concepts, 5u);
  EXPECT_EQ(stats.roles, 3u);
}

TEST(Parse, KnownNamesOnly) {
  Theory t = parse_normalized("GCI0 A B\n");
  EXPECT_EQ(parse_axiom_line_known("GCI0 B A", t.signature()), NormalizedAxiom::gci0(3, 2));
  EXPECT_THROW(parse_axiom_line_known("GCI0 A Z", t.signature()), ParseError);
}

TEST(Serialize, SingleGci0) {
  Theory t;
  const auto a = t.concept_id("A");
  const auto b = t.concept_id("B");
  t.add(NormalizedAxiom::gci0(a, b));
  const std::string out = serialize_theory(t);
  EXPECT_NE(out.find("\nGCI0 A B\n"), std::string::npos);
  EXPECT_EQ(out.substr(out.size() - 9), "GCI0 A B\n");
}

TEST(Serialize, EmptyTheoryIsHeaderOnly) {
  const std::string out = serialize_theory(Theory{});
  for (std::size_t pos = 0; pos < out.size();) {
    EXPECT_EQ(out[pos], '#');
    pos = out.find('\n', pos) + 1;
  }
  EXPECT_EQ(parse_normalized(out), Theory{});
}

TEST(Serialize, RoundTripAndIdempotence) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    testing::RandomTheorySpec spec;
    spec.named_concepts = 6;
    spec.roles = 3;
    spec.axioms = 20;
    const Theory t = testing::random_theory(rng, spec);
    const std::string once = serialize_theory(t);
    const Theory back = parse_normalized(once);
    EXPECT_EQ(back, t);
    EXPECT_EQ(serialize_theory(back), once);
  }
}

TEST(Serialize, KeepsUnusedNamesAndIds) {
  Theory t;
  t.concept_id("Unused");
  const auto x = t.concept_id("X");
  t.role_id("r");
  t.add(NormalizedAxiom::gci0(x, kTop));
  const Theory back = parse_normalized(serialize_theory(t));
  EXPECT_EQ(back.signature().concepts.find("X"), x);
  EXPECT_EQ(back.signature().role_count(), 1u);
}

TEST(Theory, RejectsIdsOutsideSignature) {
  Theory t;
  EXPECT_THROW(t.add(NormalizedAxiom::gci0(0, 5)), std::out_of_range);
  EXPECT_THROW(t.add(NormalizedAxiom::gci2(0, 0, 1)), std::out_of_range);
}

TEST(Theory, IdsAreDense) {
  const Theory t = parse_normalized("GCI2 X r Y\nGCI0 Y Z\n");
  const auto& names = t.signature().concepts.names();
  for (std::uint32_t i = 0; i < names.size(); ++i) EXPECT_EQ(t.signature().concepts.find(names[i]), i);
}

TEST(SignatureStats, AppendixExample) {
  const Theory t = load_normalized_file(ELKBC_TEST_DATA_DIR "/appendix_e.nf");
  const auto s = signature_stats(t);
  EXPECT_EQ(s.count(Variant::kGci1Bot), 2u);
  EXPECT_EQ(s.count(Variant::kGci3), 2u);
  EXPECT_EQ(s.count(Variant::kGci2), 2u);
  EXPECT_EQ(s.count(Variant::kGci0), 0u);
  EXPECT_EQ(s.concepts, 8u);
  EXPECT_EQ(s.roles, 1u);
}

TEST(SignatureStats, EmptyTheory) {
  const auto s = signature_stats(Theory{});
  for (auto v : kAllVariants) EXPECT_EQ(s.count(v), 0u);
  EXPECT_EQ(s.concepts, 2u);
  EXPECT_EQ(s.roles, 0u);
  EXPECT_EQ(s.individuals, 0u);
}

TEST(Axiom, RightmostConceptSlot) {
  EXPECT_EQ(rightmost_concept_slot(Variant::kGci0), 1u);
  EXPECT_EQ(rightmost_concept_slot(Variant::kGci1), 2u);
  EXPECT_EQ(rightmost_concept_slot(Variant::kGci2), 2u);
  EXPECT_EQ(rightmost_concept_slot(Variant::kGci3), 2u);
  EXPECT_EQ(rightmost_concept_slot(Variant::kGci1Bot), 1u);
}

}  // namespace
}  // namespace elkbc
