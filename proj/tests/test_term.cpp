#include <gtest/gtest.h>

#include "mcc/term.hpp"
#include "support/random_terms.hpp"

using namespace mcc;
using mcc::support::running_signature;
using mcc::support::running_term;

namespace {

Term g(const char* n) { return Term::gen(n); }

}  // namespace

TEST(Typecheck, Generator) {
  const auto ty = typecheck(g("f1"), running_signature());
  EXPECT_EQ(ty.dom, (Word{"x1"}));
  EXPECT_EQ(ty.cod, (Word{"x3", "x4"}));
}

TEST(Typecheck, Identity) {
  const auto ty = typecheck(Term::id({"x1", "x2"}), running_signature());
  EXPECT_EQ(ty.dom, (Word{"x1", "x2"}));
  EXPECT_EQ(ty.cod, (Word{"x1", "x2"}));
  const auto unit = typecheck(Term::id({}), running_signature());
  EXPECT_TRUE(unit.dom.empty() && unit.cod.empty());
}

TEST(Typecheck, RunningExample) {
  const auto ty = typecheck(running_term(), running_signature());
  EXPECT_EQ(ty.dom, (Word{"x1", "x2"}));
  EXPECT_EQ(ty.cod, (Word{"x6", "x7"}));
}

TEST(Typecheck, Symmetry) {
  const auto ty = typecheck(Term::sym({"x1"}, {"x2", "x3"}), running_signature());
  EXPECT_EQ(ty.dom, (Word{"x1", "x2", "x3"}));
  EXPECT_EQ(ty.cod, (Word{"x2", "x3", "x1"}));
}

TEST(Typecheck, SeqMismatchReportsPathAndWords) {
  try {
    typecheck(Term::par(Term::id({}), Term::seq(g("f1"), g("f2"))), running_signature());
    FAIL() << "expected TypeError";
  } catch (const TypeError& e) {
    EXPECT_EQ(e.code(), "TypeError");
    EXPECT_EQ(e.field("path"), "r.1");
    EXPECT_EQ(e.field("expected"), "x3 x4");
    EXPECT_EQ(e.field("found"), "x2");
  }
}

TEST(Typecheck, UnknownGenerator) {
  try {
    typecheck(Term::seq(Term::id({"x1"}), g("zz")), running_signature());
    FAIL() << "expected UnknownGenerator";
  } catch (const UnknownGenerator& e) {
    EXPECT_EQ(e.field("name"), "zz");
    EXPECT_EQ(e.field("path"), "r.1");
  }
}

TEST(Typecheck, ParDomainLengthAdds) {
  support::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Signature sig = support::random_signature(rng);
    const Term a = support::random_term(rng, sig), b = support::random_term(rng, sig);
    const auto ta = typecheck(a, sig), tb = typecheck(b, sig);
    EXPECT_EQ(typecheck(Term::par(a, b), sig).dom.size(), ta.dom.size() + tb.dom.size());
  }
}

TEST(TensorWidth, HandComputedValues) {
  EXPECT_EQ(tensor_width(g("f1")), 1u);
  EXPECT_EQ(tensor_width(running_term()), 2u);
  EXPECT_EQ(tensor_width(Term::par(Term::par(g("f"), g("g")), g("h"))), 3u);
}

TEST(TensorWidth, SeqNeverWiderThanPar) {
  support::Rng rng(8);
  Signature sig;
  sig.objects = {"a"};
  sig.generators = {{"f", {"a"}, {"a"}}, {"g", {"a"}, {"a"}}};
  for (int i = 0; i < 200; ++i) {
    const Term a = support::random_term(rng, sig, false);
    const auto ty = typecheck(a, sig);
    if (ty.dom != ty.cod) continue;
    const Term b = support::random_term(rng, sig, false);
    if (typecheck(b, sig).dom != ty.cod) continue;
    EXPECT_LE(tensor_width(Term::seq(a, b)), tensor_width(Term::par(a, b)));
  }
}

TEST(Term, StructuralEqualityAndSize) {
  EXPECT_EQ(running_term(), running_term());
  EXPECT_FALSE(running_term() == Term::par(g("f1"), g("f2")));
  EXPECT_EQ(running_term().size(), 7u);
  EXPECT_EQ(leaf_count(running_term()), 4u);
  EXPECT_EQ(depth(running_term()), 3u);
}

TEST(Term, ReplaceAtSharesUntouchedBranches) {
  const Term t = running_term();
  const Term r = replace_at(t, Path{{1, 0}}, g("f9"));
  EXPECT_EQ(subterm_at(r, Path{{1, 0}}), g("f9"));
  EXPECT_EQ(subterm_at(r, Path{{0}}), subterm_at(t, Path{{0}}));
  EXPECT_THROW(subterm_at(t, Path{{0, 0, 1}}), InvalidStep);
}

TEST(ProofTree, GeneratorLine) {
  const auto p = to_proof_tree(g("f1"), running_signature());
  EXPECT_EQ(p.to_text(), "(f-ax) x1 ⊢ x3 x4\n");
}

TEST(ProofTree, IdentityLine) {
  EXPECT_EQ(to_proof_tree(Term::id({"x1"}), running_signature()).to_text(), "(id) x1 ⊢ x1\n");
}

TEST(ProofTree, RunningExampleText) {
  const auto p = to_proof_tree(running_term(), running_signature());
  EXPECT_EQ(p.to_text(),
            "(cut) x1 x2 ⊢ x6 x7\n"
            "  (⊗-intro) x1 x2 ⊢ x3 x4 x5\n"
            "    (f-ax) x1 ⊢ x3 x4\n"
            "    (f-ax) x2 ⊢ x5\n"
            "  (⊗-intro) x3 x4 x5 ⊢ x6 x7\n"
            "    (f-ax) x3 ⊢ x6\n"
            "    (f-ax) x4 x5 ⊢ x7\n");
}

TEST(ProofTree, NodeCountMatchesConstructors) {
  support::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Signature sig = support::random_signature(rng);
    const Term t = support::random_term(rng, sig);
    const auto p = to_proof_tree(t, sig);
    EXPECT_EQ(p.node_count(), t.size());
    EXPECT_EQ(p.conclusion, typecheck(t, sig));
  }
}

TEST(ProofTree, RuleDependsOnConstructorOnly) {
  const Signature sig = running_signature();
  EXPECT_EQ(to_proof_tree(Term::sym({"x1"}, {"x2"}), sig).rule, "(sym-ax)");
  EXPECT_EQ(to_proof_tree(Term::seq(Term::id({}), Term::id({})), sig).rule, "(cut)");
  EXPECT_EQ(to_proof_tree(Term::par(Term::id({}), Term::id({})), sig).rule, "(⊗-intro)");
}

TEST(ProofTree, EmptySides) {
  Signature sig;
  sig.objects = {"x"};
  sig.generators = {{"s", {}, {"x"}}};
  EXPECT_EQ(to_proof_tree(g("s"), sig).to_text(), "(f-ax) ⊢ x\n");
}

TEST(ProofTree, Latex) {
  const auto p = to_proof_tree(Term::seq(g("f1"), Term::id({"x3", "x4"})), running_signature());
  const std::string l = p.to_latex();
  EXPECT_NE(l.find("\\dfrac{"), std::string::npos);
  EXPECT_NE(l.find("\\textsf{(cut)}"), std::string::npos);
  EXPECT_NE(l.find("\\mathit{x1} \\vdash \\mathit{x3}\\,\\mathit{x4}"), std::string::npos);
}

TEST(ProofTree, IllTypedPropagates) {
  EXPECT_THROW(to_proof_tree(Term::seq(g("f1"), g("f2")), running_signature()), TypeError);
}
