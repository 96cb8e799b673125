#include <gtest/gtest.h>

#include "mcc/render.hpp"
#include "support/random_terms.hpp"

using namespace mcc;
using mcc::support::running_signature;
using mcc::support::running_term;

namespace {

RenderOptions style(Style s) {
  RenderOptions o;
  o.style = s;
  return o;
}

std::set<std::string> distinct(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::size_t count_kind(const SvgScene& s, SvgElement::Kind k, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& e : s.elements) n += e.kind == k && e.id.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST(RenderString, RunningExample) {
  const SvgScene s = render_scene(running_term(), running_signature(), style(Style::string));
  EXPECT_TRUE(scene_checks(s).empty());
  EXPECT_EQ(count_kind(s, SvgElement::Kind::rect, "node:"), 4u);
  EXPECT_EQ(distinct(wire_names(s)), (std::set<std::string>{"x1", "x2", "x3", "x4", "x5", "x6", "x7"}));
  EXPECT_EQ(wire_names(s).size(), 7u);
  EXPECT_EQ(s.count_prefix("node:r.0.0"), 1u);
  EXPECT_EQ(s.count_prefix("node:r.1.1"), 1u);
}

TEST(RenderString, IdentityIsOneStraightWire) {
  Signature sig;
  sig.objects = {"x"};
  const SvgScene s = render_scene(Term::id({"x"}), sig, style(Style::string));
  EXPECT_EQ(s.count_prefix("node:"), 0u);
  ASSERT_EQ(wire_names(s), (std::vector<std::string>{"x"}));
  const auto& w = *std::find_if(s.elements.begin(), s.elements.end(), [](const SvgElement& e) { return e.id == "wire:x:0"; });
  ASSERT_EQ(w.segments.size(), 1u);
  EXPECT_DOUBLE_EQ(w.segments[0].p0.y, w.segments[0].p3.y);
  EXPECT_TRUE(scene_checks(s).empty());
}

TEST(RenderString, CrossingsAreDrawn) {
  Signature sig;
  sig.objects = {"x", "y"};
  const SvgScene s = render_scene(Term::sym({"x"}, {"y"}), sig, style(Style::string));
  EXPECT_TRUE(scene_checks(s).empty());
  EXPECT_EQ(wire_names(s), (std::vector<std::string>{"x", "y"}));
  // The x string starts high and ends low.
  const auto& x = *std::find_if(s.elements.begin(), s.elements.end(), [](const SvgElement& e) { return e.id == "wire:x:0"; });
  EXPECT_LT(x.segments.front().p0.y, x.segments.back().p3.y);
}

TEST(RenderString, WiresChainAcrossIdentityCells) {
  Signature sig;
  sig.objects = {"a"};
  sig.generators = {{"f", {"a"}, {"a"}}};
  const Term t = Term::seq(Term::gen("f"), Term::seq(Term::id({"a"}), Term::gen("f")));
  const SvgScene s = render_scene(t, sig, style(Style::string));
  EXPECT_TRUE(scene_checks(s).empty());
  // Strings: the input, the one from the first f through the Id to the second f, and the output.
  EXPECT_EQ(wire_names(s).size(), 3u);
}

TEST(RenderBrick, SingleGenerator) {
  const SvgScene s = render_scene(Term::gen("f1"), running_signature(), style(Style::brick));
  EXPECT_EQ(count_kind(s, SvgElement::Kind::rect, ""), 1u);
  EXPECT_EQ(count_kind(s, SvgElement::Kind::circle, "wire:"), 3u);
  EXPECT_EQ(s.count_prefix("wire:x1:0"), 1u);
  EXPECT_EQ(s.count_prefix("wire:x3:0"), 1u);
  EXPECT_EQ(s.count_prefix("wire:x4:0"), 1u);
  EXPECT_TRUE(scene_checks(s).empty());
  // x1 on the left edge, x3 and x4 on the right.
  for (const auto& e : s.elements) {
    if (e.id == "wire:x1:0") {
      EXPECT_DOUBLE_EQ(e.a.x, RenderOptions{}.margin);
    }
    if (e.id == "wire:x3:0") {
      EXPECT_DOUBLE_EQ(e.a.x, RenderOptions{}.width - RenderOptions{}.margin);
    }
  }
}

TEST(RenderBrick, RejectsCrossings) {
  Signature sig;
  sig.objects = {"x"};
  EXPECT_THROW(render_scene(Term::sym({"x"}, {"x"}), sig, style(Style::brick)), ContainsSym);
}

TEST(RenderBrick, RunningExample) {
  const SvgScene s = render_scene(running_term(), running_signature(), style(Style::brick));
  EXPECT_EQ(count_kind(s, SvgElement::Kind::rect, "node:"), 4u);
  EXPECT_EQ(count_kind(s, SvgElement::Kind::circle, "wire:"), 7u);
  EXPECT_TRUE(scene_checks(s).empty());
}

TEST(Render, Deterministic) {
  for (Style st : {Style::string, Style::brick}) {
    const std::string a = render(running_term(), running_signature(), style(st));
    const std::string b = render(running_term(), running_signature(), style(st));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind("<svg ", 0), 0u);
  }
}

TEST(Render, BothStylesShareTheLayout) {
  // Node centres in the string style coincide with brick centres.
  const auto sig = running_signature();
  const SvgScene str = render_scene(running_term(), sig, style(Style::string));
  const SvgScene brk = render_scene(running_term(), sig, style(Style::brick));
  for (const auto& e : str.elements) {
    if (e.kind != SvgElement::Kind::rect) continue;
    const auto& b = *std::find_if(brk.elements.begin(), brk.elements.end(), [&](const SvgElement& x) { return x.id == e.id; });
    EXPECT_NEAR((e.a.x + e.b.x) / 2, (b.a.x + b.b.x) / 2, 1e-9);
    EXPECT_NEAR((e.a.y + e.b.y) / 2, (b.a.y + b.b.y) / 2, 1e-9);
  }
}

TEST(Render, RejectsBadOptions) {
  RenderOptions o;
  o.width = 0;
  EXPECT_THROW(render_scene(running_term(), running_signature(), o), SchemaError);
}

TEST(SceneChecks, FlagsOrphanedWireEndpoint) {
  SvgScene s{100, 100, {}};
  SvgElement w{SvgElement::Kind::path, "wire:x:0", "wire", {}, {}, 0, "x", {}};
  w.segments.push_back(detail::horizontal_cubic({0, 10}, {50, 10}));
  w.segments.push_back(detail::horizontal_cubic({50, 20}, {100, 20}));
  s.elements.push_back(w);
  ASSERT_EQ(scene_checks(s).size(), 1u);
  EXPECT_EQ(scene_checks(s)[0].code, "discontinuous-wire");
}

TEST(SceneChecks, FlagsDuplicatesAndOutOfViewport) {
  SvgScene s{100, 100, {}};
  s.elements.push_back({SvgElement::Kind::circle, "a", "", {50, 50}, {}, 2, {}, {}});
  s.elements.push_back({SvgElement::Kind::circle, "a", "", {99.5, 50}, {}, 2, {}, {}});
  std::set<std::string> codes;
  for (const auto& v : scene_checks(s)) codes.insert(v.code);
  EXPECT_EQ(codes, (std::set<std::string>{"duplicate-id", "out-of-viewport"}));
}

TEST(Render, RandomTermsStructure) {
  support::Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    const Signature sig = support::random_signature(rng);
    const Term t = support::random_term(rng, sig);
    const SvgScene s = render_scene(t, sig, style(Style::string));
    ASSERT_TRUE(scene_checks(s).empty()) << scene_checks(s)[0].code << " " << scene_checks(s)[0].detail;
    ASSERT_EQ(count_kind(s, SvgElement::Kind::rect, "node:"), generator_count(t));
    ASSERT_EQ(wire_names(s), support::string_names(t, sig));
    if (!contains_sym(t)) {
      const SvgScene b = render_scene(t, sig, style(Style::brick));
      ASSERT_TRUE(scene_checks(b).empty());
      ASSERT_EQ(count_kind(b, SvgElement::Kind::rect, "node:"), generator_count(t));
    }
  }
}

TEST(Svg, PathDataBreaksOnlyAtGaps) {
  std::vector<Cubic> segs{detail::horizontal_cubic({0, 0}, {1, 1}), detail::horizontal_cubic({1, 1}, {2, 1})};
  EXPECT_EQ(path_data(segs), "M0.000,0.000 C0.500,0.000 0.500,1.000 1.000,1.000 C1.500,1.000 1.500,1.000 2.000,1.000");
}
