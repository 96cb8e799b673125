#include <gtest/gtest.h>

#include "mcc/brick.hpp"
#include "mcc/tiling.hpp"
#include "support/random_terms.hpp"

using namespace mcc;

namespace {

Tiling grid_tiling(std::vector<std::array<int, 4>> cells) {
  Tiling t;
  Rect b{cells[0][0], cells[0][1], cells[0][2], cells[0][3]};
  for (const auto& c : cells) {
    t.cells.push_back({c[0], c[1], c[2], c[3]});
    b.x0 = std::min(b.x0, Rational(c[0]));
    b.y0 = std::min(b.y0, Rational(c[1]));
    b.x1 = std::max(b.x1, Rational(c[2]));
    b.y1 = std::max(b.y1, Rational(c[3]));
  }
  t.bounds = b;
  return t;
}

Tiling pinwheel() {
  return grid_tiling({{0, 2, 2, 3}, {2, 1, 3, 3}, {1, 0, 3, 1}, {0, 0, 1, 2}, {1, 1, 2, 2}});
}

Tiling mirror(const Tiling& t) {
  Tiling m = t;
  for (auto& c : m.cells) {
    const Rational x0 = t.bounds.x1 - c.x1, x1 = t.bounds.x1 - c.x0;
    c.x0 = x0 + t.bounds.x0;
    c.x1 = x1 + t.bounds.x0;
  }
  return m;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(rational_str(Rational(1, 2)), "1/2");
  EXPECT_EQ(rational_str(Rational(2)), "2");
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_THROW(parse_rational("1/0"), SchemaError);
  EXPECT_THROW(parse_rational("x"), SchemaError);
}

TEST(ValidateTiling, AcceptsExactCover) {
  EXPECT_TRUE(validate_tiling(pinwheel()).empty());
}

TEST(ValidateTiling, RejectsOverlapAndGap) {
  Tiling overlap = grid_tiling({{0, 0, 2, 1}, {1, 0, 2, 1}, {0, 1, 2, 2}});
  overlap.bounds = {0, 0, 2, 2};
  EXPECT_FALSE(validate_tiling(overlap).empty());
  // Same total area as the bounds but one cell doubled up and one hole.
  Tiling holed{{0, 0, 2, 1}, {{0, 0, 1, 1}, {0, 0, 1, 1}}};
  std::set<std::string> codes;
  for (const auto& v : validate_tiling(holed)) codes.insert(v.code);
  EXPECT_TRUE(codes.count("overlap"));
  EXPECT_TRUE(codes.count("uncovered"));
}

TEST(ValidateTiling, RejectsDegenerateAndOutside) {
  Tiling t{{0, 0, 1, 1}, {{0, 0, 0, 1}, {0, 0, 2, 1}}};
  std::set<std::string> codes;
  for (const auto& v : validate_tiling(t)) codes.insert(v.code);
  EXPECT_TRUE(codes.count("degenerate-cell"));
  EXPECT_TRUE(codes.count("outside-bounds"));
}

TEST(Decompose, SingleCellIsLeaf) {
  EXPECT_EQ(decompose(grid_tiling({{0, 0, 1, 1}})), CutTree::leaf(0));
}

TEST(Decompose, PinwheelHasNoCut) {
  try {
    decompose(pinwheel());
    FAIL() << "expected PinwheelObstruction";
  } catch (const PinwheelObstruction& e) {
    EXPECT_EQ(e.code(), "PinwheelObstruction");
    EXPECT_EQ(parse_tiling(e.field("witness")).cells.size(), 5u);
  }
  EXPECT_FALSE(is_guillotine(mirror(pinwheel())));
}

TEST(Decompose, WitnessIsTheStuckRegion) {
  // A pinwheel scaled into the left half, with one extra brick on the right.
  Tiling t = pinwheel();
  t.cells.push_back({3, 0, 4, 3});
  t.bounds.x1 = 4;
  try {
    decompose(t);
    FAIL();
  } catch (const PinwheelObstruction& e) {
    const Tiling w = parse_tiling(e.field("witness"));
    EXPECT_EQ(w.cells.size(), 5u);
    EXPECT_EQ(w.bounds, (Rect{0, 0, 3, 3}));
  }
}

TEST(Decompose, GridPrefersVerticalThenSmallest) {
  const Tiling t = grid_tiling({{0, 0, 1, 1}, {1, 0, 2, 1}, {0, 1, 1, 2}, {1, 1, 2, 2}});
  const CutTree c = decompose(t);
  const CutTree expected = CutTree::cut(CutTree::Kind::vcut, 1,
                                        CutTree::cut(CutTree::Kind::hcut, 1, CutTree::leaf(0), CutTree::leaf(2)),
                                        CutTree::cut(CutTree::Kind::hcut, 1, CutTree::leaf(1), CutTree::leaf(3)));
  EXPECT_EQ(c, expected) << c.str();
}

TEST(Decompose, InvalidTilingRejected) {
  Tiling t{{0, 0, 2, 1}, {{0, 0, 1, 1}}};
  EXPECT_THROW(decompose(t), InvalidTiling);
}

TEST(Decompose, LeavesBijectWithCells) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_tilings(n)) {
      const CutTree c = decompose(t);
      EXPECT_EQ(c.leaf_count(), t.cells.size());
    }
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_tilings(1).size(), 1u);
  EXPECT_EQ(enumerate_tilings(2).size(), 2u);
  // Three bricks: three in a row, three in a column, and the four T shapes.
  EXPECT_EQ(enumerate_tilings(3).size(), 6u);
  EXPECT_THROW(enumerate_tilings(0), std::invalid_argument);
  EXPECT_THROW(enumerate_tilings(6), std::invalid_argument);
}

TEST(Enumerate, AllValid) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_tilings(n)) EXPECT_TRUE(validate_tiling(t).empty());
}

TEST(Enumerate, FourCellsAllGuillotine) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_tilings(n)) EXPECT_TRUE(is_guillotine(t)) << format_tiling(t);
}

TEST(DoubleOrder, InvariantUnderRelabelAndScale) {
  Tiling a = pinwheel();
  Tiling b = a;
  std::reverse(b.cells.begin(), b.cells.end());
  for (auto& c : b.cells) {
    c.x0 *= 2;
    c.x1 *= 2;
  }
  b.bounds.x1 *= 2;
  EXPECT_EQ(double_order_key(a), double_order_key(b));
  EXPECT_NE(double_order_key(a), double_order_key(mirror(a)));
}

TEST(TilingText, Format) {
  const Tiling t{{0, 0, 1, 1}, {{0, 0, Rational(1, 2), 1}, {Rational(1, 2), 0, 1, 1}}};
  EXPECT_EQ(format_tiling(t), "0 0 1/2 1 -\n1/2 0 1 1 -\n");
  EXPECT_EQ(parse_tiling(format_tiling(t)), t);
}
