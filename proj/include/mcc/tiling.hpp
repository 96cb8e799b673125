#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mcc/error.hpp"
#include "mcc/signature.hpp"

namespace mcc {

using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& r) { return r.str(); }

inline Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::runtime_error("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw SchemaError("malformed rational '" + s + "'", {{"value", s}});
  }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Axis-aligned rectangle, y grows downward ("top" is the smaller y).
struct Rect {
  Rational x0, y0, x1, y1;

  Rational width() const { return x1 - x0; }
  Rational height() const { return y1 - y0; }
  Rational area() const { return width() * height(); }
  bool contains(const Rect& r) const { return x0 <= r.x0 && r.x1 <= x1 && y0 <= r.y0 && r.y1 <= y1; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Tiling {
  Rect bounds;
  std::vector<Rect> cells;

  friend bool operator==(const Tiling&, const Tiling&) = default;
};

/// Checks positivity, containment, exact area balance, and that every cell of
/// the grid induced by all coordinates is covered exactly once.
/// Codes: empty-tiling, degenerate-cell, outside-bounds, area-mismatch, overlap, uncovered.
inline std::vector<Violation> validate_tiling(const Tiling& t) {
  std::vector<Violation> out;
  if (t.cells.empty()) out.push_back({"empty-tiling", ""});
  if (t.bounds.x0 >= t.bounds.x1 || t.bounds.y0 >= t.bounds.y1) out.push_back({"degenerate-cell", "bounds"});
  Rational total = 0;
  std::set<Rational> xs{t.bounds.x0, t.bounds.x1}, ys{t.bounds.y0, t.bounds.y1};
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const Rect& c = t.cells[i];
    if (c.x0 >= c.x1 || c.y0 >= c.y1) out.push_back({"degenerate-cell", std::to_string(i)});
    if (!t.bounds.contains(c)) out.push_back({"outside-bounds", std::to_string(i)});
    total += c.area();
    xs.insert({c.x0, c.x1});
    ys.insert({c.y0, c.y1});
  }
  if (total != t.bounds.area()) out.push_back({"area-mismatch", rational_str(total) + " vs " + rational_str(t.bounds.area())});
  if (!out.empty()) return out;
  std::vector<Rational> gx(xs.begin(), xs.end()), gy(ys.begin(), ys.end());
  for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
    if (gx[i] < t.bounds.x0 || gx[i + 1] > t.bounds.x1) continue;
    for (std::size_t j = 0; j + 1 < gy.size(); ++j) {
      if (gy[j] < t.bounds.y0 || gy[j + 1] > t.bounds.y1) continue;
      const Rational mx = (gx[i] + gx[i + 1]) / 2, my = (gy[j] + gy[j + 1]) / 2;
      int hits = 0;
      for (const auto& c : t.cells)
        if (c.x0 < mx && mx < c.x1 && c.y0 < my && my < c.y1) ++hits;
      if (hits == 0) out.push_back({"uncovered", rational_str(mx) + "," + rational_str(my)});
      if (hits > 1) out.push_back({"overlap", rational_str(mx) + "," + rational_str(my)});
    }
  }
  return out;
}

/// Binary space partition of a tiling: a k-d tree whose leaves are cells.
struct CutTree {
  enum class Kind { leaf, vcut, hcut };

  Kind kind = Kind::leaf;
  std::size_t cell = 0;       // leaf
  Rational at;                // cut coordinate
  std::vector<CutTree> kids;  // vcut: left, right; hcut: top, bottom

  static CutTree leaf(std::size_t c) { return CutTree{Kind::leaf, c, {}, {}}; }
  static CutTree cut(Kind k, Rational at, CutTree a, CutTree b) {
    CutTree t{k, 0, std::move(at), {}};
    t.kids.push_back(std::move(a));
    t.kids.push_back(std::move(b));
    return t;
  }

  std::size_t leaf_count() const { return kind == Kind::leaf ? 1 : kids[0].leaf_count() + kids[1].leaf_count(); }

  friend bool operator==(const CutTree&, const CutTree&) = default;

  std::string str() const {
    switch (kind) {
      case Kind::leaf: return "leaf(" + std::to_string(cell) + ")";
      case Kind::vcut: return "vcut(" + rational_str(at) + "," + kids[0].str() + "," + kids[1].str() + ")";
      case Kind::hcut: return "hcut(" + rational_str(at) + "," + kids[0].str() + "," + kids[1].str() + ")";
    }
    return "?";
  }
};

/// One line per cell: "x0 y0 x1 y1 -".
inline std::string format_tiling(const Tiling& t) {
  std::string out;
  for (const auto& c : t.cells)
    out += rational_str(c.x0) + " " + rational_str(c.y0) + " " + rational_str(c.x1) + " " + rational_str(c.y1) + " -\n";
  return out;
}

namespace detail {

inline CutTree decompose_region(const Tiling& t, const Rect& region, std::vector<std::size_t> ids) {
  if (ids.size() == 1) return CutTree::leaf(ids.front());
  auto find_cut = [&](auto lo, auto hi, const Rational& rmin, const Rational& rmax) -> std::optional<Rational> {
    std::set<Rational> candidates;
    for (auto i : ids) {
      const Rational& e = t.cells[i].*hi;
      if (rmin < e && e < rmax) candidates.insert(e);
    }
    for (const auto& x : candidates) {
      bool clean = std::none_of(ids.begin(), ids.end(), [&](std::size_t i) {
        return t.cells[i].*lo < x && x < t.cells[i].*hi;
      });
      if (clean) return x;
    }
    return std::nullopt;
  };
  if (auto x = find_cut(&Rect::x0, &Rect::x1, region.x0, region.x1)) {
    std::vector<std::size_t> left, right;
    for (auto i : ids) (t.cells[i].x1 <= *x ? left : right).push_back(i);
    Rect lr = region, rr = region;
    lr.x1 = *x;
    rr.x0 = *x;
    return CutTree::cut(CutTree::Kind::vcut, *x, decompose_region(t, lr, std::move(left)),
                        decompose_region(t, rr, std::move(right)));
  }
  if (auto y = find_cut(&Rect::y0, &Rect::y1, region.y0, region.y1)) {
    std::vector<std::size_t> top, bottom;
    for (auto i : ids) (t.cells[i].y1 <= *y ? top : bottom).push_back(i);
    Rect tr = region, br = region;
    tr.y1 = *y;
    br.y0 = *y;
    return CutTree::cut(CutTree::Kind::hcut, *y, decompose_region(t, tr, std::move(top)),
                        decompose_region(t, br, std::move(bottom)));
  }
  Tiling witness{region, {}};
  for (auto i : ids) witness.cells.push_back(t.cells[i]);
  throw PinwheelObstruction("no guillotine cut in a region of " + std::to_string(ids.size()) + " cells",
                            {{"witness", format_tiling(witness)}});
}

}  // namespace detail

/// Recursive guillotine decomposition. Vertical cuts are preferred over
/// horizontal ones, and among candidates the smallest coordinate wins.
/// Throws PinwheelObstruction when some region of more than one cell has no cut.
inline CutTree decompose(const Tiling& t) {
  auto v = validate_tiling(t);
  if (!v.empty()) throw InvalidTiling("invalid tiling: " + v.front().code + " " + v.front().detail, {{"violation", v.front().code}});
  std::vector<std::size_t> ids(t.cells.size());
  std::iota(ids.begin(), ids.end(), 0);
  return detail::decompose_region(t, t.bounds, std::move(ids));
}

inline bool is_guillotine(const Tiling& t) {
  try {
    decompose(t);
    return true;
  } catch (const PinwheelObstruction&) {
    return false;
  }
}

// Enumeration --------------------------------------------------------------------

/// Canonical encoding of the double order (left-of and above relations)
/// minimized over all relabelings of the cells.
inline std::uint64_t double_order_key(const Tiling& t) {
  const std::size_t n = t.cells.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rect& a = t.cells[perm[i]];
        const Rect& b = t.cells[perm[j]];
        key = (key << 1) | (a.x1 <= b.x0 ? 1u : 0u);
        key = (key << 1) | (a.y1 <= b.y0 ? 1u : 0u);
      }
    best = std::min(best, key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace detail {

inline void fill_grid(std::size_t w, std::size_t h, std::size_t n, std::vector<char>& used,
                      std::vector<std::array<std::size_t, 4>>& cells,
                      std::vector<std::vector<std::array<std::size_t, 4>>>& out) {
  std::size_t first = 0;
  while (first < used.size() && used[first]) ++first;
  if (first == used.size()) {
    if (cells.size() == n) out.push_back(cells);
    return;
  }
  if (cells.size() == n) return;
  const std::size_t x = first % w, y = first / w;
  for (std::size_t cw = 1; x + cw <= w && !used[y * w + x + cw - 1]; ++cw) {
    for (std::size_t ch = 1; y + ch <= h; ++ch) {
      bool free_row = true;
      for (std::size_t i = 0; i < cw; ++i) free_row = free_row && !used[(y + ch - 1) * w + x + i];
      if (!free_row) break;
      for (std::size_t j = 0; j < ch; ++j)
        for (std::size_t i = 0; i < cw; ++i) used[(y + j) * w + x + i] = 1;
      cells.push_back({x, y, x + cw, y + ch});
      fill_grid(w, h, n, used, cells, out);
      cells.pop_back();
      for (std::size_t j = 0; j < ch; ++j)
        for (std::size_t i = 0; i < cw; ++i) used[(y + j) * w + x + i] = 0;
    }
  }
}

}  // namespace detail

/// All tilings of a rectangle into exactly n rectangles (1 <= n <= 5), one per
/// double-order class, found on integer grids of at most n x n. Output order
/// follows first discovery (grid width, then height, then placement order).
inline std::vector<Tiling> enumerate_tilings(std::size_t n) {
  if (n < 1 || n > 5) throw std::invalid_argument("enumerate_tilings supports 1 <= n <= 5");
  std::vector<Tiling> out;
  std::set<std::uint64_t> seen;
  for (std::size_t w = 1; w <= n; ++w)
    for (std::size_t h = 1; h <= n; ++h) {
      if (w * h < n) continue;
      std::vector<char> used(w * h, 0);
      std::vector<std::array<std::size_t, 4>> cells;
      std::vector<std::vector<std::array<std::size_t, 4>>> found;
      detail::fill_grid(w, h, n, used, cells, found);
      for (const auto& f : found) {
        Tiling t{{0, 0, Rational(w), Rational(h)}, {}};
        for (const auto& c : f) t.cells.push_back({Rational(c[0]), Rational(c[1]), Rational(c[2]), Rational(c[3])});
        if (seen.insert(double_order_key(t)).second) out.push_back(std::move(t));
      }
    }
  return out;
}

}  // namespace mcc
