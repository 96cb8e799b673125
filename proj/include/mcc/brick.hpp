#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/signature.hpp"
#include "mcc/term.hpp"
#include "mcc/tiling.hpp"

namespace mcc {

/// What a brick stands for: a generator, an identity that carries its wires
/// straight through, or a crossing (only produced for string rendering).
struct CellLabel {
  enum class Kind { generator, passthrough, crossing };

  Kind kind = Kind::generator;
  std::string name;  // generator
  Word w1;           // passthrough wires, or crossing left factor
  Word w2;           // crossing right factor

  static CellLabel generator(std::string n) { return {Kind::generator, std::move(n), {}, {}}; }
  static CellLabel passthrough(Word w) { return {Kind::passthrough, {}, std::move(w), {}}; }
  static CellLabel crossing(Word u, Word v) { return {Kind::crossing, {}, std::move(u), std::move(v)}; }

  Term term() const {
    switch (kind) {
      case Kind::generator: return Term::gen(name);
      case Kind::passthrough: return Term::id(w1);
      case Kind::crossing: return Term::sym(w1, w2);
    }
    return Term::id({});
  }

  friend bool operator==(const CellLabel&, const CellLabel&) = default;
};

/// Strings crossing one maximal vertical boundary segment, top to bottom.
struct WireSegment {
  Rational x, ytop, ybottom;
  std::vector<ObjectName> names;

  friend bool operator==(const WireSegment&, const WireSegment&) = default;
};

struct BrickDiagram {
  Tiling tiling;
  std::vector<CellLabel> labels;  // parallel to tiling.cells
  std::vector<WireSegment> wires;

  friend bool operator==(const BrickDiagram&, const BrickDiagram&) = default;
};

/// Maximal vertical segments formed by collinear, touching cell edges,
/// including both vertical sides of the bounds. Sorted by x then ytop; names empty.
inline std::vector<WireSegment> maximal_segments(const Tiling& t) {
  std::map<Rational, std::vector<std::pair<Rational, Rational>>> edges;
  for (const auto& c : t.cells) {
    edges[c.x0].emplace_back(c.y0, c.y1);
    edges[c.x1].emplace_back(c.y0, c.y1);
  }
  std::vector<WireSegment> out;
  for (auto& [x, spans] : edges) {
    std::sort(spans.begin(), spans.end());
    Rational lo = spans.front().first, hi = spans.front().second;
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first <= hi) {
        hi = std::max(hi, spans[i].second);
      } else {
        out.push_back({x, lo, hi, {}});
        lo = spans[i].first;
        hi = spans[i].second;
      }
    }
    out.push_back({x, lo, hi, {}});
  }
  return out;
}

/// The cells whose right edge (side 0) or left edge (side 1) lies on the
/// segment, top to bottom.
inline std::vector<std::size_t> segment_cells(const Tiling& t, const WireSegment& s, int side) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const Rect& c = t.cells[i];
    const Rational& edge = side == 0 ? c.x1 : c.x0;
    if (edge == s.x && s.ytop <= c.y0 && c.y1 <= s.ybottom) out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return t.cells[a].y0 < t.cells[b].y0; });
  return out;
}

inline MorphismType label_type(const CellLabel& l, const Signature& sig) { return typecheck(l.term(), sig); }

/// For each mark on a segment: the cell it leaves (left side) and the cell it
/// enters (right side), or -1 on the outer boundary.
struct MarkOwners {
  std::vector<long> left;
  std::vector<long> right;
};

inline std::string segment_str(const WireSegment& s) {
  return rational_str(s.x) + " " + rational_str(s.ytop) + " " + rational_str(s.ybottom);
}

/// Cells on each side consume marks in order: left cells by codomain, right
/// cells by domain. Throws WireMismatch when the counts or names disagree.
inline MarkOwners assign_marks(const BrickDiagram& b, const WireSegment& s, const Signature& sig) {
  MarkOwners owners;
  owners.left.assign(s.names.size(), -1);
  owners.right.assign(s.names.size(), -1);
  for (int side = 0; side < 2; ++side) {
    const auto cells = segment_cells(b.tiling, s, side);
    if (cells.empty()) continue;
    std::size_t k = 0;
    for (auto c : cells) {
      const MorphismType ty = label_type(b.labels[c], sig);
      const Word& w = side == 0 ? ty.cod : ty.dom;
      for (const auto& name : w) {
        if (k >= s.names.size() || s.names[k] != name)
          throw WireMismatch("wires on segment " + segment_str(s) + " disagree with cell " + std::to_string(c),
                             {{"segment", segment_str(s)}, {"cell", std::to_string(c)}});
        (side == 0 ? owners.left : owners.right)[k] = static_cast<long>(c);
        ++k;
      }
    }
    if (k != s.names.size())
      throw WireMismatch("segment " + segment_str(s) + " carries " + std::to_string(s.names.size()) +
                             " wires but its cells account for " + std::to_string(k),
                         {{"segment", segment_str(s)}});
  }
  return owners;
}

/// Segments of b with names filled in; segments b omits carry no wires.
/// Throws WireMismatch for listed segments that are not maximal segments.
inline std::vector<WireSegment> resolved_segments(const BrickDiagram& b) {
  auto segs = maximal_segments(b.tiling);
  for (const auto& w : b.wires) {
    auto it = std::find_if(segs.begin(), segs.end(), [&](const WireSegment& s) {
      return s.x == w.x && s.ytop == w.ytop && s.ybottom == w.ybottom;
    });
    if (it == segs.end())
      throw WireMismatch("wire segment " + segment_str(w) + " is not a maximal boundary segment",
                         {{"segment", segment_str(w)}});
    it->names.insert(it->names.end(), w.names.begin(), w.names.end());
  }
  return segs;
}

/// Full consistency check of a brick diagram against a signature.
inline void validate_brick(const BrickDiagram& b, const Signature& sig) {
  auto v = validate_tiling(b.tiling);
  if (!v.empty())
    throw InvalidTiling("invalid tiling: " + v.front().code + " " + v.front().detail, {{"violation", v.front().code}});
  if (b.labels.size() != b.tiling.cells.size())
    throw WireMismatch("expected one label per cell", {{"segment", ""}});
  for (const auto& s : resolved_segments(b)) assign_marks(b, s, sig);
}

namespace detail {

inline void layout_into(const Term& t, const Signature& sig, const Rect& r, bool allow_sym, BrickDiagram& out,
                        std::vector<Path>& paths, const Path& at) {
  switch (t.kind()) {
    case TermKind::gen:
      if (!sig.find(t.name())) throw UnknownGenerator("unknown generator '" + t.name() + "'", {{"name", t.name()}});
      out.tiling.cells.push_back(r);
      out.labels.push_back(CellLabel::generator(t.name()));
      paths.push_back(at);
      return;
    case TermKind::id:
      out.tiling.cells.push_back(r);
      out.labels.push_back(CellLabel::passthrough(t.wire()));
      paths.push_back(at);
      return;
    case TermKind::sym:
      if (!allow_sym) throw ContainsSym("brick diagrams cannot hold crossings", {{"path", at.str()}});
      out.tiling.cells.push_back(r);
      out.labels.push_back(CellLabel::crossing(t.left(), t.right()));
      paths.push_back(at);
      return;
    case TermKind::seq:
    case TermKind::par: {
      const Rational frac(static_cast<long>(leaf_count(t.first())), static_cast<long>(leaf_count(t)));
      Rect a = r, b = r;
      if (t.kind() == TermKind::seq) {
        a.x1 = b.x0 = r.x0 + r.width() * frac;
      } else {
        a.y1 = b.y0 = r.y0 + r.height() * frac;
      }
      layout_into(t.first(), sig, a, allow_sym, out, paths, at.child(0));
      layout_into(t.second(), sig, b, allow_sym, out, paths, at.child(1));
      return;
    }
  }
}

}  // namespace detail

/// A laid-out term: the brick diagram plus, for every cell, the path of the
/// leaf it came from.
struct Layout {
  BrickDiagram brick;
  std::vector<Path> leaf_paths;
};

/// Lays t out in the unit square. Seq cuts vertically and Par horizontally,
/// each at a position proportional to the leaf counts of the two sides.
/// Crossings are only accepted when allow_sym is set.
inline Layout layout_term(const Term& t, const Signature& sig, bool allow_sym) {
  typecheck(t, sig);
  Layout out;
  out.brick.tiling.bounds = Rect{0, 0, 1, 1};
  detail::layout_into(t, sig, out.brick.tiling.bounds, allow_sym, out.brick, out.leaf_paths, Path{});
  for (auto seg : maximal_segments(out.brick.tiling)) {
    const bool left_boundary = seg.x == out.brick.tiling.bounds.x0;
    for (auto c : segment_cells(out.brick.tiling, seg, left_boundary ? 1 : 0)) {
      const auto ty = label_type(out.brick.labels[c], sig);
      const Word& w = left_boundary ? ty.dom : ty.cod;
      seg.names.insert(seg.names.end(), w.begin(), w.end());
    }
    out.brick.wires.push_back(std::move(seg));
  }
  return out;
}

inline BrickDiagram term_to_brick(const Term& t, const Signature& sig) {
  if (contains_sym(t)) throw ContainsSym("brick diagrams cannot hold crossings");
  return layout_term(t, sig, false).brick;
}

namespace detail {

/// Guillotine decomposition that only accepts cuts the wires agree with: a
/// horizontal cut must not separate a wire's two ends, which shows up as a Seq
/// whose sides disagree. Candidates are tried in decompose() order; results are
/// memoized per region.
class TypedDecomposer {
 public:
  TypedDecomposer(const BrickDiagram& b, const Signature& sig) : b_(b), sig_(sig) {}

  std::optional<Term> run() {
    std::vector<std::size_t> ids(b_.tiling.cells.size());
    std::iota(ids.begin(), ids.end(), 0);
    auto r = region(b_.tiling.bounds, ids);
    if (!r) return std::nullopt;
    return r->first;
  }

 private:
  using Typed = std::optional<std::pair<Term, MorphismType>>;

  Typed region(const Rect& r, const std::vector<std::size_t>& ids) {
    if (ids.size() == 1) {
      const Term t = b_.labels[ids[0]].term();
      return std::make_pair(t, typecheck(t, sig_));
    }
    const std::string key = rational_str(r.x0) + " " + rational_str(r.y0) + " " + rational_str(r.x1) + " " +
                            rational_str(r.y1);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Typed out = split(r, ids, true);
    if (!out) out = split(r, ids, false);
    memo_[key] = out;
    return out;
  }

  Typed split(const Rect& r, const std::vector<std::size_t>& ids, bool vertical) {
    const auto& cells = b_.tiling.cells;
    auto lo = [&](std::size_t i) -> const Rational& { return vertical ? cells[i].x0 : cells[i].y0; };
    auto hi = [&](std::size_t i) -> const Rational& { return vertical ? cells[i].x1 : cells[i].y1; };
    std::set<Rational> candidates;
    for (auto i : ids)
      if ((vertical ? r.x0 : r.y0) < hi(i) && hi(i) < (vertical ? r.x1 : r.y1)) candidates.insert(hi(i));
    for (const auto& at : candidates) {
      if (std::any_of(ids.begin(), ids.end(), [&](std::size_t i) { return lo(i) < at && at < hi(i); })) continue;
      std::vector<std::size_t> first, second;
      for (auto i : ids) (hi(i) <= at ? first : second).push_back(i);
      Rect fr = r, sr = r;
      (vertical ? fr.x1 : fr.y1) = at;
      (vertical ? sr.x0 : sr.y0) = at;
      Typed a = region(fr, first);
      if (!a) continue;
      Typed c = region(sr, second);
      if (!c) continue;
      if (vertical) {
        if (a->second.cod != c->second.dom) continue;
        return std::make_pair(Term::seq(a->first, c->first), MorphismType{a->second.dom, c->second.cod});
      }
      return std::make_pair(Term::par(a->first, c->first),
                            MorphismType{word_concat(a->second.dom, c->second.dom), word_concat(a->second.cod, c->second.cod)});
    }
    return std::nullopt;
  }

  const BrickDiagram& b_;
  const Signature& sig_;
  std::map<std::string, Typed> memo_;
};

}  // namespace detail

/// Reads a brick diagram back as a term through a guillotine decomposition:
/// vertical cuts become Seq, horizontal cuts Par, cells their labels. Where
/// cells line up by accident, the first cut that keeps every wire whole wins.
inline Term brick_to_term(const BrickDiagram& b, const Signature& sig) {
  validate_brick(b, sig);
  decompose(b.tiling);  // PinwheelObstruction for non-guillotine tilings
  if (auto t = detail::TypedDecomposer(b, sig).run()) return *t;
  throw WireMismatch("no guillotine decomposition keeps the wires paired across its cuts", {{"segment", ""}});
}

// Text format --------------------------------------------------------------------

inline std::string format_label(const CellLabel& l) {
  auto join = [](const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + w[i];
    return s;
  };
  switch (l.kind) {
    case CellLabel::Kind::generator: return l.name;
    case CellLabel::Kind::passthrough: return "=" + join(l.w1);
    case CellLabel::Kind::crossing: return "~" + join(l.w1) + "/" + join(l.w2);
  }
  return "?";
}

/// Cell lines "x0 y0 x1 y1 label", then one "wire x ytop ybottom name" line per
/// mark, top to bottom within each segment. Labels: a generator name, "=a,b"
/// for a pass-through brick, "~a/b" for a crossing.
inline std::string format_brick(const BrickDiagram& b) {
  std::string out;
  for (std::size_t i = 0; i < b.tiling.cells.size(); ++i) {
    const Rect& c = b.tiling.cells[i];
    out += rational_str(c.x0) + " " + rational_str(c.y0) + " " + rational_str(c.x1) + " " + rational_str(c.y1) + " " +
           format_label(b.labels[i]) + "\n";
  }
  for (const auto& s : b.wires)
    for (const auto& n : s.names) out += "wire " + segment_str(s) + " " + n + "\n";
  return out;
}

inline CellLabel parse_label(const std::string& tok) {
  auto split = [](const std::string& s) {
    Word w;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) w.objects.push_back(part);
    return w;
  };
  if (!tok.empty() && tok[0] == '=') return CellLabel::passthrough(split(tok.substr(1)));
  if (!tok.empty() && tok[0] == '~') {
    auto slash = tok.find('/');
    if (slash == std::string::npos) throw SchemaError("crossing label needs '/': " + tok);
    return CellLabel::crossing(split(tok.substr(1, slash - 1)), split(tok.substr(slash + 1)));
  }
  return CellLabel::generator(tok);
}

/// Parses the text format. Bounds are the bounding box of the cells.
inline BrickDiagram parse_brick(const std::string& text) {
  BrickDiagram b;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string s; ls >> s;) tok.push_back(s);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "wire") {
      if (tok.size() != 5) throw SyntaxError("line " + std::to_string(lineno) + ": expected 'wire x ytop ybottom name'", {{"offset", std::to_string(lineno)}});
      WireSegment s{parse_rational(tok[1]), parse_rational(tok[2]), parse_rational(tok[3]), {tok[4]}};
      if (!b.wires.empty() && b.wires.back().x == s.x && b.wires.back().ytop == s.ytop && b.wires.back().ybottom == s.ybottom)
        b.wires.back().names.push_back(tok[4]);
      else
        b.wires.push_back(std::move(s));
      continue;
    }
    if (tok.size() != 5) throw SyntaxError("line " + std::to_string(lineno) + ": expected 'x0 y0 x1 y1 label'", {{"offset", std::to_string(lineno)}});
    b.tiling.cells.push_back({parse_rational(tok[0]), parse_rational(tok[1]), parse_rational(tok[2]), parse_rational(tok[3])});
    b.labels.push_back(parse_label(tok[4]));
  }
  if (b.tiling.cells.empty()) throw SyntaxError("no cells", {{"offset", "0"}});
  Rect box = b.tiling.cells.front();
  for (const auto& c : b.tiling.cells) {
    box.x0 = std::min(box.x0, c.x0);
    box.y0 = std::min(box.y0, c.y0);
    box.x1 = std::max(box.x1, c.x1);
    box.y1 = std::max(box.y1, c.y1);
  }
  b.tiling.bounds = box;
  return b;
}

/// Tilings use the same cell lines; a "-" label marks an unlabeled cell.
inline Tiling parse_tiling(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Tiling t;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string s; ls >> s;) tok.push_back(s);
    if (tok.empty() || tok[0][0] == '#' || tok[0] == "wire") continue;
    if (tok.size() < 4) throw SyntaxError("expected 'x0 y0 x1 y1 [label]'");
    t.cells.push_back({parse_rational(tok[0]), parse_rational(tok[1]), parse_rational(tok[2]), parse_rational(tok[3])});
  }
  if (t.cells.empty()) throw SyntaxError("no cells");
  t.bounds = t.cells.front();
  for (const auto& c : t.cells) {
    t.bounds.x0 = std::min(t.bounds.x0, c.x0);
    t.bounds.y0 = std::min(t.bounds.y0, c.y0);
    t.bounds.x1 = std::max(t.bounds.x1, c.x1);
    t.bounds.y1 = std::max(t.bounds.y1, c.y1);
  }
  return t;
}

// Mark placement -----------------------------------------------------------------

/// A mark on a segment: where a string crosses the vertical boundary.
struct Mark {
  std::size_t segment;
  std::size_t index;
  ObjectName name;
  Rational x;
  Rational y;
  long left_cell;   // -1 on the left boundary
  long right_cell;  // -1 on the right boundary
};

/// Places every mark. Consecutive marks shared by the same pair of cells are
/// spread evenly, at fractions (k+1)/(n+1), over the overlap of the two cells'
/// edges (or the gap between them when they do not overlap).
inline std::vector<Mark> place_marks(const BrickDiagram& b, const Signature& sig) {
  std::vector<Mark> out;
  const auto segs = resolved_segments(b);
  for (std::size_t si = 0; si < segs.size(); ++si) {
    const auto& s = segs[si];
    const MarkOwners owners = assign_marks(b, s, sig);
    std::size_t i = 0;
    while (i < s.names.size()) {
      std::size_t j = i;
      while (j < s.names.size() && owners.left[j] == owners.left[i] && owners.right[j] == owners.right[i]) ++j;
      Rational lo = s.ytop, hi = s.ybottom;
      Rational lo2 = s.ytop, hi2 = s.ybottom;
      if (owners.left[i] >= 0) {
        lo = b.tiling.cells[owners.left[i]].y0;
        hi = b.tiling.cells[owners.left[i]].y1;
      }
      if (owners.right[i] >= 0) {
        lo2 = b.tiling.cells[owners.right[i]].y0;
        hi2 = b.tiling.cells[owners.right[i]].y1;
      }
      Rational a = std::max(lo, lo2), z = std::min(hi, hi2);
      if (a > z) std::swap(a, z);
      const std::size_t n = j - i;
      for (std::size_t k = 0; k < n; ++k) {
        Rational y = a + (z - a) * Rational(static_cast<long>(k + 1), static_cast<long>(n + 1));
        out.push_back({si, i + k, s.names[i + k], s.x, y, owners.left[i + k], owners.right[i + k]});
      }
      i = j;
    }
  }
  return out;
}

}  // namespace mcc
