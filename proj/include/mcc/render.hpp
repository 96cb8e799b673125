#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcc/brick.hpp"
#include "mcc/error.hpp"
#include "mcc/term.hpp"

namespace mcc {

enum class Style { string, brick };

inline const char* style_name(Style s) { return s == Style::string ? "string" : "brick"; }

inline Style parse_style(const std::string& s) {
  if (s == "string") return Style::string;
  if (s == "brick") return Style::brick;
  throw SchemaError("unknown style '" + s + "'", {{"path", "/options/style"}});
}

struct RenderOptions {
  Style style = Style::string;
  double width = 480;
  double height = 320;
  double font_size = 12;
  double margin = 24;
};

struct Point {
  double x = 0, y = 0;
};

struct Cubic {
  Point p0, c1, c2, p3;
};

struct SvgElement {
  enum class Kind { rect, text, circle, path, line };

  Kind kind = Kind::rect;
  std::string id;
  std::string cls;
  Point a;          // rect/line: first corner or endpoint; circle/text: anchor
  Point b;          // rect: opposite corner; line: second endpoint
  double r = 0;     // circle radius
  std::string text;
  std::vector<Cubic> segments;  // path
};

struct SvgScene {
  double width = 0, height = 0;
  std::vector<SvgElement> elements;

  std::size_t count_prefix(const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& e : elements) n += e.id.rfind(prefix, 0) == 0;
    return n;
  }
};

/// Deterministic coordinate text.
inline std::string fmt3(double v) {
  if (std::abs(v) < 0.0005) v = 0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline Cubic horizontal_cubic(Point from, Point to) {
  const double mx = (from.x + to.x) / 2;
  return {from, {mx, from.y}, {mx, to.y}, to};
}

struct Frame {
  double x0, y0, sx, sy;
  Point at(const Rational& x, const Rational& y) const { return {x0 + sx * to_double(x), y0 + sy * to_double(y)}; }
  double px(const Rational& x) const { return x0 + sx * to_double(x); }
  double py(const Rational& y) const { return y0 + sy * to_double(y); }
};

inline std::string wire_name_of(const SvgElement& e) {
  // wire:<name>:<k>
  auto first = e.id.find(':');
  auto last = e.id.rfind(':');
  return e.id.substr(first + 1, last - first - 1);
}

}  // namespace detail

/// Per-cell port lists in the placed-mark order of the layout.
struct CellPorts {
  std::vector<std::size_t> dom;  // indices into the mark list
  std::vector<std::size_t> cod;
};

inline std::vector<CellPorts> cell_ports(const BrickDiagram& b, const std::vector<Mark>& marks) {
  std::vector<CellPorts> ports(b.tiling.cells.size());
  // place_marks emits marks top to bottom within each segment, and each cell's
  // dom (resp. cod) lies on a single segment, so this order is the word order.
  for (std::size_t i = 0; i < marks.size(); ++i) {
    if (marks[i].right_cell >= 0) ports[marks[i].right_cell].dom.push_back(i);
    if (marks[i].left_cell >= 0) ports[marks[i].left_cell].cod.push_back(i);
  }
  return ports;
}

namespace detail {

inline SvgScene render_brick_scene(const Layout& lay, const Signature& sig, const RenderOptions& opts, const Frame& f) {
  SvgScene s{opts.width, opts.height, {}};
  const BrickDiagram& b = lay.brick;
  for (std::size_t i = 0; i < b.tiling.cells.size(); ++i) {
    const Rect& c = b.tiling.cells[i];
    const CellLabel& l = b.labels[i];
    const std::string path = lay.leaf_paths[i].str();
    const bool is_gen = l.kind == CellLabel::Kind::generator;
    SvgElement r{SvgElement::Kind::rect, (is_gen ? "node:" : "cell:") + path, is_gen ? "brick" : "brick passthrough",
                 f.at(c.x0, c.y0), f.at(c.x1, c.y1), 0, {}, {}};
    s.elements.push_back(r);
    if (is_gen) {
      Point mid{(r.a.x + r.b.x) / 2, (r.a.y + r.b.y) / 2 + opts.font_size / 3};
      s.elements.push_back({SvgElement::Kind::text, "label:" + path, "label", mid, {}, 0, l.name, {}});
    }
  }
  std::map<std::string, std::size_t> seen;
  const double radius = std::max(2.0, opts.font_size / 4);
  for (const auto& m : place_marks(b, sig)) {
    const std::size_t k = seen[m.name]++;
    const Point p = f.at(m.x, m.y);
    const std::string id = m.name + ":" + std::to_string(k);
    s.elements.push_back({SvgElement::Kind::circle, "wire:" + id, "mark", p, {}, radius, {}, {}});
    s.elements.push_back({SvgElement::Kind::text, "mark-label:" + id, "mark-label",
                          {p.x + radius + 1, p.y - radius - 1}, {}, 0, m.name, {}});
  }
  return s;
}

inline SvgScene render_string_scene(const Layout& lay, const Signature& sig, const RenderOptions& opts, const Frame& f) {
  SvgScene s{opts.width, opts.height, {}};
  const BrickDiagram& b = lay.brick;
  const auto marks = place_marks(b, sig);
  const auto ports = cell_ports(b, marks);

  // Node boxes and their port points.
  struct NodeGeom {
    Point tl, br;
    std::vector<Point> in, out;
  };
  std::vector<NodeGeom> nodes(b.tiling.cells.size());
  for (std::size_t i = 0; i < b.tiling.cells.size(); ++i) {
    if (b.labels[i].kind != CellLabel::Kind::generator) continue;
    const Rect& c = b.tiling.cells[i];
    const double cx = f.px((c.x0 + c.x1) / 2), cy = f.py((c.y0 + c.y1) / 2);
    const double cw = f.sx * to_double(c.width()), ch = f.sy * to_double(c.height());
    const double w = std::min(cw * 0.5, std::max(opts.font_size * 2.5, cw * 0.3));
    const double h = std::min(ch * 0.6, std::max(opts.font_size * 1.8, ch * 0.3));
    NodeGeom& g = nodes[i];
    g.tl = {cx - w / 2, cy - h / 2};
    g.br = {cx + w / 2, cy + h / 2};
    for (std::size_t k = 0; k < ports[i].dom.size(); ++k)
      g.in.push_back({g.tl.x, g.tl.y + h * double(k + 1) / double(ports[i].dom.size() + 1)});
    for (std::size_t k = 0; k < ports[i].cod.size(); ++k)
      g.out.push_back({g.br.x, g.tl.y + h * double(k + 1) / double(ports[i].cod.size() + 1)});
    const std::string path = lay.leaf_paths[i].str();
    s.elements.push_back({SvgElement::Kind::rect, "node:" + path, "node", g.tl, g.br, 0, {}, {}});
    s.elements.push_back({SvgElement::Kind::text, "label:" + path, "label", {cx, cy + opts.font_size / 3}, {}, 0,
                          b.labels[i].name, {}});
  }

  // Where a string entering cell c at dom index j leaves it, for Id and Sym cells.
  auto through = [&](std::size_t c, std::size_t j) {
    const CellLabel& l = b.labels[c];
    if (l.kind == CellLabel::Kind::crossing) return j < l.w1.size() ? l.w2.size() + j : j - l.w1.size();
    return j;
  };
  auto index_in = [](const std::vector<std::size_t>& v, std::size_t m) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), m) - v.begin());
  };

  // Follow each string from its source: a left-boundary mark or a node output.
  std::map<std::string, std::size_t> seen;
  auto trace = [&](const std::string& name, Point start, std::size_t mark) {
    SvgElement e{SvgElement::Kind::path, {}, "wire", {}, {}, 0, name, {}};
    Point cur = start;
    while (true) {
      const Point mp = f.at(marks[mark].x, marks[mark].y);
      if (std::abs(mp.x - cur.x) > 1e-9 || std::abs(mp.y - cur.y) > 1e-9) e.segments.push_back(horizontal_cubic(cur, mp));
      cur = mp;
      const long c = marks[mark].right_cell;
      if (c < 0) break;
      const std::size_t j = index_in(ports[c].dom, mark);
      if (b.labels[c].kind == CellLabel::Kind::generator) {
        e.segments.push_back(horizontal_cubic(cur, nodes[c].in[j]));
        break;
      }
      mark = ports[c].cod[through(c, j)];
    }
    if (e.segments.empty()) e.segments.push_back({cur, cur, cur, cur});
    e.id = "wire:" + name + ":" + std::to_string(seen[name]++);
    s.elements.push_back(std::move(e));
  };
  for (std::size_t m = 0; m < marks.size(); ++m)
    if (marks[m].left_cell < 0) trace(marks[m].name, f.at(marks[m].x, marks[m].y), m);
  for (std::size_t i = 0; i < b.tiling.cells.size(); ++i) {
    if (b.labels[i].kind != CellLabel::Kind::generator) continue;
    for (std::size_t k = 0; k < ports[i].cod.size(); ++k)
      trace(marks[ports[i].cod[k]].name, nodes[i].out[k], ports[i].cod[k]);
  }
  return s;
}

}  // namespace detail

/// Renders t in the requested style. Both styles draw from the same brick
/// layout, scaled anisotropically into the viewport minus a margin.
/// Throws ContainsSym for brick style on terms with crossings.
inline SvgScene render_scene(const Term& t, const Signature& sig, const RenderOptions& opts) {
  if (!(opts.width > 0) || !(opts.height > 0) || !(opts.font_size > 0) || opts.margin < 0 ||
      2 * opts.margin >= std::min(opts.width, opts.height))
    throw SchemaError("render options need positive width, height and font size and a margin that fits",
                      {{"path", "/options"}});
  const Layout lay = layout_term(t, sig, opts.style == Style::string);
  const detail::Frame f{opts.margin, opts.margin, opts.width - 2 * opts.margin, opts.height - 2 * opts.margin};
  return opts.style == Style::brick ? detail::render_brick_scene(lay, sig, opts, f)
                                    : detail::render_string_scene(lay, sig, opts, f);
}

inline std::string path_data(const std::vector<Cubic>& segs) {
  std::string d;
  Point pen{NAN, NAN};
  for (const auto& c : segs) {
    if (!(std::abs(c.p0.x - pen.x) <= 1e-6 && std::abs(c.p0.y - pen.y) <= 1e-6))
      d += (d.empty() ? "M" : " M") + fmt3(c.p0.x) + "," + fmt3(c.p0.y);
    d += " C" + fmt3(c.c1.x) + "," + fmt3(c.c1.y) + " " + fmt3(c.c2.x) + "," + fmt3(c.c2.y) + " " + fmt3(c.p3.x) +
         "," + fmt3(c.p3.y);
    pen = c.p3;
  }
  return d;
}

inline std::string to_svg(const SvgScene& s, const RenderOptions& opts) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt3(s.width) +
                    "\" height=\"" + fmt3(s.height) + "\" viewBox=\"0 0 " + fmt3(s.width) + " " + fmt3(s.height) +
                    "\" font-family=\"sans-serif\" font-size=\"" + fmt3(opts.font_size) + "\">\n";
  out += "<style>.node,.brick{fill:#fff;stroke:#000}.passthrough{fill:#f4f4f4;stroke:#999}"
         ".wire{fill:none;stroke:#000}.mark{fill:#000}.label{text-anchor:middle}</style>\n";
  for (const auto& e : s.elements) {
    const std::string ids = " id=\"" + detail::xml_escape(e.id) + "\" class=\"" + e.cls + "\"";
    switch (e.kind) {
      case SvgElement::Kind::rect:
        out += "<rect" + ids + " x=\"" + fmt3(e.a.x) + "\" y=\"" + fmt3(e.a.y) + "\" width=\"" + fmt3(e.b.x - e.a.x) +
               "\" height=\"" + fmt3(e.b.y - e.a.y) + "\"/>\n";
        break;
      case SvgElement::Kind::text:
        out += "<text" + ids + " x=\"" + fmt3(e.a.x) + "\" y=\"" + fmt3(e.a.y) + "\">" + detail::xml_escape(e.text) +
               "</text>\n";
        break;
      case SvgElement::Kind::circle:
        out += "<circle" + ids + " cx=\"" + fmt3(e.a.x) + "\" cy=\"" + fmt3(e.a.y) + "\" r=\"" + fmt3(e.r) + "\"/>\n";
        break;
      case SvgElement::Kind::line:
        out += "<line" + ids + " x1=\"" + fmt3(e.a.x) + "\" y1=\"" + fmt3(e.a.y) + "\" x2=\"" + fmt3(e.b.x) +
               "\" y2=\"" + fmt3(e.b.y) + "\"/>\n";
        break;
      case SvgElement::Kind::path:
        out += "<path" + ids + " d=\"" + path_data(e.segments) + "\"/>\n";
        break;
    }
  }
  out += "</svg>\n";
  return out;
}

inline std::string render(const Term& t, const Signature& sig, const RenderOptions& opts) {
  return to_svg(render_scene(t, sig, opts), opts);
}

/// Structural checks on a scene. Codes: out-of-viewport, duplicate-id,
/// missing-id, discontinuous-wire.
inline std::vector<Violation> scene_checks(const SvgScene& s) {
  std::vector<Violation> out;
  auto inside = [&](Point p) { return p.x >= -1e-6 && p.y >= -1e-6 && p.x <= s.width + 1e-6 && p.y <= s.height + 1e-6; };
  std::set<std::string> ids;
  for (const auto& e : s.elements) {
    if (e.id.empty()) out.push_back({"missing-id", ""});
    else if (!ids.insert(e.id).second) out.push_back({"duplicate-id", e.id});
    std::vector<Point> pts;
    switch (e.kind) {
      case SvgElement::Kind::rect:
      case SvgElement::Kind::line: pts = {e.a, e.b}; break;
      case SvgElement::Kind::text: pts = {e.a}; break;
      case SvgElement::Kind::circle: pts = {{e.a.x - e.r, e.a.y - e.r}, {e.a.x + e.r, e.a.y + e.r}}; break;
      case SvgElement::Kind::path:
        for (const auto& c : e.segments) pts.insert(pts.end(), {c.p0, c.c1, c.c2, c.p3});
        for (std::size_t i = 1; i < e.segments.size(); ++i) {
          const Point a = e.segments[i - 1].p3, b = e.segments[i].p0;
          if (std::abs(a.x - b.x) > 1e-6 || std::abs(a.y - b.y) > 1e-6) out.push_back({"discontinuous-wire", e.id});
        }
        if (e.segments.empty()) out.push_back({"discontinuous-wire", e.id});
        break;
    }
    for (const auto& p : pts)
      if (!inside(p)) {
        out.push_back({"out-of-viewport", e.id});
        break;
      }
  }
  return out;
}

/// Wire names of the string elements (`wire:` paths), sorted, with repeats.
inline std::vector<std::string> wire_names(const SvgScene& s) {
  std::vector<std::string> out;
  for (const auto& e : s.elements)
    if (e.kind == SvgElement::Kind::path && e.id.rfind("wire:", 0) == 0) out.push_back(detail::wire_name_of(e));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mcc
