#pragma once

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "mcc/backend.hpp"
#include "mcc/brick.hpp"
#include "mcc/error.hpp"
#include "mcc/signature.hpp"
#include "mcc/term.hpp"

namespace mcc {

using Json = nlohmann::json;

inline constexpr int kILVersion = 1;

struct ILDocument {
  int version = kILVersion;
  Signature signature;
  std::optional<Term> term;
  std::optional<BrickDiagram> brick;
  std::optional<MatrixBindings> bindings;
};

inline bool operator==(const ILDocument& a, const ILDocument& b) {
  return a.version == b.version && a.signature.objects == b.signature.objects &&
         a.signature.generators == b.signature.generators && a.term == b.term && a.brick == b.brick &&
         a.bindings == b.bindings;
}

// Encoding -----------------------------------------------------------------------

inline Json word_to_json(const Word& w) { return Json(w.objects); }

/// Seq and Par nodes list their right spine as one flat `args` array.
inline Json term_to_json(const Term& t) {
  switch (t.kind()) {
    case TermKind::gen: return {{"op", "gen"}, {"name", t.name()}};
    case TermKind::id: return {{"op", "id"}, {"wire", word_to_json(t.wire())}};
    case TermKind::sym: return {{"op", "sym"}, {"left", word_to_json(t.left())}, {"right", word_to_json(t.right())}};
    case TermKind::seq:
    case TermKind::par: {
      Json args = Json::array();
      const Term* cur = &t;
      while (cur->kind() == t.kind()) {
        args.push_back(term_to_json(cur->first()));
        cur = &cur->second();
      }
      args.push_back(term_to_json(*cur));
      return {{"op", kind_name(t.kind())}, {"args", std::move(args)}};
    }
  }
  return {};
}

inline Json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"entries", m.entries}};
}

inline Json bindings_to_json(const MatrixBindings& b) {
  Json mats = Json::object();
  for (const auto& [k, m] : b.matrices) mats[k] = matrix_to_json(m);
  return {{"mode", mode_name(b.mode)}, {"dims", b.dims}, {"matrices", std::move(mats)}};
}

inline Json rect_to_json(const Rect& r) {
  return {{"x0", rational_str(r.x0)}, {"y0", rational_str(r.y0)}, {"x1", rational_str(r.x1)}, {"y1", rational_str(r.y1)}};
}

inline Json brick_to_json(const BrickDiagram& b) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < b.tiling.cells.size(); ++i) {
    Json c = rect_to_json(b.tiling.cells[i]);
    c["label"] = format_label(b.labels[i]);
    cells.push_back(std::move(c));
  }
  Json wires = Json::array();
  for (const auto& s : b.wires)
    wires.push_back({{"x", rational_str(s.x)}, {"ytop", rational_str(s.ytop)}, {"ybottom", rational_str(s.ybottom)},
                     {"names", s.names}});
  return {{"bounds", rect_to_json(b.tiling.bounds)}, {"cells", std::move(cells)}, {"wires", std::move(wires)}};
}

inline Json signature_to_json(const Signature& sig) {
  Json gens = Json::array();
  for (const auto& g : sig.generators)
    gens.push_back({{"name", g.name}, {"dom", word_to_json(g.dom)}, {"cod", word_to_json(g.cod)}});
  return {{"objects", sig.objects}, {"generators", std::move(gens)}};
}

inline Json to_json(const ILDocument& doc) {
  Json j{{"version", doc.version}, {"signature", signature_to_json(doc.signature)}};
  if (doc.term) j["term"] = term_to_json(*doc.term);
  if (doc.brick) j["brick"] = brick_to_json(*doc.brick);
  if (doc.bindings) j["bindings"] = bindings_to_json(*doc.bindings);
  return j;
}

/// Canonical bytes: sorted keys, no whitespace, UTF-8.
inline std::string canonical_dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

inline std::string serialize(const ILDocument& doc) { return canonical_dump(to_json(doc)); }

// Decoding -----------------------------------------------------------------------

namespace detail {

inline std::string pointer_escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

/// A JSON value together with its JSON-pointer location, for error reporting.
struct At {
  const Json& j;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError(what + " at " + (path.empty() ? "/" : path), {{"path", path.empty() ? "/" : path}});
  }

  At operator[](const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end()) At{j, path + "/" + pointer_escape(key)}.fail("missing field");
    return {*it, path + "/" + pointer_escape(key)};
  }
  At operator[](std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }

  bool has(const std::string& key) const { return j.contains(key); }

  const At& object(std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail("expected an object");
    for (const auto& [k, _] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) At{j, path + "/" + pointer_escape(k)}.fail("unknown field '" + k + "'");
    }
    return *this;
  }
  const At& array() const {
    if (!j.is_array()) fail("expected an array");
    return *this;
  }
  std::string str() const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }
  std::size_t count() const {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) fail("expected a non-negative integer");
    return j.get<std::size_t>();
  }
  double number() const {
    if (!j.is_number()) fail("expected a number");
    return j.get<double>();
  }
  Rational rational() const {
    try {
      return parse_rational(str());
    } catch (const SchemaError&) {
      fail("malformed rational");
    }
  }
  Word word() const {
    array();
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) w.objects.push_back((*this)[i].str());
    return w;
  }
};

inline Word declared_word(const At& a, const Signature& sig) {
  Word w = a.word();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!sig.has_object(w[i])) a[i].fail("undeclared object '" + w[i] + "'");
  return w;
}

inline Term parse_term(const At& a, const Signature& sig) {
  if (!a.j.is_object()) a.fail("expected a term object");
  const std::string op = a["op"].str();
  if (op == "gen") {
    a.object({"op", "name"});
    std::string name = a["name"].str();
    if (!sig.find(name)) a["name"].fail("undeclared generator '" + name + "'");
    return Term::gen(std::move(name));
  }
  if (op == "id") {
    a.object({"op", "wire"});
    return Term::id(declared_word(a["wire"], sig));
  }
  if (op == "sym") {
    a.object({"op", "left", "right"});
    return Term::sym(declared_word(a["left"], sig), declared_word(a["right"], sig));
  }
  if (op == "seq" || op == "par") {
    a.object({"op", "args"});
    At args = a["args"];
    args.array();
    if (args.j.empty()) args.fail("args must not be empty");
    Term acc = parse_term(args[args.j.size() - 1], sig);
    for (std::size_t i = args.j.size() - 1; i-- > 0;) {
      Term head = parse_term(args[i], sig);
      acc = op == "seq" ? Term::seq(std::move(head), std::move(acc)) : Term::par(std::move(head), std::move(acc));
    }
    return acc;
  }
  a["op"].fail("unknown op '" + op + "'");
}

/// JSON pointer (relative to the term's own location) of the subterm at p,
/// following the flattened-spine encoding used by term_to_json.
inline std::string term_json_path(const Term& t, const Path& p) {
  std::string out;
  const Term* cur = &t;
  std::size_t i = 0;
  while (i < p.steps.size()) {
    const TermKind op = cur->kind();
    std::size_t index = 0;
    // Walk along the spine of `op` nodes; each step 1 that stays on the spine
    // moves to the next argument of the same array.
    while (true) {
      if (p.steps[i] == 0) {
        out += "/args/" + std::to_string(index);
        cur = &cur->first();
        ++i;
        break;
      }
      const Term& next = cur->second();
      ++index;
      ++i;
      if (next.kind() != op) {
        out += "/args/" + std::to_string(index);
        cur = &next;
        break;
      }
      cur = &next;
      if (i == p.steps.size()) {
        // The path names an inner spine node, which has no JSON object of its own;
        // report the argument where that suffix starts.
        out += "/args/" + std::to_string(index);
        return out;
      }
    }
  }
  return out;
}

inline Matrix parse_matrix(const At& a) {
  a.object({"rows", "cols", "entries"});
  const std::size_t r = a["rows"].count(), c = a["cols"].count();
  At e = a["entries"];
  e.array();
  if (e.j.size() != r * c) e.fail("expected " + std::to_string(r * c) + " entries, found " + std::to_string(e.j.size()));
  std::vector<double> entries;
  entries.reserve(e.j.size());
  for (std::size_t i = 0; i < e.j.size(); ++i) entries.push_back(e[i].number());
  return Matrix(r, c, std::move(entries));
}

inline Rect parse_rect(const At& a, std::initializer_list<const char*> allowed) {
  a.object(allowed);
  return {a["x0"].rational(), a["y0"].rational(), a["x1"].rational(), a["y1"].rational()};
}

}  // namespace detail

inline Signature parse_signature(const Json& j, const std::string& at = "/signature") {
  detail::At a{j, at};
  a.object({"objects", "generators"});
  Signature sig;
  sig.objects = a["objects"].word().objects;
  detail::At gens = a["generators"];
  gens.array();
  for (std::size_t i = 0; i < gens.j.size(); ++i) {
    detail::At g = gens[i];
    g.object({"name", "dom", "cod"});
    sig.generators.push_back({g["name"].str(), g["dom"].word(), g["cod"].word()});
  }
  auto v = validate_signature(sig);
  if (!v.empty()) throw SchemaError("invalid signature: " + v.front().code + " " + v.front().detail, {{"path", at}, {"violation", v.front().code}});
  return sig;
}

inline Term parse_term_json(const Json& j, const Signature& sig, const std::string& at = "/term") {
  detail::At a{j, at};
  Term t = detail::parse_term(a, sig);
  try {
    typecheck(t, sig);
  } catch (const TypeError& e) {
    Error::Fields f = e.fields();
    const std::string rel = detail::term_json_path(t, [&] {
      Path p;
      const std::string s = e.field("path");
      for (std::size_t i = 2; i < s.size(); i += 2) p.steps.push_back(static_cast<std::uint8_t>(s[i] - '0'));
      return p;
    }());
    f.emplace_back("json_path", at + rel);
    throw TypeError(std::string(e.what()) + " (at " + at + rel + ")", std::move(f));
  }
  return t;
}

inline MatrixBindings parse_bindings(const Json& j, const Signature* sig = nullptr, const std::string& at = "/bindings") {
  detail::At a{j, at};
  a.object({"mode", "dims", "matrices"});
  MatrixBindings b;
  try {
    b.mode = parse_mode(a["mode"].str());
  } catch (const SchemaError&) {
    a["mode"].fail("mode must be \"kron\" or \"dirsum\"");
  }
  detail::At dims = a["dims"];
  if (!dims.j.is_object()) dims.fail("expected an object");
  for (const auto& [k, _] : dims.j.items()) {
    const std::size_t d = dims[k].count();
    if (d == 0) dims[k].fail("dimensions must be positive");
    b.dims[k] = d;
  }
  detail::At mats = a["matrices"];
  if (!mats.j.is_object()) mats.fail("expected an object");
  for (const auto& [k, _] : mats.j.items()) b.matrices.emplace(k, detail::parse_matrix(mats[k]));
  if (sig) check_bindings(*sig, b, b.mode);
  return b;
}

inline BrickDiagram parse_brick_json(const Json& j, const Signature& sig, const std::string& at = "/brick") {
  detail::At a{j, at};
  a.object({"bounds", "cells", "wires"});
  BrickDiagram b;
  b.tiling.bounds = detail::parse_rect(a["bounds"], {"x0", "y0", "x1", "y1"});
  detail::At cells = a["cells"];
  cells.array();
  for (std::size_t i = 0; i < cells.j.size(); ++i) {
    b.tiling.cells.push_back(detail::parse_rect(cells[i], {"x0", "y0", "x1", "y1", "label"}));
    b.labels.push_back(parse_label(cells[i]["label"].str()));
    if (b.labels.back().kind == CellLabel::Kind::generator && !sig.find(b.labels.back().name))
      cells[i]["label"].fail("undeclared generator '" + b.labels.back().name + "'");
  }
  detail::At wires = a["wires"];
  wires.array();
  for (std::size_t i = 0; i < wires.j.size(); ++i) {
    detail::At w = wires[i];
    w.object({"x", "ytop", "ybottom", "names"});
    b.wires.push_back({w["x"].rational(), w["ytop"].rational(), w["ybottom"].rational(), detail::declared_word(w["names"], sig).objects});
  }
  validate_brick(b, sig);
  return b;
}

/// Parses and fully validates a document.
inline ILDocument from_json(const Json& j) {
  detail::At root{j, ""};
  root.object({"version", "signature", "term", "brick", "bindings"});
  ILDocument doc;
  const detail::At v = root["version"];
  if (!v.j.is_number_integer() || v.j.get<long long>() != kILVersion)
    v.fail("unsupported version (expected " + std::to_string(kILVersion) + ")");
  doc.signature = parse_signature(root["signature"].j);
  if (root.has("term")) doc.term = parse_term_json(j.at("term"), doc.signature);
  if (root.has("brick")) doc.brick = parse_brick_json(j.at("brick"), doc.signature);
  if (root.has("bindings")) doc.bindings = parse_bindings(j.at("bindings"), &doc.signature);
  return doc;
}

/// Parses JSON text. Throws SyntaxError{offset} for malformed JSON.
inline Json parse_json_text(const std::string& bytes) {
  try {
    return Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw SyntaxError(std::string("malformed JSON: ") + e.what(), {{"offset", std::to_string(e.byte)}});
  }
}

inline ILDocument parse(const std::string& bytes) { return from_json(parse_json_text(bytes)); }

}  // namespace mcc
