#pragma once

#include <string>

#include "mcc/backend.hpp"
#include "mcc/brick.hpp"
#include "mcc/codegen.hpp"
#include "mcc/il.hpp"
#include "mcc/render.hpp"
#include "mcc/rewrite.hpp"
#include "mcc/term.hpp"

// The verbs shared by the command line tool and the HTTP service. Each takes a
// parsed document plus an options object and returns JSON, so both front ends
// print byte-identical results.

namespace mcc::pipeline {

/// The term of a document, read off the brick diagram when no term is given.
inline Term document_term(const ILDocument& doc) {
  if (doc.term) return *doc.term;
  if (doc.brick) return brick_to_term(*doc.brick, doc.signature);
  throw SchemaError("document has neither a term nor a brick diagram", {{"path", "/term"}});
}

namespace detail {

using mcc::detail::At;

inline const Json& empty_object() {
  static const Json j = Json::object();
  return j;
}

inline bool opt_bool(const Json& options, const char* key, bool fallback) {
  if (!options.contains(key)) return fallback;
  const Json& v = options.at(key);
  if (!v.is_boolean()) At{v, std::string("/options/") + key}.fail("expected a boolean");
  return v.get<bool>();
}

inline double opt_number(const Json& options, const char* key, double fallback) {
  if (!options.contains(key)) return fallback;
  return At{options.at(key), std::string("/options/") + key}.number();
}

inline std::string opt_string(const Json& options, const char* key, const std::string& fallback) {
  if (!options.contains(key)) return fallback;
  return At{options.at(key), std::string("/options/") + key}.str();
}

inline Json type_json(const MorphismType& ty) {
  return {{"dom", ty.dom.objects}, {"cod", ty.cod.objects}, {"sequent", ty.str()}};
}

}  // namespace detail

inline TargetTemplate parse_template(const Json& j, const std::string& at = "/options/emit") {
  mcc::detail::At a{j, at};
  if (!j.is_object()) a.fail("expected a template object");
  TargetTemplate tpl;
  for (const auto& [k, v] : j.items()) {
    const std::string s = mcc::detail::At{v, at + "/" + k}.str();
    if (k == "prelude")
      tpl.prelude = s;
    else if (mcc::detail::template_placeholders().count(k))
      tpl.statements[k] = s;
    else
      a[k].fail("unknown template statement '" + k + "'");
  }
  return tpl;
}

inline Json check(const ILDocument& doc, const Json& = detail::empty_object()) {
  const Term t = document_term(doc);
  return {{"type", detail::type_json(typecheck(t, doc.signature))}};
}

/// Options: mode ("kron" | "dirsum", default: the bindings' mode), emit (template object).
inline Json compile(const ILDocument& doc, const Json& options = detail::empty_object()) {
  const Term t = document_term(doc);
  if (!doc.bindings) throw MissingBinding("document has no bindings", {{"name", "bindings"}});
  const Mode mode = parse_mode(detail::opt_string(options, "mode", mode_name(doc.bindings->mode)));
  if (mode != doc.bindings->mode) check_bindings(doc.signature, *doc.bindings, mode);
  if (options.contains("emit")) {
    const auto code = codegen(t, doc.signature, *doc.bindings, mode, parse_template(options.at("emit")));
    return {{"code", code.source}, {"mode", mode_name(mode)}, {"statements", code.statement_counts}};
  }
  return {{"matrix", matrix_to_json(evaluate(t, doc.signature, *doc.bindings, mode))}, {"mode", mode_name(mode)}};
}

/// Options: minimize_width (bool). Returns the rewritten document.
inline Json normalize(const ILDocument& doc, const Json& options = detail::empty_object()) {
  ILDocument out = doc;
  Term t = normalize(document_term(doc), doc.signature);
  if (detail::opt_bool(options, "minimize_width", false)) {
    t = doc.bindings ? minimize_width(t, doc.signature, doc.bindings->dims) : minimize_width(t, doc.signature);
  }
  out.term = t;
  out.brick.reset();
  return to_json(out);
}

inline RenderOptions render_options(const Json& options) {
  RenderOptions o;
  o.style = parse_style(detail::opt_string(options, "style", "string"));
  o.width = detail::opt_number(options, "width", o.width);
  o.height = detail::opt_number(options, "height", o.height);
  o.font_size = detail::opt_number(options, "font_size", o.font_size);
  o.margin = detail::opt_number(options, "margin", o.margin);
  return o;
}

/// Options: style, width, height, font_size, margin.
inline Json render(const ILDocument& doc, const Json& options = detail::empty_object()) {
  const RenderOptions o = render_options(options);
  const SvgScene scene = render_scene(document_term(doc), doc.signature, o);
  return {{"style", style_name(o.style)}, {"svg", to_svg(scene, o)}};
}

inline Json proof(const ILDocument& doc, const Json& = detail::empty_object()) {
  const ProofTree p = to_proof_tree(document_term(doc), doc.signature);
  return {{"text", p.to_text()}, {"latex", p.to_latex()}, {"nodes", p.node_count()}};
}

inline Json stats(const ILDocument& doc, const Json& = detail::empty_object()) {
  const Term t = document_term(doc);
  const MorphismType ty = typecheck(t, doc.signature);
  return {{"tensor_width", tensor_width(t)}, {"leaves", leaf_count(t)},   {"generators", generator_count(t)},
          {"depth", depth(t)},               {"size", t.size()},          {"type", detail::type_json(ty)}};
}

inline Json error_json(const Error& e) {
  Json err{{"code", e.code()}, {"message", e.what()}};
  for (const auto& [k, v] : e.fields()) err[k] = v;
  return {{"error", std::move(err)}};
}

/// Codes for malformed requests; everything else from the library is a
/// well-formed request describing an invalid diagram.
inline bool is_request_error(const std::string& code) {
  return code == "SyntaxError" || code == "SchemaError" || code == "TemplateError" || code == "InvalidTiling";
}

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"check", "compile", "normalize", "render", "proof", "stats"};
  return v;
}

inline Json run(const std::string& verb, const ILDocument& doc, const Json& options) {
  if (!options.is_object()) throw SchemaError("options must be an object", {{"path", "/options"}});
  if (verb == "check") return check(doc, options);
  if (verb == "compile") return compile(doc, options);
  if (verb == "normalize") return normalize(doc, options);
  if (verb == "render") return render(doc, options);
  if (verb == "proof") return proof(doc, options);
  if (verb == "stats") return stats(doc, options);
  throw SchemaError("unknown verb '" + verb + "'", {{"path", "/"}});
}

/// A request body is either a bare document or {"document": ..., "options": ...}.
inline std::pair<ILDocument, Json> parse_request(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) throw SyntaxError("empty request body", {{"offset", "0"}});
  Json j = parse_json_text(body);
  if (j.is_object() && j.contains("document")) {
    mcc::detail::At a{j, ""};
    a.object({"document", "options"});
    Json options = j.contains("options") ? j.at("options") : Json::object();
    try {
      return {from_json(j.at("document")), std::move(options)};
    } catch (const SchemaError& e) {
      Error::Fields f = e.fields();
      for (auto& [k, v] : f)
        if (k == "path") v = "/document" + (v == "/" ? std::string() : v);
      throw SchemaError(e.what(), std::move(f));
    }
  }
  return {from_json(j), Json::object()};
}

/// Response text for a verb; always valid JSON, errors included.
struct Response {
  int status = 200;
  std::string body;
};

inline Response respond(const std::string& verb, const std::string& body) {
  try {
    auto [doc, options] = parse_request(body);
    return {200, canonical_dump(run(verb, doc, options))};
  } catch (const Error& e) {
    return {is_request_error(e.code()) ? 400 : 422, canonical_dump(error_json(e))};
  } catch (const std::exception& e) {
    return {400, canonical_dump({{"error", {{"code", "BadRequest"}, {"message", e.what()}}}})};
  }
}

}  // namespace mcc::pipeline
