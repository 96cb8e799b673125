#pragma once

#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "mcc/backend.hpp"
#include "mcc/error.hpp"
#include "mcc/term.hpp"

namespace mcc {

/// Textual templates for a straight-line target program. Every entry except
/// the prelude is one statement with {placeholders}:
///   constant   {var} {rows} {cols} {entries}
///   identity   {var} {n}
///   swap       {var} {m} {n} {mode}
///   product    {var} {lhs} {rhs}
///   kronecker  {var} {lhs} {rhs}     (kron mode)
///   directsum  {var} {lhs} {rhs}     (dirsum mode)
///   output     {var} {rows} {cols}
/// {entries} is a row-major, comma-separated list of shortest round-trip decimals.
struct TargetTemplate {
  std::string prelude;
  std::map<std::string, std::string> statements;
};

inline std::string format_double(double d) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline const std::map<std::string, std::vector<std::string>>& template_placeholders() {
  static const std::map<std::string, std::vector<std::string>> p{
      {"constant", {"var", "rows", "cols", "entries"}},
      {"identity", {"var", "n"}},
      {"swap", {"var", "m", "n", "mode"}},
      {"product", {"var", "lhs", "rhs"}},
      {"kronecker", {"var", "lhs", "rhs"}},
      {"directsum", {"var", "lhs", "rhs"}},
      {"output", {"var", "rows", "cols"}},
  };
  return p;
}

// `{{` and `}}` stand for literal braces.
inline std::string substitute(const std::string& kind, const std::string& text,
                              const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if ((text[i] == '{' || text[i] == '}') && i + 1 < text.size() && text[i + 1] == text[i]) {
      out += text[i];
      i += 2;
    } else if (text[i] == '{') {
      auto close = text.find('}', i);
      if (close == std::string::npos)
        throw TemplateError("unterminated placeholder in '" + kind + "'", {{"statement", kind}});
      const std::string key = text.substr(i + 1, close - i - 1);
      auto it = values.find(key);
      if (it == values.end())
        throw TemplateError("unknown placeholder {" + key + "} in '" + kind + "'", {{"statement", kind}, {"placeholder", key}});
      out += it->second;
      i = close + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

}  // namespace detail

/// Checks that the statements needed for `mode` exist and mention {var}.
inline void check_template(const TargetTemplate& tpl, Mode mode) {
  std::vector<std::string> needed{"constant", "identity", "swap", "product", "output",
                                  mode == Mode::kron ? "kronecker" : "directsum"};
  for (const auto& k : needed) {
    auto it = tpl.statements.find(k);
    if (it == tpl.statements.end())
      throw TemplateError("template has no '" + k + "' statement", {{"statement", k}});
    if (it->second.find("{var}") == std::string::npos)
      throw TemplateError("statement '" + k + "' never uses {var}", {{"statement", k}, {"placeholder", "var"}});
  }
}

/// Emits one statement per term node, children first.
class CodegenBackend {
 public:
  using value_type = std::string;

  CodegenBackend(const TargetTemplate& tpl, const MatrixBindings& b, Mode mode) : tpl_(tpl), b_(b), mode_(mode) {}

  std::string id(const Word& w) { return emit("identity", {{"n", std::to_string(word_dim(w, b_.dims, mode_))}}); }

  std::string gen(const Generator& g) {
    const Matrix& m = MatrixBackend(b_, mode_).gen(g);
    std::string entries;
    for (std::size_t i = 0; i < m.entries.size(); ++i) entries += (i ? ", " : "") + format_double(m.entries[i]);
    return emit("constant", {{"rows", std::to_string(m.rows)}, {"cols", std::to_string(m.cols)}, {"entries", entries}});
  }

  std::string sym(const Word& u, const Word& v) {
    return emit("swap", {{"m", std::to_string(word_dim(u, b_.dims, mode_))},
                         {"n", std::to_string(word_dim(v, b_.dims, mode_))},
                         {"mode", mode_name(mode_)}});
  }

  std::string seq(const std::string& a, const std::string& b) { return emit("product", {{"lhs", a}, {"rhs", b}}); }

  std::string par(const std::string& a, const std::string& b) {
    return emit(mode_ == Mode::kron ? "kronecker" : "directsum", {{"lhs", a}, {"rhs", b}});
  }

  const std::vector<std::string>& lines() const { return lines_; }
  std::size_t count(const std::string& kind) const {
    auto it = counts_.find(kind);
    return it == counts_.end() ? 0 : it->second;
  }

  void output(const std::string& var, const MorphismType& ty) {
    emit_to("output", var, {{"rows", std::to_string(word_dim(ty.dom, b_.dims, mode_))},
                            {"cols", std::to_string(word_dim(ty.cod, b_.dims, mode_))}});
  }

 private:
  std::string emit(const std::string& kind, std::map<std::string, std::string> values) {
    std::string var = "t" + std::to_string(next_++);
    emit_to(kind, var, std::move(values));
    return var;
  }

  void emit_to(const std::string& kind, const std::string& var, std::map<std::string, std::string> values) {
    values["var"] = var;
    lines_.push_back(detail::substitute(kind, tpl_.statements.at(kind), values));
    ++counts_[kind];
  }

  const TargetTemplate& tpl_;
  const MatrixBindings& b_;
  Mode mode_;
  std::size_t next_ = 0;
  std::vector<std::string> lines_;
  std::map<std::string, std::size_t> counts_;
};

static_assert(MonoidalBackend<CodegenBackend>);

struct GeneratedCode {
  std::string source;
  std::map<std::string, std::size_t> statement_counts;
};

/// Straight-line program computing evaluate(t, sig, bindings, mode) in the
/// template's target language. Throws TemplateError for incomplete templates.
inline GeneratedCode codegen(const Term& t, const Signature& sig, const MatrixBindings& bindings, Mode mode,
                             const TargetTemplate& tpl) {
  check_template(tpl, mode);
  const MorphismType ty = typecheck(t, sig);
  CodegenBackend backend(tpl, bindings, mode);
  const std::string result = interpret(t, sig, backend);
  backend.output(result, ty);
  GeneratedCode out;
  out.source = tpl.prelude;
  if (!out.source.empty() && out.source.back() != '\n') out.source += '\n';
  for (const auto& l : backend.lines()) out.source += l + "\n";
  for (const auto& [k, _] : detail::template_placeholders()) {
    if (auto n = backend.count(k)) out.statement_counts[k] = n;
  }
  return out;
}

}  // namespace mcc
