#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/signature.hpp"

namespace mcc {

enum class TermKind : std::uint8_t { gen, id, sym, seq, par };

inline const char* kind_name(TermKind k) {
  switch (k) {
    case TermKind::gen: return "gen";
    case TermKind::id: return "id";
    case TermKind::sym: return "sym";
    case TermKind::seq: return "seq";
    case TermKind::par: return "par";
  }
  return "?";
}

/// Position of a subterm: child indices from the root (0 = first/top, 1 = second/bottom).
struct Path {
  std::vector<std::uint8_t> steps;

  Path child(std::uint8_t i) const {
    Path p = *this;
    p.steps.push_back(i);
    return p;
  }

  /// "r" for the root, "r.0.1" for root -> child 0 -> child 1.
  std::string str() const {
    std::string out = "r";
    for (auto s : steps) {
      out += '.';
      out += static_cast<char>('0' + s);
    }
    return out;
  }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Immutable composition tree. Copies share structure.
///
/// Seq(a, b) is "a then b" reading left to right; Par(a, b) stacks a above b.
class Term {
 public:
  static Term gen(std::string name);
  static Term id(Word w);
  static Term sym(Word u, Word v);
  static Term seq(Term first, Term second);
  static Term par(Term top, Term bottom);

  TermKind kind() const noexcept;
  bool is_leaf() const noexcept { return kind() <= TermKind::sym; }

  const std::string& name() const;    // gen
  const Word& wire() const;           // id
  const Word& left() const;           // sym
  const Word& right() const;          // sym
  const Term& first() const;          // seq / par
  const Term& second() const;         // seq / par
  const Term& child(std::uint8_t i) const { return i == 0 ? first() : second(); }

  /// Number of constructors in the tree.
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  std::string name;
  Word w1;
  Word w2;
  std::vector<Term> kids;
  std::size_t size = 1;
};

inline Term Term::gen(std::string name) {
  return Term(std::make_shared<const Node>(Node{TermKind::gen, std::move(name), {}, {}, {}, 1}));
}
inline Term Term::id(Word w) {
  return Term(std::make_shared<const Node>(Node{TermKind::id, {}, std::move(w), {}, {}, 1}));
}
inline Term Term::sym(Word u, Word v) {
  return Term(std::make_shared<const Node>(Node{TermKind::sym, {}, std::move(u), std::move(v), {}, 1}));
}
inline Term Term::seq(Term first, Term second) {
  std::size_t n = 1 + first.size() + second.size();
  return Term(std::make_shared<const Node>(
      Node{TermKind::seq, {}, {}, {}, {std::move(first), std::move(second)}, n}));
}
inline Term Term::par(Term top, Term bottom) {
  std::size_t n = 1 + top.size() + bottom.size();
  return Term(std::make_shared<const Node>(
      Node{TermKind::par, {}, {}, {}, {std::move(top), std::move(bottom)}, n}));
}

inline TermKind Term::kind() const noexcept { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Word& Term::wire() const { return node_->w1; }
inline const Word& Term::left() const { return node_->w1; }
inline const Word& Term::right() const { return node_->w2; }
inline const Term& Term::first() const { return node_->kids.at(0); }
inline const Term& Term::second() const { return node_->kids.at(1); }
inline std::size_t Term::size() const { return node_->size; }

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.size == y.size && x.name == y.name && x.w1 == y.w1 &&
         x.w2 == y.w2 && x.kids == y.kids;
}

inline const Term& subterm_at(const Term& t, const Path& p) {
  const Term* cur = &t;
  for (auto s : p.steps) {
    if (cur->is_leaf()) throw InvalidStep("path " + p.str() + " runs past a leaf");
    cur = &cur->child(s);
  }
  return *cur;
}

/// Returns t with the subterm at p replaced; untouched branches are shared.
inline Term replace_at(const Term& t, const Path& p, const Term& replacement, std::size_t depth = 0) {
  if (depth == p.steps.size()) return replacement;
  if (t.is_leaf()) throw InvalidStep("path " + p.str() + " runs past a leaf");
  const bool seq = t.kind() == TermKind::seq;
  Term a = t.first();
  Term b = t.second();
  if (p.steps[depth] == 0)
    a = replace_at(a, p, replacement, depth + 1);
  else
    b = replace_at(b, p, replacement, depth + 1);
  return seq ? Term::seq(std::move(a), std::move(b)) : Term::par(std::move(a), std::move(b));
}

/// Pre-order visit of every subterm with its path.
inline void visit(const Term& t, const std::function<void(const Path&, const Term&)>& fn,
                  const Path& at = {}) {
  fn(at, t);
  if (!t.is_leaf()) {
    visit(t.first(), fn, at.child(0));
    visit(t.second(), fn, at.child(1));
  }
}

/// Leaves in left-to-right / top-to-bottom order.
inline std::vector<std::pair<Path, Term>> leaves(const Term& t) {
  std::vector<std::pair<Path, Term>> out;
  visit(t, [&](const Path& p, const Term& s) {
    if (s.is_leaf()) out.emplace_back(p, s);
  });
  return out;
}

inline bool contains_sym(const Term& t) {
  if (t.kind() == TermKind::sym) return true;
  if (t.is_leaf()) return false;
  return contains_sym(t.first()) || contains_sym(t.second());
}

inline std::size_t leaf_count(const Term& t) {
  if (t.is_leaf()) return 1;
  return leaf_count(t.first()) + leaf_count(t.second());
}

inline std::size_t generator_count(const Term& t) {
  if (t.is_leaf()) return t.kind() == TermKind::gen ? 1 : 0;
  return generator_count(t.first()) + generator_count(t.second());
}

inline std::size_t depth(const Term& t) {
  if (t.is_leaf()) return 1;
  return 1 + std::max(depth(t.first()), depth(t.second()));
}

/// Maximum number of parallel factors across the layers of t.
inline std::size_t tensor_width(const Term& t) {
  switch (t.kind()) {
    case TermKind::seq: return std::max(tensor_width(t.first()), tensor_width(t.second()));
    case TermKind::par: return tensor_width(t.first()) + tensor_width(t.second());
    default: return 1;
  }
}

struct MorphismType {
  Word dom;
  Word cod;

  friend bool operator==(const MorphismType&, const MorphismType&) = default;

  std::string str() const {
    std::string out = dom.str();
    out += out.empty() ? "⊢" : " ⊢";
    if (!cod.empty()) out += " " + cod.str();
    return out;
  }
};

namespace detail {

inline MorphismType typecheck_at(const Term& t, const Signature& sig, const Path& at) {
  switch (t.kind()) {
    case TermKind::gen: {
      const Generator* g = sig.find(t.name());
      if (!g) throw UnknownGenerator("unknown generator '" + t.name() + "'", {{"name", t.name()}, {"path", at.str()}});
      return {g->dom, g->cod};
    }
    case TermKind::id:
      for (const auto& o : t.wire())
        if (!sig.has_object(o))
          throw TypeError("undeclared object '" + o + "'", {{"path", at.str()}, {"expected", "declared object"}, {"found", o}});
      return {t.wire(), t.wire()};
    case TermKind::sym:
      for (const Word* w : {&t.left(), &t.right()})
        for (const auto& o : *w)
          if (!sig.has_object(o))
            throw TypeError("undeclared object '" + o + "'", {{"path", at.str()}, {"expected", "declared object"}, {"found", o}});
      return {word_concat(t.left(), t.right()), word_concat(t.right(), t.left())};
    case TermKind::seq: {
      MorphismType a = typecheck_at(t.first(), sig, at.child(0));
      MorphismType b = typecheck_at(t.second(), sig, at.child(1));
      if (a.cod != b.dom)
        throw TypeError("sequential interface mismatch at " + at.str() + ": [" + a.cod.str() + "] vs [" + b.dom.str() + "]",
                        {{"path", at.str()}, {"expected", a.cod.str()}, {"found", b.dom.str()}});
      return {std::move(a.dom), std::move(b.cod)};
    }
    case TermKind::par: {
      MorphismType a = typecheck_at(t.first(), sig, at.child(0));
      MorphismType b = typecheck_at(t.second(), sig, at.child(1));
      return {word_concat(a.dom, b.dom), word_concat(a.cod, b.cod)};
    }
  }
  return {};
}

}  // namespace detail

/// Computes (dom, cod) of t. Throws TypeError or UnknownGenerator.
inline MorphismType typecheck(const Term& t, const Signature& sig) {
  return detail::typecheck_at(t, sig, Path{});
}

inline bool well_typed(const Term& t, const Signature& sig) {
  try {
    typecheck(t, sig);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Proof trees --------------------------------------------------------------

/// A derivation in the planar tensor fragment of linear logic, plus a
/// symmetry axiom for explicit crossings.
struct ProofTree {
  std::string rule;
  MorphismType conclusion;
  std::vector<ProofTree> premises;

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.node_count();
    return n;
  }

  /// One line per node, two spaces of indent per depth: "(rule) dom ⊢ cod".
  std::string to_text() const {
    std::string out;
    append_text(out, 0);
    return out;
  }

  /// Nested \dfrac markup, premises side by side, rule name to the right.
  std::string to_latex() const {
    std::string top;
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (i) top += " \\quad ";
      top += premises[i].to_latex();
    }
    return "\\dfrac{" + top + "}{" + latex_sequent() + "}\\,\\textsf{" + latex_escape(rule) + "}";
  }

 private:
  void append_text(std::string& out, std::size_t depth) const {
    out.append(2 * depth, ' ');
    out += rule + " " + conclusion.str() + "\n";
    for (const auto& p : premises) p.append_text(out, depth + 1);
  }

  static std::string latex_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '_' || c == '&' || c == '%' || c == '#') out += '\\';
      if (c == '-') {
        out += "\\text{-}";
        continue;
      }
      out += c;
    }
    return out;
  }

  static std::string latex_word(const Word& w) {
    std::string out;
    for (const auto& o : w) {
      if (!out.empty()) out += "\\,";
      out += "\\mathit{" + latex_escape(o) + "}";
    }
    return out;
  }

  std::string latex_sequent() const {
    return latex_word(conclusion.dom) + " \\vdash " + latex_word(conclusion.cod);
  }
};

inline const char* rule_name(TermKind k) {
  switch (k) {
    case TermKind::gen: return "(f-ax)";
    case TermKind::id: return "(id)";
    case TermKind::sym: return "(sym-ax)";
    case TermKind::seq: return "(cut)";
    case TermKind::par: return "(⊗-intro)";
  }
  return "?";
}

/// Builds the derivation isomorphic to t. Throws TypeError on ill-typed input.
inline ProofTree to_proof_tree(const Term& t, const Signature& sig) {
  ProofTree node{rule_name(t.kind()), typecheck(t, sig), {}};
  if (!t.is_leaf()) {
    node.premises.push_back(to_proof_tree(t.first(), sig));
    node.premises.push_back(to_proof_tree(t.second(), sig));
  }
  return node;
}

}  // namespace mcc
