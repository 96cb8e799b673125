#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcc/backend.hpp"
#include "mcc/error.hpp"
#include "mcc/term.hpp"

namespace mcc {

// Commuting conversions ------------------------------------------------------

enum class Rule {
  seq_assoc,
  par_assoc,
  seq_unit_left,
  seq_unit_right,
  par_unit_top,
  par_unit_bottom,
  interchange,
  interchange_inverse,
  id_fusion,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::seq_assoc: return "seq-assoc";
    case Rule::par_assoc: return "par-assoc";
    case Rule::seq_unit_left: return "seq-unit-left";
    case Rule::seq_unit_right: return "seq-unit-right";
    case Rule::par_unit_top: return "par-unit-top";
    case Rule::par_unit_bottom: return "par-unit-bottom";
    case Rule::interchange: return "interchange";
    case Rule::interchange_inverse: return "interchange-inverse";
    case Rule::id_fusion: return "id-fusion";
  }
  return "?";
}

enum class Direction { forward, backward };

/// One rewrite at one position.
///
/// Forward directions:
///   seq-assoc            Seq(Seq(a,b),c)           -> Seq(a,Seq(b,c))
///   par-assoc            Par(Par(a,b),c)           -> Par(a,Par(b,c))
///   seq-unit-left/right  Seq(Id,a) / Seq(a,Id)     -> a
///   par-unit-top/bottom  Par(Id[],a) / Par(a,Id[]) -> a
///   interchange          Seq(Par(a,b),Par(c,d))    -> Par(Seq(a,c),Seq(b,d))
///   interchange-inverse  Par(Seq(a,c),Seq(b,d))    -> Seq(Par(a,b),Par(c,d))
///   id-fusion            Par(Id u,Id v)            -> Id(u v)
/// Backward inverts the arrow. Unit introduction is never produced. Backward
/// id-fusion splits Id(w) after `split` objects (0 < split < |w|).
struct RewriteStep {
  Rule rule;
  Path path;
  Direction direction = Direction::forward;
  std::size_t split = 0;

  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;

  std::string str() const {
    std::string s = std::string(rule_name(rule)) + "@" + path.str();
    if (direction == Direction::backward) s += "(backward";
    if (direction == Direction::backward && rule == Rule::id_fusion) s += "," + std::to_string(split);
    if (direction == Direction::backward) s += ")";
    return s;
  }
};

namespace detail {

inline bool is_id(const Term& t) { return t.kind() == TermKind::id; }
inline bool is_unit(const Term& t) { return t.kind() == TermKind::id && t.wire().empty(); }

/// The rewritten subterm, or nullopt if the step does not match `t`.
inline std::optional<Term> rewrite_here(const Term& t, const Signature& sig, const RewriteStep& s) {
  const bool fwd = s.direction == Direction::forward;
  const TermKind k = t.kind();
  switch (s.rule) {
    case Rule::seq_assoc:
    case Rule::par_assoc: {
      const TermKind want = s.rule == Rule::seq_assoc ? TermKind::seq : TermKind::par;
      if (k != want) return std::nullopt;
      auto mk = [want](Term a, Term b) {
        return want == TermKind::seq ? Term::seq(std::move(a), std::move(b)) : Term::par(std::move(a), std::move(b));
      };
      if (fwd) {
        if (t.first().kind() != want) return std::nullopt;
        return mk(t.first().first(), mk(t.first().second(), t.second()));
      }
      if (t.second().kind() != want) return std::nullopt;
      return mk(mk(t.first(), t.second().first()), t.second().second());
    }
    case Rule::seq_unit_left:
      if (!fwd || k != TermKind::seq || !is_id(t.first())) return std::nullopt;
      return t.second();
    case Rule::seq_unit_right:
      if (!fwd || k != TermKind::seq || !is_id(t.second())) return std::nullopt;
      return t.first();
    case Rule::par_unit_top:
      if (!fwd || k != TermKind::par || !is_unit(t.first())) return std::nullopt;
      return t.second();
    case Rule::par_unit_bottom:
      if (!fwd || k != TermKind::par || !is_unit(t.second())) return std::nullopt;
      return t.first();
    case Rule::interchange:
    case Rule::interchange_inverse: {
      const bool to_par = (s.rule == Rule::interchange) == fwd;
      if (to_par) {
        if (k != TermKind::seq || t.first().kind() != TermKind::par || t.second().kind() != TermKind::par)
          return std::nullopt;
        const Term& a = t.first().first();
        const Term& b = t.first().second();
        const Term& c = t.second().first();
        const Term& d = t.second().second();
        if (typecheck(a, sig).cod != typecheck(c, sig).dom) return std::nullopt;
        return Term::par(Term::seq(a, c), Term::seq(b, d));
      }
      if (k != TermKind::par || t.first().kind() != TermKind::seq || t.second().kind() != TermKind::seq)
        return std::nullopt;
      const Term& a = t.first().first();
      const Term& c = t.first().second();
      const Term& b = t.second().first();
      const Term& d = t.second().second();
      return Term::seq(Term::par(a, b), Term::par(c, d));
    }
    case Rule::id_fusion:
      if (fwd) {
        if (k != TermKind::par || !is_id(t.first()) || !is_id(t.second())) return std::nullopt;
        return Term::id(word_concat(t.first().wire(), t.second().wire()));
      }
      if (k != TermKind::id || s.split == 0 || s.split >= t.wire().size()) return std::nullopt;
      return Term::par(Term::id(t.wire().slice(0, s.split)),
                       Term::id(t.wire().slice(s.split, t.wire().size() - s.split)));
  }
  return std::nullopt;
}

}  // namespace detail

/// Every rewrite that matches somewhere in t, in pre-order of positions.
inline std::vector<RewriteStep> applicable_rewrites(const Term& t, const Signature& sig) {
  std::vector<RewriteStep> out;
  visit(t, [&](const Path& p, const Term& s) {
    auto try_step = [&](RewriteStep step) {
      if (detail::rewrite_here(s, sig, step)) out.push_back(std::move(step));
    };
    switch (s.kind()) {
      case TermKind::seq:
        try_step({Rule::seq_assoc, p, Direction::forward});
        try_step({Rule::seq_assoc, p, Direction::backward});
        try_step({Rule::seq_unit_left, p, Direction::forward});
        try_step({Rule::seq_unit_right, p, Direction::forward});
        try_step({Rule::interchange, p, Direction::forward});
        break;
      case TermKind::par:
        try_step({Rule::par_assoc, p, Direction::forward});
        try_step({Rule::par_assoc, p, Direction::backward});
        try_step({Rule::par_unit_top, p, Direction::forward});
        try_step({Rule::par_unit_bottom, p, Direction::forward});
        try_step({Rule::interchange_inverse, p, Direction::forward});
        try_step({Rule::id_fusion, p, Direction::forward});
        break;
      case TermKind::id:
        for (std::size_t k = 1; k < s.wire().size(); ++k) try_step({Rule::id_fusion, p, Direction::backward, k});
        break;
      default: break;
    }
  });
  return out;
}

/// Applies one step. Throws InvalidStep if its pattern does not match at the path.
inline Term apply(const Term& t, const Signature& sig, const RewriteStep& step) {
  const Term& here = subterm_at(t, step.path);
  auto rewritten = detail::rewrite_here(here, sig, step);
  if (!rewritten) throw InvalidStep("rewrite " + step.str() + " does not match", {{"step", step.str()}});
  return replace_at(t, step.path, *rewritten);
}

// Normal form ----------------------------------------------------------------

namespace detail {

/// A generator or crossing placed at `offset` in the interface it acts on.
struct Slice {
  std::size_t offset;
  Term leaf;
  Word dom;
  Word cod;
};

inline void flatten(const Term& t, const Signature& sig, std::size_t offset, std::vector<Slice>& out) {
  switch (t.kind()) {
    case TermKind::id: return;
    case TermKind::gen:
    case TermKind::sym: {
      auto ty = typecheck(t, sig);
      out.push_back({offset, t, std::move(ty.dom), std::move(ty.cod)});
      return;
    }
    case TermKind::seq:
      flatten(t.first(), sig, offset, out);
      flatten(t.second(), sig, offset, out);
      return;
    case TermKind::par:
      flatten(t.first(), sig, offset, out);
      flatten(t.second(), sig, offset + typecheck(t.first(), sig).cod.size(), out);
      return;
  }
}

struct LayerItem {
  std::size_t in_offset;
  Slice slice;
};

/// Layers of parallel slices. Each appended slice sinks into the earliest
/// layer it can reach by exchanges with whole layers.
class Layering {
 public:
  explicit Layering(Word dom) : dom_(std::move(dom)) {}

  void append(const Slice& s) {
    const std::size_t d = s.dom.size();
    std::size_t pos = s.offset;
    std::vector<std::size_t> above;  // items above s in each passed layer, last layer first
    std::size_t k = layers_.size();
    while (k > 0) {
      const auto& layer = layers_[k - 1];
      std::size_t n_above = 0;
      long shift = 0;
      bool conflict = false;
      long a = 0;  // output offset of the current item
      long drift = 0;
      for (const auto& it : layer) {
        a = static_cast<long>(it.in_offset) + drift;
        const long c = static_cast<long>(it.slice.cod.size());
        drift += c - static_cast<long>(it.slice.dom.size());
        const long p = static_cast<long>(pos);
        const long e = p + static_cast<long>(d);
        if (c > 0 && d > 0 && p < a + c && a < e) conflict = true;
        if (c > 0 && d == 0 && a < p && p < a + c) conflict = true;
        if (c == 0 && d > 0 && p < a && a < e) conflict = true;
        if (conflict) break;
        if (a + c <= p) {
          ++n_above;
          shift += c - static_cast<long>(it.slice.dom.size());
        }
      }
      if (conflict) break;
      above.push_back(n_above);
      pos = static_cast<std::size_t>(static_cast<long>(pos) - shift);
      --k;
    }
    const long delta = static_cast<long>(s.cod.size()) - static_cast<long>(d);
    if (above.empty()) {
      layers_.push_back({LayerItem{pos, s}});
      return;
    }
    // s joins layer index `k` (the last one passed) and shifts the items below
    // its passing block in every later layer.
    const std::size_t target = k;
    auto& layer = layers_[target];
    const std::size_t n_above_target = above.back();
    layer.insert(layer.begin() + static_cast<long>(n_above_target), LayerItem{pos, s});
    for (std::size_t i = 0; i + 1 < above.size(); ++i) {
      auto& later = layers_[layers_.size() - 1 - i];
      for (std::size_t j = above[i]; j < later.size(); ++j)
        later[j].in_offset = static_cast<std::size_t>(static_cast<long>(later[j].in_offset) + delta);
    }
  }

  Term to_term() const {
    if (layers_.empty()) return Term::id(dom_);
    Word w = dom_;
    std::vector<Term> seq;
    for (const auto& layer : layers_) {
      std::vector<Term> factors;
      Word next;
      std::size_t cursor = 0;
      auto pass = [&](std::size_t upto) {
        if (upto > cursor) {
          Word run = w.slice(cursor, upto - cursor);
          next = word_concat(next, run);
          factors.push_back(Term::id(std::move(run)));
        }
        cursor = upto;
      };
      for (const auto& it : layer) {
        pass(it.in_offset);
        factors.push_back(it.slice.leaf);
        next = word_concat(next, it.slice.cod);
        cursor = it.in_offset + it.slice.dom.size();
      }
      pass(w.size());
      Term layer_term = factors.back();
      for (std::size_t i = factors.size() - 1; i-- > 0;) layer_term = Term::par(factors[i], layer_term);
      seq.push_back(std::move(layer_term));
      w = std::move(next);
    }
    Term out = seq.back();
    for (std::size_t i = seq.size() - 1; i-- > 0;) out = Term::seq(seq[i], out);
    return out;
  }

 private:
  Word dom_;
  std::vector<std::vector<LayerItem>> layers_;
};

inline bool is_degenerate(const std::vector<Slice>& slices) {
  return std::any_of(slices.begin(), slices.end(),
                     [](const Slice& s) { return s.dom.empty() || s.cod.empty(); });
}

inline std::string leaf_key(const Term& leaf) {
  if (leaf.kind() == TermKind::gen) return "g:" + leaf.name();
  return "s:" + leaf.left().str() + "|" + leaf.right().str();
}

/// Upper bound on the exchange-class search for diagrams with units on a boundary.
inline constexpr std::size_t kExchangeSearchLimit = 400000;

/// Lexicographically least slice sequence (by offset, then leaf) among all
/// sequences reachable by exchanging adjacent independent slices.
inline std::vector<Slice> least_exchange_representative(const std::vector<Slice>& slices) {
  std::map<std::string, std::uint32_t> ids;
  for (const auto& s : slices) ids.emplace(leaf_key(s.leaf), 0);
  std::uint32_t next = 0;
  for (auto& [key, id] : ids) id = next++;
  std::vector<Slice> proto(ids.size(), slices.front());
  for (const auto& s : slices) proto[ids[leaf_key(s.leaf)]] = s;

  using State = std::vector<std::pair<std::size_t, std::uint32_t>>;
  State start;
  for (const auto& s : slices) start.emplace_back(s.offset, ids[leaf_key(s.leaf)]);

  std::set<State> seen{start};
  std::vector<State> frontier{start};
  while (!frontier.empty() && seen.size() < kExchangeSearchLimit) {
    State cur = std::move(frontier.back());
    frontier.pop_back();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const auto [o1, l1] = cur[i];
      const auto [o2, l2] = cur[i + 1];
      const std::size_t d1 = proto[l1].dom.size(), c1 = proto[l1].cod.size();
      const std::size_t d2 = proto[l2].dom.size(), c2 = proto[l2].cod.size();
      auto push = [&](std::size_t n1, std::size_t n2) {
        State nb = cur;
        nb[i] = {n2, l2};
        nb[i + 1] = {n1, l1};
        if (seen.insert(nb).second) frontier.push_back(std::move(nb));
      };
      if (o1 + c1 <= o2) push(o1, o2 - c1 + d1);
      if (o2 + d2 <= o1) push(o1 - d2 + c2, o2);
    }
  }
  const State& best = *seen.begin();
  std::vector<Slice> out;
  for (const auto& [off, id] : best) {
    Slice s = proto[id];
    s.offset = off;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace detail

/// Layered normal form: a right-nested Seq of layers, each a right-nested Par
/// of leaves, every generator in its earliest layer and identities only where
/// wires pass through. Equivalent terms of the planar fragment get equal
/// normal forms; crossings are treated as opaque nodes.
inline Term normalize(const Term& t, const Signature& sig) {
  const MorphismType ty = typecheck(t, sig);
  std::vector<detail::Slice> slices;
  detail::flatten(t, sig, 0, slices);
  if (!slices.empty() && detail::is_degenerate(slices)) slices = detail::least_exchange_representative(slices);
  detail::Layering layering(ty.dom);
  for (const auto& s : slices) layering.append(s);
  return layering.to_term();
}

// Width minimization -----------------------------------------------------------

/// Dense flop model: d*m*c per Seq node plus the product of all four
/// dimensions per Par node, with word dimensions taken multiplicatively.
inline double modeled_cost(const Term& t, const Signature& sig, const std::map<ObjectName, std::size_t>& dims) {
  if (t.is_leaf()) return 0.0;
  const double sub = modeled_cost(t.first(), sig, dims) + modeled_cost(t.second(), sig, dims);
  const auto a = typecheck(t.first(), sig);
  const auto b = typecheck(t.second(), sig);
  auto dim = [&](const Word& w) { return static_cast<double>(word_dim(w, dims, Mode::kron)); };
  if (t.kind() == TermKind::seq) return sub + dim(a.dom) * dim(a.cod) * dim(b.cod);
  return sub + dim(a.dom) * dim(a.cod) * dim(b.dom) * dim(b.cod);
}

inline std::map<ObjectName, std::size_t> uniform_dims(const Signature& sig, std::size_t d = 2) {
  std::map<ObjectName, std::size_t> dims;
  for (const auto& o : sig.objects) dims[o] = d;
  return dims;
}

/// Greedy descent on modeled_cost using width-non-increasing moves:
/// interchange-inverse anywhere, and splitting Par(a,b) into
/// Seq(Par(a,Id),Par(Id,b)) or Seq(Par(Id,b),Par(a,Id)).
inline Term minimize_width(const Term& t, const Signature& sig, const std::map<ObjectName, std::size_t>& dims) {
  Term cur = t;
  double cost = modeled_cost(cur, sig, dims);
  for (;;) {
    std::optional<Term> best;
    double best_cost = cost;
    auto consider = [&](const Term& cand) {
      if (tensor_width(cand) > tensor_width(cur)) return;
      const double c = modeled_cost(cand, sig, dims);
      if (c < best_cost) {
        best_cost = c;
        best = cand;
      }
    };
    visit(cur, [&](const Path& p, const Term& s) {
      if (s.kind() != TermKind::par) return;
      RewriteStep inv{Rule::interchange_inverse, p, Direction::forward};
      if (auto r = detail::rewrite_here(s, sig, inv)) consider(replace_at(cur, p, *r));
      const auto a = typecheck(s.first(), sig);
      const auto b = typecheck(s.second(), sig);
      consider(replace_at(cur, p,
                          Term::seq(Term::par(s.first(), Term::id(b.dom)), Term::par(Term::id(a.cod), s.second()))));
      consider(replace_at(cur, p,
                          Term::seq(Term::par(Term::id(a.dom), s.second()), Term::par(s.first(), Term::id(b.cod)))));
    });
    if (!best) return cur;
    cur = *best;
    cost = best_cost;
  }
}

inline Term minimize_width(const Term& t, const Signature& sig) {
  return minimize_width(t, sig, uniform_dims(sig));
}

// Equivalence ------------------------------------------------------------------

enum class Equivalence { no, yes, probably_yes };

inline const char* equivalence_name(Equivalence e) {
  switch (e) {
    case Equivalence::no: return "no";
    case Equivalence::yes: return "yes";
    case Equivalence::probably_yes: return "probably-yes";
  }
  return "?";
}

/// Exact for crossing-free terms (normal-form comparison). With crossings,
/// compares matrix evaluations under three seeded random bindings.
inline Equivalence terms_equivalent(const Term& t1, const Term& t2, const Signature& sig) {
  const auto ty1 = typecheck(t1, sig);
  const auto ty2 = typecheck(t2, sig);
  if (ty1 != ty2)
    throw TypeMismatch("terms have different types: " + ty1.str() + " vs " + ty2.str(),
                       {{"expected", ty1.str()}, {"found", ty2.str()}});
  if (!contains_sym(t1) && !contains_sym(t2))
    return normalize(t1, sig) == normalize(t2, sig) ? Equivalence::yes : Equivalence::no;

  std::map<ObjectName, std::size_t> dims;
  for (std::size_t i = 0; i < sig.objects.size(); ++i) dims[sig.objects[i]] = i % 2 == 0 ? 2 : 3;
  for (std::uint64_t draw = 0; draw < 3; ++draw) {
    const auto b = random_bindings(sig, dims, Mode::kron, 0x5eed0000ULL + draw);
    const Matrix m1 = evaluate(t1, sig, b);
    const Matrix m2 = evaluate(t2, sig, b);
    double scale = 1.0;
    for (double e : m1.entries) scale = std::max(scale, std::abs(e));
    if (max_abs_diff(m1, m2) > 1e-9 * scale) return Equivalence::no;
  }
  return Equivalence::probably_yes;
}

}  // namespace mcc
