#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/signature.hpp"
#include "mcc/term.hpp"

namespace mcc {

/// Dense row-major real matrix. A morphism m -> n is stored as an m x n matrix
/// (row-vector convention), so Seq(f, g) evaluates to f * g. Zero extents are
/// legal and model the unit object in the direct-sum semantics.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> e) : rows(r), cols(c), entries(std::move(e)) {
    if (entries.size() != rows * cols)
      throw DimMismatch("matrix entry count " + std::to_string(entries.size()) + " != " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline std::string dims_str(const Matrix& m) {
  return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows)
    throw DimMismatch("cannot multiply " + dims_str(a) + " by " + dims_str(b),
                      {{"left", dims_str(a)}, {"right", dims_str(b)}});
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

/// Block (i, j) of the result is a(i, j) * b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const double s = a(i, j);
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l) out(i * b.rows + k, j * b.cols + l) = s * b(k, l);
    }
  return out;
}

/// Block-diagonal direct sum.
inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows + b.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) out(a.rows + i, a.cols + j) = b(i, j);
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) d = std::max(d, std::abs(a.entries[i] - b.entries[i]));
  return d;
}

enum class Mode { kron, dirsum };

inline const char* mode_name(Mode m) { return m == Mode::kron ? "kron" : "dirsum"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "kron") return Mode::kron;
  if (s == "dirsum") return Mode::dirsum;
  throw SchemaError("unknown mode '" + s + "'", {{"path", "/mode"}});
}

/// Swap of an m-dimensional and an n-dimensional factor.
///   dirsum: (m+n)x(m+n) permutation moving the first m coordinates after the last n.
///   kron:   mn x mn commutation matrix, entry 1 at (i*n + j, j*m + i).
inline Matrix swap_matrix(Mode mode, std::size_t m, std::size_t n) {
  if (mode == Mode::dirsum) {
    Matrix s(m + n, m + n);
    for (std::size_t i = 0; i < m; ++i) s(i, n + i) = 1.0;
    for (std::size_t j = 0; j < n; ++j) s(m + j, j) = 1.0;
    return s;
  }
  Matrix s(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i * n + j, j * m + i) = 1.0;
  return s;
}

struct MatrixBindings {
  Mode mode = Mode::kron;
  std::map<ObjectName, std::size_t> dims;
  std::map<std::string, Matrix> matrices;

  friend bool operator==(const MatrixBindings&, const MatrixBindings&) = default;
};

/// Product of object dimensions (kron, unit = 1) or their sum (dirsum, unit = 0).
inline std::size_t word_dim(const Word& w, const std::map<ObjectName, std::size_t>& dims, Mode mode) {
  std::size_t d = mode == Mode::kron ? 1 : 0;
  for (const auto& o : w) {
    auto it = dims.find(o);
    if (it == dims.end()) throw MissingBinding("no dimension bound for object '" + o + "'", {{"name", o}});
    d = mode == Mode::kron ? d * it->second : d + it->second;
  }
  return d;
}

/// Checks that every generator has a matrix of the right shape under `mode`.
inline void check_bindings(const Signature& sig, const MatrixBindings& b, Mode mode) {
  for (const auto& o : sig.objects) {
    auto it = b.dims.find(o);
    if (it == b.dims.end()) throw MissingBinding("no dimension bound for object '" + o + "'", {{"name", o}});
    if (it->second == 0) throw DimMismatch("object '" + o + "' has dimension 0", {{"name", o}});
  }
  for (const auto& g : sig.generators) {
    auto it = b.matrices.find(g.name);
    if (it == b.matrices.end()) throw MissingBinding("no matrix bound for generator '" + g.name + "'", {{"name", g.name}});
    const std::size_t r = word_dim(g.dom, b.dims, mode);
    const std::size_t c = word_dim(g.cod, b.dims, mode);
    if (it->second.rows != r || it->second.cols != c)
      throw DimMismatch("matrix for '" + g.name + "' is " + dims_str(it->second) + ", expected " +
                            std::to_string(r) + "x" + std::to_string(c),
                        {{"name", g.name}});
  }
}

// Backend contract ----------------------------------------------------------

/// The operations a semantic category must provide to interpret terms.
template <class B>
concept MonoidalBackend = requires(B& b, const Word& w, const Generator& g, const typename B::value_type& v) {
  typename B::value_type;
  { b.id(w) } -> std::convertible_to<typename B::value_type>;
  { b.gen(g) } -> std::convertible_to<typename B::value_type>;
  { b.sym(w, w) } -> std::convertible_to<typename B::value_type>;
  { b.seq(v, v) } -> std::convertible_to<typename B::value_type>;
  { b.par(v, v) } -> std::convertible_to<typename B::value_type>;
};

/// Structural fold of t into backend values, first child before second.
template <MonoidalBackend B>
typename B::value_type interpret(const Term& t, const Signature& sig, B& backend) {
  switch (t.kind()) {
    case TermKind::gen: {
      const Generator* g = sig.find(t.name());
      if (!g) throw UnknownGenerator("unknown generator '" + t.name() + "'", {{"name", t.name()}});
      return backend.gen(*g);
    }
    case TermKind::id: return backend.id(t.wire());
    case TermKind::sym: return backend.sym(t.left(), t.right());
    case TermKind::seq: {
      auto a = interpret(t.first(), sig, backend);
      auto b = interpret(t.second(), sig, backend);
      return backend.seq(a, b);
    }
    case TermKind::par: {
      auto a = interpret(t.first(), sig, backend);
      auto b = interpret(t.second(), sig, backend);
      return backend.par(a, b);
    }
  }
  throw Error("Internal", "unreachable term kind");
}

class MatrixBackend {
 public:
  using value_type = Matrix;

  MatrixBackend(const MatrixBindings& bindings, Mode mode) : b_(bindings), mode_(mode) {}

  Matrix id(const Word& w) const { return Matrix::identity(word_dim(w, b_.dims, mode_)); }

  Matrix gen(const Generator& g) const {
    auto it = b_.matrices.find(g.name);
    if (it == b_.matrices.end())
      throw MissingBinding("no matrix bound for generator '" + g.name + "'", {{"name", g.name}});
    const std::size_t r = word_dim(g.dom, b_.dims, mode_);
    const std::size_t c = word_dim(g.cod, b_.dims, mode_);
    if (it->second.rows != r || it->second.cols != c)
      throw DimMismatch("matrix for '" + g.name + "' is " + dims_str(it->second) + ", expected " +
                            std::to_string(r) + "x" + std::to_string(c),
                        {{"name", g.name}});
    return it->second;
  }

  Matrix sym(const Word& u, const Word& v) const {
    return swap_matrix(mode_, word_dim(u, b_.dims, mode_), word_dim(v, b_.dims, mode_));
  }

  Matrix seq(const Matrix& a, const Matrix& b) const { return matmul(a, b); }
  Matrix par(const Matrix& a, const Matrix& b) const {
    return mode_ == Mode::kron ? kron(a, b) : direct_sum(a, b);
  }

 private:
  const MatrixBindings& b_;
  Mode mode_;
};

static_assert(MonoidalBackend<MatrixBackend>);

/// Plain fold through MatrixBackend: every Par materializes its Kronecker
/// product or direct sum.
inline Matrix evaluate_direct(const Term& t, const Signature& sig, const MatrixBindings& bindings, Mode mode) {
  MatrixBackend backend(bindings, mode);
  return interpret(t, sig, backend);
}

namespace detail {

/// Computes x * [[t]] for a stack of row vectors x without building the
/// matrices of Par nodes. In kron mode a row of x over dom(a) dom(b) is
/// reshaped to X (dom a x dom b), and x (A kron B) is read off A^T X B.
class RowApplier {
 public:
  RowApplier(const Signature& sig, const MatrixBindings& b, Mode mode) : sig_(sig), backend_(b, mode), b_(b), mode_(mode) {}

  Matrix apply(const Matrix& x, const Term& t) const {
    switch (t.kind()) {
      case TermKind::gen: {
        const Generator* g = sig_.find(t.name());
        if (!g) throw UnknownGenerator("unknown generator '" + t.name() + "'", {{"name", t.name()}});
        return matmul(x, backend_.gen(*g));
      }
      case TermKind::id: return x;
      case TermKind::sym: return swap_columns(x, dim(t.left()), dim(t.right()));
      case TermKind::seq: return apply(apply(x, t.first()), t.second());
      case TermKind::par: return mode_ == Mode::kron ? apply_kron(x, t) : apply_dirsum(x, t);
    }
    throw Error("Internal", "unreachable term kind");
  }

  std::size_t dom_dim(const Term& t) const {
    switch (t.kind()) {
      case TermKind::gen: {
        const Generator* g = sig_.find(t.name());
        if (!g) throw UnknownGenerator("unknown generator '" + t.name() + "'", {{"name", t.name()}});
        return dim(g->dom);
      }
      case TermKind::id: return dim(t.wire());
      case TermKind::sym: return combine(dim(t.left()), dim(t.right()));
      case TermKind::seq: return dom_dim(t.first());
      case TermKind::par: return combine(dom_dim(t.first()), dom_dim(t.second()));
    }
    throw Error("Internal", "unreachable term kind");
  }

 private:
  std::size_t dim(const Word& w) const { return word_dim(w, b_.dims, mode_); }
  std::size_t combine(std::size_t a, std::size_t b) const { return mode_ == Mode::kron ? a * b : a + b; }

  Matrix swap_columns(const Matrix& x, std::size_t m, std::size_t n) const {
    Matrix out(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (mode_ == Mode::dirsum) {
        for (std::size_t i = 0; i < m; ++i) out(r, n + i) = x(r, i);
        for (std::size_t j = 0; j < n; ++j) out(r, j) = x(r, m + j);
      } else {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) out(r, j * m + i) = x(r, i * n + j);
      }
    }
    return out;
  }

  Matrix apply_kron(const Matrix& x, const Term& t) const {
    const std::size_t da = dom_dim(t.first()), db = dom_dim(t.second());
    if (x.cols != da * db)
      throw DimMismatch("cannot apply a " + std::to_string(da * db) + "-dimensional map to " + dims_str(x));
    // Rows (r, i) of s1 hold X_r[i, :].
    Matrix s1(x.rows * da, db, x.entries);
    const Matrix y = apply(s1, t.second());
    const std::size_t cb = y.cols;
    // Rows (r, j) of s2 hold (X_r B)[:, j].
    Matrix s2(x.rows * cb, da);
    for (std::size_t r = 0; r < x.rows; ++r)
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < cb; ++j) s2(r * cb + j, i) = y(r * da + i, j);
    const Matrix w = apply(s2, t.first());
    const std::size_t ca = w.cols;
    Matrix out(x.rows, ca * cb);
    for (std::size_t r = 0; r < x.rows; ++r)
      for (std::size_t j = 0; j < cb; ++j)
        for (std::size_t k = 0; k < ca; ++k) out(r, k * cb + j) = w(r * cb + j, k);
    return out;
  }

  Matrix apply_dirsum(const Matrix& x, const Term& t) const {
    const std::size_t da = dom_dim(t.first());
    if (x.cols < da) throw DimMismatch("cannot split " + dims_str(x) + " at column " + std::to_string(da));
    Matrix x1(x.rows, da), x2(x.rows, x.cols - da);
    for (std::size_t r = 0; r < x.rows; ++r)
      for (std::size_t c = 0; c < x.cols; ++c) (c < da ? x1(r, c) : x2(r, c - da)) = x(r, c);
    const Matrix y1 = apply(x1, t.first()), y2 = apply(x2, t.second());
    Matrix out(x.rows, y1.cols + y2.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
      for (std::size_t c = 0; c < y1.cols; ++c) out(r, c) = y1(r, c);
      for (std::size_t c = 0; c < y2.cols; ++c) out(r, y1.cols + c) = y2(r, c);
    }
    return out;
  }

  const Signature& sig_;
  MatrixBackend backend_;
  const MatrixBindings& b_;
  Mode mode_;
};

}  // namespace detail

/// The matrix of t: identity on dom(t) pushed through t row-wise, which keeps
/// intermediate sizes near those of the result. Agrees with evaluate_direct.
inline Matrix evaluate(const Term& t, const Signature& sig, const MatrixBindings& bindings, Mode mode) {
  typecheck(t, sig);
  detail::RowApplier ap(sig, bindings, mode);
  return ap.apply(Matrix::identity(ap.dom_dim(t)), t);
}

inline Matrix evaluate(const Term& t, const Signature& sig, const MatrixBindings& bindings) {
  return evaluate(t, sig, bindings, bindings.mode);
}

/// Uniform double in [-1, 1) from the top 53 bits; platform independent.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

/// Bindings with pseudorandom entries in [-1, 1), generators filled in signature order.
inline MatrixBindings random_bindings(const Signature& sig, std::map<ObjectName, std::size_t> dims, Mode mode,
                                      std::uint64_t seed) {
  MatrixBindings b;
  b.mode = mode;
  b.dims = std::move(dims);
  std::mt19937_64 rng(seed);
  for (const auto& g : sig.generators) {
    Matrix m(word_dim(g.dom, b.dims, mode), word_dim(g.cod, b.dims, mode));
    for (auto& e : m.entries) e = unit_draw(rng);
    b.matrices.emplace(g.name, std::move(m));
  }
  return b;
}

}  // namespace mcc
