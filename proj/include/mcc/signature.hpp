#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mcc {

using ObjectName = std::string;

/// A word over generating objects. The empty word is the monoidal unit.
struct Word {
  std::vector<ObjectName> objects;

  Word() = default;
  Word(std::initializer_list<ObjectName> names) : objects(names) {}
  explicit Word(std::vector<ObjectName> names) : objects(std::move(names)) {}

  std::size_t size() const noexcept { return objects.size(); }
  bool empty() const noexcept { return objects.empty(); }
  const ObjectName& operator[](std::size_t i) const { return objects[i]; }
  auto begin() const noexcept { return objects.begin(); }
  auto end() const noexcept { return objects.end(); }

  Word slice(std::size_t from, std::size_t count) const {
    return Word(std::vector<ObjectName>(objects.begin() + from, objects.begin() + from + count));
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  /// Space-separated rendering, empty for the unit.
  std::string str() const {
    std::string out;
    for (const auto& o : objects) {
      if (!out.empty()) out += ' ';
      out += o;
    }
    return out;
  }
};

inline Word word_concat(const Word& u, const Word& v) {
  if (u.empty()) return v;
  if (v.empty()) return u;
  Word out = u;
  out.objects.insert(out.objects.end(), v.objects.begin(), v.objects.end());
  return out;
}

struct Generator {
  std::string name;
  Word dom;
  Word cod;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct Signature {
  std::vector<ObjectName> objects;
  std::vector<Generator> generators;

  friend bool operator==(const Signature&, const Signature&) = default;

  bool has_object(const ObjectName& name) const {
    return std::find(objects.begin(), objects.end(), name) != objects.end();
  }

  const Generator* find(const std::string& name) const {
    for (const auto& g : generators)
      if (g.name == name) return &g;
    return nullptr;
  }
};

struct Violation {
  std::string code;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

/// Checks every signature invariant. An empty result means the signature is valid.
/// Codes: invalid-object-name, duplicate-object, invalid-generator-name,
/// duplicate-generator, undeclared-object.
inline std::vector<Violation> validate_signature(const Signature& sig) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& o : sig.objects) {
    if (!is_identifier(o)) out.push_back({"invalid-object-name", o});
    if (!seen.insert(o).second) out.push_back({"duplicate-object", o});
  }
  std::set<std::string> gens;
  for (const auto& g : sig.generators) {
    if (!is_identifier(g.name)) out.push_back({"invalid-generator-name", g.name});
    if (!gens.insert(g.name).second) out.push_back({"duplicate-generator", g.name});
    for (const Word* w : {&g.dom, &g.cod})
      for (const auto& o : *w)
        if (!seen.contains(o)) out.push_back({"undeclared-object", g.name + ": " + o});
  }
  return out;
}

}  // namespace mcc
