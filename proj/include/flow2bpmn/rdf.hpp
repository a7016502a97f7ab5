#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace flow2bpmn {

enum class TermKind { iri, literal };

/// One RDF term. Subjects and predicates in this artifact are always IRIs;
/// blank nodes are not representable on purpose.
struct Term {
  TermKind kind = TermKind::iri;
  std::string value;     // IRI string, or the literal's lexical form
  std::string datatype;  // datatype IRI for literals, empty for IRIs

  static Term iri(std::string v) { return Term{TermKind::iri, std::move(v), {}}; }
  static Term str(std::string v);
  static Term integer(long long v);

  bool is_iri() const { return kind == TermKind::iri; }
  bool is_literal() const { return kind == TermKind::literal; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.value == b.value && a.datatype == b.datatype;
  }
  friend bool operator<(const Term& a, const Term& b) {
    return std::tie(a.kind, a.value, a.datatype) < std::tie(b.kind, b.value, b.datatype);
  }
};

struct Triple {
  std::string s;  // subject IRI
  std::string p;  // predicate IRI
  Term o;

  friend bool operator==(const Triple& a, const Triple& b) {
    return a.s == b.s && a.p == b.p && a.o == b.o;
  }
  friend bool operator<(const Triple& a, const Triple& b) {
    return std::tie(a.s, a.p, a.o) < std::tie(b.s, b.p, b.o);
  }
};

inline Triple make_triple(std::string s, std::string p, Term o) {
  return Triple{std::move(s), std::move(p), std::move(o)};
}

inline const std::string kXsdString = "http://www.w3.org/2001/XMLSchema#string";
inline const std::string kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

inline Term Term::str(std::string v) {
  return Term{TermKind::literal, std::move(v), kXsdString};
}

inline Term Term::integer(long long v) {
  return Term{TermKind::literal, std::to_string(v), kXsdInteger};
}

/// Provenance of a triple inside the merged knowledge base.
enum class Layer { domain, bpmn, mapping, abox, inferred };

inline const char* layer_name(Layer l) {
  switch (l) {
    case Layer::domain:   return "domain";
    case Layer::bpmn:     return "bpmn";
    case Layer::mapping:  return "mapping";
    case Layer::abox:     return "abox";
    case Layer::inferred: return "inferred";
  }
  return "?";
}

/// Triple set with set semantics, (s,p,o)-sorted canonical iteration, a
/// (p,o,s) secondary index and a prefix table carried along for
/// serialization. Each triple remembers the layer it came from.
class TripleGraph {
 public:
  using Store = std::map<Triple, Layer>;

  bool insert(Triple t, Layer layer = Layer::abox) {
    auto [it, fresh] = triples_.emplace(std::move(t), layer);
    if (fresh) pos_index_.insert(it->first);
    return fresh;
  }

  bool erase(const Triple& t) {
    auto it = triples_.find(t);
    if (it == triples_.end()) return false;
    pos_index_.erase(t);
    triples_.erase(it);
    return true;
  }

  bool contains(const Triple& t) const { return triples_.count(t) != 0; }
  bool has(const std::string& s, const std::string& p, const Term& o) const {
    return contains(Triple{s, p, o});
  }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  const Store& all() const { return triples_; }

  std::optional<Layer> layer_of(const Triple& t) const {
    auto it = triples_.find(t);
    if (it == triples_.end()) return std::nullopt;
    return it->second;
  }

  /// All objects o such that (s, p, o) holds, in term order.
  std::vector<Term> objects(const std::string& s, const std::string& p) const {
    std::vector<Term> out;
    auto it = triples_.lower_bound(Triple{s, p, Term{}});
    for (; it != triples_.end(); ++it) {
      if (it->first.s != s || it->first.p != p) break;
      out.push_back(it->first.o);
    }
    return out;
  }

  std::optional<Term> first_object(const std::string& s, const std::string& p) const {
    auto v = objects(s, p);
    if (v.empty()) return std::nullopt;
    return v.front();
  }

  /// All subjects s such that (s, p, o) holds, in subject order.
  std::vector<std::string> subjects_with(const std::string& p, const Term& o) const {
    std::vector<std::string> out;
    auto it = pos_index_.lower_bound(Triple{"", p, o});
    for (; it != pos_index_.end(); ++it) {
      if (it->p != p || !(it->o == o)) break;
      out.push_back(it->s);
    }
    return out;
  }

  /// All (s, o) pairs under predicate p, ordered by (o, s).
  std::vector<std::pair<std::string, Term>> with_predicate(const std::string& p) const {
    std::vector<std::pair<std::string, Term>> out;
    auto it = pos_index_.lower_bound(Triple{"", p, Term{TermKind::iri, "", ""}});
    for (; it != pos_index_.end(); ++it) {
      if (it->p != p) break;
      out.emplace_back(it->s, it->o);
    }
    return out;
  }

  /// Triples with subject s.
  std::vector<Triple> about(const std::string& s) const {
    std::vector<Triple> out;
    auto it = triples_.lower_bound(Triple{s, "", Term{}});
    for (; it != triples_.end(); ++it) {
      if (it->first.s != s) break;
      out.push_back(it->first);
    }
    return out;
  }

  bool type_of(const std::string& s, const std::string& rdf_type_iri,
               const std::string& class_iri) const {
    return has(s, rdf_type_iri, Term::iri(class_iri));
  }

  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  void add_prefix(const std::string& name, const std::string& expansion) {
    prefixes_.emplace(name, expansion);  // first binding wins
  }
  void merge_prefixes(const TripleGraph& other) {
    for (const auto& [k, v] : other.prefixes_) prefixes_.emplace(k, v);
  }

  friend bool operator==(const TripleGraph& a, const TripleGraph& b) {
    if (a.triples_.size() != b.triples_.size()) return false;
    auto ia = a.triples_.begin();
    auto ib = b.triples_.begin();
    for (; ia != a.triples_.end(); ++ia, ++ib) {
      if (!(ia->first == ib->first)) return false;  // layers excluded
    }
    return true;
  }

 private:
  struct PosOrder {
    bool operator()(const Triple& a, const Triple& b) const {
      return std::tie(a.p, a.o, a.s) < std::tie(b.p, b.o, b.s);
    }
  };

  Store triples_;
  std::set<Triple, PosOrder> pos_index_;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace flow2bpmn
