#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

struct PatternTerm {
  bool is_var = false;
  std::string var;  // without the '?'
  Term term;

  static PatternTerm variable(std::string name) {
    PatternTerm p;
    p.is_var = true;
    p.var = std::move(name);
    return p;
  }
  static PatternTerm constant(Term t) {
    PatternTerm p;
    p.term = std::move(t);
    return p;
  }
};

struct TriplePattern {
  PatternTerm s, p, o;
};

/// Range-restricted if-then rule over triple patterns; heads assert triples
/// only.
struct RuleLite {
  std::string name;
  std::vector<TriplePattern> body;
  std::vector<TriplePattern> head;
};

namespace rules_detail {

inline PatternTerm pattern_term(const Term& t) {
  if (t.is_literal() && !t.value.empty() && t.value[0] == '?')
    return PatternTerm::variable(t.value.substr(1));
  return PatternTerm::constant(t);
}

inline std::string local_name(const std::string& iri) {
  auto pos = iri.find_last_of("#/");
  return pos == std::string::npos ? iri : iri.substr(pos + 1);
}

inline TriplePattern read_atom(const TripleGraph& g, const std::string& atom_iri) {
  auto s = g.first_object(atom_iri, vocab::rl_subject);
  auto p = g.first_object(atom_iri, vocab::rl_predicate);
  auto o = g.first_object(atom_iri, vocab::rl_object);
  if (!s || !p || !o)
    fail(ErrorCode::Config, "rule atom <" + atom_iri + "> is missing subject/predicate/object");
  TriplePattern out;
  out.s = pattern_term(*s);
  out.p = pattern_term(*p);
  out.o = pattern_term(*o);
  if (!out.s.is_var && !out.s.term.is_iri())
    fail(ErrorCode::Config, "rule atom <" + atom_iri + "> has a literal subject");
  if (!out.p.is_var && !out.p.term.is_iri())
    fail(ErrorCode::Config, "rule atom <" + atom_iri + "> has a literal predicate");
  return out;
}

}  // namespace rules_detail

/// Extract RuleLite definitions from a reified rule graph. A rule is any
/// subject with rl:body triples; atom order within body/head is the sorted
/// order of the atom IRIs.
inline std::vector<RuleLite> extract_rules(const TripleGraph& g) {
  namespace d = rules_detail;
  std::vector<std::string> rule_subjects;
  for (const auto& [s, o] : g.with_predicate(vocab::rl_body)) {
    (void)o;
    rule_subjects.push_back(s);
  }
  std::sort(rule_subjects.begin(), rule_subjects.end());
  rule_subjects.erase(std::unique(rule_subjects.begin(), rule_subjects.end()),
                      rule_subjects.end());

  std::vector<RuleLite> rules;
  for (const auto& subject : rule_subjects) {
    RuleLite r;
    r.name = d::local_name(subject);
    for (const auto& atom : g.objects(subject, vocab::rl_body)) {
      if (!atom.is_iri()) fail(ErrorCode::Config, "rl:body must reference atom IRIs");
      r.body.push_back(d::read_atom(g, atom.value));
    }
    for (const auto& atom : g.objects(subject, vocab::rl_head)) {
      if (!atom.is_iri()) fail(ErrorCode::Config, "rl:head must reference atom IRIs");
      r.head.push_back(d::read_atom(g, atom.value));
    }
    if (r.head.empty())
      fail(ErrorCode::Config, "rule <" + subject + "> has no head atoms");
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace flow2bpmn
