#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/rules.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

struct InferenceReport {
  int iterations = 0;
  std::map<std::string, std::size_t> added_by_source;
  long long elapsed_us = 0;

  std::size_t total_added() const {
    std::size_t n = 0;
    for (const auto& [k, v] : added_by_source) n += v;
    return n;
  }
};

struct SaturateOptions {
  int max_iterations = 10000;
};

struct SaturationResult {
  TripleGraph graph;
  InferenceReport report;
};

namespace reasoner_detail {

using Binding = std::map<std::string, Term>;

inline bool term_matches(const PatternTerm& pat, const Term& value, Binding& binding) {
  if (!pat.is_var) return pat.term == value;
  auto it = binding.find(pat.var);
  if (it == binding.end()) {
    binding.emplace(pat.var, value);
    return true;
  }
  return it->second == value;
}

inline void match_atoms(const TripleGraph& g, const std::vector<TriplePattern>& atoms,
                        std::size_t idx, Binding& binding,
                        const std::function<void(const Binding&)>& emit) {
  if (idx == atoms.size()) {
    emit(binding);
    return;
  }
  const TriplePattern& atom = atoms[idx];

  auto try_triple = [&](const Triple& t) {
    Binding saved = binding;
    if (term_matches(atom.s, Term::iri(t.s), binding) &&
        term_matches(atom.p, Term::iri(t.p), binding) &&
        term_matches(atom.o, t.o, binding)) {
      match_atoms(g, atoms, idx + 1, binding, emit);
    }
    binding = std::move(saved);
  };

  // Resolve what is already bound so the scan can be narrowed.
  auto resolved = [&](const PatternTerm& pat) -> std::optional<Term> {
    if (!pat.is_var) return pat.term;
    auto it = binding.find(pat.var);
    if (it != binding.end()) return it->second;
    return std::nullopt;
  };

  std::optional<Term> s = resolved(atom.s);
  std::optional<Term> p = resolved(atom.p);
  std::optional<Term> o = resolved(atom.o);

  if (s && p) {
    for (const auto& obj : g.objects(s->value, p->value))
      try_triple(Triple{s->value, p->value, obj});
  } else if (p && o) {
    for (const auto& subj : g.subjects_with(p->value, *o))
      try_triple(Triple{subj, p->value, *o});
  } else if (p) {
    for (const auto& [subj, obj] : g.with_predicate(p->value))
      try_triple(Triple{subj, p->value, obj});
  } else {
    for (const auto& [t, layer] : g.all()) {
      (void)layer;
      try_triple(t);
    }
  }
}

inline Term substitute(const PatternTerm& pat, const Binding& binding) {
  if (!pat.is_var) return pat.term;
  return binding.at(pat.var);
}

inline void check_range_restricted(const RuleLite& rule) {
  std::set<std::string> body_vars;
  for (const auto& atom : rule.body) {
    if (atom.s.is_var) body_vars.insert(atom.s.var);
    if (atom.p.is_var) body_vars.insert(atom.p.var);
    if (atom.o.is_var) body_vars.insert(atom.o.var);
  }
  for (const auto& atom : rule.head) {
    for (const PatternTerm* t : {&atom.s, &atom.p, &atom.o}) {
      if (t->is_var && !body_vars.count(t->var))
        fail(ErrorCode::RuleUnsafe,
             "rule '" + rule.name + "' head variable ?" + t->var + " does not occur in the body");
    }
  }
}

}  // namespace reasoner_detail

/// Forward-chaining materialization: subclass/equivalence closure with type
/// propagation, property correspondence propagation, then the rule set, all
/// iterated to the least fixpoint. Only adds triples; never invents terms.
inline SaturationResult saturate(TripleGraph graph, const std::vector<RuleLite>& rules,
                                 const SaturateOptions& options = {}) {
  namespace d = reasoner_detail;
  using clock = std::chrono::steady_clock;
  auto started = clock::now();

  for (const auto& rule : rules) d::check_range_restricted(rule);

  InferenceReport report;
  auto add = [&graph, &report](Triple t, const std::string& source) {
    if (graph.insert(std::move(t), Layer::inferred)) report.added_by_source[source] += 1;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t before = graph.size();
    if (++report.iterations > options.max_iterations)
      fail(ErrorCode::FixpointBudget,
           "fixpoint not reached within " + std::to_string(options.max_iterations) +
               " iterations");

    // R1: rdfs:subClassOf transitivity and type inheritance.
    for (const auto& [a, b] : graph.with_predicate(vocab::rdfs_subClassOf)) {
      if (!b.is_iri()) continue;
      for (const auto& c : graph.objects(b.value, vocab::rdfs_subClassOf))
        add(Triple{a, vocab::rdfs_subClassOf, c}, "closure");
      for (const auto& x : graph.subjects_with(vocab::rdf_type, Term::iri(a)))
        add(Triple{x, vocab::rdf_type, b}, "closure");
    }

    // R2: owl:equivalentClass symmetric/transitive closure with
    // bidirectional type copy; owl:disjointWith symmetric closure.
    for (const auto& [a, b] : graph.with_predicate(vocab::owl_equivalentClass)) {
      if (!b.is_iri()) continue;
      add(Triple{b.value, vocab::owl_equivalentClass, Term::iri(a)}, "equivalence");
      for (const auto& c : graph.objects(b.value, vocab::owl_equivalentClass))
        if (c.value != a) add(Triple{a, vocab::owl_equivalentClass, c}, "equivalence");
      for (const auto& x : graph.subjects_with(vocab::rdf_type, Term::iri(a)))
        add(Triple{x, vocab::rdf_type, b}, "equivalence");
    }
    for (const auto& [a, b] : graph.with_predicate(vocab::owl_disjointWith)) {
      if (!b.is_iri()) continue;
      add(Triple{b.value, vocab::owl_disjointWith, Term::iri(a)}, "closure");
    }

    // R3: rdfs:subPropertyOf / owl:equivalentProperty propagation of
    // assertions.
    for (const auto& [p, q] : graph.with_predicate(vocab::rdfs_subPropertyOf)) {
      if (!q.is_iri()) continue;
      for (const auto& r : graph.objects(q.value, vocab::rdfs_subPropertyOf))
        add(Triple{p, vocab::rdfs_subPropertyOf, r}, "closure");
      for (const auto& [x, y] : graph.with_predicate(p))
        add(Triple{x, q.value, y}, "closure");
    }
    for (const auto& [p, q] : graph.with_predicate(vocab::owl_equivalentProperty)) {
      if (!q.is_iri()) continue;
      add(Triple{q.value, vocab::owl_equivalentProperty, Term::iri(p)}, "equivalence");
      for (const auto& [x, y] : graph.with_predicate(p))
        add(Triple{x, q.value, y}, "equivalence");
    }

    // R4: the rule set.
    for (const auto& rule : rules) {
      std::vector<Triple> derived;
      d::Binding binding;
      d::match_atoms(graph, rule.body, 0, binding, [&](const d::Binding& bound) {
        for (const auto& atom : rule.head) {
          Term s = d::substitute(atom.s, bound);
          Term p = d::substitute(atom.p, bound);
          Term o = d::substitute(atom.o, bound);
          if (!s.is_iri() || !p.is_iri()) continue;  // literal positions cannot assert
          derived.push_back(Triple{s.value, p.value, o});
        }
      });
      for (auto& t : derived) add(std::move(t), "rule:" + rule.name);
    }

    changed = graph.size() != before;
  }

  report.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                          clock::now() - started).count();
  return SaturationResult{std::move(graph), std::move(report)};
}

namespace reasoner_detail {

inline bool is_gateway(const TripleGraph& g, const std::string& iri) {
  return g.type_of(iri, vocab::rdf_type, vocab::bpmn_ExclusiveGateway) ||
         g.type_of(iri, vocab::rdf_type, vocab::bpmn_ParallelGateway);
}

inline void retarget(TripleGraph& g, const std::string& transition, const std::string& pred,
                     const std::string& mirror_pred, const std::string& to_iri) {
  for (const std::string* p : {&pred, &mirror_pred}) {
    for (const auto& old : g.objects(transition, *p))
      g.erase(Triple{transition, *p, old});
    g.insert(Triple{transition, *p, Term::iri(to_iri)}, Layer::inferred);
  }
}

inline std::optional<std::string> trace_of(const TripleGraph& g, const std::string& iri) {
  auto t = g.first_object(iri, vocab::trace_sourcePath);
  if (!t) return std::nullopt;
  return t->value;
}

}  // namespace reasoner_detail

/// Mint split/join gateways at fan-out/fan-in points and rewire the flow
/// relations through them. Deterministic IRIs ({node}/split, {node}/join);
/// idempotent because gateway-typed individuals are never re-split.
inline TripleGraph synthesize_gateways(TripleGraph graph,
                                       std::vector<std::string>* warnings = nullptr) {
  namespace d = reasoner_detail;
  using vocab::rdf_type;

  auto out_transitions = [&graph](const std::string& node) {
    return graph.subjects_with(vocab::sf_has_source, Term::iri(node));
  };
  auto in_transitions = [&graph](const std::string& node) {
    return graph.subjects_with(vocab::sf_has_target, Term::iri(node));
  };

  // Candidate nodes: everything a transition starts or ends at.
  std::set<std::string> nodes;
  for (const auto& [t, o] : graph.with_predicate(vocab::sf_has_source)) {
    (void)t;
    if (o.is_iri()) nodes.insert(o.value);
  }
  for (const auto& [t, o] : graph.with_predicate(vocab::sf_has_target)) {
    (void)t;
    if (o.is_iri()) nodes.insert(o.value);
  }

  // Split pass.
  for (const auto& node : nodes) {
    if (d::is_gateway(graph, node)) continue;
    auto outgoing = out_transitions(node);
    if (outgoing.size() < 2) continue;

    std::string gw = node + "/split";
    std::vector<std::string> unguarded;
    bool any_guarded = false;
    for (const auto& t : outgoing) {
      if (graph.first_object(t, vocab::sf_guard))
        any_guarded = true;
      else
        unguarded.push_back(t);
    }
    const std::string& gw_type =
        any_guarded ? vocab::bpmn_ExclusiveGateway : vocab::bpmn_ParallelGateway;
    graph.insert(Triple{gw, rdf_type, Term::iri(gw_type)}, Layer::inferred);
    if (auto trace = d::trace_of(graph, node))
      graph.insert(Triple{gw, vocab::trace_sourcePath, Term::str(*trace)}, Layer::inferred);

    // Mixed guarded/unguarded fan-out: exclusive gateway, first unguarded
    // flow (by IRI) becomes the default flow.
    if (any_guarded && !unguarded.empty()) {
      std::sort(unguarded.begin(), unguarded.end());
      graph.insert(Triple{unguarded.front(), vocab::sf_isDefault, Term::str("true")},
                   Layer::inferred);
    }

    std::set<std::string> former_targets;
    for (const auto& t : outgoing) {
      for (const auto& tgt : graph.objects(t, vocab::sf_has_target))
        if (tgt.is_iri()) former_targets.insert(tgt.value);
      d::retarget(graph, t, vocab::sf_has_source, vocab::bpmn_has_sourceRef, gw);
    }
    for (const auto& tgt : former_targets) {
      graph.erase(Triple{node, vocab::sf_transitionsTo, Term::iri(tgt)});
      graph.insert(Triple{gw, vocab::sf_transitionsTo, Term::iri(tgt)}, Layer::inferred);
    }
    graph.insert(Triple{node, vocab::sf_transitionsTo, Term::iri(gw)}, Layer::inferred);
  }

  // Join pass. Fan-in is counted on transition individuals; upstream split
  // types are found by walking transitionsTo backwards.
  for (const auto& node : nodes) {
    if (d::is_gateway(graph, node)) continue;
    auto incoming = in_transitions(node);
    if (incoming.size() < 2) continue;

    std::string gw = node + "/join";
    bool saw_exclusive = false;
    bool saw_parallel = false;
    {
      std::set<std::string> visited{node};
      std::vector<std::string> frontier{node};
      while (!frontier.empty()) {
        std::string current = frontier.back();
        frontier.pop_back();
        for (const auto& pred : graph.subjects_with(vocab::sf_transitionsTo, Term::iri(current))) {
          if (visited.count(pred)) continue;
          visited.insert(pred);
          if (d::is_gateway(graph, pred)) {
            if (graph.type_of(pred, rdf_type, vocab::bpmn_ExclusiveGateway))
              saw_exclusive = true;
            else
              saw_parallel = true;
            continue;  // stop at the nearest gateway on this path
          }
          frontier.push_back(pred);
        }
      }
    }
    const std::string& gw_type =
        saw_exclusive ? vocab::bpmn_ExclusiveGateway : vocab::bpmn_ParallelGateway;
    if (saw_exclusive && saw_parallel && warnings)
      warnings->push_back("join at <" + node + "> typed exclusive (conflicting upstream splits)");
    graph.insert(Triple{gw, rdf_type, Term::iri(gw_type)}, Layer::inferred);
    if (auto trace = d::trace_of(graph, node))
      graph.insert(Triple{gw, vocab::trace_sourcePath, Term::str(*trace)}, Layer::inferred);

    std::set<std::string> former_sources;
    for (const auto& t : incoming) {
      for (const auto& src : graph.objects(t, vocab::sf_has_source))
        if (src.is_iri()) former_sources.insert(src.value);
      d::retarget(graph, t, vocab::sf_has_target, vocab::bpmn_has_targetRef, gw);
    }
    for (const auto& src : former_sources) {
      graph.erase(Triple{src, vocab::sf_transitionsTo, Term::iri(node)});
      graph.insert(Triple{src, vocab::sf_transitionsTo, Term::iri(gw)}, Layer::inferred);
    }
    graph.insert(Triple{gw, vocab::sf_transitionsTo, Term::iri(node)}, Layer::inferred);
  }

  return graph;
}

}  // namespace flow2bpmn
