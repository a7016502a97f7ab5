#pragma once

#include <set>
#include <string>
#include <vector>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/turtle.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

struct OntologyLayer {
  Layer tag = Layer::abox;
  TripleGraph graph;
};

namespace kb_detail {

// The mapping layer may only carry bridge axioms and rule-lite reification
// triples; anything else indicates a misauthored bridge/rules file.
inline const std::set<std::string>& mapping_layer_predicates() {
  static const std::set<std::string> allowed = {
      vocab::owl_equivalentClass, vocab::owl_equivalentProperty,
      vocab::rdfs_subClassOf,     vocab::rdfs_subPropertyOf,
      vocab::owl_disjointWith,    vocab::rl_body,
      vocab::rl_head,             vocab::rl_subject,
      vocab::rl_predicate,        vocab::rl_object,
  };
  return allowed;
}

}  // namespace kb_detail

inline OntologyLayer make_layer(TripleGraph graph, Layer tag) {
  if (tag == Layer::mapping) {
    for (const auto& [t, l] : graph.all()) {
      (void)l;
      if (!kb_detail::mapping_layer_predicates().count(t.p))
        fail(ErrorCode::Config,
             "mapping layer uses non-bridge predicate <" + t.p + "> on <" + t.s + ">");
    }
  }
  return OntologyLayer{tag, std::move(graph)};
}

inline OntologyLayer parse_layer(std::string_view raw, Layer tag) {
  return make_layer(parse_turtle(raw, tag), tag);
}

/// Set-union of the layers. On duplicates the earliest layer keeps the tag.
inline TripleGraph merge(const std::vector<OntologyLayer>& layers) {
  TripleGraph out;
  for (const auto& layer : layers) {
    for (const auto& [t, l] : layer.graph.all()) {
      (void)l;
      out.insert(t, layer.tag);
    }
    out.merge_prefixes(layer.graph);
  }
  return out;
}

}  // namespace flow2bpmn
