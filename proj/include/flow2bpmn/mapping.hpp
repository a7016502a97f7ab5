#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/turtle.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

enum class ObjectSpecKind { constant, reference, iri_template, join };

struct ObjectSpec {
  ObjectSpecKind kind = ObjectSpecKind::constant;
  Term constant;               // kind == constant
  std::string reference;       // kind == reference
  std::string iri_template;    // kind == iri_template
  std::string parent_map;      // kind == join
  std::string child_field;
  std::string parent_field;
};

struct PredicateObjectMap {
  std::string predicate;
  ObjectSpec object;
};

struct TriplesMap {
  std::string name;             // IRI of the map
  std::string iterator;         // JSONPath-subset logical source iterator
  std::string subject_template;
  std::vector<std::string> classes;  // rdf:type assignments; empty for helper maps
  std::vector<PredicateObjectMap> poms;
};

struct MappingRuleSet {
  std::vector<TriplesMap> maps;

  const TriplesMap* find(const std::string& name) const {
    for (const auto& m : maps)
      if (m.name == name) return &m;
    return nullptr;
  }
  bool empty() const { return maps.empty(); }
};

namespace mapping_detail {

/// Fields reachable under each supported iterator of the canonical document
/// (see docs/input-schema.md). `base` and `spec` are context placeholders
/// available in every template.
inline const std::map<std::string, std::set<std::string>>& iterator_catalogue() {
  static const std::map<std::string, std::set<std::string>> cat = {
      {"$", {"kind", "name", "specVersion", "sourcePath"}},
      {"$.nodes[*]",
       {"id", "role", "label", "queue", "processor", "form", "executor", "sourcePath"}},
      {"$.startNodes[*]", {"id", "role", "label", "sourcePath"}},
      {"$.actionNodes[*]",
       {"id", "role", "label", "queue", "processor", "form", "executor", "sourcePath"}},
      {"$.endNodes[*]", {"id", "role", "label", "sourcePath"}},
      {"$.transitions[*]", {"id", "from", "to", "guard", "trigger", "sourcePath"}},
      {"$.queues[*]", {"id", "label", "kind", "sourcePath"}},
      {"$.forms[*]", {"id", "title", "sourcePath"}},
      {"$.processors[*]", {"name", "sourcePath"}},
  };
  return cat;
}

inline std::vector<std::string> template_placeholders(const std::string& tmpl) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close == std::string::npos)
        fail(ErrorCode::MappingSyntax, "unterminated placeholder in template: " + tmpl);
      out.push_back(tmpl.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      ++i;
    }
  }
  return out;
}

inline bool is_context_placeholder(const std::string& name) {
  return name == "base" || name == "spec";
}

inline void check_placeholders(const std::string& tmpl, const std::set<std::string>& fields,
                               const std::string& map_name) {
  for (const auto& ph : template_placeholders(tmpl)) {
    if (is_context_placeholder(ph)) continue;
    if (!fields.count(ph))
      fail(ErrorCode::MappingRef, "template placeholder '{" + ph + "}' in " + map_name +
                                      " names no field reachable under the iterator");
  }
}

inline std::string require_string_object(const TripleGraph& g, const std::string& s,
                                         const std::string& p, const std::string& what) {
  auto obj = g.first_object(s, p);
  if (!obj || !obj->is_literal())
    fail(ErrorCode::MappingSyntax, "missing " + what + " on <" + s + ">");
  return obj->value;
}

}  // namespace mapping_detail

/// Parse an RML-subset mapping file (Turtle carrier, named map nodes) and
/// validate references against the canonical iterator catalogue.
inline MappingRuleSet load_mappings(std::string_view raw) {
  namespace d = mapping_detail;
  TripleGraph g;
  try {
    g = parse_turtle(raw, Layer::mapping);
  } catch (const PipelineError& e) {
    fail(ErrorCode::MappingSyntax, e.detail());
  }

  MappingRuleSet rules;

  // A triples map is any subject carrying rml:logicalSource.
  std::vector<std::string> map_subjects;
  for (const auto& [s, o] : g.with_predicate(vocab::rml_logicalSource)) {
    (void)o;
    map_subjects.push_back(s);
  }
  std::sort(map_subjects.begin(), map_subjects.end());
  map_subjects.erase(std::unique(map_subjects.begin(), map_subjects.end()), map_subjects.end());

  for (const auto& subject : map_subjects) {
    TriplesMap m;
    m.name = subject;

    auto source = g.first_object(subject, vocab::rml_logicalSource);
    if (!source || !source->is_iri())
      fail(ErrorCode::MappingSyntax, "rml:logicalSource of <" + subject + "> must be an IRI node");
    m.iterator = d::require_string_object(g, source->value, vocab::rml_iterator, "rml:iterator");

    auto subject_map = g.first_object(subject, vocab::rr_subjectMap);
    if (!subject_map || !subject_map->is_iri())
      fail(ErrorCode::MappingSyntax, "missing rr:subjectMap on <" + subject + ">");
    m.subject_template =
        d::require_string_object(g, subject_map->value, vocab::rr_template, "rr:template");
    for (const auto& cls : g.objects(subject_map->value, vocab::rr_class)) {
      if (!cls.is_iri())
        fail(ErrorCode::MappingSyntax, "rr:class must be an IRI on <" + subject_map->value + ">");
      m.classes.push_back(cls.value);
    }

    for (const auto& pom_term : g.objects(subject, vocab::rr_predicateObjectMap)) {
      if (!pom_term.is_iri())
        fail(ErrorCode::MappingSyntax, "rr:predicateObjectMap must reference an IRI node");
      const std::string& pom = pom_term.value;
      PredicateObjectMap out;
      auto pred = g.first_object(pom, vocab::rr_predicate);
      if (!pred || !pred->is_iri())
        fail(ErrorCode::MappingSyntax, "missing rr:predicate on <" + pom + ">");
      out.predicate = pred->value;

      auto om = g.first_object(pom, vocab::rr_objectMap);
      if (!om || !om->is_iri())
        fail(ErrorCode::MappingSyntax, "missing rr:objectMap on <" + pom + ">");
      const std::string& om_iri = om->value;

      if (auto c = g.first_object(om_iri, vocab::rr_constant)) {
        out.object.kind = ObjectSpecKind::constant;
        out.object.constant = *c;
      } else if (auto r = g.first_object(om_iri, vocab::rml_reference)) {
        out.object.kind = ObjectSpecKind::reference;
        out.object.reference = r->value;
      } else if (auto t = g.first_object(om_iri, vocab::rr_template)) {
        out.object.kind = ObjectSpecKind::iri_template;
        out.object.iri_template = t->value;
      } else if (auto p = g.first_object(om_iri, vocab::rr_parentTriplesMap)) {
        if (!p->is_iri())
          fail(ErrorCode::MappingSyntax, "rr:parentTriplesMap must be an IRI on <" + om_iri + ">");
        out.object.kind = ObjectSpecKind::join;
        out.object.parent_map = p->value;
        auto jc = g.first_object(om_iri, vocab::rr_joinCondition);
        if (!jc || !jc->is_iri())
          fail(ErrorCode::MappingSyntax, "missing rr:joinCondition on <" + om_iri + ">");
        out.object.child_field =
            d::require_string_object(g, jc->value, vocab::rr_child, "rr:child");
        out.object.parent_field =
            d::require_string_object(g, jc->value, vocab::rr_parent, "rr:parent");
      } else {
        fail(ErrorCode::MappingSyntax,
             "object map <" + om_iri + "> has no constant, reference, template or join");
      }
      m.poms.push_back(std::move(out));
    }

    rules.maps.push_back(std::move(m));
  }

  // Reference validation (E_MAPPING_REF).
  for (const auto& m : rules.maps) {
    auto cat = d::iterator_catalogue().find(m.iterator);
    if (cat == d::iterator_catalogue().end())
      fail(ErrorCode::MappingRef,
           "unknown logical source iterator '" + m.iterator + "' in <" + m.name + ">");
    const auto& fields = cat->second;
    d::check_placeholders(m.subject_template, fields, m.name);
    for (const auto& pom : m.poms) {
      switch (pom.object.kind) {
        case ObjectSpecKind::constant:
          break;
        case ObjectSpecKind::reference:
          if (!fields.count(pom.object.reference))
            fail(ErrorCode::MappingRef, "reference '" + pom.object.reference + "' in <" +
                                            m.name + "> names no reachable field");
          break;
        case ObjectSpecKind::iri_template:
          d::check_placeholders(pom.object.iri_template, fields, m.name);
          break;
        case ObjectSpecKind::join: {
          const TriplesMap* parent = rules.find(pom.object.parent_map);
          if (!parent)
            fail(ErrorCode::MappingRef,
                 "join in <" + m.name + "> names undeclared map <" + pom.object.parent_map + ">");
          if (!fields.count(pom.object.child_field))
            fail(ErrorCode::MappingRef, "join child field '" + pom.object.child_field + "' in <" +
                                            m.name + "> names no reachable field");
          auto pcat = d::iterator_catalogue().find(parent->iterator);
          if (pcat == d::iterator_catalogue().end() ||
              !pcat->second.count(pom.object.parent_field))
            fail(ErrorCode::MappingRef, "join parent field '" + pom.object.parent_field +
                                            "' not reachable under <" + parent->name + ">");
          break;
        }
      }
    }
  }

  return rules;
}

}  // namespace flow2bpmn
