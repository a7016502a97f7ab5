#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow2bpmn/encoding.hpp"
#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/jsonpath.hpp"
#include "flow2bpmn/mapping.hpp"
#include "flow2bpmn/model.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

/// Canonical document the mapping iterators run over. It mirrors the source
/// file (original order, original JSON pointers in `sourcePath`) and adds
/// role-filtered node views plus the computed `executor` field on action
/// nodes.
inline nlohmann::json to_canonical_json(const WorkflowSpec& spec) {
  using nlohmann::json;
  json doc = json::object();
  doc["specVersion"] = 1;
  doc["kind"] = to_string(spec.kind);
  doc["name"] = spec.name;
  doc["sourcePath"] = "";

  json nodes = json::array();
  json start_nodes = json::array();
  json action_nodes = json::array();
  json end_nodes = json::array();
  for (const auto& n : spec.nodes) {
    json jn = json::object();
    jn["id"] = n.id;
    jn["role"] = to_string(n.role);
    jn["label"] = n.label;
    jn["sourcePath"] = n.source_path;
    if (n.queue) jn["queue"] = *n.queue;
    if (n.processor) jn["processor"] = *n.processor;
    if (n.form) jn["form"] = *n.form;
    if (n.role == NodeRole::action)
      jn["executor"] = spec.has_human_queue(n) ? "user" : "system";
    nodes.push_back(jn);
    switch (n.role) {
      case NodeRole::start: start_nodes.push_back(jn); break;
      case NodeRole::action: action_nodes.push_back(jn); break;
      case NodeRole::end: end_nodes.push_back(jn); break;
    }
  }
  doc["nodes"] = std::move(nodes);
  doc["startNodes"] = std::move(start_nodes);
  doc["actionNodes"] = std::move(action_nodes);
  doc["endNodes"] = std::move(end_nodes);

  json transitions = json::array();
  for (const auto& t : spec.transitions) {
    json jt = json::object();
    jt["id"] = t.id;
    jt["from"] = t.from;
    jt["to"] = t.to;
    jt["trigger"] = to_string(t.trigger);
    jt["sourcePath"] = t.source_path;
    if (t.guard) jt["guard"] = *t.guard;
    transitions.push_back(std::move(jt));
  }
  doc["transitions"] = std::move(transitions);

  json queues = json::array();
  for (const auto& q : spec.queues) {
    json jq = json::object();
    jq["id"] = q.id;
    jq["label"] = q.label;
    jq["kind"] = to_string(q.kind);
    jq["sourcePath"] = q.source_path;
    queues.push_back(std::move(jq));
  }
  doc["queues"] = std::move(queues);

  json forms = json::array();
  for (const auto& f : spec.forms) {
    json jf = json::object();
    jf["id"] = f.id;
    jf["title"] = f.title;
    jf["sourcePath"] = f.source_path;
    forms.push_back(std::move(jf));
  }
  doc["forms"] = std::move(forms);

  json processors = json::array();
  for (const auto& p : spec.processors) {
    json jp = json::object();
    jp["name"] = p.name;
    jp["sourcePath"] = p.source_path;
    processors.push_back(std::move(jp));
  }
  doc["processors"] = std::move(processors);

  return doc;
}

namespace lift_detail {

inline std::string field_as_string(const nlohmann::json& elem, const std::string& field,
                                   bool* present) {
  if (!elem.is_object() || !elem.contains(field) || elem.at(field).is_null()) {
    *present = false;
    return {};
  }
  *present = true;
  const auto& v = elem.at(field);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  *present = false;
  return {};
}

struct LiftContext {
  std::string base;
  std::string spec_name_encoded;
};

/// Expand a `{...}` template; field values are percent-encoded, the `base`
/// context placeholder is substituted verbatim. Returns false when a field
/// placeholder is absent on this element.
inline bool expand_template(const std::string& tmpl, const nlohmann::json& elem,
                            const LiftContext& ctx, std::string* out) {
  std::string result;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      std::string name = tmpl.substr(i + 1, close - i - 1);
      i = close + 1;
      if (name == "base") {
        result += ctx.base;
      } else if (name == "spec") {
        result += ctx.spec_name_encoded;
      } else {
        bool present = false;
        std::string value = field_as_string(elem, name, &present);
        if (!present) return false;
        result += percent_encode(value);
      }
    } else {
      result += tmpl[i++];
    }
  }
  *out = std::move(result);
  return true;
}

struct MapInstances {
  const TriplesMap* map = nullptr;
  std::vector<const nlohmann::json*> elements;
  std::vector<std::string> subjects;  // parallel to elements
};

}  // namespace lift_detail

/// Apply the mapping rule set to a spec, producing the ABox. One individual
/// per element of each classing map, each carrying a trace:sourcePath
/// back-link; helper maps (no rr:class) only add triples about subjects the
/// classing maps minted.
inline TripleGraph lift(const WorkflowSpec& spec, const MappingRuleSet& rules,
                        const std::string& base = vocab::kDefaultInstanceBase) {
  namespace d = lift_detail;
  nlohmann::json doc = to_canonical_json(spec);
  d::LiftContext ctx{base, percent_encode(spec.name)};

  // First pass: evaluate iterators and mint subject IRIs.
  std::vector<d::MapInstances> instances;
  std::map<std::string, std::size_t> by_name;
  for (const auto& m : rules.maps) {
    d::MapInstances inst;
    inst.map = &m;
    inst.elements = JsonPath::parse(m.iterator).select(doc);
    for (const auto* elem : inst.elements) {
      std::string subject;
      if (!d::expand_template(m.subject_template, *elem, ctx, &subject))
        fail(ErrorCode::LiftJoin, "subject template of <" + m.name +
                                      "> references a field absent on a matched element");
      inst.subjects.push_back(std::move(subject));
    }
    by_name[m.name] = instances.size();
    instances.push_back(std::move(inst));
  }

  TripleGraph g;
  g.add_prefix("sf", vocab::sf);
  g.add_prefix("bpmn", vocab::bpmn);
  g.add_prefix("trace", vocab::trace);
  g.add_prefix("rdf", vocab::rdf);
  g.add_prefix("xsd", vocab::xsd);

  for (const auto& inst : instances) {
    const TriplesMap& m = *inst.map;
    for (std::size_t i = 0; i < inst.elements.size(); ++i) {
      const nlohmann::json& elem = *inst.elements[i];
      const std::string& subject = inst.subjects[i];

      for (const auto& cls : m.classes)
        g.insert(Triple{subject, vocab::rdf_type, Term::iri(cls)});
      if (!m.classes.empty()) {
        bool present = false;
        std::string path = d::field_as_string(elem, "sourcePath", &present);
        g.insert(Triple{subject, vocab::trace_sourcePath, Term::str(path)});
      }

      for (const auto& pom : m.poms) {
        switch (pom.object.kind) {
          case ObjectSpecKind::constant:
            g.insert(Triple{subject, pom.predicate, pom.object.constant});
            break;
          case ObjectSpecKind::reference: {
            bool present = false;
            std::string value = d::field_as_string(elem, pom.object.reference, &present);
            if (present) g.insert(Triple{subject, pom.predicate, Term::str(value)});
            break;
          }
          case ObjectSpecKind::iri_template: {
            std::string iri;
            if (d::expand_template(pom.object.iri_template, elem, ctx, &iri))
              g.insert(Triple{subject, pom.predicate, Term::iri(iri)});
            break;
          }
          case ObjectSpecKind::join: {
            bool present = false;
            std::string child_value = d::field_as_string(elem, pom.object.child_field, &present);
            if (!present) break;
            const d::MapInstances& parent = instances[by_name.at(pom.object.parent_map)];
            bool matched = false;
            for (std::size_t k = 0; k < parent.elements.size(); ++k) {
              bool ppresent = false;
              std::string parent_value =
                  d::field_as_string(*parent.elements[k], pom.object.parent_field, &ppresent);
              if (ppresent && parent_value == child_value) {
                g.insert(Triple{subject, pom.predicate, Term::iri(parent.subjects[k])});
                matched = true;
              }
            }
            if (!matched)
              fail(ErrorCode::LiftJoin, "join in <" + m.name + "> found no partner for " +
                                            pom.object.child_field + "='" + child_value + "'");
            break;
          }
        }
      }
    }
  }

  return g;
}

}  // namespace flow2bpmn
