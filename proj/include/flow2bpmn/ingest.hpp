#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/model.hpp"

namespace flow2bpmn {

namespace ingest_detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& pointer, const std::string& msg) {
  fail(ErrorCode::Schema, msg + " (at " + (pointer.empty() ? "/" : pointer) + ")");
}

inline std::string require_string(const json& obj, const char* key, const std::string& ptr,
                                  bool allow_empty = false) {
  if (!obj.contains(key)) schema_error(ptr, std::string("missing required key '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_string()) schema_error(ptr + "/" + key, std::string("'") + key + "' must be a string");
  std::string s = v.get<std::string>();
  if (s.empty() && !allow_empty)
    schema_error(ptr + "/" + key, std::string("'") + key + "' must be non-empty");
  return s;
}

inline std::optional<std::string> optional_string(const json& obj, const char* key,
                                                  const std::string& ptr) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_string()) schema_error(ptr + "/" + key, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

inline const json& require_array(const json& obj, const char* key, const std::string& ptr) {
  if (!obj.contains(key)) schema_error(ptr, std::string("missing required key '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_array()) schema_error(ptr + "/" + key, std::string("'") + key + "' must be an array");
  return v;
}

inline NodeRole parse_role(const std::string& s, const std::string& ptr) {
  if (s == "start") return NodeRole::start;
  if (s == "action") return NodeRole::action;
  if (s == "end") return NodeRole::end;
  schema_error(ptr, "unknown node role '" + s + "'");
}

inline Trigger parse_trigger(const std::string& s, const std::string& ptr) {
  if (s == "auto") return Trigger::automatic;
  if (s == "button") return Trigger::button;
  if (s == "timer") return Trigger::timer;
  if (s == "dynamic") return Trigger::dynamic;
  schema_error(ptr, "unknown transition trigger '" + s + "'");
}

inline QueueKind parse_queue_kind(const std::string& s, const std::string& ptr) {
  if (s == "human") return QueueKind::human;
  if (s == "system") return QueueKind::system;
  schema_error(ptr, "unknown queue kind '" + s + "'");
}

inline std::string unique_id(std::string candidate, const std::set<std::string>& taken) {
  while (taken.count(candidate)) candidate += "_";
  return candidate;
}

// Degenerate request flow: a request file without transitions gets a
// start -> fill-form -> end chain so the form shows up as a user task.
inline void synthesize_request_flow(WorkflowSpec& spec) {
  std::set<std::string> node_ids;
  for (const auto& n : spec.nodes) node_ids.insert(n.id);

  if (spec.nodes.empty()) {
    NodeDef start{"start", NodeRole::start, "Start", {}, {}, {}, {}, "", true};
    NodeDef end{"end", NodeRole::end, "End", {}, {}, {}, {}, "", true};
    spec.nodes.push_back(start);
    spec.nodes.push_back(end);
    node_ids.insert("start");
    node_ids.insert("end");
  }
  if (spec.count_role(NodeRole::start) != 1)
    schema_error("/nodes", "request synthesis requires exactly one start node");
  if (spec.count_role(NodeRole::end) < 1)
    schema_error("/nodes", "request synthesis requires at least one end node");

  std::string queue_id;
  for (const auto& q : spec.queues) {
    if (q.kind == QueueKind::human) {
      queue_id = q.id;
      break;
    }
  }
  if (queue_id.empty()) {
    std::set<std::string> queue_ids;
    for (const auto& q : spec.queues) queue_ids.insert(q.id);
    queue_id = unique_id("requester", queue_ids);
    spec.queues.push_back(QueueDef{queue_id, "Requester", QueueKind::human, "", true});
  }

  NodeDef fill;
  fill.id = unique_id("fill_form", node_ids);
  fill.role = NodeRole::action;
  fill.queue = queue_id;
  fill.synthesized = true;
  if (!spec.forms.empty()) {
    fill.form = spec.forms.front().id;
    fill.label = spec.forms.front().title.empty() ? "Fill form" : spec.forms.front().title;
    fill.source_path = spec.forms.front().source_path;
  } else {
    fill.label = "Fill form";
    fill.source_path = "";
  }
  spec.nodes.push_back(fill);

  std::set<std::string> transition_ids;
  std::string start_id;
  for (const auto& n : spec.nodes)
    if (n.role == NodeRole::start) start_id = n.id;

  TransitionDef in;
  in.id = unique_id("t_" + fill.id + "_in", transition_ids);
  transition_ids.insert(in.id);
  in.from = start_id;
  in.to = fill.id;
  in.synthesized = true;
  spec.transitions.push_back(in);

  for (const auto& n : spec.nodes) {
    if (n.role != NodeRole::end) continue;
    TransitionDef out;
    out.id = unique_id("t_" + fill.id + "_out", transition_ids);
    transition_ids.insert(out.id);
    out.from = fill.id;
    out.to = n.id;
    out.synthesized = true;
    spec.transitions.push_back(out);
  }
}

}  // namespace ingest_detail

/// Parse and structurally validate one workflow/form JSON file. Total over
/// byte inputs: the result is a WorkflowSpec or exactly one error class, in
/// fixed precedence E_MALFORMED_JSON > E_SCHEMA > E_UNRESOLVED_NODE >
/// E_TIMER_UNSUPPORTED.
inline WorkflowSpec parse_spec(std::string_view raw, const std::string& source_path) {
  using nlohmann::json;
  namespace d = ingest_detail;

  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedJson, std::string(e.what()) + " (" + source_path + ")");
  }
  if (!doc.is_object()) d::schema_error("", "top level must be a JSON object");

  if (!doc.contains("specVersion")) d::schema_error("", "missing required key 'specVersion'");
  if (!doc.at("specVersion").is_number_integer() || doc.at("specVersion").get<long long>() != 1)
    d::schema_error("/specVersion", "unsupported specVersion (expected 1)");

  WorkflowSpec spec;
  spec.source_file = source_path;
  std::string kind = d::require_string(doc, "kind", "");
  if (kind == "request")
    spec.kind = SpecKind::request;
  else if (kind == "flow")
    spec.kind = SpecKind::flow;
  else
    d::schema_error("/kind", "unknown kind '" + kind + "'");
  spec.name = d::require_string(doc, "name", "");

  // Nodes (required key, possibly empty for request files).
  const json& nodes = d::require_array(doc, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string ptr = "/nodes/" + std::to_string(i);
    const json& jn = nodes[i];
    if (!jn.is_object()) d::schema_error(ptr, "node must be an object");
    NodeDef n;
    n.source_path = ptr;
    n.id = d::require_string(jn, "id", ptr);
    n.role = d::parse_role(d::require_string(jn, "role", ptr), ptr + "/role");
    n.label = d::optional_string(jn, "label", ptr).value_or(n.id);
    n.queue = d::optional_string(jn, "queue", ptr);
    n.processor = d::optional_string(jn, "processor", ptr);
    n.form = d::optional_string(jn, "form", ptr);
    if (jn.contains("buttons")) {
      const json& jb = d::require_array(jn, "buttons", ptr);
      for (std::size_t k = 0; k < jb.size(); ++k) {
        std::string bptr = ptr + "/buttons/" + std::to_string(k);
        if (!jb[k].is_object()) d::schema_error(bptr, "button must be an object");
        ButtonDef b;
        b.source_path = bptr;
        b.label = d::require_string(jb[k], "label", bptr, /*allow_empty=*/true);
        b.transition = d::require_string(jb[k], "transition", bptr);
        n.buttons.push_back(std::move(b));
      }
    }
    spec.nodes.push_back(std::move(n));
  }

  if (doc.contains("transitions")) {
    const json& transitions = d::require_array(doc, "transitions", "");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
      std::string ptr = "/transitions/" + std::to_string(i);
      const json& jt = transitions[i];
      if (!jt.is_object()) d::schema_error(ptr, "transition must be an object");
      TransitionDef t;
      t.source_path = ptr;
      t.id = d::require_string(jt, "id", ptr);
      t.from = d::require_string(jt, "from", ptr);
      t.to = d::require_string(jt, "to", ptr);
      t.guard = d::optional_string(jt, "guard", ptr);
      auto trigger = d::optional_string(jt, "trigger", ptr);
      t.trigger = trigger ? d::parse_trigger(*trigger, ptr + "/trigger") : Trigger::automatic;
      spec.transitions.push_back(std::move(t));
    }
  }

  if (doc.contains("queues")) {
    const json& queues = d::require_array(doc, "queues", "");
    for (std::size_t i = 0; i < queues.size(); ++i) {
      std::string ptr = "/queues/" + std::to_string(i);
      const json& jq = queues[i];
      if (!jq.is_object()) d::schema_error(ptr, "queue must be an object");
      QueueDef q;
      q.source_path = ptr;
      q.id = d::require_string(jq, "id", ptr);
      q.label = d::optional_string(jq, "label", ptr).value_or(q.id);
      q.kind = d::parse_queue_kind(d::require_string(jq, "kind", ptr), ptr + "/kind");
      spec.queues.push_back(std::move(q));
    }
  }

  if (doc.contains("forms")) {
    const json& forms = d::require_array(doc, "forms", "");
    for (std::size_t i = 0; i < forms.size(); ++i) {
      std::string ptr = "/forms/" + std::to_string(i);
      const json& jf = forms[i];
      if (!jf.is_object()) d::schema_error(ptr, "form must be an object");
      FormDef f;
      f.source_path = ptr;
      f.id = d::require_string(jf, "id", ptr);
      f.title = d::optional_string(jf, "title", ptr).value_or(f.id);
      if (jf.contains("fields")) {
        const json& fields = d::require_array(jf, "fields", ptr);
        std::set<std::string> seen;
        for (std::size_t k = 0; k < fields.size(); ++k) {
          std::string fptr = ptr + "/fields/" + std::to_string(k);
          if (!fields[k].is_object()) d::schema_error(fptr, "form field must be an object");
          FormField field;
          field.name = d::require_string(fields[k], "name", fptr);
          field.type = d::optional_string(fields[k], "type", fptr).value_or("text");
          if (!seen.insert(field.name).second)
            d::schema_error(fptr + "/name", "duplicate field name '" + field.name + "'");
          f.fields.push_back(std::move(field));
        }
      }
      spec.forms.push_back(std::move(f));
    }
  }

  if (doc.contains("processors")) {
    const json& procs = d::require_array(doc, "processors", "");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < procs.size(); ++i) {
      std::string ptr = "/processors/" + std::to_string(i);
      if (!procs[i].is_string() || procs[i].get<std::string>().empty())
        d::schema_error(ptr, "processor entry must be a non-empty string");
      std::string name = procs[i].get<std::string>();
      if (!seen.insert(name).second) d::schema_error(ptr, "duplicate processor '" + name + "'");
      spec.processors.push_back(ProcessorDef{name, ptr});
    }
  }

  // Uniqueness of ids. Duplicates are rejected rather than shadowed so that
  // source paths stay unambiguous.
  {
    std::set<std::string> ids;
    for (const auto& n : spec.nodes)
      if (!ids.insert(n.id).second)
        d::schema_error(n.source_path + "/id", "duplicate node id '" + n.id + "'");
    ids.clear();
    for (const auto& t : spec.transitions)
      if (!ids.insert(t.id).second)
        d::schema_error(t.source_path + "/id", "duplicate transition id '" + t.id + "'");
    ids.clear();
    for (const auto& q : spec.queues)
      if (!ids.insert(q.id).second)
        d::schema_error(q.source_path + "/id", "duplicate queue id '" + q.id + "'");
    ids.clear();
    for (const auto& f : spec.forms)
      if (!ids.insert(f.id).second)
        d::schema_error(f.source_path + "/id", "duplicate form id '" + f.id + "'");
  }

  // Role constraints and queue/form/processor reference resolution.
  std::set<std::string> processor_names;
  for (const auto& p : spec.processors) processor_names.insert(p.name);
  for (const auto& n : spec.nodes) {
    if (n.role == NodeRole::start || n.role == NodeRole::end) {
      if (n.queue || n.processor || n.form)
        d::schema_error(n.source_path,
                        std::string(to_string(n.role)) + " node '" + n.id +
                            "' must not carry queue, processor or form");
    } else {
      if (!n.queue && !n.processor)
        d::schema_error(n.source_path,
                        "action node '" + n.id + "' needs at least one of queue or processor");
    }
    if (n.queue && !spec.find_queue(*n.queue))
      d::schema_error(n.source_path + "/queue", "undeclared queue '" + *n.queue + "'");
    if (n.form && !spec.find_form(*n.form))
      d::schema_error(n.source_path + "/form", "undeclared form '" + *n.form + "'");
    if (n.processor && !processor_names.count(*n.processor))
      d::schema_error(n.source_path + "/processor",
                      "processor '" + *n.processor + "' not in the processors catalogue");
  }

  // Buttons reference declared transitions; each button-triggered transition
  // is owned by exactly one button.
  {
    std::map<std::string, int> button_refs;
    for (const auto& n : spec.nodes) {
      for (const auto& b : n.buttons) {
        bool found = false;
        for (const auto& t : spec.transitions)
          if (t.id == b.transition) found = true;
        if (!found)
          d::schema_error(b.source_path + "/transition",
                          "button references undeclared transition '" + b.transition + "'");
        button_refs[b.transition] += 1;
      }
    }
    for (const auto& t : spec.transitions) {
      if (t.trigger != Trigger::button) continue;
      int refs = button_refs.count(t.id) ? button_refs.at(t.id) : 0;
      if (refs != 1)
        d::schema_error(t.source_path,
                        "button transition '" + t.id + "' referenced by " +
                            std::to_string(refs) + " buttons (expected exactly 1)");
    }
  }

  if (spec.kind == SpecKind::request && spec.transitions.empty())
    d::synthesize_request_flow(spec);

  if (spec.count_role(NodeRole::start) != 1)
    d::schema_error("/nodes", "spec must declare exactly one start node");
  if (spec.count_role(NodeRole::end) < 1)
    d::schema_error("/nodes", "spec must declare at least one end node");

  // Unresolved node references: scanned across all transitions before the
  // timer scan so the error precedence is stable on multi-defect inputs.
  for (const auto& t : spec.transitions) {
    if (!spec.find_node(t.from))
      fail(ErrorCode::UnresolvedNode,
           "transition '" + t.id + "' references undeclared node '" + t.from +
               "' (at " + t.source_path + "/from)");
    if (!spec.find_node(t.to))
      fail(ErrorCode::UnresolvedNode,
           "transition '" + t.id + "' references undeclared node '" + t.to +
               "' (at " + t.source_path + "/to)");
  }

  for (const auto& t : spec.transitions) {
    if (t.trigger == Trigger::timer || t.trigger == Trigger::dynamic)
      fail(ErrorCode::TimerUnsupported,
           "transition '" + t.id + "' uses unsupported trigger '" +
               std::string(to_string(t.trigger)) + "' (at " + t.source_path + ")");
  }

  return spec;
}

}  // namespace flow2bpmn
