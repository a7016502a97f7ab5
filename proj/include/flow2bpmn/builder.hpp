#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "flow2bpmn/bpmn_model.hpp"
#include "flow2bpmn/encoding.hpp"
#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/model.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/validator.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

/// BPMN ids must be XML NCNames: non [A-Za-z0-9_] characters become '_'.
/// Callers prepend a letter prefix (n_, f_, gw_, ...).
inline std::string sanitize_id(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_';
    out += ok ? c : '_';
  }
  return out;
}

namespace builder_detail {

[[noreturn]] inline void precondition(const std::string& msg) {
  fail(ErrorCode::BuildPrecondition, msg);
}

/// Resolves source elements to their lifted individuals via the minting
/// scheme ({base}{spec}/{collection}/{id}); percent-encoded ids contain no
/// '/', so the collection/id suffix is unambiguous within one spec's graph.
class IndividualIndex {
 public:
  explicit IndividualIndex(const TripleGraph& g) {
    for (const auto& [s, o] : g.with_predicate(vocab::trace_sourcePath)) {
      (void)o;
      subjects_.push_back(s);
    }
  }

  std::string find(const std::string& collection, const std::string& id,
                   const std::string& what) const {
    std::string suffix = "/" + collection + "/" + percent_encode(id);
    for (const auto& s : subjects_) {
      if (s.size() <= suffix.size()) continue;
      if (s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) return s;
    }
    precondition("no lifted individual for " + what + " ('" + id + "')");
  }

 private:
  std::vector<std::string> subjects_;
};

inline FlowNodeKind node_kind(const TripleGraph& g, const NodeDef& node,
                              const std::string& iri) {
  auto typed = [&](const std::string& cls) { return g.type_of(iri, vocab::rdf_type, cls); };
  switch (node.role) {
    case NodeRole::start:
      if (!typed(vocab::bpmn_StartEvent))
        precondition("start node <" + iri + "> lacks the start event type");
      return FlowNodeKind::startEvent;
    case NodeRole::end:
      if (!typed(vocab::bpmn_EndEvent))
        precondition("end node <" + iri + "> lacks the end event type");
      return FlowNodeKind::endEvent;
    case NodeRole::action: {
      bool user = typed(vocab::bpmn_UserTask);
      bool service = typed(vocab::bpmn_ServiceTask);
      if (user == service)
        precondition("action node <" + iri + "> must be typed exactly one of user/service task");
      return user ? FlowNodeKind::userTask : FlowNodeKind::serviceTask;
    }
  }
  precondition("unreachable node role");
}

}  // namespace builder_detail

/// Construct the in-memory BPMN model from the validated knowledge base.
/// Ids are deterministic sanitized forms of source ids, so identical inputs
/// produce structurally identical models.
inline BpmnModel build_model(const TripleGraph& g, const WorkflowSpec& spec) {
  namespace d = builder_detail;

  BpmnModel model;
  std::string san_name = sanitize_id(spec.name);
  model.definitions_id = "defs_" + san_name;
  model.collaboration_id = "collab_" + san_name;
  model.pool_id = "pool_" + san_name;
  model.pool_name = spec.name;

  BpmnProcess proc;
  proc.id = "p_" + san_name;
  proc.name = spec.name;

  d::IndividualIndex individuals(g);

  std::map<std::string, std::string> iri_to_id;  // individual IRI -> BPMN id
  std::map<std::string, std::string> node_iri;   // node id -> individual IRI

  for (const auto& n : spec.nodes) {
    std::string iri = individuals.find("nodes", n.id, "node");
    node_iri[n.id] = iri;
    BpmnFlowNode fn;
    fn.id = "n_" + sanitize_id(n.id);
    fn.name = n.label;
    fn.kind = d::node_kind(g, n, iri);
    fn.trace_iri = iri;
    iri_to_id[iri] = fn.id;
    proc.nodes.push_back(std::move(fn));
  }

  // Synthesized gateways; each traces to its owning node.
  struct GatewayRef {
    std::string node_id;
    bool split = false;
    std::string bpmn_id;
  };
  std::vector<GatewayRef> gateways;
  for (const auto& n : spec.nodes) {
    const std::string& iri = node_iri.at(n.id);
    for (bool split : {false, true}) {  // joins enter before the node, splits leave after
      std::string gw_iri = iri + (split ? "/split" : "/join");
      bool exclusive = g.type_of(gw_iri, vocab::rdf_type, vocab::bpmn_ExclusiveGateway);
      bool parallel = g.type_of(gw_iri, vocab::rdf_type, vocab::bpmn_ParallelGateway);
      if (!exclusive && !parallel) continue;
      BpmnFlowNode fn;
      fn.id = "gw_" + sanitize_id(n.id) + (split ? "_split" : "_join");
      fn.kind = exclusive ? FlowNodeKind::exclusiveGateway : FlowNodeKind::parallelGateway;
      fn.trace_iri = iri;  // gateways trace to the owning node
      iri_to_id[gw_iri] = fn.id;
      gateways.push_back(GatewayRef{n.id, split, fn.id});
      proc.nodes.push_back(std::move(fn));
    }
  }

  auto endpoint_id = [&](const std::string& iri, const std::string& what) -> std::string {
    auto it = iri_to_id.find(iri);
    if (it == iri_to_id.end()) d::precondition("flow endpoint <" + iri + "> unknown (" + what + ")");
    return it->second;
  };

  // Flows: one per source transition (carrying its guard), plus one link
  // flow per synthesized gateway.
  for (const auto& t : spec.transitions) {
    std::string t_iri = individuals.find("transitions", t.id, "transition");
    auto src = g.first_object(t_iri, vocab::sf_has_source);
    auto tgt = g.first_object(t_iri, vocab::sf_has_target);
    if (!src || !tgt || !src->is_iri() || !tgt->is_iri())
      d::precondition("transition <" + t_iri + "> lacks source/target");
    BpmnSequenceFlow flow;
    flow.id = "f_" + sanitize_id(t.id);
    flow.source_id = endpoint_id(src->value, "transition '" + t.id + "'");
    flow.target_id = endpoint_id(tgt->value, "transition '" + t.id + "'");
    flow.condition = t.guard;
    flow.is_default = g.has(t_iri, vocab::sf_isDefault, Term::str("true"));
    proc.flows.push_back(std::move(flow));
  }
  for (const auto& gw : gateways) {
    BpmnSequenceFlow flow;
    flow.id = "f_" + gw.bpmn_id;
    if (gw.split) {
      flow.source_id = "n_" + sanitize_id(gw.node_id);
      flow.target_id = gw.bpmn_id;
    } else {
      flow.source_id = gw.bpmn_id;
      flow.target_id = "n_" + sanitize_id(gw.node_id);
    }
    proc.flows.push_back(std::move(flow));
  }

  // Lanes: one per human queue actually referenced; service tasks go to a
  // synthetic System lane when any human lane exists.
  std::set<std::string> referenced_queues;
  for (const auto& n : spec.nodes)
    if (n.queue) referenced_queues.insert(*n.queue);
  bool any_service = false;
  for (const auto& fn : proc.nodes)
    if (fn.kind == FlowNodeKind::serviceTask) any_service = true;

  std::map<std::string, std::string> queue_lane;  // queue id -> lane id
  for (const auto& q : spec.queues) {
    if (q.kind != QueueKind::human || !referenced_queues.count(q.id)) continue;
    BpmnLane lane;
    lane.id = "lane_" + sanitize_id(q.id);
    lane.name = q.label;
    queue_lane[q.id] = lane.id;
    proc.lanes.push_back(std::move(lane));
  }
  if (!proc.lanes.empty() && any_service) {
    BpmnLane lane;
    lane.id = "lane_system";
    lane.name = "System";
    lane.synthetic_system = true;
    proc.lanes.push_back(std::move(lane));
  }

  if (!proc.lanes.empty()) {
    std::map<std::string, std::string> lane_of;  // bpmn node id -> lane id
    std::string system_lane;
    for (const auto& lane : proc.lanes)
      if (lane.synthetic_system) system_lane = lane.id;

    for (const auto& n : spec.nodes) {
      std::string bpmn_id = "n_" + sanitize_id(n.id);
      const BpmnFlowNode* fn = proc.find_node(bpmn_id);
      if (fn->kind == FlowNodeKind::userTask) {
        if (!n.queue || !queue_lane.count(*n.queue))
          d::precondition("user task '" + n.id + "' has no resolvable lane");
        lane_of[bpmn_id] = queue_lane.at(*n.queue);
      } else if (fn->kind == FlowNodeKind::serviceTask) {
        lane_of[bpmn_id] = system_lane.empty() ? proc.lanes.front().id : system_lane;
      }
    }
    for (const auto& gw : gateways) {
      auto owner = lane_of.find("n_" + sanitize_id(gw.node_id));
      if (owner != lane_of.end()) lane_of[gw.bpmn_id] = owner->second;
    }
    // Events (and gateways owned by events): nearest assigned neighbour
    // downstream, then upstream, then the first lane.
    auto neighbour_lane = [&](const std::string& id, bool forward) -> std::string {
      std::set<std::string> visited{id};
      std::vector<std::string> frontier{id};
      while (!frontier.empty()) {
        std::vector<std::string> next;
        for (const auto& cur : frontier) {
          for (const auto& f : proc.flows) {
            const std::string& from = forward ? f.source_id : f.target_id;
            const std::string& to = forward ? f.target_id : f.source_id;
            if (from != cur || visited.count(to)) continue;
            auto it = lane_of.find(to);
            if (it != lane_of.end()) return it->second;
            visited.insert(to);
            next.push_back(to);
          }
        }
        frontier = std::move(next);
      }
      return {};
    };
    for (const auto& fn : proc.nodes) {
      if (lane_of.count(fn.id)) continue;
      std::string lane = neighbour_lane(fn.id, /*forward=*/true);
      if (lane.empty()) lane = neighbour_lane(fn.id, /*forward=*/false);
      if (lane.empty()) lane = proc.lanes.front().id;
      lane_of[fn.id] = lane;
    }
    for (auto& fn : proc.nodes) fn.lane_id = lane_of.at(fn.id);
    for (auto& lane : proc.lanes)
      for (const auto& fn : proc.nodes)
        if (fn.lane_id == lane.id) lane.member_ids.push_back(fn.id);
  }

  // Sanity: the model invariants hold by construction; violations mean a
  // validator gap upstream.
  if (proc.count_kind(FlowNodeKind::startEvent) != 1)
    d::precondition("process must contain exactly one start event");
  if (proc.count_kind(FlowNodeKind::endEvent) < 1)
    d::precondition("process must contain at least one end event");
  {
    std::set<std::string> ids;
    for (const auto& fn : proc.nodes) ids.insert(fn.id);
    for (const auto& f : proc.flows)
      if (!ids.count(f.source_id) || !ids.count(f.target_id))
        d::precondition("sequence flow '" + f.id + "' references a missing flow node");
    std::map<std::string, int> defaults;
    for (const auto& f : proc.flows)
      if (f.is_default) defaults[f.source_id] += 1;
    for (const auto& [src, n] : defaults)
      if (n > 1) d::precondition("multiple default flows out of '" + src + "'");
  }

  model.processes.push_back(std::move(proc));
  return model;
}

/// Element accounting: F (source) versus B (produced), with the five
/// verdict formulas evaluated from the counted fields only.
inline MatrixReport matrix_report(const WorkflowSpec& spec, const BpmnModel& model) {
  MatrixReport r;
  r.f_action_nodes = spec.count_role(NodeRole::action);
  r.f_start_nodes = spec.count_role(NodeRole::start);
  r.f_end_nodes = spec.count_role(NodeRole::end);
  r.f_transitions = spec.transitions.size();
  r.f_queues = spec.queues.size();

  std::set<std::string> human_refs;
  for (const auto& n : spec.nodes)
    if (n.queue && spec.has_human_queue(n)) human_refs.insert(*n.queue);
  r.f_human_queues_referenced = human_refs.size();

  std::map<std::string, int> out_deg, in_deg;
  for (const auto& t : spec.transitions) {
    out_deg[t.from] += 1;
    in_deg[t.to] += 1;
  }
  for (const auto& [node, n] : out_deg)
    if (n >= 2) r.f_gateway_demand += 1;
  for (const auto& [node, n] : in_deg)
    if (n >= 2) r.f_gateway_demand += 1;

  for (const auto& proc : model.processes) {
    r.b_user_tasks += proc.count_kind(FlowNodeKind::userTask);
    r.b_service_tasks += proc.count_kind(FlowNodeKind::serviceTask);
    r.b_exclusive_gateways += proc.count_kind(FlowNodeKind::exclusiveGateway);
    r.b_parallel_gateways += proc.count_kind(FlowNodeKind::parallelGateway);
    r.b_start_events += proc.count_kind(FlowNodeKind::startEvent);
    r.b_end_events += proc.count_kind(FlowNodeKind::endEvent);
    r.b_flows += proc.flows.size();
    for (const auto& lane : proc.lanes)
      (lane.synthetic_system ? r.b_system_lanes : r.b_lanes) += 1;
  }

  std::size_t b_tasks = r.b_user_tasks + r.b_service_tasks;
  std::size_t b_gateways = r.b_exclusive_gateways + r.b_parallel_gateways;

  r.v1 = b_tasks == r.f_action_nodes;
  r.v2 = r.b_start_events == 1 && r.b_end_events == r.f_end_nodes;
  r.v3 = r.b_lanes == r.f_human_queues_referenced;
  r.v4 = b_gateways == r.f_gateway_demand;
  r.v5 = r.b_flows == r.f_transitions + b_gateways;

  auto note = [&r](const char* verdict, std::size_t produced, std::size_t expected) {
    if (produced < expected)
      r.notes.push_back(std::string(verdict) + ": omission (" + std::to_string(produced) +
                        " < " + std::to_string(expected) + ")");
    else if (produced > expected)
      r.notes.push_back(std::string(verdict) + ": inflation (" + std::to_string(produced) +
                        " > " + std::to_string(expected) + ")");
  };
  note("V1", b_tasks, r.f_action_nodes);
  if (!r.v2) r.notes.push_back("V2: start/end event counts off");
  note("V3", r.b_lanes, r.f_human_queues_referenced);
  note("V4", b_gateways, r.f_gateway_demand);
  note("V5", r.b_flows, r.f_transitions + b_gateways);

  return r;
}

}  // namespace flow2bpmn
