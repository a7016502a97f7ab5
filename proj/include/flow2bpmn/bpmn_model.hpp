#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace flow2bpmn {

enum class FlowNodeKind {
  startEvent,
  endEvent,
  userTask,
  serviceTask,
  exclusiveGateway,
  parallelGateway,
};

inline const char* to_string(FlowNodeKind k) {
  switch (k) {
    case FlowNodeKind::startEvent: return "startEvent";
    case FlowNodeKind::endEvent: return "endEvent";
    case FlowNodeKind::userTask: return "userTask";
    case FlowNodeKind::serviceTask: return "serviceTask";
    case FlowNodeKind::exclusiveGateway: return "exclusiveGateway";
    case FlowNodeKind::parallelGateway: return "parallelGateway";
  }
  return "?";
}

inline bool is_gateway(FlowNodeKind k) {
  return k == FlowNodeKind::exclusiveGateway || k == FlowNodeKind::parallelGateway;
}
inline bool is_event(FlowNodeKind k) {
  return k == FlowNodeKind::startEvent || k == FlowNodeKind::endEvent;
}

struct BpmnFlowNode {
  std::string id;
  std::string name;
  FlowNodeKind kind = FlowNodeKind::userTask;
  std::string lane_id;    // empty when the process has no lane set
  std::string trace_iri;  // ABox individual (owning node for gateways)
};

struct BpmnSequenceFlow {
  std::string id;
  std::string source_id;
  std::string target_id;
  std::optional<std::string> condition;  // guard, copied verbatim
  bool is_default = false;
};

struct BpmnLane {
  std::string id;
  std::string name;
  std::vector<std::string> member_ids;
  bool synthetic_system = false;  // the "System" lane for service tasks
};

struct BpmnProcess {
  std::string id;
  std::string name;
  std::vector<BpmnFlowNode> nodes;
  std::vector<BpmnSequenceFlow> flows;
  std::vector<BpmnLane> lanes;

  const BpmnFlowNode* find_node(const std::string& id_) const {
    for (const auto& n : nodes)
      if (n.id == id_) return &n;
    return nullptr;
  }
  std::size_t count_kind(FlowNodeKind k) const {
    std::size_t n = 0;
    for (const auto& node : nodes)
      if (node.kind == k) ++n;
    return n;
  }
};

struct BpmnModel {
  std::string definitions_id;
  std::string collaboration_id;
  std::string pool_id;
  std::string pool_name;
  std::vector<BpmnProcess> processes;
};

/// Per-file accounting relating source element counts (F) to produced BPMN
/// element counts (B). b_lanes counts queue-derived lanes; the synthetic
/// System lane is reported separately.
struct MatrixReport {
  std::size_t f_action_nodes = 0;
  std::size_t f_transitions = 0;
  std::size_t f_queues = 0;
  std::size_t f_start_nodes = 0;
  std::size_t f_end_nodes = 0;
  std::size_t f_human_queues_referenced = 0;
  std::size_t f_gateway_demand = 0;  // fan-out>=2 nodes + fan-in>=2 nodes

  std::size_t b_user_tasks = 0;
  std::size_t b_service_tasks = 0;
  std::size_t b_exclusive_gateways = 0;
  std::size_t b_parallel_gateways = 0;
  std::size_t b_start_events = 0;
  std::size_t b_end_events = 0;
  std::size_t b_flows = 0;
  std::size_t b_lanes = 0;
  std::size_t b_system_lanes = 0;

  bool v1 = false;  // tasks == action nodes
  bool v2 = false;  // one start event, end events == end nodes
  bool v3 = false;  // lanes == distinct human queues referenced
  bool v4 = false;  // gateways == fan-out/fan-in demand
  bool v5 = false;  // flows == transitions + gateways
  std::vector<std::string> notes;

  bool all_verdicts() const { return v1 && v2 && v3 && v4 && v5; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["f"] = {{"actionNodes", f_action_nodes},
              {"transitions", f_transitions},
              {"queues", f_queues},
              {"startNodes", f_start_nodes},
              {"endNodes", f_end_nodes},
              {"humanQueuesReferenced", f_human_queues_referenced},
              {"gatewayDemand", f_gateway_demand}};
    j["b"] = {{"userTasks", b_user_tasks},
              {"serviceTasks", b_service_tasks},
              {"exclusiveGateways", b_exclusive_gateways},
              {"parallelGateways", b_parallel_gateways},
              {"startEvents", b_start_events},
              {"endEvents", b_end_events},
              {"flows", b_flows},
              {"lanes", b_lanes},
              {"systemLanes", b_system_lanes}};
    j["verdicts"] = {{"v1", v1}, {"v2", v2}, {"v3", v3}, {"v4", v4}, {"v5", v5}};
    j["notes"] = notes;
    return j;
  }
};

}  // namespace flow2bpmn
