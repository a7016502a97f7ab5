#pragma once

#include <optional>
#include <string>
#include <vector>

namespace flow2bpmn {

enum class SpecKind { request, flow };
enum class NodeRole { start, action, end };
enum class Trigger { automatic, button, timer, dynamic };
enum class QueueKind { human, system };

inline const char* to_string(SpecKind k) { return k == SpecKind::request ? "request" : "flow"; }
inline const char* to_string(NodeRole r) {
  switch (r) {
    case NodeRole::start: return "start";
    case NodeRole::action: return "action";
    case NodeRole::end: return "end";
  }
  return "?";
}
inline const char* to_string(Trigger t) {
  switch (t) {
    case Trigger::automatic: return "auto";
    case Trigger::button: return "button";
    case Trigger::timer: return "timer";
    case Trigger::dynamic: return "dynamic";
  }
  return "?";
}
inline const char* to_string(QueueKind k) { return k == QueueKind::human ? "human" : "system"; }

struct ButtonDef {
  std::string label;
  std::string transition;  // target transition id
  std::string source_path;
};

struct NodeDef {
  std::string id;
  NodeRole role = NodeRole::action;
  std::string label;
  std::optional<std::string> queue;
  std::optional<std::string> processor;
  std::optional<std::string> form;
  std::vector<ButtonDef> buttons;
  std::string source_path;
  bool synthesized = false;
};

struct TransitionDef {
  std::string id;
  std::string from;
  std::string to;
  std::optional<std::string> guard;
  Trigger trigger = Trigger::automatic;
  std::string source_path;
  bool synthesized = false;
};

struct QueueDef {
  std::string id;
  std::string label;
  QueueKind kind = QueueKind::human;
  std::string source_path;
  bool synthesized = false;
};

struct FormField {
  std::string name;
  std::string type;
};

struct FormDef {
  std::string id;
  std::string title;
  std::vector<FormField> fields;
  std::string source_path;
};

struct ProcessorDef {
  std::string name;
  std::string source_path;
};

/// Validated in-memory form of one source file. Every element keeps the
/// JSON pointer it was parsed from; synthesized elements point at the
/// closest real element (or the document root).
struct WorkflowSpec {
  SpecKind kind = SpecKind::flow;
  std::string name;
  std::vector<NodeDef> nodes;
  std::vector<TransitionDef> transitions;
  std::vector<QueueDef> queues;
  std::vector<FormDef> forms;
  std::vector<ProcessorDef> processors;
  std::string source_file;

  const NodeDef* find_node(const std::string& id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const QueueDef* find_queue(const std::string& id) const {
    for (const auto& q : queues)
      if (q.id == id) return &q;
    return nullptr;
  }
  const FormDef* find_form(const std::string& id) const {
    for (const auto& f : forms)
      if (f.id == id) return &f;
    return nullptr;
  }

  std::size_t count_role(NodeRole r) const {
    std::size_t n = 0;
    for (const auto& node : nodes)
      if (node.role == r) ++n;
    return n;
  }

  /// True when the node references a queue declared with kind=human.
  bool has_human_queue(const NodeDef& n) const {
    if (!n.queue) return false;
    const QueueDef* q = find_queue(*n.queue);
    return q && q->kind == QueueKind::human;
  }
};

}  // namespace flow2bpmn
