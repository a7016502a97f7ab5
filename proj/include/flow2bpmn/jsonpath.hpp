#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flow2bpmn/errors.hpp"

namespace flow2bpmn {

/// JSONPath subset used by logical-source iterators: `$`, `.field` and `[*]`.
/// No filters, slices or recursive descent.
class JsonPath {
 public:
  static JsonPath parse(const std::string& text) {
    JsonPath path;
    path.text_ = text;
    std::size_t i = 0;
    if (text.empty() || text[0] != '$')
      fail(ErrorCode::MappingSyntax, "iterator must start with '$': " + text);
    i = 1;
    while (i < text.size()) {
      if (text[i] == '.') {
        ++i;
        std::string field;
        while (i < text.size() && text[i] != '.' && text[i] != '[') field += text[i++];
        if (field.empty())
          fail(ErrorCode::MappingSyntax, "empty field segment in iterator: " + text);
        path.steps_.push_back(Step{StepKind::field, field});
      } else if (text.compare(i, 3, "[*]") == 0) {
        i += 3;
        path.steps_.push_back(Step{StepKind::wildcard, {}});
      } else {
        fail(ErrorCode::MappingSyntax, "unsupported iterator syntax: " + text);
      }
    }
    return path;
  }

  /// Visit every element selected by the path.
  void each(const nlohmann::json& doc,
            const std::function<void(const nlohmann::json&)>& visit) const {
    walk(doc, 0, visit);
  }

  std::vector<const nlohmann::json*> select(const nlohmann::json& doc) const {
    std::vector<const nlohmann::json*> out;
    each(doc, [&](const nlohmann::json& j) { out.push_back(&j); });
    return out;
  }

  const std::string& text() const { return text_; }

 private:
  enum class StepKind { field, wildcard };
  struct Step {
    StepKind kind;
    std::string field;
  };

  void walk(const nlohmann::json& node, std::size_t step,
            const std::function<void(const nlohmann::json&)>& visit) const {
    if (step == steps_.size()) {
      visit(node);
      return;
    }
    const Step& s = steps_[step];
    if (s.kind == StepKind::field) {
      if (node.is_object() && node.contains(s.field)) walk(node.at(s.field), step + 1, visit);
    } else {
      if (node.is_array())
        for (const auto& child : node) walk(child, step + 1, visit);
    }
  }

  std::string text_;
  std::vector<Step> steps_;
};

}  // namespace flow2bpmn
