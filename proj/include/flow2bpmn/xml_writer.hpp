#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace flow2bpmn {

inline std::string xml_escape(const std::string& s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': if (attribute) { out += "&quot;"; break; } out += c; break;
      case '\'': if (attribute) { out += "&apos;"; break; } out += c; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string format_number(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) return std::to_string(static_cast<long long>(std::llround(v)));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// In-memory XML element tree with canonical emission: attributes sorted by
/// name, 2-space indentation, self-closing empty elements.
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::string text;  // mutually exclusive with children in this artifact

  XmlElement() = default;
  explicit XmlElement(std::string n) : name(std::move(n)) {}

  XmlElement& attr(const std::string& key, const std::string& value) {
    attributes.emplace_back(key, value);
    return *this;
  }
  XmlElement& attr(const std::string& key, double value) {
    return attr(key, format_number(value));
  }
  XmlElement& child(XmlElement el) {
    children.push_back(std::move(el));
    return children.back();
  }

  void write(std::string& out, int depth) const {
    std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out += indent + "<" + name;
    auto sorted = attributes;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [k, v] : sorted) out += " " + k + "=\"" + xml_escape(v, true) + "\"";
    if (children.empty() && text.empty()) {
      out += "/>\n";
      return;
    }
    out += ">";
    if (!text.empty()) {
      out += xml_escape(text, false);
      out += "</" + name + ">\n";
      return;
    }
    out += "\n";
    for (const auto& c : children) c.write(out, depth + 1);
    out += indent + "</" + name + ">\n";
  }

  std::string to_string() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write(out, 0);
    return out;
  }
};

}  // namespace flow2bpmn
