#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "flow2bpmn/bpmn_model.hpp"
#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/layout.hpp"
#include "flow2bpmn/xml_writer.hpp"

namespace flow2bpmn {

namespace serializer_detail {

inline const char* kNsBpmn = "http://www.omg.org/spec/BPMN/20100524/MODEL";
inline const char* kNsBpmnDi = "http://www.omg.org/spec/BPMN/20100524/DI";
inline const char* kNsDc = "http://www.omg.org/spec/DD/20100524/DC";
inline const char* kNsDi = "http://www.omg.org/spec/DD/20100524/DI";
inline const char* kNsXsi = "http://www.w3.org/2001/XMLSchema-instance";
inline const char* kNsTrace = "https://example.org/trace";

inline void check_unique_ids(const BpmnModel& model) {
  std::set<std::string> ids{model.definitions_id, model.collaboration_id, model.pool_id};
  if (ids.size() != 3)
    fail(ErrorCode::IdCollision, "definitions/collaboration/pool ids collide");
  auto claim = [&ids](const std::string& id) {
    if (!ids.insert(id).second)
      fail(ErrorCode::IdCollision, "duplicate id '" + id + "' after sanitization");
  };
  for (const auto& proc : model.processes) {
    claim(proc.id);
    for (const auto& n : proc.nodes) claim(n.id);
    for (const auto& f : proc.flows) claim(f.id);
    for (const auto& lane : proc.lanes) claim(lane.id);
  }
}

}  // namespace serializer_detail

/// Emit standards-compliant BPMN 2.0 XML with BPMNDI and trace:sourceIri
/// attributes. Output is byte-deterministic: attributes sorted, fixed
/// indentation, canonical number formatting.
inline std::string to_bpmn_xml(const BpmnModel& model, const DiPlane& plane) {
  namespace d = serializer_detail;
  d::check_unique_ids(model);

  XmlElement defs("bpmn:definitions");
  defs.attr("id", model.definitions_id)
      .attr("targetNamespace", "https://example.org/flow2bpmn")
      .attr("xmlns:bpmn", d::kNsBpmn)
      .attr("xmlns:bpmndi", d::kNsBpmnDi)
      .attr("xmlns:dc", d::kNsDc)
      .attr("xmlns:di", d::kNsDi)
      .attr("xmlns:trace", d::kNsTrace)
      .attr("xmlns:xsi", d::kNsXsi);

  {
    XmlElement collab("bpmn:collaboration");
    collab.attr("id", model.collaboration_id);
    XmlElement participant("bpmn:participant");
    participant.attr("id", model.pool_id)
        .attr("name", model.pool_name)
        .attr("processRef", model.processes.empty() ? "" : model.processes.front().id);
    collab.children.push_back(std::move(participant));
    defs.children.push_back(std::move(collab));
  }

  for (const auto& proc : model.processes) {
    XmlElement process("bpmn:process");
    process.attr("id", proc.id).attr("name", proc.name);

    if (!proc.lanes.empty()) {
      XmlElement lane_set("bpmn:laneSet");
      lane_set.attr("id", "ls_" + proc.id);
      for (const auto& lane : proc.lanes) {
        XmlElement l("bpmn:lane");
        l.attr("id", lane.id).attr("name", lane.name);
        for (const auto& member : lane.member_ids) {
          XmlElement ref("bpmn:flowNodeRef");
          ref.text = member;
          l.children.push_back(std::move(ref));
        }
        lane_set.children.push_back(std::move(l));
      }
      process.children.push_back(std::move(lane_set));
    }

    for (const auto& n : proc.nodes) {
      XmlElement el(std::string("bpmn:") + to_string(n.kind));
      el.attr("id", n.id);
      if (!n.name.empty()) el.attr("name", n.name);
      el.attr("trace:sourceIri", n.trace_iri);
      if (is_gateway(n.kind)) {
        for (const auto& f : proc.flows)
          if (f.is_default && f.source_id == n.id) el.attr("default", f.id);
      }
      process.children.push_back(std::move(el));
    }

    for (const auto& f : proc.flows) {
      XmlElement el("bpmn:sequenceFlow");
      el.attr("id", f.id).attr("sourceRef", f.source_id).attr("targetRef", f.target_id);
      if (f.condition) {
        XmlElement cond("bpmn:conditionExpression");
        cond.attr("xsi:type", "bpmn:tFormalExpression");
        cond.text = *f.condition;
        el.children.push_back(std::move(cond));
      }
      process.children.push_back(std::move(el));
    }

    defs.children.push_back(std::move(process));
  }

  {
    XmlElement diagram("bpmndi:BPMNDiagram");
    diagram.attr("id", "dia_" + model.definitions_id);
    XmlElement di_plane("bpmndi:BPMNPlane");
    di_plane.attr("id", "plane_" + model.definitions_id)
        .attr("bpmnElement", model.collaboration_id);

    {
      XmlElement shape("bpmndi:BPMNShape");
      shape.attr("id", "s_" + model.pool_id)
          .attr("bpmnElement", model.pool_id)
          .attr("isHorizontal", "true");
      XmlElement bounds("dc:Bounds");
      bounds.attr("height", plane.pool_h)
          .attr("width", plane.pool_w)
          .attr("x", plane.pool_x)
          .attr("y", plane.pool_y);
      shape.children.push_back(std::move(bounds));
      di_plane.children.push_back(std::move(shape));
    }

    for (const auto& band : plane.bands) {
      XmlElement shape("bpmndi:BPMNShape");
      shape.attr("id", "s_" + band.lane_id)
          .attr("bpmnElement", band.lane_id)
          .attr("isHorizontal", "true");
      XmlElement bounds("dc:Bounds");
      bounds.attr("height", band.height)
          .attr("width", plane.pool_w)
          .attr("x", plane.pool_x)
          .attr("y", band.y_top);
      shape.children.push_back(std::move(bounds));
      di_plane.children.push_back(std::move(shape));
    }

    for (const auto& s : plane.shapes) {
      XmlElement shape("bpmndi:BPMNShape");
      shape.attr("id", "s_" + s.element_id).attr("bpmnElement", s.element_id);
      XmlElement bounds("dc:Bounds");
      bounds.attr("height", s.h).attr("width", s.w).attr("x", s.x).attr("y", s.y);
      shape.children.push_back(std::move(bounds));
      di_plane.children.push_back(std::move(shape));
    }

    for (const auto& e : plane.edges) {
      XmlElement edge("bpmndi:BPMNEdge");
      edge.attr("id", "e_" + e.flow_id).attr("bpmnElement", e.flow_id);
      for (const auto& [x, y] : e.waypoints) {
        XmlElement wp("di:waypoint");
        wp.attr("x", x).attr("y", y);
        edge.children.push_back(std::move(wp));
      }
      di_plane.children.push_back(std::move(edge));
    }

    diagram.children.push_back(std::move(di_plane));
    defs.children.push_back(std::move(diagram));
  }

  return defs.to_string();
}

namespace serializer_detail {

inline std::string svg_points(const std::vector<std::pair<double, double>>& pts) {
  std::string out;
  for (const auto& [x, y] : pts) {
    if (!out.empty()) out += ' ';
    out += format_number(x) + "," + format_number(y);
  }
  return out;
}

}  // namespace serializer_detail

/// SVG rendering with BPMN-conventional glyphs: rounded rectangles for
/// tasks, circles for events, diamonds with X/+ markers for gateways, lane
/// bands with labels and arrowed polylines for flows.
inline std::string to_svg(const BpmnModel& model, const DiPlane& plane) {
  namespace d = serializer_detail;
  const BpmnProcess& proc = model.processes.front();

  double pad = 20;
  double vx = plane.pool_x - pad;
  double vy = plane.pool_y - pad;
  double vw = plane.pool_w + 2 * pad;
  double vh = plane.pool_h + 2 * pad;

  XmlElement svg("svg");
  svg.attr("xmlns", "http://www.w3.org/2000/svg")
      .attr("viewBox", format_number(vx) + " " + format_number(vy) + " " + format_number(vw) +
                           " " + format_number(vh))
      .attr("width", vw)
      .attr("height", vh);

  {
    XmlElement defs("defs");
    XmlElement marker("marker");
    marker.attr("id", "arrow")
        .attr("markerWidth", 10.0)
        .attr("markerHeight", 8.0)
        .attr("refX", 9.0)
        .attr("refY", 4.0)
        .attr("orient", "auto");
    XmlElement tip("path");
    tip.attr("d", "M0,0 L9,4 L0,8 z").attr("fill", "#333333");
    marker.children.push_back(std::move(tip));
    defs.children.push_back(std::move(marker));
    svg.children.push_back(std::move(defs));
  }

  {
    XmlElement pool("rect");
    pool.attr("class", "pool")
        .attr("x", plane.pool_x)
        .attr("y", plane.pool_y)
        .attr("width", plane.pool_w)
        .attr("height", plane.pool_h)
        .attr("fill", "none")
        .attr("stroke", "#333333")
        .attr("stroke-width", 2.0);
    svg.children.push_back(std::move(pool));
    XmlElement title("text");
    title.attr("class", "pool-label")
        .attr("x", plane.pool_x + 6)
        .attr("y", plane.pool_y - 6)
        .attr("font-family", "sans-serif")
        .attr("font-size", 14.0);
    title.text = model.pool_name;
    svg.children.push_back(std::move(title));
  }

  for (const auto& band : plane.bands) {
    XmlElement rect("rect");
    rect.attr("class", "lane")
        .attr("x", plane.pool_x)
        .attr("y", band.y_top)
        .attr("width", plane.pool_w)
        .attr("height", band.height)
        .attr("fill", "none")
        .attr("stroke", "#999999")
        .attr("stroke-width", 1.0);
    svg.children.push_back(std::move(rect));
    std::string lane_name;
    for (const auto& lane : proc.lanes)
      if (lane.id == band.lane_id) lane_name = lane.name;
    XmlElement label("text");
    label.attr("class", "lane-label")
        .attr("x", plane.pool_x + 6)
        .attr("y", band.y_top + 16)
        .attr("fill", "#777777")
        .attr("font-family", "sans-serif")
        .attr("font-size", 12.0);
    label.text = lane_name;
    svg.children.push_back(std::move(label));
  }

  for (const auto& e : plane.edges) {
    XmlElement line("polyline");
    line.attr("class", "flow")
        .attr("points", d::svg_points(e.waypoints))
        .attr("fill", "none")
        .attr("stroke", "#333333")
        .attr("stroke-width", 1.5)
        .attr("marker-end", "url(#arrow)");
    svg.children.push_back(std::move(line));
  }

  for (const auto& s : plane.shapes) {
    const BpmnFlowNode* node = proc.find_node(s.element_id);
    if (!node) continue;
    switch (node->kind) {
      case FlowNodeKind::userTask:
      case FlowNodeKind::serviceTask: {
        XmlElement rect("rect");
        rect.attr("class", "task")
            .attr("x", s.x)
            .attr("y", s.y)
            .attr("width", s.w)
            .attr("height", s.h)
            .attr("rx", 8.0)
            .attr("fill", "#ffffff")
            .attr("stroke", "#333333")
            .attr("stroke-width", 1.5);
        svg.children.push_back(std::move(rect));
        XmlElement label("text");
        label.attr("class", "task-label")
            .attr("x", s.cx())
            .attr("y", s.cy() + 4)
            .attr("text-anchor", "middle")
            .attr("font-family", "sans-serif")
            .attr("font-size", 12.0);
        label.text = node->name;
        svg.children.push_back(std::move(label));
        if (node->kind == FlowNodeKind::serviceTask) {
          XmlElement gear("text");
          gear.attr("class", "task-marker")
              .attr("x", s.x + 6)
              .attr("y", s.y + 14)
              .attr("font-family", "sans-serif")
              .attr("font-size", 10.0);
          gear.text = "[svc]";
          svg.children.push_back(std::move(gear));
        }
        break;
      }
      case FlowNodeKind::startEvent:
      case FlowNodeKind::endEvent: {
        XmlElement circle("circle");
        circle.attr("class", node->kind == FlowNodeKind::startEvent ? "event-start" : "event-end")
            .attr("cx", s.cx())
            .attr("cy", s.cy())
            .attr("r", s.w / 2)
            .attr("fill", "#ffffff")
            .attr("stroke", "#333333")
            .attr("stroke-width", node->kind == FlowNodeKind::endEvent ? 3.0 : 1.5);
        svg.children.push_back(std::move(circle));
        XmlElement label("text");
        label.attr("class", "event-label")
            .attr("x", s.cx())
            .attr("y", s.y + s.h + 14)
            .attr("text-anchor", "middle")
            .attr("font-family", "sans-serif")
            .attr("font-size", 11.0);
        label.text = node->name;
        svg.children.push_back(std::move(label));
        break;
      }
      case FlowNodeKind::exclusiveGateway:
      case FlowNodeKind::parallelGateway: {
        std::vector<std::pair<double, double>> diamond = {
            {s.cx(), s.y}, {s.x + s.w, s.cy()}, {s.cx(), s.y + s.h}, {s.x, s.cy()}};
        XmlElement poly("polygon");
        poly.attr("class", "gateway")
            .attr("points", d::svg_points(diamond))
            .attr("fill", "#ffffff")
            .attr("stroke", "#333333")
            .attr("stroke-width", 1.5);
        svg.children.push_back(std::move(poly));
        XmlElement mark("text");
        mark.attr("class", node->kind == FlowNodeKind::exclusiveGateway ? "gateway-exclusive"
                                                                        : "gateway-parallel")
            .attr("x", s.cx())
            .attr("y", s.cy() + 6)
            .attr("text-anchor", "middle")
            .attr("font-family", "sans-serif")
            .attr("font-size", 18.0);
        mark.text = node->kind == FlowNodeKind::exclusiveGateway ? "X" : "+";
        svg.children.push_back(std::move(mark));
        break;
      }
    }
  }

  return svg.to_string();
}

}  // namespace flow2bpmn
