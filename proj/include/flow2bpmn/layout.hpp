#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "flow2bpmn/bpmn_model.hpp"
#include "flow2bpmn/errors.hpp"

namespace flow2bpmn {

struct LayoutParams {
  double cell_width = 180;
  double task_width = 100;
  double task_height = 80;
  double event_size = 36;
  double gateway_size = 50;
  double lane_padding = 20;
  double margin = 40;
  double row_gap = 20;
  int barycenter_sweeps = 4;
};

inline LayoutParams default_params() { return LayoutParams{}; }

struct DiShape {
  std::string element_id;
  double x = 0, y = 0, w = 0, h = 0;

  double cx() const { return x + w / 2; }
  double cy() const { return y + h / 2; }
};

struct DiEdge {
  std::string flow_id;
  std::vector<std::pair<double, double>> waypoints;
};

struct DiBand {
  std::string lane_id;
  double y_top = 0;
  double height = 0;
};

struct DiPlane {
  std::vector<DiShape> shapes;
  std::vector<DiEdge> edges;
  std::vector<DiBand> bands;
  double pool_x = 0, pool_y = 0, pool_w = 0, pool_h = 0;

  const DiShape* find_shape(const std::string& id) const {
    for (const auto& s : shapes)
      if (s.element_id == id) return &s;
    return nullptr;
  }
  const DiEdge* find_edge(const std::string& id) const {
    for (const auto& e : edges)
      if (e.flow_id == id) return &e;
    return nullptr;
  }
};

namespace layout_detail {

struct LNode {
  std::string id;
  FlowNodeKind kind = FlowNodeKind::userTask;
  int band = 0;
  double w = 0, h = 0;
  int rank = 0;
};

struct LEdge {
  int src = 0;
  int dst = 0;
  std::string flow_id;
  bool reversed = false;  // flipped for ranking; rendered right-to-left
};

inline int oriented_src(const LEdge& e) { return e.reversed ? e.dst : e.src; }
inline int oriented_dst(const LEdge& e) { return e.reversed ? e.src : e.dst; }

/// Kahn topological order over the oriented edges; empty result on a cycle.
inline std::vector<int> topo_order(std::size_t n, const std::vector<LEdge>& edges) {
  std::vector<int> indeg(n, 0);
  for (const auto& e : edges) indeg[oriented_dst(e)] += 1;
  std::vector<int> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
  std::vector<int> order;
  std::size_t head = 0;
  while (head < queue.size()) {
    int v = queue[head++];
    order.push_back(v);
    for (const auto& e : edges) {
      if (oriented_src(e) != v) continue;
      if (--indeg[oriented_dst(e)] == 0) queue.push_back(oriented_dst(e));
    }
  }
  if (order.size() != n) order.clear();
  return order;
}

/// Deterministic back-edge finder: DFS in node-index order (start first via
/// caller ordering), neighbours in edge order. A back edge closes a cycle
/// onto a node still on the DFS stack.
inline std::vector<std::size_t> find_back_edges(std::size_t n, const std::vector<LEdge>& edges,
                                                const std::vector<int>& roots) {
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::size_t> back;

  std::function<void(int)> dfs = [&](int v) {
    state[v] = 1;
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
      if (oriented_src(edges[ei]) != v) continue;
      int to = oriented_dst(edges[ei]);
      if (state[to] == 1)
        back.push_back(ei);
      else if (state[to] == 0)
        dfs(to);
    }
    state[v] = 2;
  };

  for (int r : roots)
    if (state[r] == 0) dfs(r);
  for (std::size_t v = 0; v < n; ++v)
    if (state[v] == 0) dfs(static_cast<int>(v));
  return back;
}

struct Ordering {
  // Node indices per rank, bands concatenated in band order.
  std::vector<std::vector<int>> ranks;
};

}  // namespace layout_detail

/// Layered left-to-right auto layout: longest-path ranks, lane-banded rows,
/// barycenter crossing reduction (best sweep kept), gateway-symmetric branch
/// placement and orthogonal edge routing. Deterministic for equal inputs.
inline DiPlane layout(const BpmnModel& model, const LayoutParams& params = default_params(),
                      std::vector<std::string>* warnings = nullptr) {
  namespace d = layout_detail;
  if (model.processes.empty())
    fail(ErrorCode::BuildPrecondition, "layout requires a process");
  const BpmnProcess& proc = model.processes.front();

  // Node table.
  std::vector<d::LNode> nodes;
  std::map<std::string, int> index;
  std::map<std::string, int> band_index;
  for (std::size_t i = 0; i < proc.lanes.size(); ++i)
    band_index[proc.lanes[i].id] = static_cast<int>(i);
  for (const auto& fn : proc.nodes) {
    d::LNode n;
    n.id = fn.id;
    n.kind = fn.kind;
    n.band = fn.lane_id.empty() ? 0 : band_index.at(fn.lane_id);
    if (is_event(fn.kind)) {
      n.w = n.h = params.event_size;
    } else if (is_gateway(fn.kind)) {
      n.w = n.h = params.gateway_size;
    } else {
      n.w = params.task_width;
      n.h = params.task_height;
    }
    index[fn.id] = static_cast<int>(nodes.size());
    nodes.push_back(std::move(n));
  }
  int num_bands = proc.lanes.empty() ? 1 : static_cast<int>(proc.lanes.size());

  std::vector<d::LEdge> edges;
  for (const auto& f : proc.flows)
    edges.push_back(d::LEdge{index.at(f.source_id), index.at(f.target_id), f.id, false});

  // Break cycles by reversing the minimal-id back edge until ranking works.
  // DFS roots: the start event first, so forward paths keep their direction.
  std::vector<int> roots;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == FlowNodeKind::startEvent) roots.push_back(static_cast<int>(i));
  std::size_t attempts = 0;
  while (d::topo_order(nodes.size(), edges).empty() && !edges.empty()) {
    if (++attempts > edges.size() + 1)
      fail(ErrorCode::LayoutCycle, "unable to break cycles in the flow graph");
    auto back = d::find_back_edges(nodes.size(), edges, roots);
    if (back.empty())
      fail(ErrorCode::LayoutCycle, "cycle detection failed on a cyclic graph");
    std::size_t chosen = back.front();
    for (std::size_t ei : back)
      if (edges[ei].flow_id < edges[chosen].flow_id) chosen = ei;
    edges[chosen].reversed = !edges[chosen].reversed;
    if (warnings)
      warnings->push_back("reversed back edge '" + edges[chosen].flow_id + "' for ranking");
  }

  // Longest-path ranks from the start event.
  std::vector<int> topo = d::topo_order(nodes.size(), edges);
  for (int v : topo) {
    int best = 0;
    for (const auto& e : edges)
      if (d::oriented_dst(e) == v) best = std::max(best, nodes[d::oriented_src(e)].rank + 1);
    nodes[v].rank = best;
  }
  int max_rank = 0;
  for (const auto& n : nodes) max_rank = std::max(max_rank, n.rank);

  // Initial ordering: per rank, band-major, lexicographic id inside a band.
  d::Ordering ordering;
  ordering.ranks.assign(max_rank + 1, {});
  for (std::size_t i = 0; i < nodes.size(); ++i)
    ordering.ranks[nodes[i].rank].push_back(static_cast<int>(i));
  auto band_sort = [&](std::vector<int>& rank_nodes,
                       const std::map<int, double>& keys) {
    std::stable_sort(rank_nodes.begin(), rank_nodes.end(), [&](int a, int b) {
      if (nodes[a].band != nodes[b].band) return nodes[a].band < nodes[b].band;
      double ka = keys.count(a) ? keys.at(a) : 0.0;
      double kb = keys.count(b) ? keys.at(b) : 0.0;
      if (ka != kb) return ka < kb;
      return nodes[a].id < nodes[b].id;
    });
  };
  for (auto& rank_nodes : ordering.ranks) band_sort(rank_nodes, {});

  // Provisional geometry for an ordering: slot centers per node, including
  // the gateway symmetry adjustment. Shared by the crossing metric and the
  // final placement so the chosen ordering is measured exactly as emitted.
  struct Geometry {
    std::vector<double> cy;
    std::vector<double> band_top;
    std::vector<double> band_height;
  };
  double row_pitch = params.task_height + params.row_gap;

  auto assign_geometry = [&](const d::Ordering& ord) {
    Geometry geo;
    geo.cy.assign(nodes.size(), 0.0);

    // Rows per band: the widest rank column inside the band.
    std::vector<int> band_rows(num_bands, 1);
    for (const auto& rank_nodes : ord.ranks) {
      std::map<int, int> count;
      for (int v : rank_nodes) count[nodes[v].band] += 1;
      for (const auto& [band, k] : count)
        band_rows[band] = std::max(band_rows[band], k);
    }
    geo.band_top.assign(num_bands, 0.0);
    geo.band_height.assign(num_bands, 0.0);
    double y = 0;
    for (int b = 0; b < num_bands; ++b) {
      geo.band_top[b] = y;
      geo.band_height[b] =
          2 * params.lane_padding + band_rows[b] * params.task_height +
          (band_rows[b] - 1) * params.row_gap;
      y += geo.band_height[b];
    }

    for (const auto& rank_nodes : ord.ranks) {
      std::map<int, std::vector<int>> per_band;
      for (int v : rank_nodes) per_band[nodes[v].band].push_back(v);
      for (const auto& [band, members] : per_band) {
        double offset = (band_rows[band] - static_cast<int>(members.size())) / 2.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
          geo.cy[members[i]] = geo.band_top[band] + params.lane_padding +
                               (static_cast<double>(i) + offset) * row_pitch +
                               params.task_height / 2;
        }
      }
    }

    // Gateway symmetry: center splits on their successors and joins on
    // their predecessors when the move stays clear of rank neighbours.
    auto adjust = [&](int v, const std::vector<int>& peers) {
      if (peers.size() < 2) return;
      double mean = 0;
      for (int p : peers) mean += geo.cy[p];
      mean /= static_cast<double>(peers.size());
      double half = nodes[v].h / 2;
      double lo = mean - half, hi = mean + half;
      double band_lo = geo.band_top[nodes[v].band];
      double band_hi = band_lo + geo.band_height[nodes[v].band];
      if (lo < band_lo + params.lane_padding / 2 || hi > band_hi - params.lane_padding / 2)
        return;
      for (int u : ord.ranks[nodes[v].rank]) {
        if (u == v || nodes[u].band != nodes[v].band) continue;
        double ulo = geo.cy[u] - nodes[u].h / 2, uhi = geo.cy[u] + nodes[u].h / 2;
        if (lo < uhi && ulo < hi) return;  // would collide
      }
      geo.cy[v] = mean;
    };
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!is_gateway(nodes[v].kind)) continue;
      std::vector<int> succ, pred;
      for (const auto& e : edges) {
        if (d::oriented_src(e) == static_cast<int>(v) &&
            nodes[d::oriented_dst(e)].band == nodes[v].band)
          succ.push_back(d::oriented_dst(e));
        if (d::oriented_dst(e) == static_cast<int>(v) &&
            nodes[d::oriented_src(e)].band == nodes[v].band)
          pred.push_back(d::oriented_src(e));
      }
      if (succ.size() >= 2)
        adjust(static_cast<int>(v), succ);
      else if (pred.size() >= 2)
        adjust(static_cast<int>(v), pred);
    }
    return geo;
  };

  // Crossing metric: for every pair of forward-oriented edges and every rank
  // boundary both span, linear interpolation of the endpoint centers.
  auto count_crossings = [&](const Geometry& geo) {
    auto y_at = [&](const d::LEdge& e, double r) {
      int s = d::oriented_src(e), t = d::oriented_dst(e);
      double rs = nodes[s].rank, rt = nodes[t].rank;
      if (rt == rs) return geo.cy[s];
      double f = (r - rs) / (rt - rs);
      return geo.cy[s] + (geo.cy[t] - geo.cy[s]) * f;
    };
    long count = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        const auto& a = edges[i];
        const auto& b = edges[j];
        int lo = std::max(nodes[d::oriented_src(a)].rank, nodes[d::oriented_src(b)].rank);
        int hi = std::min(nodes[d::oriented_dst(a)].rank, nodes[d::oriented_dst(b)].rank);
        for (int r = lo; r < hi; ++r) {
          double d1 = y_at(a, r) - y_at(b, r);
          double d2 = y_at(a, r + 1) - y_at(b, r + 1);
          if (d1 * d2 < 0) ++count;
        }
      }
    }
    return count;
  };

  // Barycenter sweeps; the ordering with the fewest crossings wins.
  auto positions_of = [&](const d::Ordering& ord) {
    std::map<int, double> pos;
    for (const auto& rank_nodes : ord.ranks)
      for (std::size_t i = 0; i < rank_nodes.size(); ++i)
        pos[rank_nodes[i]] = static_cast<double>(i);
    return pos;
  };

  d::Ordering best = ordering;
  long best_crossings = count_crossings(assign_geometry(ordering));
  d::Ordering current = ordering;
  for (int sweep = 0; sweep < params.barycenter_sweeps; ++sweep) {
    bool forward = sweep % 2 == 0;
    std::map<int, double> pos = positions_of(current);
    if (forward) {
      for (int r = 1; r <= max_rank; ++r) {
        std::map<int, double> keys;
        for (int v : current.ranks[r]) {
          double sum = 0;
          int n = 0;
          for (const auto& e : edges)
            if (d::oriented_dst(e) == v) {
              sum += pos.at(d::oriented_src(e));
              ++n;
            }
          keys[v] = n ? sum / n : pos.at(v);
        }
        band_sort(current.ranks[r], keys);
        for (std::size_t i = 0; i < current.ranks[r].size(); ++i)
          pos[current.ranks[r][i]] = static_cast<double>(i);
      }
    } else {
      for (int r = max_rank - 1; r >= 0; --r) {
        std::map<int, double> keys;
        for (int v : current.ranks[r]) {
          double sum = 0;
          int n = 0;
          for (const auto& e : edges)
            if (d::oriented_src(e) == v) {
              sum += pos.at(d::oriented_dst(e));
              ++n;
            }
          keys[v] = n ? sum / n : pos.at(v);
        }
        band_sort(current.ranks[r], keys);
        for (std::size_t i = 0; i < current.ranks[r].size(); ++i)
          pos[current.ranks[r][i]] = static_cast<double>(i);
      }
    }
    long crossings = count_crossings(assign_geometry(current));
    if (crossings < best_crossings) {
      best_crossings = crossings;
      best = current;
    }
  }

  Geometry geo = assign_geometry(best);

  // Shapes.
  DiPlane plane;
  auto round1 = [](double v) { return std::round(v); };
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    DiShape s;
    s.element_id = nodes[v].id;
    s.w = nodes[v].w;
    s.h = nodes[v].h;
    s.x = round1(params.margin + nodes[v].rank * params.cell_width);
    s.y = round1(geo.cy[v] - nodes[v].h / 2);
    plane.shapes.push_back(std::move(s));
  }

  for (int b = 0; b < num_bands && !proc.lanes.empty(); ++b) {
    DiBand band;
    band.lane_id = proc.lanes[b].id;
    band.y_top = round1(geo.band_top[b]);
    band.height = round1(geo.band_height[b]);
    plane.bands.push_back(std::move(band));
  }

  plane.pool_x = 0;
  plane.pool_y = 0;
  plane.pool_w = round1(2 * params.margin + max_rank * params.cell_width + params.task_width);
  double pool_h = 0;
  for (int b = 0; b < num_bands; ++b) pool_h += geo.band_height[b];
  plane.pool_h = round1(pool_h);

  // Edge routing: straight when centers align, otherwise a Z between the
  // columns; reversed edges run through the clear strip at the bottom of the
  // lower band.
  std::map<std::string, const DiShape*> shape_of;
  for (const auto& s : plane.shapes) shape_of[s.element_id] = &s;

  for (const auto& e : edges) {
    const DiShape& src = *shape_of.at(nodes[e.src].id);
    const DiShape& dst = *shape_of.at(nodes[e.dst].id);
    DiEdge edge;
    edge.flow_id = e.flow_id;
    if (!e.reversed) {
      double sy = src.cy(), ty = dst.cy();
      double sx = src.x + src.w, tx = dst.x;
      if (std::abs(sy - ty) < 0.5) {
        edge.waypoints = {{sx, sy}, {tx, ty}};
      } else {
        double mid = round1((sx + tx) / 2);
        edge.waypoints = {{sx, sy}, {mid, sy}, {mid, ty}, {tx, ty}};
      }
    } else {
      int low_band = std::max(nodes[e.src].band, nodes[e.dst].band);
      double strip = geo.band_top[low_band] + geo.band_height[low_band] -
                     params.lane_padding / 2;
      strip = round1(strip);
      double scx = src.cx(), tcx = dst.cx();
      edge.waypoints = {{scx, src.y + src.h}, {scx, strip}, {tcx, strip}, {tcx, dst.y + dst.h}};
    }
    // Collapse duplicate consecutive waypoints (degenerate geometry).
    std::vector<std::pair<double, double>> cleaned;
    for (const auto& wp : edge.waypoints)
      if (cleaned.empty() || cleaned.back() != wp) cleaned.push_back(wp);
    if (cleaned.size() < 2) cleaned.push_back(cleaned.back());
    edge.waypoints = std::move(cleaned);
    plane.edges.push_back(std::move(edge));
  }

  return plane;
}

}  // namespace flow2bpmn
