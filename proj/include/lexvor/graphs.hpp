#pragma once

#include "lexvor/family.hpp"
#include "lexvor/gram_stack.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace lexvor {

using FlowVec = Eigen::VectorXi;  // value per edge, along the listed orientation

/// Finite multigraph (parallel edges and loops allowed). Edge k is oriented
/// from edges[k].first to edges[k].second for flow bookkeeping.
struct GraphModel {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  bool connected() const;
  /// No degree-2 vertices, except for the single-vertex single-loop graph.
  bool essential() const;
  int genus() const;  // |E| - |V| + #components

  /// Fundamental cycles of a spanning forest (BFS, edge-index order):
  /// one column per non-tree edge, entries in {-1,0,1}. Columns form a basis
  /// of the integer flow lattice H_1(G, Z).
  MatZ cycle_basis() const;
};

struct MetricGraphModel {
  GraphModel graph;
  std::vector<Rational> lengths;

  MetricGraphModel(GraphModel g, std::vector<Rational> l);
};

/// Layered graph: partition of E into infinite layers pi_1..pi_r (nonempty)
/// and a finite layer pi_f (possibly empty), lengths normalized to total 1 on
/// each infinite layer.
struct LayeredGraphModel {
  GraphModel graph;
  std::vector<Rational> lengths;
  std::vector<std::vector<int>> infinite_layers;
  std::vector<int> finite_layer;

  LayeredGraphModel(GraphModel g, std::vector<Rational> l,
                    std::vector<std::vector<int>> infinite, std::vector<int> finite);
  int rank() const { return static_cast<int>(infinite_layers.size()); }

  static LayeredGraphModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

MetricGraphModel metric_graph_from_json(const nlohmann::json& j);
nlohmann::json metric_graph_to_json(const MetricGraphModel& mg);

/// Polarization <x,y> = sum_e l(e) x(e) y(e) on the cycle basis.
MatQ polarization_gram(const MetricGraphModel& mg);

/// Tropical polarization: r+1 components (infinite layers, then the finite
/// layer) on the cycle basis of the full graph. Rejects non-essential models.
GramStack tropical_gram(const LayeredGraphModel& lg);

/// Graded minor: delete the earlier layers, contract the later ones, keep the
/// level's lengths. Level r+1 addresses the finite layer (deletions only).
MetricGraphModel graded_minor(const LayeredGraphModel& lg, int level);

/// All circuits: simple cycles in both orientations, as {-1,0,1} flows.
std::vector<FlowVec> circuits(const GraphModel& g, std::size_t budget = 10000);

/// Half-space system of the Voronoi cell of 0 over the circuits, in cycle-basis
/// coordinates: 2 <x, gamma> <= <gamma, gamma>.
struct GraphHalfspaces {
  MatQ normals;
  VecQ offsets;
};
GraphHalfspaces graph_voronoi_hrep(const MetricGraphModel& mg, std::size_t budget = 10000);

/// The lex system of the tropical Voronoi cell, one row block per circuit,
/// level-tagged (emitted for inspection; cells are computed via the Minkowski
/// closure machinery).
struct TropicalHalfspaces {
  std::vector<GraphHalfspaces> per_level;  // levels 1..r+1
};
TropicalHalfspaces tropical_voronoi_hrep(const LayeredGraphModel& lg, std::size_t budget = 10000);

/// Greedy cycle peeling: eta = sum a_k gamma_k with circuits gamma_k whose
/// signed supports sit inside the support of eta (positive integer a_k).
std::vector<std::pair<FlowVec, long long>> circuit_decomposition(const GraphModel& g,
                                                                 const FlowVec& eta);

/// Degenerating metric-graph family: l_t(e) = L_{t,j} l(e) on infinite layers,
/// l(e) on the finite layer, optionally perturbed by a caller factor (e, t).
ScalarFamily degeneration_family(const LayeredGraphModel& lg, const ParamSchedule& schedule,
                                 std::function<double(int, double)> perturbation = {});

/// The schedule with which degeneration_family tames to tropical_gram:
/// (L_{t,1}, ..., L_{t,r}, 1).
ParamSchedule tropical_schedule(const LayeredGraphModel& lg, const ParamSchedule& schedule);

/// Count of strongly connected orientations of bridgeless spanning subgraphs
/// (equals the face count of the scalar Voronoi cell). |E| <= 12.
long long sco_face_count(const GraphModel& g);

}  // namespace lexvor
