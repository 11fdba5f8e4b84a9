#include "lexvor/graphs.hpp"

#include "lexvor/core_linear.hpp"
#include "lexvor/intlat.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace lexvor {

namespace {

std::vector<int> component_ids(const GraphModel& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.num_vertices), -1);
  int c = 0;
  for (int s = 0; s < g.num_vertices; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = c;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const auto& [a, b] : g.edges) {
        int other = -1;
        if (a == v) other = b;
        else if (b == v) other = a;
        if (other >= 0 && comp[static_cast<std::size_t>(other)] < 0) {
          comp[static_cast<std::size_t>(other)] = c;
          q.push(other);
        }
      }
    }
    ++c;
  }
  return comp;
}

}  // namespace

bool GraphModel::connected() const {
  if (num_vertices == 0) return false;
  auto comp = component_ids(*this);
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

bool GraphModel::essential() const {
  if (num_vertices == 1 && edges.size() == 1 && edges[0].first == edges[0].second) return true;
  std::vector<int> deg(static_cast<std::size_t>(num_vertices), 0);
  for (const auto& [a, b] : edges) {
    deg[static_cast<std::size_t>(a)] += 1;
    deg[static_cast<std::size_t>(b)] += 1;  // loops count twice
  }
  for (int d : deg)
    if (d == 2) return false;
  return true;
}

int GraphModel::genus() const {
  auto comp = component_ids(*this);
  int ncomp = num_vertices == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  return num_edges() - num_vertices + ncomp;
}

MatZ GraphModel::cycle_basis() const {
  const int m = num_edges();
  // BFS spanning forest; tree edges in increasing index order.
  std::vector<bool> in_tree(static_cast<std::size_t>(m), false);
  std::vector<int> parent_edge(static_cast<std::size_t>(num_vertices), -1);
  std::vector<bool> seen(static_cast<std::size_t>(num_vertices), false);
  for (int s = 0; s < num_vertices; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    seen[static_cast<std::size_t>(s)] = true;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e = 0; e < m; ++e) {
        auto [a, b] = edges[static_cast<std::size_t>(e)];
        if (a == b) continue;
        int other = -1;
        if (a == v) other = b;
        else if (b == v) other = a;
        if (other < 0 || seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = true;
        in_tree[static_cast<std::size_t>(e)] = true;
        parent_edge[static_cast<std::size_t>(other)] = e;
        q.push(other);
      }
    }
  }
  // Signed vertex-path from v to the forest root, as edge coefficients.
  auto path_to_root = [&](int v, Eigen::VectorXi& coef, int sign) {
    while (parent_edge[static_cast<std::size_t>(v)] >= 0) {
      int e = parent_edge[static_cast<std::size_t>(v)];
      auto [a, b] = edges[static_cast<std::size_t>(e)];
      // Walking from child v up to its parent.
      if (b == v) {
        coef(e) -= sign;  // edge points parent -> v; traversal v -> parent is against it
        v = a;
      } else {
        coef(e) += sign;
        v = b;
      }
    }
  };
  std::vector<int> nontree;
  for (int e = 0; e < m; ++e)
    if (!in_tree[static_cast<std::size_t>(e)]) nontree.push_back(e);
  MatZ basis = MatZ::Zero(m, static_cast<int>(nontree.size()));
  for (std::size_t k = 0; k < nontree.size(); ++k) {
    int e = nontree[k];
    auto [a, b] = edges[static_cast<std::size_t>(e)];
    Eigen::VectorXi coef = Eigen::VectorXi::Zero(m);
    coef(e) = 1;
    if (a != b) {
      // Close the cycle: walk b -> root and root -> a (paths overlap cancels).
      path_to_root(b, coef, 1);
      path_to_root(a, coef, -1);
    }
    for (int i = 0; i < m; ++i) basis(i, static_cast<int>(k)) = coef(i);
  }
  return basis;
}

MetricGraphModel::MetricGraphModel(GraphModel g, std::vector<Rational> l)
    : graph(std::move(g)), lengths(std::move(l)) {
  if (static_cast<int>(lengths.size()) != graph.num_edges())
    throw ValidationError("metric graph: one length per edge required");
  for (const Rational& x : lengths)
    if (x <= 0) throw ValidationError("metric graph: lengths must be positive");
}

LayeredGraphModel::LayeredGraphModel(GraphModel g, std::vector<Rational> l,
                                     std::vector<std::vector<int>> infinite,
                                     std::vector<int> finite)
    : graph(std::move(g)),
      lengths(std::move(l)),
      infinite_layers(std::move(infinite)),
      finite_layer(std::move(finite)) {
  if (static_cast<int>(lengths.size()) != graph.num_edges())
    throw ValidationError("layered graph: one length per edge required");
  for (const Rational& x : lengths)
    if (x <= 0) throw ValidationError("layered graph: lengths must be positive");
  if (!graph.connected()) throw ValidationError("layered graph: graph must be connected");
  std::vector<int> owner(static_cast<std::size_t>(graph.num_edges()), -1);
  auto claim = [&](int e, int who) {
    if (e < 0 || e >= graph.num_edges()) throw ValidationError("layered graph: bad edge index");
    if (owner[static_cast<std::size_t>(e)] != -1)
      throw ValidationError("layered graph: layering is not a partition");
    owner[static_cast<std::size_t>(e)] = who;
  };
  for (std::size_t j = 0; j < infinite_layers.size(); ++j) {
    if (infinite_layers[j].empty())
      throw ValidationError("layered graph: infinite layers must be nonempty");
    for (int e : infinite_layers[j]) claim(e, static_cast<int>(j));
  }
  for (int e : finite_layer) claim(e, static_cast<int>(infinite_layers.size()));
  for (int o : owner)
    if (o == -1) throw ValidationError("layered graph: layering misses an edge");
  for (const auto& layer : infinite_layers) {
    Rational total = 0;
    for (int e : layer) total += lengths[static_cast<std::size_t>(e)];
    if (total != 1)
      throw ValidationError("layered graph: infinite layer lengths must sum to 1");
  }
}

namespace {

GraphModel graph_from_json(const nlohmann::json& j) {
  GraphModel g;
  g.num_vertices = j.at("vertices").get<int>();
  for (const auto& e : j.at("edges"))
    g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  for (const auto& [a, b] : g.edges)
    if (a < 0 || b < 0 || a >= g.num_vertices || b >= g.num_vertices)
      throw ValidationError("graph: edge endpoint out of range");
  return g;
}

std::vector<Rational> lengths_from_json(const nlohmann::json& j, int m) {
  std::vector<Rational> l;
  for (const auto& e : j.at("lengths"))
    l.push_back(e.is_string() ? parse_rational(e.get<std::string>())
                              : parse_rational(nlohmann::to_string(e)));
  if (static_cast<int>(l.size()) != m)
    throw ValidationError("graph: one length per edge required");
  return l;
}

nlohmann::json lengths_to_json(const std::vector<Rational>& l) {
  auto arr = nlohmann::json::array();
  for (const auto& x : l) arr.push_back(rational_to_string(x));
  return arr;
}

}  // namespace

MetricGraphModel metric_graph_from_json(const nlohmann::json& j) {
  GraphModel g = graph_from_json(j);
  auto lengths = lengths_from_json(j, g.num_edges());
  return MetricGraphModel(std::move(g), std::move(lengths));
}

nlohmann::json metric_graph_to_json(const MetricGraphModel& mg) {
  nlohmann::json j;
  j["vertices"] = mg.graph.num_vertices;
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : mg.graph.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["lengths"] = lengths_to_json(mg.lengths);
  return j;
}

LayeredGraphModel LayeredGraphModel::from_json(const nlohmann::json& j) {
  GraphModel g = graph_from_json(j);
  auto lengths = lengths_from_json(j, g.num_edges());
  const auto& lay = j.at("layering");
  std::vector<std::vector<int>> infinite;
  for (const auto& layer : lay.at("infinite")) infinite.push_back(layer.get<std::vector<int>>());
  std::vector<int> finite;
  if (lay.contains("finite")) finite = lay.at("finite").get<std::vector<int>>();
  return LayeredGraphModel(std::move(g), std::move(lengths), std::move(infinite),
                           std::move(finite));
}

nlohmann::json LayeredGraphModel::to_json() const {
  nlohmann::json j;
  j["vertices"] = graph.num_vertices;
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : graph.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["lengths"] = lengths_to_json(lengths);
  nlohmann::json lay;
  lay["infinite"] = infinite_layers;
  lay["finite"] = finite_layer;
  j["layering"] = std::move(lay);
  return j;
}

namespace {

MatQ gram_on_edges(const MatZ& basis, const std::vector<Rational>& weight,
                   const std::vector<int>& support) {
  const int g = static_cast<int>(basis.cols());
  MatQ N = MatQ::Zero(g, g);
  for (int e : support) {
    const Rational& w = weight[static_cast<std::size_t>(e)];
    for (int a = 0; a < g; ++a) {
      if (basis(e, a) == 0) continue;
      for (int b = 0; b < g; ++b) {
        if (basis(e, b) == 0) continue;
        N(a, b) += w * Rational(basis(e, a)) * Rational(basis(e, b));
      }
    }
  }
  return N;
}

}  // namespace

MatQ polarization_gram(const MetricGraphModel& mg) {
  MatZ basis = mg.graph.cycle_basis();
  std::vector<int> all(static_cast<std::size_t>(mg.graph.num_edges()));
  std::iota(all.begin(), all.end(), 0);
  return gram_on_edges(basis, mg.lengths, all);
}

GramStack tropical_gram(const LayeredGraphModel& lg) {
  if (!lg.graph.essential())
    throw ValidationError("tropical_gram: graph must be essential");
  MatZ basis = lg.graph.cycle_basis();
  if (basis.cols() == 0)
    throw ValidationError("tropical_gram: graph is a tree (trivial homology)");
  std::vector<MatQ> mats;
  for (const auto& layer : lg.infinite_layers)
    mats.push_back(gram_on_edges(basis, lg.lengths, layer));
  mats.push_back(gram_on_edges(basis, lg.lengths, lg.finite_layer));
  return GramStack(std::move(mats));
}

MetricGraphModel graded_minor(const LayeredGraphModel& lg, int level) {
  const int r = lg.rank();
  if (level < 1 || level > r + 1) throw ValidationError("graded_minor: invalid level");
  // Delete layers before `level`; contract layers after it (none when finite).
  std::set<int> keep, contract;
  if (level <= r) {
    for (int e : lg.infinite_layers[static_cast<std::size_t>(level) - 1]) keep.insert(e);
    for (int j = level + 1; j <= r; ++j)
      for (int e : lg.infinite_layers[static_cast<std::size_t>(j) - 1]) contract.insert(e);
    for (int e : lg.finite_layer) contract.insert(e);
  } else {
    for (int e : lg.finite_layer) keep.insert(e);
  }
  // Union-find over contracted edges.
  std::vector<int> rep(static_cast<std::size_t>(lg.graph.num_vertices));
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (rep[static_cast<std::size_t>(v)] != v) {
      rep[static_cast<std::size_t>(v)] = rep[static_cast<std::size_t>(rep[static_cast<std::size_t>(v)])];
      v = rep[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (int e : contract) {
    auto [a, b] = lg.graph.edges[static_cast<std::size_t>(e)];
    int ra = find(a), rb = find(b);
    if (ra != rb) rep[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  // Compress vertex ids over the kept edges.
  std::vector<int> newid(static_cast<std::size_t>(lg.graph.num_vertices), -1);
  GraphModel out;
  std::vector<Rational> lengths;
  int next = 0;
  for (int e : keep) {
    auto [a, b] = lg.graph.edges[static_cast<std::size_t>(e)];
    int ra = find(a), rb = find(b);
    for (int v : {ra, rb})
      if (newid[static_cast<std::size_t>(v)] < 0) newid[static_cast<std::size_t>(v)] = next++;
    out.edges.emplace_back(newid[static_cast<std::size_t>(ra)], newid[static_cast<std::size_t>(rb)]);
    lengths.push_back(lg.lengths[static_cast<std::size_t>(e)]);
  }
  out.num_vertices = std::max(next, 1);
  return MetricGraphModel(std::move(out), std::move(lengths));
}

std::vector<FlowVec> circuits(const GraphModel& g, std::size_t budget) {
  const int m = g.num_edges();
  std::vector<FlowVec> out;
  auto push_both = [&](const FlowVec& f) {
    if (out.size() + 2 > budget) throw BudgetError("circuits: budget exceeded");
    out.push_back(f);
    out.push_back(-f);
  };
  // Loops are their own cycles.
  for (int e = 0; e < m; ++e) {
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    if (a == b) {
      FlowVec f = FlowVec::Zero(m);
      f(e) = 1;
      push_both(f);
    }
  }
  // Simple cycles with at least two edges: DFS from the minimal vertex of the
  // cycle, intermediate vertices strictly larger, dedup by first/last edge id.
  std::vector<std::vector<std::pair<int, int>>> incident(
      static_cast<std::size_t>(g.num_vertices));  // (edge, other endpoint)
  for (int e = 0; e < m; ++e) {
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    if (a == b) continue;
    incident[static_cast<std::size_t>(a)].emplace_back(e, b);
    incident[static_cast<std::size_t>(b)].emplace_back(e, a);
  }
  std::vector<bool> on_path(static_cast<std::size_t>(g.num_vertices), false);
  std::vector<bool> edge_used(static_cast<std::size_t>(m), false);
  std::vector<std::pair<int, int>> path;  // (edge, direction +1 along listed orientation)
  std::function<void(int, int, int)> dfs = [&](int s, int v, int first_edge) {
    for (auto [e, w] : incident[static_cast<std::size_t>(v)]) {
      if (edge_used[static_cast<std::size_t>(e)]) continue;
      int dir = g.edges[static_cast<std::size_t>(e)].first == v ? 1 : -1;
      if (w == s) {
        if (!path.empty() && e > first_edge) {
          FlowVec f = FlowVec::Zero(m);
          f(first_edge) = path[0].second;
          for (auto [pe, pd] : path)
            if (pe != first_edge) f(pe) = pd;
          f(e) = dir;
          push_both(f);
        }
        continue;
      }
      if (w < s || on_path[static_cast<std::size_t>(w)]) continue;
      on_path[static_cast<std::size_t>(w)] = true;
      edge_used[static_cast<std::size_t>(e)] = true;
      path.emplace_back(e, dir);
      dfs(s, w, first_edge);
      path.pop_back();
      edge_used[static_cast<std::size_t>(e)] = false;
      on_path[static_cast<std::size_t>(w)] = false;
    }
  };
  for (int s = 0; s < g.num_vertices; ++s) {
    for (auto [e, w] : incident[static_cast<std::size_t>(s)]) {
      if (w < s) continue;  // cycle must stay above its minimal vertex
      // Start the path with edge e; require the closing edge id > e.
      if (w == s) continue;
      on_path[static_cast<std::size_t>(w)] = true;
      edge_used[static_cast<std::size_t>(e)] = true;
      path.clear();
      path.emplace_back(e, g.edges[static_cast<std::size_t>(e)].first == s ? 1 : -1);
      dfs(s, w, e);
      edge_used[static_cast<std::size_t>(e)] = false;
      on_path[static_cast<std::size_t>(w)] = false;
    }
  }
  return out;
}

namespace {

// Integer cycle-basis coordinates of a flow: read off the non-tree entries.
VecQ basis_coords(const MatZ& basis, const FlowVec& flow) {
  const int m = static_cast<int>(basis.rows());
  MatQ B = to_rational(basis);
  Eigen::FullPivLU<MatQ> lu(B);
  VecQ f(m);
  for (int e = 0; e < m; ++e) f(e) = Rational(flow(e));
  VecQ u = lu.solve(f);
  if (B * u != f) throw ValidationError("flow is not in the cycle space");
  return u;
}

}  // namespace

GraphHalfspaces graph_voronoi_hrep(const MetricGraphModel& mg, std::size_t budget) {
  MatZ basis = mg.graph.cycle_basis();
  MatQ N = polarization_gram(mg);
  auto circs = circuits(mg.graph, budget);
  GraphHalfspaces hs;
  hs.normals = MatQ(static_cast<int>(circs.size()), basis.cols());
  hs.offsets = VecQ(static_cast<int>(circs.size()));
  for (std::size_t k = 0; k < circs.size(); ++k) {
    VecQ u = basis_coords(basis, circs[k]);
    hs.normals.row(static_cast<int>(k)) = (2 * (N * u)).transpose();
    hs.offsets(static_cast<int>(k)) = (u.transpose() * N * u)(0, 0);
  }
  return hs;
}

TropicalHalfspaces tropical_voronoi_hrep(const LayeredGraphModel& lg, std::size_t budget) {
  MatZ basis = lg.graph.cycle_basis();
  GramStack stack = tropical_gram(lg);
  auto circs = circuits(lg.graph, budget);
  TropicalHalfspaces out;
  for (int j = 0; j < stack.r(); ++j) {
    const MatQ& A = stack.exact_mat(j);
    GraphHalfspaces hs;
    hs.normals = MatQ(static_cast<int>(circs.size()), basis.cols());
    hs.offsets = VecQ(static_cast<int>(circs.size()));
    for (std::size_t k = 0; k < circs.size(); ++k) {
      VecQ u = basis_coords(basis, circs[k]);
      hs.normals.row(static_cast<int>(k)) = (2 * (A * u)).transpose();
      hs.offsets(static_cast<int>(k)) = (u.transpose() * A * u)(0, 0);
    }
    out.per_level.push_back(std::move(hs));
  }
  return out;
}

std::vector<std::pair<FlowVec, long long>> circuit_decomposition(const GraphModel& g,
                                                                 const FlowVec& eta) {
  const int m = g.num_edges();
  if (eta.size() != m) throw ValidationError("circuit_decomposition: flow size mismatch");
  FlowVec rest = eta;
  std::vector<std::pair<FlowVec, long long>> out;
  auto find_cycle = [&]() -> FlowVec {
    // Directed graph of the positive support: edge e with rest(e) > 0 runs
    // along its listed orientation, rest(e) < 0 against it.
    FlowVec cyc = FlowVec::Zero(m);
    std::vector<std::vector<std::pair<int, int>>> arcs(
        static_cast<std::size_t>(g.num_vertices));  // from -> (edge, to)
    for (int e = 0; e < m; ++e) {
      if (rest(e) == 0) continue;
      auto [a, b] = g.edges[static_cast<std::size_t>(e)];
      if (rest(e) > 0)
        arcs[static_cast<std::size_t>(a)].emplace_back(e, b);
      else
        arcs[static_cast<std::size_t>(b)].emplace_back(e, a);
      if (a == b) {  // loop: a one-edge cycle
        cyc(e) = rest(e) > 0 ? 1 : -1;
        return cyc;
      }
    }
    // Walk forward until a vertex repeats; conservation guarantees out-arcs.
    int start = -1;
    for (int v = 0; v < g.num_vertices; ++v)
      if (!arcs[static_cast<std::size_t>(v)].empty()) { start = v; break; }
    if (start < 0) return cyc;
    std::vector<int> visited_at(static_cast<std::size_t>(g.num_vertices), -1);
    std::vector<std::pair<int, int>> walk;  // (edge, to)
    int v = start;
    while (visited_at[static_cast<std::size_t>(v)] < 0) {
      visited_at[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
      bool advanced = false;
      for (auto [e, w] : arcs[static_cast<std::size_t>(v)]) {
        bool used = false;
        for (auto [pe, pw] : walk)
          if (pe == e) used = true;
        if (used) continue;
        walk.emplace_back(e, w);
        v = w;
        advanced = true;
        break;
      }
      if (!advanced) throw NumericError("circuit_decomposition: flow conservation violated");
    }
    int from = visited_at[static_cast<std::size_t>(v)];
    for (std::size_t k = static_cast<std::size_t>(from); k < walk.size(); ++k) {
      int e = walk[k].first;
      cyc(e) = rest(e) > 0 ? 1 : -1;
    }
    return cyc;
  };
  std::size_t guard = 0;
  while (rest.cwiseAbs().maxCoeff() > 0) {
    if (++guard > 10000) throw BudgetError("circuit_decomposition: budget exceeded");
    FlowVec cyc = find_cycle();
    if (cyc.cwiseAbs().maxCoeff() == 0)
      throw NumericError("circuit_decomposition: no cycle in nonzero flow");
    long long a = std::numeric_limits<long long>::max();
    for (int e = 0; e < m; ++e)
      if (cyc(e) != 0) a = std::min<long long>(a, std::abs(rest(e)));
    rest -= static_cast<int>(a) * cyc;
    out.emplace_back(cyc, a);
  }
  return out;
}

ScalarFamily degeneration_family(const LayeredGraphModel& lg, const ParamSchedule& schedule,
                                 std::function<double(int, double)> perturbation) {
  if (schedule.r() != lg.rank())
    throw ValidationError("degeneration_family: schedule rank must match the layering rank");
  MatZ basis = lg.graph.cycle_basis();
  const int m = lg.graph.num_edges();
  const int gdim = static_cast<int>(basis.cols());
  std::vector<int> layer_of(static_cast<std::size_t>(m), lg.rank());  // default: finite
  for (int j = 0; j < lg.rank(); ++j)
    for (int e : lg.infinite_layers[static_cast<std::size_t>(j)])
      layer_of[static_cast<std::size_t>(e)] = j;
  MatD basis_d(m, gdim);
  for (int e = 0; e < m; ++e)
    for (int c = 0; c < gdim; ++c) basis_d(e, c) = static_cast<double>(basis(e, c).convert_to<long long>());
  std::vector<double> len_d;
  for (const auto& l : lg.lengths) len_d.push_back(to_double(l));
  ScalarFamily fam;
  fam.n = gdim;
  fam.provenance = "graph";
  fam.eval_d = [=, pert = std::move(perturbation)](double t) {
    VecD L = schedule.eval(t);
    MatD N = MatD::Zero(gdim, gdim);
    for (int e = 0; e < m; ++e) {
      int j = layer_of[static_cast<std::size_t>(e)];
      double lt = (j < L.size() ? L(j) : 1.0) * len_d[static_cast<std::size_t>(e)];
      if (pert) lt *= pert(e, t);
      N += lt * (basis_d.row(e).transpose() * basis_d.row(e));
    }
    return N;
  };
  return fam;
}

ParamSchedule tropical_schedule(const LayeredGraphModel& lg, const ParamSchedule& schedule) {
  if (!schedule.is_power())
    throw ValidationError("tropical_schedule: power schedule required");
  std::vector<double> exps = schedule.exponents();
  std::vector<double> coeffs = schedule.coeffs();
  if (static_cast<int>(exps.size()) != lg.rank())
    throw ValidationError("tropical_schedule: rank mismatch");
  if (!exps.empty() && exps.back() <= 0.0)
    throw ValidationError("tropical_schedule: infinite layers must diverge");
  exps.push_back(0.0);
  coeffs.push_back(1.0);
  return ParamSchedule::power(std::move(exps), std::move(coeffs));
}

long long sco_face_count(const GraphModel& g) {
  const int m = g.num_edges();
  if (m > 12) throw BudgetError("sco_face_count: |E| <= 12 required");
  auto comp_of = [&](unsigned subset) {
    std::vector<int> rep(static_cast<std::size_t>(g.num_vertices));
    std::iota(rep.begin(), rep.end(), 0);
    std::function<int(int)> find = [&](int v) {
      while (rep[static_cast<std::size_t>(v)] != v) v = rep[static_cast<std::size_t>(v)] =
          rep[static_cast<std::size_t>(rep[static_cast<std::size_t>(v)])];
      return v;
    };
    for (int e = 0; e < m; ++e)
      if (subset & (1u << e)) {
        auto [a, b] = g.edges[static_cast<std::size_t>(e)];
        int ra = find(a), rb = find(b);
        if (ra != rb) rep[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
    std::vector<int> out(static_cast<std::size_t>(g.num_vertices));
    for (int v = 0; v < g.num_vertices; ++v) out[static_cast<std::size_t>(v)] = find(v);
    return out;
  };
  // Bridge test: edge e is a bridge in (V, F) if removing it splits its component.
  auto bridgeless = [&](unsigned subset) {
    for (int e = 0; e < m; ++e) {
      if (!(subset & (1u << e))) continue;
      auto [a, b] = g.edges[static_cast<std::size_t>(e)];
      if (a == b) continue;  // loops are never bridges
      auto comp = comp_of(subset & ~(1u << e));
      if (comp[static_cast<std::size_t>(a)] != comp[static_cast<std::size_t>(b)]) return false;
    }
    return true;
  };
  long long count = 0;
  for (unsigned subset = 0; subset < (1u << m); ++subset) {
    if (!bridgeless(subset)) continue;
    auto comp = comp_of(subset);
    int k = 0;
    std::vector<int> edge_ids;
    for (int e = 0; e < m; ++e)
      if (subset & (1u << e)) edge_ids.push_back(e);
    k = static_cast<int>(edge_ids.size());
    for (unsigned orient = 0; orient < (1u << k); ++orient) {
      // Strong connectivity within every component: forward/backward reach.
      bool ok = true;
      std::vector<std::vector<int>> fwd(static_cast<std::size_t>(g.num_vertices)),
          bwd(static_cast<std::size_t>(g.num_vertices));
      for (int i = 0; i < k; ++i) {
        auto [a, b] = g.edges[static_cast<std::size_t>(edge_ids[static_cast<std::size_t>(i)])];
        int from = a, to = b;
        if (orient & (1u << i)) std::swap(from, to);
        fwd[static_cast<std::size_t>(from)].push_back(to);
        bwd[static_cast<std::size_t>(to)].push_back(from);
      }
      auto reach = [&](int s, const std::vector<std::vector<int>>& adj, std::vector<bool>& vis) {
        std::queue<int> q;
        q.push(s);
        vis[static_cast<std::size_t>(s)] = true;
        while (!q.empty()) {
          int v = q.front();
          q.pop();
          for (int w : adj[static_cast<std::size_t>(v)])
            if (!vis[static_cast<std::size_t>(w)]) {
              vis[static_cast<std::size_t>(w)] = true;
              q.push(w);
            }
        }
      };
      std::vector<int> seen_comp;
      for (int v = 0; v < g.num_vertices && ok; ++v) {
        int c = comp[static_cast<std::size_t>(v)];
        bool done = false;
        for (int s : seen_comp)
          if (s == c) done = true;
        if (done) continue;
        seen_comp.push_back(c);
        std::vector<bool> f(static_cast<std::size_t>(g.num_vertices), false),
            bvis(static_cast<std::size_t>(g.num_vertices), false);
        reach(v, fwd, f);
        reach(v, bwd, bvis);
        for (int w = 0; w < g.num_vertices && ok; ++w)
          if (comp[static_cast<std::size_t>(w)] == c && (!f[static_cast<std::size_t>(w)] || !bvis[static_cast<std::size_t>(w)]))
            ok = false;
      }
      if (ok) ++count;
    }
  }
  return count;
}

}  // namespace lexvor
