#include "histoq/green_graph.hpp"

#include <cmath>
#include <sstream>

namespace histoq {

namespace {

GreenGraph assemble(const Circuit& circuit, std::vector<std::vector<Vector>> layers,
                    std::vector<std::vector<std::string>> labels, RealVector initial_weights,
                    double zero_threshold) {
  GreenGraph g;
  g.zero_threshold = zero_threshold;
  g.layers = std::move(layers);
  g.labels = std::move(labels);
  g.initial_weights = std::move(initial_weights);
  for (auto& layer : g.layers)
    for (auto& v : layer) v = canonical_phase(v);

  const int n = circuit.stage_count();
  g.green.reserve(n);
  for (int k = 0; k < n; ++k) {
    const auto& from = g.layers[k];
    const auto& to = g.layers[k + 1];
    const Matrix& u = circuit.stage(k + 1).unitary;
    Matrix green(to.size(), from.size());
    for (size_t j = 0; j < from.size(); ++j) {
      Vector uj = u * from[j];
      for (size_t i = 0; i < to.size(); ++i) green(i, j) = to[i].dot(uj);
    }
    if (!is_unitary(green))
      throw std::invalid_argument("Green-function block between stages " + std::to_string(k) +
                                  " and " + std::to_string(k + 1) + " is not unitary");
    g.green.push_back(std::move(green));
  }
  return g;
}

}  // namespace

GreenGraph build_graph(const Circuit& circuit, const std::vector<ProjectorSet>& bases,
                       double zero_threshold) {
  const int n = circuit.stage_count();
  if (static_cast<int>(bases.size()) != n + 1)
    throw std::invalid_argument("build_graph needs one basis per stage 0.." + std::to_string(n));
  std::vector<std::vector<Vector>> layers;
  std::vector<std::vector<std::string>> labels;
  for (const auto& set : bases) {
    if (!set.is_rank_one()) throw std::invalid_argument("build_graph: all sets must be rank 1");
    if (set.dim() != circuit.dim()) throw std::invalid_argument("build_graph: dimension mismatch");
    std::vector<Vector> layer;
    std::vector<std::string> layer_labels;
    for (int a = 0; a < set.size(); ++a) {
      layer.push_back(set.rank1_vector(a));
      layer_labels.push_back(set.label(a));
    }
    layers.push_back(std::move(layer));
    labels.push_back(std::move(layer_labels));
  }

  // Layer 0 must diagonalize the initial state so vertices carry weights.
  const Matrix rho = circuit.initial().density().matrix();
  const auto& first = layers[0];
  RealVector weights(first.size());
  for (size_t i = 0; i < first.size(); ++i) {
    for (size_t j = 0; j < i; ++j)
      if (std::abs(first[i].dot(rho * first[j])) > kOperatorTol)
        throw std::invalid_argument("build_graph: layer 0 does not diagonalize the initial state");
    weights(i) = clamp_probability(first[i].dot(rho * first[i]).real());
  }
  return assemble(circuit, std::move(layers), std::move(labels), std::move(weights),
                  zero_threshold);
}

GreenGraph build_graph(const HistoryFamily& family, double zero_threshold) {
  const Circuit& circuit = family.circuit();
  const int n = circuit.stage_count();
  std::vector<const ProjectorSet*> per_stage(n + 1, nullptr);
  for (int j = 0; j < family.event_count(); ++j) {
    int s = family.event_stage(j);
    if (s == 0)
      throw std::invalid_argument("build_graph: stage-0 insertions have no layer; use an identity gate");
    per_stage[s] = &family.event_set(j);
  }
  for (int s = 1; s <= n; ++s)
    if (!per_stage[s])
      throw std::invalid_argument("build_graph: no rank-1 set at stage " + std::to_string(s));

  std::vector<ProjectorSet> bases;
  const DensityMatrix rho = circuit.initial().density();
  const auto& es = rho.eigensystem();
  std::vector<Vector> first;
  for (Index i = 0; i < circuit.dim(); ++i) first.push_back(es.vectors[i]);
  bases.push_back(ProjectorSet::from_basis(first));
  for (int s = 1; s <= n; ++s) bases.push_back(*per_stage[s]);
  return build_graph(circuit, bases, zero_threshold);
}

std::vector<GraphPath> forward_paths(const GreenGraph& graph, int start, int end,
                                     std::size_t guard) {
  const int n = graph.layer_count();
  if (n < 2) throw std::invalid_argument("graph has no edges");
  if (start < 0 || start >= graph.layer_size(0)) throw std::invalid_argument("bad start vertex");
  if (end < 0 || end >= graph.layer_size(n - 1)) throw std::invalid_argument("bad end vertex");

  std::vector<GraphPath> out;
  GraphPath current;
  current.vertices.assign(n, 0);
  current.vertices[0] = start;

  std::function<void(int)> dfs = [&](int layer) {
    if (layer == n - 1) {
      if (current.vertices[n - 1] == end) out.push_back(current);
      return;
    }
    int from = current.vertices[layer];
    for (int to = 0; to < graph.layer_size(layer + 1); ++to) {
      if (layer + 1 == n - 1 && to != end) continue;
      if (!graph.edge(layer, from, to)) continue;
      if (out.size() > guard) throw std::runtime_error("forward_paths: path guard exceeded");
      current.vertices[layer + 1] = to;
      dfs(layer + 1);
    }
  };
  dfs(0);
  return out;
}

std::vector<LoopPair> enumerate_loop_pairs(const GreenGraph& graph, int start, int end,
                                           std::size_t guard) {
  auto paths = forward_paths(graph, start, end, guard);
  std::vector<LoopPair> out;
  for (size_t i = 0; i < paths.size(); ++i) {
    for (size_t j = i + 1; j < paths.size(); ++j) {
      if (out.size() >= guard) throw std::runtime_error("enumerate_loop_pairs: guard exceeded");
      // paths come out of the DFS in lexicographic order already
      out.push_back({paths[i], paths[j]});
    }
  }
  return out;
}

std::vector<LoopPair> enumerate_all_loop_pairs(const GreenGraph& graph, std::size_t guard) {
  std::vector<LoopPair> out;
  const int last = graph.layer_count() - 1;
  for (int s = 0; s < graph.layer_size(0); ++s) {
    if (graph.initial_weights(s) <= kZeroProbability) continue;
    for (int e = 0; e < graph.layer_size(last); ++e) {
      auto pairs = enumerate_loop_pairs(graph, s, e, guard);
      if (out.size() + pairs.size() > guard)
        throw std::runtime_error("enumerate_all_loop_pairs: guard exceeded");
      out.insert(out.end(), pairs.begin(), pairs.end());
    }
  }
  return out;
}

Complex path_amplitude(const GreenGraph& graph, const GraphPath& path) {
  Complex amp{1.0, 0.0};
  for (int k = 0; k + 1 < graph.layer_count(); ++k)
    amp *= graph.green[k](path.vertices[k + 1], path.vertices[k]);
  return amp;
}

Complex loop_product(const GreenGraph& graph, const LoopPair& pair) {
  return path_amplitude(graph, pair.a) * std::conj(path_amplitude(graph, pair.b));
}

Complex loop_phase_product(const GreenGraph& graph, const LoopPair& pair) {
  Complex out{1.0, 0.0};
  for (int k = 0; k + 1 < graph.layer_count(); ++k) {
    Complex s = graph.green[k](pair.a.vertices[k + 1], pair.a.vertices[k]) *
                std::conj(graph.green[k](pair.b.vertices[k + 1], pair.b.vertices[k]));
    if (!is_positive_real(s)) out *= s;
  }
  return out;
}

ConsistencyReport check_weak_via_loops(const GreenGraph& graph, double epsilon,
                                       std::size_t guard) {
  ConsistencyReport rep;
  rep.level = Level::weak;
  rep.epsilon = epsilon;
  for (const LoopPair& pair : enumerate_all_loop_pairs(graph, guard)) {
    double w = graph.initial_weights(pair.a.vertices[0]);
    double v = std::abs((w * loop_product(graph, pair)).real());
    if (v > rep.max_violation) rep.max_violation = v;
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

ConsistencyReport check_medium_via_paths(const GreenGraph& graph, std::size_t guard) {
  ConsistencyReport rep;
  rep.level = Level::medium;
  rep.epsilon = 0.0;
  std::size_t loops = 0;
  for (const LoopPair& pair : enumerate_all_loop_pairs(graph, guard)) {
    ++loops;
    double w = graph.initial_weights(pair.a.vertices[0]);
    double v = std::abs(w * loop_product(graph, pair));
    if (v > rep.max_violation) rep.max_violation = v;
  }
  rep.passed = loops == 0;
  return rep;
}

std::string export_dot(const GreenGraph& graph) {
  std::ostringstream os;
  os << "digraph green {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (int k = 0; k < graph.layer_count(); ++k) {
    os << "  subgraph cluster_" << k << " {\n    label=\"stage " << k << "\";\n    color=gray;\n";
    for (int i = 0; i < graph.layer_size(k); ++i)
      os << "    v" << k << "_" << i << " [label=\"" << graph.labels[k][i] << "\"];\n";
    os << "  }\n";
  }
  os.setf(std::ios::fixed);
  os.precision(6);
  for (int k = 0; k + 1 < graph.layer_count(); ++k) {
    for (int j = 0; j < graph.layer_size(k); ++j) {
      for (int i = 0; i < graph.layer_size(k + 1); ++i) {
        if (!graph.edge(k, j, i)) continue;
        Complex g = graph.green[k](i, j);
        const char* style = "solid";
        const char* color = "black";
        if (std::abs(g.imag()) <= graph.zero_threshold) {
          style = "solid";
        } else if (std::abs(g.real()) <= graph.zero_threshold) {
          style = "bold";
        } else {
          color = "black:invis:black";  // doubled line
        }
        os << "  v" << k << "_" << j << " -> v" << k + 1 << "_" << i << " [style=" << style
           << ", color=\"" << color << "\", label=\"" << g.real() << (g.imag() < 0 ? "-" : "+")
           << std::abs(g.imag()) << "i\"];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace histoq
