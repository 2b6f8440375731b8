#pragma once

#include "histoq/consistency.hpp"

namespace histoq {

// Layered graph of basis vectors, one layer per stage. Layer 0 is a basis
// diagonalizing the initial state; layer k holds the rank-1 basis attached
// after gate k. Edge weights are the Green functions
//   G_k(i, j) = <phi^(k+1)_i | U_{k+1} | phi^(k)_j>,
// one unitary matrix per adjacent layer pair. Vertices are connected iff
// |G| exceeds zero_threshold.
struct GreenGraph {
  std::vector<std::vector<Vector>> layers;          // canonically phased
  std::vector<std::vector<std::string>> labels;
  std::vector<Matrix> green;                        // green[k](to, from)
  RealVector initial_weights;                       // eigenvalues on layer 0
  double zero_threshold = 1e-12;

  int layer_count() const { return static_cast<int>(layers.size()); }
  int layer_size(int k) const { return static_cast<int>(layers[k].size()); }
  bool edge(int k, int from, int to) const {
    return std::abs(green[k](to, from)) > zero_threshold;
  }
};

// One basis per stage 0..n (initial states first, final measurement last).
// Every set must be rank-1 and the first must diagonalize the initial state.
GreenGraph build_graph(const Circuit& circuit, const std::vector<ProjectorSet>& bases,
                       double zero_threshold = 1e-12);
// Layer 0 from the initial state's eigensystem; requires a rank-1 set at
// every interior stage and a rank-1 final measurement.
GreenGraph build_graph(const HistoryFamily& family, double zero_threshold = 1e-12);

// A forward path: one vertex per layer, start at layer 0.
struct GraphPath {
  std::vector<int> vertices;
};

// Two distinct forward paths sharing their first and last vertex. `a` is the
// lexicographically smaller path.
struct LoopPair {
  GraphPath a, b;
};

std::vector<GraphPath> forward_paths(const GreenGraph& graph, int start, int end,
                                     std::size_t guard = 1'000'000);
std::vector<LoopPair> enumerate_loop_pairs(const GreenGraph& graph, int start, int end,
                                           std::size_t guard = 1'000'000);
// Over every populated start vertex and every end vertex.
std::vector<LoopPair> enumerate_all_loop_pairs(const GreenGraph& graph,
                                               std::size_t guard = 1'000'000);

Complex path_amplitude(const GreenGraph& graph, const GraphPath& path);

// (product of path a's weights) * conj(product of path b's weights); equals
// the coherence function of the two fine-grained histories.
Complex loop_product(const GreenGraph& graph, const LoopPair& pair);

// The loop product with every positive-real crossing-pair factor
//   s_k = G_a^(k) * conj(G_b^(k))
// divided out. Positive-real factors rescale a loop product without touching
// its phase, so this isolates the interference-carrying part; it equals the
// full product whenever no such factor occurs.
Complex loop_phase_product(const GreenGraph& graph, const LoopPair& pair);

// Weak consistency via the loop criterion: every loop product attached to a
// populated start vertex must be purely imaginary (no loops passes).
// Exact for pure initial states; for mixed states each eigenvector branch is
// checked separately, which is sufficient by linearity.
ConsistencyReport check_weak_via_loops(const GreenGraph& graph, double epsilon,
                                       std::size_t guard = 1'000'000);

// Medium consistency: at most one forward path between any populated start
// vertex and any end vertex.
ConsistencyReport check_medium_via_paths(const GreenGraph& graph,
                                         std::size_t guard = 1'000'000);

// Deterministic DOT text. Edge styling encodes the weight class: solid for
// real, bold for purely imaginary, doubled for general complex weights.
std::string export_dot(const GreenGraph& graph);

}  // namespace histoq
