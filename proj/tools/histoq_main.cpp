// Command-line front end: validate | analyze | graph | search | profile |
// simulate | noise | bounds. Tables go to stdout for humans; --output json
// prints the machine-readable reports. Progress notes go to stderr.
// Exit codes: 0 pass, 1 check failed, 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "histoq/io.hpp"

using namespace histoq;

namespace {

struct CommonOpts {
  double epsilon = 1e-10;
  std::string level = "computing";
  std::string output = "table";
  int threads = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--epsilon", opts.epsilon, "consistency tolerance");
  cmd->add_option("--level", opts.level, "weak|medium|strong|computing")
      ->check(CLI::IsMember({"weak", "medium", "strong", "computing"}));
  cmd->add_option("--output", opts.output, "table|json")->check(CLI::IsMember({"table", "json"}));
  cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
  cmd->add_option("--seed", opts.seed, "random seed");
}

int default_threads() {
  if (const char* env = std::getenv("HISTOQ_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in.good()) throw io::ParseError(path, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Family files may reference a circuit file; resolve it next to the family.
io::FileLoader loader_relative_to(const std::string& family_path) {
  std::filesystem::path dir =
      family_path == "-" ? std::filesystem::current_path()
                         : std::filesystem::absolute(family_path).parent_path();
  return [dir](const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_relative()) p = dir / p;
    return read_input(p.string());
  };
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string fmt_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

void print_distribution(const std::string& head, const RealVector& p,
                        const std::vector<std::string>& labels) {
  std::cout << head << "\n";
  for (Index i = 0; i < p.size(); ++i) {
    std::string label = i < static_cast<Index>(labels.size()) ? labels[i] : std::to_string(i);
    std::cout << "  " << label << "  " << fmt(p(i)) << "\n";
  }
}

void print_report(const std::string& name, const ConsistencyReport& rep) {
  std::cout << "  " << name << ": " << (rep.passed ? "PASS" : "FAIL") << "  (max violation "
            << fmt(rep.max_violation) << ", epsilon " << fmt(rep.epsilon) << ")\n";
}

LocalBasis parse_basis_arg(const std::string& spec, int qubits) {
  if (qubits < 1) throw io::ParseError("--basis", "local bases need a qubit register");
  if (spec == "computational") return LocalBasis::computational(qubits);
  if (spec == "bell") {
    if (qubits != 2) throw io::ParseError("--basis", "bell needs a 2-qubit circuit");
    return LocalBasis::with_bell_block(2, 0, 1);
  }
  // "theta,phi;theta,phi;..." one pair per qubit
  std::vector<BlochAngles> angles;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    auto comma = part.find(',');
    if (comma == std::string::npos) throw io::ParseError("--basis", "expected theta,phi pairs");
    angles.push_back({std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1))});
  }
  if (static_cast<int>(angles.size()) != qubits)
    throw io::ParseError("--basis", "need one theta,phi pair per qubit");
  return LocalBasis::product(angles);
}

std::vector<std::string> labels_of(const ProjectorSet& set) {
  std::vector<std::string> out;
  for (int a = 0; a < set.size(); ++a) out.push_back(set.label(a));
  return out;
}

// ---- analyze ----

int cmd_analyze(const std::string& path, const CommonOpts& opts) {
  HistoryFamily family = io::parse_family(read_input(path), loader_relative_to(path));
  const int threads = opts.threads;

  ConsistencyReport computing = check_computing(family, opts.epsilon);
  ConsistencyReport weak = check_weak(family, opts.epsilon, threads);
  ConsistencyReport medium = check_medium(family, opts.epsilon, threads);
  std::optional<ConsistencyReport> strong;
  if (family.circuit().initial().rank(1e-12) <= 4) strong = check_strong(family, opts.epsilon);

  RealVector final_quantum = family.born_marginal(family.event_count() - 1);
  RealVector final_histories = family.marginal_by_event(family.event_count() - 1);

  CoherenceMatrix dm = coherence_matrix(family, threads);
  double max_off = 0.0, max_re_off = 0.0;
  for (Index a = 0; a < dm.d.rows(); ++a)
    for (Index b = 0; b < a; ++b) {
      max_off = std::max(max_off, std::abs(dm.d(a, b)));
      max_re_off = std::max(max_re_off, std::abs(dm.d(a, b).real()));
    }

  if (opts.output == "json") {
    std::ostringstream os;
    os << "{\"histories\":" << family.history_count() << ",\"coherence\":{\"diagonal_sum\":"
       << fmt(dm.diagonal_sum()) << ",\"max_offdiagonal\":" << fmt(max_off)
       << ",\"max_re_offdiagonal\":" << fmt(max_re_off)
       << "},\"verdicts\":{\"weak\":" << io::serialize_report(weak)
       << ",\"medium\":" << io::serialize_report(medium)
       << ",\"strong\":" << (strong ? io::serialize_report(*strong) : "null")
       << ",\"computing\":" << io::serialize_report(computing) << "},\"final_born\":[";
    for (Index i = 0; i < final_quantum.size(); ++i) os << (i ? "," : "") << fmt(final_quantum(i));
    os << "],\"final_histories\":[";
    for (Index i = 0; i < final_histories.size(); ++i)
      os << (i ? "," : "") << fmt(final_histories(i));
    os << "],\"event_marginals\":[";
    for (int j = 0; j < family.event_count(); ++j) {
      RealVector born = family.born_marginal(j);
      os << (j ? "," : "") << "{\"stage\":" << family.event_stage(j) << ",\"born\":[";
      for (Index i = 0; i < born.size(); ++i) os << (i ? "," : "") << fmt(born(i));
      os << "]}";
    }
    os << "]}";
    std::cout << os.str() << "\n";
  } else {
    std::cout << "family: " << family.history_count() << " histories over "
              << family.event_count() << " events (dim " << family.circuit().dim() << ")\n";
    for (int j = 0; j < family.event_count(); ++j) {
      RealVector born = family.born_marginal(j);
      std::ostringstream head;
      head << "stage " << family.event_stage(j)
           << (j + 1 == family.event_count() ? " (final) Born marginal" : " Born marginal");
      print_distribution(head.str(), born, labels_of(family.event_set(j)));
    }
    print_distribution("final distribution through the inserted histories", final_histories,
                       labels_of(family.event_set(family.event_count() - 1)));
    std::cout << "coherence matrix: diagonal sum " << fmt(dm.diagonal_sum())
              << ", max |off-diagonal| " << fmt(max_off) << ", max |Re off-diagonal| "
              << fmt(max_re_off) << "\n";
    std::cout << "consistency at epsilon " << fmt(opts.epsilon) << "\n";
    print_report("weak     ", weak);
    print_report("medium   ", medium);
    if (strong)
      print_report("strong   ", *strong);
    else
      std::cout << "  strong   : skipped (initial rank above 4)\n";
    print_report("computing", computing);
  }

  Level gate = level_from_string(opts.level);
  const ConsistencyReport& chosen = gate == Level::weak     ? weak
                                    : gate == Level::medium ? medium
                                    : gate == Level::strong ? (strong ? *strong : medium)
                                                            : computing;
  return chosen.passed ? 0 : 1;
}

// ---- graph ----

int cmd_graph(const std::string& path, const std::string& dot_path, const CommonOpts& opts) {
  HistoryFamily family = io::parse_family(read_input(path), loader_relative_to(path));
  GreenGraph graph = build_graph(family);

  auto loops = enumerate_all_loop_pairs(graph);
  ConsistencyReport weak = check_weak_via_loops(graph, opts.epsilon);
  ConsistencyReport medium = check_medium_via_paths(graph);

  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    out << export_dot(graph);
    std::cerr << "wrote " << dot_path << "\n";
  }

  if (opts.output == "json") {
    std::ostringstream os;
    os << "{\"loops\":[";
    for (size_t i = 0; i < loops.size(); ++i) {
      Complex full = loop_product(graph, loops[i]);
      Complex phase = loop_phase_product(graph, loops[i]);
      os << (i ? "," : "") << "{\"start\":" << loops[i].a.vertices.front()
         << ",\"end\":" << loops[i].a.vertices.back() << ",\"product\":[" << fmt(full.real())
         << "," << fmt(full.imag()) << "],\"phase_product\":[" << fmt(phase.real()) << ","
         << fmt(phase.imag()) << "]}";
    }
    os << "],\"weak\":" << io::serialize_report(weak)
       << ",\"medium\":" << io::serialize_report(medium) << "}";
    std::cout << os.str() << "\n";
  } else {
    if (loops.empty()) {
      std::cout << "no loops; weakly consistent\n";
    } else {
      std::cout << "loops (start -> end, full and phase products):\n";
      for (const auto& pair : loops) {
        Complex full = loop_product(graph, pair);
        Complex phase = loop_phase_product(graph, pair);
        std::cout << "  " << pair.a.vertices.front() << " -> " << pair.a.vertices.back()
                  << "   product " << fmt_complex(full) << "   phase " << fmt_complex(phase)
                  << "\n";
      }
    }
    print_report("weak (loops)  ", weak);
    print_report("medium (paths)", medium);
  }
  return weak.passed ? 0 : 1;
}

// ---- search / profile ----

void print_result_line(const SearchResult& r) {
  std::cout << "  " << (r.trivial ? "[trivial]    " : "[nontrivial] ") << r.basis.describe()
            << "  violation " << fmt(r.report.max_violation) << (r.local ? "" : "  (nonlocal)")
            << "\n";
}

int cmd_search(const std::string& path, SearchConfig cfg, const CommonOpts& opts) {
  Circuit circuit = io::parse_circuit(read_input(path));
  cfg.level = level_from_string(opts.level);
  cfg.epsilon = opts.epsilon;
  auto results = search_local_extensions(circuit, cfg, opts.threads);
  if (opts.output == "json") {
    std::cout << io::serialize_results(results) << "\n";
  } else {
    std::cout << results.size() << " passing bases at stage " << cfg.stage << " (level "
              << opts.level << ", epsilon " << fmt(cfg.epsilon) << ")\n";
    for (const auto& r : results) print_result_line(r);
    if (!results.empty())
      std::cout << "entanglement at stage: " << fmt(results.front().entropy_nats) << " nats / "
                << fmt(results.front().entropy_bits) << " bits\n";
  }
  return 0;
}

int cmd_profile(const std::string& path, SearchConfig cfg, const CommonOpts& opts) {
  Circuit circuit = io::parse_circuit(read_input(path));
  cfg.level = level_from_string(opts.level);
  cfg.epsilon = opts.epsilon;
  auto profile = classicality_profile(circuit, cfg, opts.threads);
  if (opts.output == "json") {
    std::cout << io::serialize_profile(profile) << "\n";
    return 0;
  }
  std::cout << "per-stage classicality (level " << opts.level << ", epsilon " << fmt(cfg.epsilon)
            << ", grid " << fmt(cfg.grid) << ")\n";
  for (const auto& e : profile) {
    std::cout << "stage " << e.stage << ": entanglement " << fmt(e.entropy_nats) << " nats ("
              << fmt(e.entropy_bits) << " bits), " << e.passing << "/" << e.candidates_checked
              << " bases pass\n";
    if (e.best_nontrivial) {
      std::cout << "  best nontrivial:\n";
      print_result_line(*e.best_nontrivial);
    } else if (e.best_any) {
      std::cout << "  no nontrivial local extension at this grid/epsilon; best trivial:\n";
      print_result_line(*e.best_any);
    } else {
      std::cout << "  no local extension at this grid/epsilon\n";
    }
  }
  return 0;
}

// ---- simulate ----

int cmd_simulate(const std::string& path, const CommonOpts& opts) {
  HistoryFamily family = io::parse_family(read_input(path), loader_relative_to(path));
  TransitionChain chain = compile_chain(family, /*require_consistent=*/false);
  Distribution classical = run_chain(chain);
  RealVector quantum = family.born_marginal(family.event_count() - 1);
  SumRuleReport sum_rule = verify_sum_rule(family, opts.epsilon);
  double diff = (classical.probabilities - quantum).cwiseAbs().maxCoeff();
  bool ok = diff <= opts.epsilon;

  if (opts.output == "json") {
    std::ostringstream os;
    os << "{\"chain\":" << io::serialize_chain(chain)
       << ",\"classical\":" << io::serialize_distribution(classical) << ",\"quantum\":[";
    for (Index i = 0; i < quantum.size(); ++i) os << (i ? "," : "") << fmt(quantum(i));
    os << "],\"max_final_difference\":" << fmt(diff)
       << ",\"sum_rule\":" << io::serialize_report(sum_rule)
       << ",\"match\":" << (ok ? "true" : "false") << "}";
    std::cout << os.str() << "\n";
  } else {
    std::cout << "final outcome | quantum | classical chain\n";
    for (Index i = 0; i < quantum.size(); ++i) {
      std::string label =
          i < static_cast<Index>(classical.labels.size()) ? classical.labels[i] : std::to_string(i);
      std::cout << "  " << label << "   " << fmt(quantum(i)) << "   "
                << fmt(classical.probabilities(i)) << "\n";
    }
    std::cout << "max difference " << fmt(diff) << " -> "
              << (ok ? "match" : "MISMATCH (family is not computing-consistent)") << "\n";
    std::cout << "stagewise sum rule: " << (sum_rule.passed ? "PASS" : "FAIL")
              << " (max violation " << fmt(sum_rule.max_violation) << ")\n";
  }
  return ok ? 0 : 1;
}

// ---- noise ----

int cmd_noise(const std::string& path, int stage, std::size_t samples, double strength,
              const std::string& basis_spec, bool refocus, const std::string& decoherence_spec,
              const CommonOpts& opts) {
  Circuit circuit = io::parse_circuit(read_input(path));
  if (stage < 0) stage = circuit.stage_count() - 1;
  LocalBasis consistent = parse_basis_arg(basis_spec, circuit.qubit_count());

  if (refocus) {
    if (decoherence_spec.empty())
      throw io::ParseError("--decoherence-basis", "required with --refocus");
    LocalBasis known = parse_basis_arg(decoherence_spec, circuit.qubit_count());
    RefocusedCircuit rf = refocus_known_basis(circuit, stage, known, consistent);
    RealVector clean = one_event_family(circuit).born_marginal(0);
    Matrix rho_mid = rf.circuit.density_at(rf.noise_stage);
    Matrix noisy = dephase_raw(rho_mid, DephasingChannel{known, strength, {}});
    Matrix rest = rf.circuit.unitary_between(rf.noise_stage, rf.circuit.stage_count());
    Matrix out = rest * noisy * rest.adjoint();
    RealVector damaged(clean.size());
    for (Index k = 0; k < clean.size(); ++k)
      damaged(k) = clamp_probability((circuit.final_set().projector(k) * out).trace().real());
    double err = (damaged - clean).cwiseAbs().maxCoeff();
    bool ok = err <= opts.epsilon;
    if (opts.output == "json") {
      std::cout << "{\"refocused\":true,\"stage\":" << stage << ",\"strength\":" << fmt(strength)
                << ",\"final_error\":" << fmt(err) << ",\"protected\":" << (ok ? "true" : "false")
                << "}\n";
    } else {
      std::cout << "refocused dephasing in the known basis at stage " << stage
                << ": final-distribution error " << fmt(err) << " -> "
                << (ok ? "protected" : "NOT protected") << "\n";
    }
    return ok ? 0 : 1;
  }

  NoiseReport rep =
      run_robustness_experiment(circuit, stage, consistent, samples, opts.seed, strength,
                                opts.threads);
  if (opts.output == "json") {
    std::cout << io::serialize_report(rep) << "\n";
  } else {
    std::cout << "robustness at stage " << rep.stage << " over " << rep.samples
              << " random local bases (seed " << rep.rng_seed << ", strength "
              << fmt(rep.strength) << ")\n";
    std::cout << "  H0 (no pre-measurement)   " << fmt(rep.h0) << " +- " << fmt(3 * rep.h0_sem)
              << " nats\n";
    std::cout << "  Hm (with pre-measurement) " << fmt(rep.hm) << " +- " << fmt(3 * rep.hm_sem)
              << " nats\n";
    std::cout << "  KL reduction   " << fmt(rep.reduction) << "\n";
    std::cout << "  chi2 reduction " << fmt(rep.chi2_reduction) << "\n";
    if (rep.support_clamped) std::cout << "  note: some samples hit the support clamp\n";
  }
  return 0;
}

// ---- bounds ----

int cmd_bounds(bool diosi, int rank, Index dim, Index weak_dim, const std::string& emit,
               const CommonOpts& opts) {
  HistoryFamily family = [&] {
    if (weak_dim > 0) return build_weak_bound_family(weak_dim);
    if (!diosi) throw io::ParseError("bounds", "pick --diosi or --weak DIM");
    if (rank < 1 || rank > dim) throw io::ParseError("--rank", "need 1 <= rank <= dim");
    Matrix rho = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank; ++i) rho(i, i) = 1.0 / rank;
    return build_diosi_family(DensityMatrix(std::move(rho)));
  }();

  const int r = family.circuit().initial().rank(1e-12);
  const Index d = family.circuit().dim();
  const std::size_t bound =
      (weak_dim > 0 ? 2 : 1) * static_cast<std::size_t>(r) * static_cast<std::size_t>(d);
  std::size_t count = count_nonzero_histories(family);

  ConsistencyReport weak = check_weak(family, opts.epsilon, opts.threads);
  ConsistencyReport medium = check_medium(family, opts.epsilon, opts.threads);
  ConsistencyReport computing = check_computing(family, opts.epsilon);

  if (!emit.empty()) {
    std::ofstream out(emit);
    out << io::serialize_family(family) << "\n";
    std::cerr << "wrote " << emit << "\n";
  }

  if (opts.output == "json") {
    std::ostringstream os;
    os << "{\"construction\":\"" << (weak_dim > 0 ? "weak" : "diosi") << "\",\"dim\":" << d
       << ",\"rank\":" << r << ",\"nonzero_histories\":" << count << ",\"bound\":" << bound
       << ",\"weak\":" << io::serialize_report(weak)
       << ",\"medium\":" << io::serialize_report(medium)
       << ",\"computing\":" << io::serialize_report(computing);
    if (weak_dim > 0) {
      GreenGraph graph = build_graph(family);
      auto loops = enumerate_all_loop_pairs(graph);
      os << ",\"loops\":[";
      for (size_t i = 0; i < loops.size(); ++i) {
        Complex p = loop_product(graph, loops[i]);
        os << (i ? "," : "") << "[" << fmt(p.real()) << "," << fmt(p.imag()) << "]";
      }
      os << "]";
    }
    os << "}";
    std::cout << os.str() << "\n";
  } else {
    std::cout << (weak_dim > 0 ? "weak-bound" : "diosi") << " construction: dim " << d
              << ", rank " << r << "\n";
    std::cout << "nonzero-probability histories: " << count << "  (bound "
              << (weak_dim > 0 ? "2 r dim = " : "r dim = ") << bound << ")\n";
    print_report("weak     ", weak);
    print_report("medium   ", medium);
    print_report("computing", computing);
    if (weak_dim > 0) {
      GreenGraph graph = build_graph(family);
      auto loops = enumerate_all_loop_pairs(graph);
      std::cout << "loop products:\n";
      for (const auto& pair : loops)
        std::cout << "  " << pair.a.vertices.front() << " -> " << pair.a.vertices.back() << "  "
                  << fmt_complex(loop_product(graph, pair)) << "\n";
    }
  }
  return count <= bound ? 0 : 1;
}

// ---- validate ----

int cmd_validate(const std::string& path, const CommonOpts& opts) {
  std::string text = read_input(path);
  bool is_family = text.find("\"circuit\"") != std::string::npos;
  if (is_family) {
    HistoryFamily family = io::parse_family(text, loader_relative_to(path));
    if (opts.output == "json") {
      std::cout << "{\"valid\":true,\"kind\":\"family\",\"histories\":" << family.history_count()
                << "}\n";
    } else {
      std::cout << "valid family: " << family.history_count() << " histories, "
                << family.event_count() << " events, dim " << family.circuit().dim() << "\n";
    }
  } else {
    Circuit circuit = io::parse_circuit(text);
    if (opts.output == "json") {
      std::cout << "{\"valid\":true,\"kind\":\"circuit\",\"dim\":" << circuit.dim()
                << ",\"stages\":" << circuit.stage_count() << "}\n";
    } else {
      std::cout << "valid circuit: dim " << circuit.dim() << ", " << circuit.stage_count()
                << " gates, " << circuit.final_set().size() << " final outcomes\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent-histories classicality analysis for small quantum circuits"};
  app.require_subcommand(1);

  CommonOpts opts;
  opts.threads = default_threads();

  std::string input;
  std::string dot_path;
  std::string emit_path;
  std::string basis_spec = "computational";
  std::string decoherence_spec;
  bool refocus = false;
  int stage = -1;
  std::size_t samples = 20000;
  double strength = 1.0;
  SearchConfig search_cfg;
  bool diosi = false;
  int rank = 1;
  Index dim = 4;
  Index weak_dim = 0;

  auto* validate = app.add_subcommand("validate", "parse a circuit or family file");
  validate->add_option("file", input, "input file or -")->required();
  add_common(validate, opts);

  auto* analyze = app.add_subcommand("analyze", "probabilities and all consistency verdicts");
  analyze->add_option("file", input, "family file or -")->required();
  add_common(analyze, opts);

  auto* graph = app.add_subcommand("graph", "Green-function graph and loop products");
  graph->add_option("file", input, "family file or -")->required();
  graph->add_option("--dot", dot_path, "write DOT text here");
  add_common(graph, opts);

  auto* search = app.add_subcommand("search", "local consistent extensions at one stage");
  search->add_option("file", input, "circuit file or -")->required();
  search->add_option("--stage", search_cfg.stage, "insertion stage")->required();
  search->add_option("--grid", search_cfg.grid, "Bloch-angle grid step (radians)");
  search->add_option("--joint-max", search_cfg.joint_block_max, "max qubits per joint block");
  search->add_option("--max-results", search_cfg.max_results, "cap on returned bases");
  search->add_flag("--require-nontrivial", search_cfg.require_nontrivial,
                   "drop trivial extensions");
  add_common(search, opts);

  auto* profile = app.add_subcommand("profile", "per-stage classicality summary");
  profile->add_option("file", input, "circuit file or -")->required();
  profile->add_option("--grid", search_cfg.grid, "Bloch-angle grid step (radians)");
  profile->add_option("--joint-max", search_cfg.joint_block_max, "max qubits per joint block");
  add_common(profile, opts);

  auto* simulate = app.add_subcommand("simulate", "quantum vs stochastic-chain distributions");
  simulate->add_option("file", input, "family file or -")->required();
  add_common(simulate, opts);

  auto* noise = app.add_subcommand("noise", "dephasing robustness experiments");
  noise->add_option("file", input, "circuit file or -")->required();
  noise->add_option("--stage", stage, "decoherence stage (default: before the last gate)");
  noise->add_option("--samples", samples, "Monte Carlo samples");
  noise->add_option("--strength", strength, "dephasing strength in [0,1]");
  noise->add_option("--basis", basis_spec,
                    "consistent basis: computational|bell|theta,phi;theta,phi;...");
  noise->add_flag("--refocus", refocus, "check the known-basis refocusing scheme");
  noise->add_option("--decoherence-basis", decoherence_spec,
                    "known decoherence basis for --refocus");
  add_common(noise, opts);

  auto* bounds = app.add_subcommand("bounds", "history-count bound constructions");
  bounds->add_flag("--diosi", diosi, "medium-consistency bound family");
  bounds->add_option("--rank", rank, "initial-state rank for --diosi");
  bounds->add_option("--dim", dim, "dimension for --diosi");
  bounds->add_option("--weak", weak_dim, "weak-consistency bound family of this even dimension");
  bounds->add_option("--emit", emit_path, "write the constructed family to this file");
  add_common(bounds, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(input, opts);
    if (analyze->parsed()) return cmd_analyze(input, opts);
    if (graph->parsed()) return cmd_graph(input, dot_path, opts);
    if (search->parsed()) return cmd_search(input, search_cfg, opts);
    if (profile->parsed()) return cmd_profile(input, search_cfg, opts);
    if (simulate->parsed()) return cmd_simulate(input, opts);
    if (noise->parsed())
      return cmd_noise(input, stage, samples, strength, basis_spec, refocus, decoherence_spec,
                       opts);
    if (bounds->parsed()) return cmd_bounds(diosi, rank, dim, weak_dim, emit_path, opts);
  } catch (const io::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
