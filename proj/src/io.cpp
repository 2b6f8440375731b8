#include "histoq/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "histoq/gates.hpp"

namespace histoq::io {

using nlohmann::json;

const char* const kEntropyUnitsNote =
    "entropy values are reported in both natural-log units (nats) and base-2 units (bits); "
    "the two differ by a factor of ln 2";

namespace {

// ---- emission helpers: stable key order, floats at 17 significant digits ----

void emit_double(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
  // bare integers still parse as numbers; keep them as-is
}

void emit_complex(std::ostream& os, Complex z) {
  os << '[';
  emit_double(os, z.real());
  os << ',';
  emit_double(os, z.imag());
  os << ']';
}

void emit_vector(std::ostream& os, const Vector& v) {
  os << '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    emit_complex(os, v(i));
  }
  os << ']';
}

void emit_matrix(std::ostream& os, const Matrix& m) {
  os << '[';
  for (Index r = 0; r < m.rows(); ++r) {
    if (r) os << ',';
    os << '[';
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      emit_complex(os, m(r, c));
    }
    os << ']';
  }
  os << ']';
}

void emit_real_vector(std::ostream& os, const RealVector& v) {
  os << '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    emit_double(os, v(i));
  }
  os << ']';
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void emit_labels(std::ostream& os, const std::vector<std::string>& labels) {
  os << '[';
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ',';
    os << quote(labels[i]);
  }
  os << ']';
}

void emit_consistency(std::ostream& os, const ConsistencyReport& rep) {
  os << "{\"level\":" << quote(to_string(rep.level)) << ",\"passed\":"
     << (rep.passed ? "true" : "false") << ",\"max_violation\":";
  emit_double(os, rep.max_violation);
  os << ",\"epsilon\":";
  emit_double(os, rep.epsilon);
  os << ",\"witnesses\":[";
  for (size_t i = 0; i < rep.witnesses.size(); ++i) {
    if (i) os << ',';
    os << "{\"alpha\":" << rep.witnesses[i].alpha << ",\"beta\":" << rep.witnesses[i].beta
       << ",\"value\":";
    emit_double(os, rep.witnesses[i].value);
    os << '}';
  }
  os << "]}";
}

void emit_search_result(std::ostream& os, const SearchResult& r) {
  os << "{\"basis\":" << quote(r.basis.describe()) << ",\"local\":" << (r.local ? "true" : "false")
     << ",\"trivial\":" << (r.trivial ? "true" : "false") << ",\"report\":";
  emit_consistency(os, r.report);
  os << ",\"entropy_nats\":";
  emit_double(os, r.entropy_nats);
  os << ",\"entropy_bits\":";
  emit_double(os, r.entropy_bits);
  os << ",\"units_note\":" << quote(kEntropyUnitsNote) << '}';
}

// ---- parsing helpers ----

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path, what);
}

const json& req(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(path, "complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of [re, im] pairs");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  Matrix m(j.size(), j[0].size());
  for (size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != j[0].size()) fail(path, "ragged matrix");
    for (size_t c = 0; c < row.size(); ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(row[c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

Index parse_bitstring(const std::string& bits, int qubits, const std::string& path) {
  if (static_cast<int>(bits.size()) != qubits)
    fail(path, "bitstring length " + std::to_string(bits.size()) + " does not match qubit count " +
                   std::to_string(qubits));
  Index idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') fail(path, "bitstring may only contain 0 and 1");
    idx = (idx << 1) | (c == '1' ? 1 : 0);
  }
  return idx;
}

StateVector parse_pure_state(const json& j, Index dim, int qubits, const std::string& path) {
  try {
    if (j.is_string()) {
      if (qubits < 1) fail(path, "bitstring initial states need a qubit register");
      return StateVector::basis_state(dim, parse_bitstring(j.get<std::string>(), qubits, path));
    }
    if (j.is_object() && j.contains("index"))
      return StateVector::basis_state(dim, req(j, "index", path).get<Index>());
    if (j.is_array()) {
      Vector v = parse_vector(j, path);
      if (v.size() != dim) fail(path, "amplitude list has wrong dimension");
      return StateVector(std::move(v));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a bitstring, {\"index\": k}, or an amplitude list");
}

InitialState parse_initial(const json& j, Index dim, int qubits, const std::string& path) {
  try {
    if (j.is_object() && j.contains("pseudopure")) {
      const json& p = j["pseudopure"];
      StateVector psi = parse_pure_state(req(p, "state", path + ".pseudopure"), dim, qubits,
                                         path + ".pseudopure.state");
      double nu = req(p, "nu", path + ".pseudopure").get<double>();
      return InitialState(pseudopure(psi, nu));
    }
    if (j.is_object() && j.contains("density"))
      return InitialState(DensityMatrix(parse_matrix(j["density"], path + ".density")));
    return InitialState(parse_pure_state(j, dim, qubits, path));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

ProjectorSet parse_basis_spec(const json& j, Index dim, int qubits, const std::string& path) {
  try {
    if (j.is_string()) {
      std::string name = j.get<std::string>();
      if (name == "computational") return ProjectorSet::computational(dim);
      if (name == "bell") {
        if (dim != 4) fail(path, "the bell basis needs dimension 4");
        return ProjectorSet::bell();
      }
      fail(path, "unknown basis name '" + name + "'");
    }
    if (j.is_object() && j.contains("angles")) {
      if (qubits < 1) fail(path, "angle bases need a qubit register");
      const json& arr = j["angles"];
      if (!arr.is_array() || static_cast<int>(arr.size()) != qubits)
        fail(path, "need one {theta, phi} entry per qubit");
      std::vector<BlochAngles> angles;
      for (const auto& a : arr)
        angles.push_back({req(a, "theta", path).get<double>(), req(a, "phi", path).get<double>()});
      return LocalBasis::product(angles).to_projector_set();
    }
    if (j.is_object() && j.contains("projectors")) {
      std::vector<Matrix> ps;
      for (const auto& p : j["projectors"]) ps.push_back(parse_matrix(p, path + ".projectors"));
      return ProjectorSet(std::move(ps));
    }
    if (j.is_array()) {
      std::vector<Vector> vs;
      for (size_t i = 0; i < j.size(); ++i)
        vs.push_back(parse_vector(j[i], path + "[" + std::to_string(i) + "]"));
      for (const auto& v : vs)
        if (v.size() != dim) fail(path, "basis vector has wrong dimension");
      return ProjectorSet::from_basis(vs);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected \"computational\", \"bell\", {\"angles\": ...}, or a vector list");
}

Circuit parse_circuit_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "circuit must be an object");
  if (req(j, "format", path).get<int>() != 1) fail(path + ".format", "unsupported format");

  Index dim = 0;
  int qubits = -1;
  if (j.contains("qubits")) {
    qubits = j["qubits"].get<int>();
    if (qubits < 1 || qubits > 20) fail(path + ".qubits", "qubit count out of range");
    dim = Index{1} << qubits;
  } else if (j.contains("dim")) {
    dim = j["dim"].get<Index>();
    if (dim < 1) fail(path + ".dim", "dimension out of range");
  } else {
    fail(path, "need either 'qubits' or 'dim'");
  }

  InitialState initial = parse_initial(req(j, "initial", path), dim, qubits, path + ".initial");

  std::vector<Stage> stages;
  const json& st = req(j, "stages", path);
  if (!st.is_array()) fail(path + ".stages", "must be an array");
  for (size_t k = 0; k < st.size(); ++k) {
    const std::string spath = path + ".stages[" + std::to_string(k) + "]";
    const json& s = st[k];
    try {
      if (s.contains("gate")) {
        if (qubits < 1) fail(spath, "named gates need a qubit register");
        std::vector<int> targets = req(s, "targets", spath).get<std::vector<int>>();
        stages.push_back(named_stage(s["gate"].get<std::string>(), targets, qubits));
      } else if (s.contains("matrix")) {
        Matrix m = parse_matrix(s["matrix"], spath + ".matrix");
        if (s.contains("targets")) {
          if (qubits < 1) fail(spath, "targeted matrices need a qubit register");
          std::vector<int> targets = s["targets"].get<std::vector<int>>();
          Stage stage = dense_stage(gates::embed(m, targets, qubits));
          stage.targets = targets;
          stages.push_back(std::move(stage));
        } else {
          if (m.rows() != dim) fail(spath, "matrix has wrong dimension");
          stages.push_back(dense_stage(std::move(m)));
        }
      } else {
        fail(spath, "stage needs 'gate' or 'matrix'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(spath, e.what());
    }
  }

  ProjectorSet final_set = parse_basis_spec(req(j, "final", path), dim, qubits, path + ".final");
  try {
    return Circuit(std::move(initial), std::move(stages), std::move(final_set));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("circuit", e.what());
  }
  return parse_circuit_json(j, "circuit");
}

HistoryFamily parse_family(const std::string& text, const FileLoader& loader) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("family", e.what());
  }
  if (!j.is_object()) throw ParseError("family", "must be an object");
  if (req(j, "format", "family").get<int>() != 1)
    throw ParseError("family.format", "unsupported format");

  const json& cj = req(j, "circuit", "family");
  Circuit circuit = [&] {
    if (cj.is_string()) {
      if (!loader) throw ParseError("family.circuit", "file references are not available here");
      return parse_circuit(loader(cj.get<std::string>()));
    }
    return parse_circuit_json(cj, "family.circuit");
  }();

  std::vector<Insertion> insertions;
  if (j.contains("insertions")) {
    const json& arr = j["insertions"];
    if (!arr.is_array()) throw ParseError("family.insertions", "must be an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "family.insertions[" + std::to_string(i) + "]";
      int stage = req(arr[i], "stage", path).get<int>();
      ProjectorSet set = parse_basis_spec(req(arr[i], "basis", path), circuit.dim(),
                                          circuit.qubit_count(), path + ".basis");
      insertions.push_back({stage, std::move(set)});
    }
  }
  std::sort(insertions.begin(), insertions.end(),
            [](const Insertion& a, const Insertion& b) { return a.stage < b.stage; });
  try {
    return HistoryFamily(std::move(circuit), std::move(insertions));
  } catch (const std::exception& e) {
    throw ParseError("family", e.what());
  }
}

std::string serialize_circuit(const Circuit& circuit) {
  std::ostringstream os;
  os << "{\"format\":1,";
  if (circuit.qubit_count() > 0)
    os << "\"qubits\":" << circuit.qubit_count() << ',';
  else
    os << "\"dim\":" << circuit.dim() << ',';

  os << "\"initial\":";
  if (circuit.initial().is_pure()) {
    emit_vector(os, circuit.initial().pure_vector().amplitudes());
  } else {
    os << "{\"density\":";
    emit_matrix(os, circuit.initial().density().matrix());
    os << '}';
  }

  os << ",\"stages\":[";
  for (int k = 0; k < circuit.stage_count(); ++k) {
    if (k) os << ',';
    const Stage& s = circuit.stages()[k];
    if (!s.name.empty()) {
      os << "{\"gate\":" << quote(s.name) << ",\"targets\":[";
      for (size_t t = 0; t < s.targets.size(); ++t) os << (t ? "," : "") << s.targets[t];
      os << "]}";
    } else {
      os << "{\"matrix\":";
      emit_matrix(os, s.unitary);
      os << '}';
    }
  }
  os << "],\"final\":";
  // The computational set round-trips by name; anything else as vectors.
  bool computational = circuit.final_set().is_rank_one();
  if (computational) {
    for (int a = 0; a < circuit.final_set().size() && computational; ++a) {
      Vector v = circuit.final_set().rank1_vector(a);
      for (Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i) - (i == a ? 1.0 : 0.0)) > kStateTol) computational = false;
    }
    if (circuit.final_set().size() != circuit.dim()) computational = false;
  }
  if (computational) {
    os << "\"computational\"";
  } else if (circuit.final_set().is_rank_one()) {
    os << '[';
    for (int a = 0; a < circuit.final_set().size(); ++a) {
      if (a) os << ',';
      emit_vector(os, circuit.final_set().rank1_vector(a));
    }
    os << ']';
  } else {
    os << "{\"projectors\":[";
    for (int a = 0; a < circuit.final_set().size(); ++a) {
      if (a) os << ',';
      emit_matrix(os, circuit.final_set().projector(a));
    }
    os << "]}";
  }
  os << '}';
  return os.str();
}

std::string serialize_family(const HistoryFamily& family) {
  std::ostringstream os;
  os << "{\"format\":1,\"circuit\":" << serialize_circuit(family.circuit()) << ",\"insertions\":[";
  for (size_t i = 0; i < family.insertions().size(); ++i) {
    if (i) os << ',';
    const Insertion& ins = family.insertions()[i];
    os << "{\"stage\":" << ins.stage << ",\"basis\":";
    if (ins.set.is_rank_one()) {
      os << '[';
      for (int a = 0; a < ins.set.size(); ++a) {
        if (a) os << ',';
        emit_vector(os, ins.set.rank1_vector(a));
      }
      os << ']';
    } else {
      os << "{\"projectors\":[";
      for (int a = 0; a < ins.set.size(); ++a) {
        if (a) os << ',';
        emit_matrix(os, ins.set.projector(a));
      }
      os << "]}";
    }
    os << '}';
  }
  os << "]}";
  return os.str();
}

std::string serialize_report(const ConsistencyReport& report) {
  std::ostringstream os;
  emit_consistency(os, report);
  return os.str();
}

std::string serialize_report(const NoiseReport& r) {
  std::ostringstream os;
  os << "{\"h0\":";
  emit_double(os, r.h0);
  os << ",\"hm\":";
  emit_double(os, r.hm);
  os << ",\"reduction\":";
  emit_double(os, r.reduction);
  os << ",\"h0_sem\":";
  emit_double(os, r.h0_sem);
  os << ",\"hm_sem\":";
  emit_double(os, r.hm_sem);
  os << ",\"chi2\":{\"h0\":";
  emit_double(os, r.chi2_h0);
  os << ",\"hm\":";
  emit_double(os, r.chi2_hm);
  os << ",\"reduction\":";
  emit_double(os, r.chi2_reduction);
  os << ",\"h0_sem\":";
  emit_double(os, r.chi2_h0_sem);
  os << ",\"hm_sem\":";
  emit_double(os, r.chi2_hm_sem);
  os << "},\"samples\":" << r.samples << ",\"rng_seed\":" << r.rng_seed
     << ",\"stage\":" << r.stage << ",\"strength\":";
  emit_double(os, r.strength);
  os << ",\"support_clamped\":" << (r.support_clamped ? "true" : "false") << '}';
  return os.str();
}

std::string serialize_report(const SumRuleReport& r) {
  std::ostringstream os;
  os << "{\"passed\":" << (r.passed ? "true" : "false") << ",\"max_violation\":";
  emit_double(os, r.max_violation);
  os << ",\"stages\":[";
  for (size_t i = 0; i < r.stages.size(); ++i) os << (i ? "," : "") << r.stages[i];
  os << "],\"per_stage\":[";
  for (size_t i = 0; i < r.per_stage.size(); ++i) {
    if (i) os << ',';
    emit_double(os, r.per_stage[i]);
  }
  os << "]}";
  return os.str();
}

std::string serialize_results(const std::vector<SearchResult>& results) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < results.size(); ++i) {
    if (i) os << ',';
    emit_search_result(os, results[i]);
  }
  os << ']';
  return os.str();
}

std::string serialize_profile(const std::vector<ProfileEntry>& entries) {
  std::ostringstream os;
  os << "{\"stages\":[";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ',';
    const ProfileEntry& e = entries[i];
    os << "{\"stage\":" << e.stage << ",\"entropy_nats\":";
    emit_double(os, e.entropy_nats);
    os << ",\"entropy_bits\":";
    emit_double(os, e.entropy_bits);
    os << ",\"candidates\":" << e.candidates_checked << ",\"passing\":" << e.passing
       << ",\"best_nontrivial\":";
    if (e.best_nontrivial)
      emit_search_result(os, *e.best_nontrivial);
    else
      os << "null";
    os << ",\"best_any\":";
    if (e.best_any)
      emit_search_result(os, *e.best_any);
    else
      os << "null";
    os << '}';
  }
  os << "],\"units_note\":" << quote(kEntropyUnitsNote) << '}';
  return os.str();
}

std::string serialize_chain(const TransitionChain& chain) {
  std::ostringstream os;
  os << "{\"stages\":[";
  for (size_t i = 0; i < chain.stages.size(); ++i) os << (i ? "," : "") << chain.stages[i];
  os << "],\"initial\":{\"labels\":";
  emit_labels(os, chain.initial.labels);
  os << ",\"probabilities\":";
  emit_real_vector(os, chain.initial.probabilities);
  os << "},\"matrices\":[";
  for (size_t m = 0; m < chain.matrices.size(); ++m) {
    if (m) os << ',';
    const RealMatrix& t = chain.matrices[m].entries;
    os << '[';
    for (Index r = 0; r < t.rows(); ++r) {
      if (r) os << ',';
      os << '[';
      for (Index c = 0; c < t.cols(); ++c) {
        if (c) os << ',';
        emit_double(os, t(r, c));
      }
      os << ']';
    }
    os << ']';
  }
  os << "],\"final_labels\":";
  emit_labels(os, chain.final_labels);
  os << '}';
  return os.str();
}

std::string serialize_distribution(const Distribution& dist) {
  std::ostringstream os;
  os << "{\"labels\":";
  emit_labels(os, dist.labels);
  os << ",\"probabilities\":";
  emit_real_vector(os, dist.probabilities);
  os << '}';
  return os.str();
}

}  // namespace histoq::io
