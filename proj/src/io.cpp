#include "coblab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coblab {

namespace {

std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

void write_value(std::ostringstream& os, const json& j, int indent, int depth) {
  const auto pad = [&](int d) {
    if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        os << json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        write_value(os, it.value(), indent, depth + 1);
      }
      pad(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        first = false;
        pad(depth + 1);
        write_value(os, e, indent, depth + 1);
      }
      pad(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

json parts_json(const std::vector<Space>& parts) {
  json arr = json::array();
  for (const auto& p : parts) arr.push_back(space_to_json(p));
  return arr;
}

json index_to_json(const Space& leaf, const Index& idx) {
  return std::visit(
      [&](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ShiftIndex>) {
          return json::array({k.level, k.slot});
        } else if constexpr (std::is_same_v<K, FourierIndex>) {
          if (auto m = k.mode(leaf.base())) return *m;
          return k.to_string(leaf.base());
        } else {
          return k.coordinate;
        }
      },
      idx.key);
}

FourierIndex fourier_index_from_json(const json& j, int base) {
  if (j.is_number_integer()) return FourierIndex::from_mode(j.get<std::int64_t>(), base);
  if (j.is_string()) {
    // "root*base^power"
    const auto s = j.get<std::string>();
    long long root = 0;
    int b = 0;
    unsigned power = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lld*%d^%u%c", &root, &b, &power, &tail) != 3 || b != base) {
      throw Error("malformed Fourier mode '" + s + "'");
    }
    FourierIndex idx = FourierIndex::from_mode(root, base);
    if (idx.power != 0) throw Error("Fourier mode root must not be divisible by the base");
    idx.power = power;
    return idx;
  }
  throw Error("Fourier index must be an integer mode");
}

Index index_from_json(const Space& space, const json& entry) {
  const auto part = entry.value("part", 0u);
  const Space& leaf = space.leaf(part);
  const json& j = entry.at("index");
  switch (leaf.kind()) {
    case Space::Kind::shift:
      if (j.is_array()) {
        if (j.size() != 2) throw Error("shift index must be [level, slot]");
        return Index(ShiftIndex{j[0].get<std::uint64_t>(), j[1].get<std::uint32_t>()}, part);
      }
      return Index(ShiftIndex{j.get<std::uint64_t>(), 0}, part);
    case Space::Kind::fourier:
      return Index(fourier_index_from_json(j, leaf.base()), part);
    case Space::Kind::dense:
      return Index(DenseIndex{j.get<std::uint32_t>()}, part);
    case Space::Kind::sum:
      break;
  }
  throw Error("invalid index");
}

std::vector<cplx> complex_list(const json& j) {
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

Eigen::MatrixXcd matrix_from_json(const json& op) {
  const json& m = op.at("matrix");
  if (!m.is_array() || m.empty()) throw Error("matrix must be a nonempty array");
  // Nested rows [[z, z], [z, z]] or flat row-major [z, z, z, z].
  const bool nested = m[0].is_array() && !m[0].empty() &&
                      (m[0][0].is_array() || m[0][0].is_object());
  std::vector<cplx> flat;
  std::size_t d = 0;
  if (nested) {
    d = m.size();
    for (const auto& row : m) {
      if (row.size() != d) throw Error("matrix must be square");
      for (const auto& z : row) flat.push_back(complex_from_json(z));
    }
  } else {
    flat = complex_list(m);
    d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
    if (op.contains("dimension")) d = op.at("dimension").get<std::size_t>();
    if (d * d != flat.size()) throw Error("matrix entry count is not a square");
  }
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = flat[i * d + k];
  }
  return a;
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(source + ":" + position_of(text, e.byte) + ": malformed JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  write_value(os, j, indent, 0);
  return os.str();
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  throw Error("complex value must be a number, [re, im] or {\"re\", \"im\"}");
}

json space_to_json(const Space& space) {
  json j;
  switch (space.kind()) {
    case Space::Kind::shift:
      j["space"] = "shift";
      j["multiplicity"] = space.multiplicity();
      break;
    case Space::Kind::fourier:
      j["space"] = "fourier";
      j["base"] = space.base();
      break;
    case Space::Kind::dense:
      j["space"] = "dense";
      j["dimension"] = space.dimension();
      break;
    case Space::Kind::sum:
      j["space"] = "sum";
      j["parts"] = parts_json(space.parts());
      break;
  }
  return j;
}

Space space_from_json(const json& j) {
  const auto kind = j.at("space").get<std::string>();
  if (kind == "shift") return Space::shift(j.value("multiplicity", 1u));
  if (kind == "fourier") return Space::fourier(j.value("base", 2));
  if (kind == "dense") return Space::dense(j.at("dimension").get<std::uint32_t>());
  if (kind == "sum") {
    std::vector<Space> parts;
    for (const auto& p : j.at("parts")) parts.push_back(space_from_json(p));
    return Space::sum(std::move(parts));
  }
  throw Error("unknown space '" + kind + "'");
}

json vector_to_json(const CoeffVector& v) {
  json j = space_to_json(v.space());
  json entries = json::array();
  for (const auto& [idx, c] : v.entries()) {
    json e;
    e["index"] = index_to_json(v.space().leaf(idx.part), idx);
    if (v.space().kind() == Space::Kind::sum) e["part"] = idx.part;
    e["re"] = c.real();
    e["im"] = c.imag();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

CoeffVector vector_from_json(const json& j, int fallback_base) {
  json spec = j;
  if (spec.value("space", "") == "fourier" && !spec.contains("base")) spec["base"] = fallback_base;
  CoeffVector v(space_from_json(spec));
  for (const auto& e : j.at("entries")) {
    v.add(index_from_json(v.space(), e), {e.value("re", 0.0), e.value("im", 0.0)});
  }
  return v;
}

json operator_to_json(const OperatorSpec& op) {
  return std::visit(
      [&](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        json j;
        if constexpr (std::is_same_v<K, UnilateralShift>) {
          j["kind"] = "shift";
          j["multiplicity"] = k.multiplicity;
        } else if constexpr (std::is_same_v<K, DoublingKoopman>) {
          j["kind"] = "doubling";
          j["base"] = k.base;
        } else if constexpr (std::is_same_v<K, DiagonalUnitary>) {
          j["kind"] = "diag_unitary";
          j["phases"] = json::array();
          for (const auto& p : k.phases) j["phases"].push_back(complex_to_json(p));
        } else if constexpr (std::is_same_v<K, WeightedShift>) {
          j["kind"] = "weighted_shift";
          j["weights"] = json::array();
          for (const auto& w : k.weights) j["weights"].push_back(complex_to_json(w));
        } else if constexpr (std::is_same_v<K, MatrixContraction>) {
          j["kind"] = "matrix";
          j["dimension"] = k.dimension();
          j["matrix"] = json::array();
          const auto& a = k.matrix();
          for (Eigen::Index r = 0; r < a.rows(); ++r) {
            for (Eigen::Index c = 0; c < a.cols(); ++c) j["matrix"].push_back(complex_to_json(a(r, c)));
          }
        } else {
          j["kind"] = "direct_sum";
          j["parts"] = json::array();
          for (const auto& p : k.parts) j["parts"].push_back(operator_to_json(p));
        }
        return j;
      },
      op.kind());
}

OperatorSpec operator_from_json(const json& j, double zero_eps) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "shift") return OperatorSpec(UnilateralShift{j.value("multiplicity", 1u)});
  if (kind == "doubling") return OperatorSpec(DoublingKoopman{j.value("base", 2)});
  if (kind == "matrix") return OperatorSpec(MatrixContraction(matrix_from_json(j), zero_eps));
  if (kind == "weighted_shift") return OperatorSpec(WeightedShift{complex_list(j.at("weights"))}, zero_eps);
  if (kind == "diag_unitary") return OperatorSpec(DiagonalUnitary{complex_list(j.at("phases"))}, zero_eps);
  if (kind == "direct_sum") {
    std::vector<OperatorSpec> parts;
    for (const auto& p : j.at("parts")) parts.push_back(operator_from_json(p, zero_eps));
    return direct_sum(std::move(parts));
  }
  throw Error("unknown operator kind '" + kind + "'");
}

json condition_report_to_json(const ConditionReport& r) {
  json j;
  j["summab_value"] = r.summab_value;
  j["summab_exact"] = r.summab_exact;
  j["summab_divergent"] = r.summab_divergent;
  j["ergodic_limit"] = r.ergodic_limit ? json(*r.ergodic_limit) : json(nullptr);
  j["browder_sup"] = r.browder_sup;
  j["browder_bounded"] = r.browder_bounded;
  j["browder_bounded_up_to"] = r.browder_bounded_up_to;
  j["notes"] = r.notes;
  return j;
}

json solve_result_to_json(const SolveResult<CoeffVector>& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["residual"] = r.residual;
  j["growth_constant"] = r.growth_constant ? json(*r.growth_constant) : json(nullptr);
  j["partial_energy"] = r.partial_energy;
  j["levels"] = r.levels;
  j["diagnostics"] = condition_report_to_json(r.diagnostics);
  j["solution"] = r.solution ? vector_to_json(*r.solution) : json(nullptr);
  if (r.defect_norm) j["defect_norm"] = *r.defect_norm;
  if (r.isometry_gap) j["isometry_gap"] = *r.isometry_gap;
  return j;
}

json wold_split_to_json(const WoldSplit<CoeffVector>& split) {
  json j;
  j["J"] = split.J;
  j["exact"] = split.exact;
  j["components"] = json::array();
  j["component_norms"] = json::array();
  for (const auto& c : split.components) {
    j["components"].push_back(vector_to_json(c));
    j["component_norms"].push_back(norm(c));
  }
  j["residual"] = vector_to_json(split.residual);
  j["residual_norm"] = norm(split.residual);
  return j;
}

json chain_verdict_to_json(const ChainVerdict& v) {
  json j;
  j["solvable"] = v.solvable;
  j["obstructions"] = json::array();
  for (const auto& o : v.obstructions) {
    j["obstructions"].push_back({{"root", o.root}, {"terminal_sum", complex_to_json(o.terminal_sum)}});
  }
  j["g"] = v.g ? vector_to_json(v.g->coeffs()) : json(nullptr);
  j["substitution_residual"] = v.substitution_residual;
  return j;
}

}  // namespace coblab
