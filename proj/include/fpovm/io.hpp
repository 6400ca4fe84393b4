#pragma once

// JSON documents for frames, POVMs, measures, dilations and reports.
//
// Complex scalars are always [re, im] pairs; vectors are arrays of scalars and
// matrices are arrays of rows. emit() writes keys in a fixed order, atoms in
// canonical order and reals with 17 significant digits, so parse(emit(d))
// reproduces d bit for bit.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fpovm/frames.hpp"
#include "fpovm/measure_space.hpp"
#include "fpovm/naimark.hpp"
#include "fpovm/povm.hpp"

namespace fpovm::io {

using Json = nlohmann::ordered_json;

/// Result document of a CLI command. `data` carries command-specific
/// structured output (null when absent).
struct Report {
  std::string command;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<std::pair<std::string, double>> residuals;
  std::optional<std::pair<double, double>> bounds;
  Json data;

  bool flag(const std::string& name) const {
    for (const auto& [k, v] : flags)
      if (k == name) return v;
    throw Error(ErrorKind::schema, "report has no flag '" + name + "'");
  }
  double residual(const std::string& name) const {
    for (const auto& [k, v] : residuals)
      if (k == name) return v;
    throw Error(ErrorKind::schema, "report has no residual '" + name + "'");
  }
};

using Document = std::variant<Frame, FusionFrame, SampledGeneralizedFrame, FramedPOVM, ScalarMeasure,
                              NaimarkRepresentation, Report, VectorValuedMeasure>;

inline const char* kind_of(const Document& d) {
  static constexpr const char* names[] = {"frame",   "fusion_frame", "sampled_generalized_frame", "povm",
                                          "measure", "naimark",      "report",                    "vector_measure"};
  return names[d.index()];
}

// ---------------------------------------------------------------------------
// Parsing helpers

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::schema, path + ": " + what);
}

inline const Json& field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

inline double to_real(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline Index to_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) schema_error(path, "expected a non-negative integer");
  const auto v = j.get<long long>();
  if (v < 0) schema_error(path, "expected a non-negative integer");
  return static_cast<Index>(v);
}

inline Complex to_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected an [re, im] pair");
  return {to_real(j[0], path + "[0]"), to_real(j[1], path + "[1]")};
}

inline std::string to_label(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string label");
  return j.get<std::string>();
}

inline std::vector<std::string> to_labels(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of labels");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_label(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> to_reals(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_real(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline ComplexVector parse_complex_vector(const Json& j, const std::string& path = "$") {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a non-empty array of [re, im] pairs");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = detail::to_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

/// Matrix as an array of rows of [re, im] pairs.
inline ComplexMatrix parse_complex_matrix(const Json& j, const std::string& path = "$") {
  if (!j.is_array() || j.empty()) detail::schema_error(path, "expected a non-empty array of rows");
  if (!j[0].is_array() || j[0].empty()) detail::schema_error(path + "[0]", "expected a non-empty row");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) detail::schema_error(rp, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = detail::to_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
}

namespace detail {

inline std::vector<ComplexVector> to_vectors(const Json& j, const std::string& path, Index dim) {
  if (!j.is_array()) schema_error(path, "expected an array of vectors");
  std::vector<ComplexVector> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    out.push_back(parse_complex_vector(j[k], p));
    if (out.back().size() != dim) schema_error(p, "vector length differs from dim");
  }
  return out;
}

inline std::vector<std::string> atoms_or_default(const Json& doc, std::size_t count) {
  if (auto it = doc.find("atoms"); it != doc.end()) {
    auto labels = to_labels(*it, "$.atoms");
    if (labels.size() != count) schema_error("$.atoms", "atom count differs from the number of entries");
    return labels;
  }
  return DiscreteBorelSpace::default_labels(count);
}

inline Frame parse_frame(const Json& doc) {
  const Index dim = to_count(field(doc, "$", "dim"), "$.dim");
  auto vectors = to_vectors(field(doc, "$", "vectors"), "$.vectors", dim);
  if (vectors.empty()) schema_error("$.vectors", "frame needs at least one vector");
  return Frame(atoms_or_default(doc, vectors.size()), vectors);
}

inline FusionFrame parse_fusion_frame(const Json& doc, const Tolerances& tol) {
  const Index dim = to_count(field(doc, "$", "dim"), "$.dim");
  const Json& members = field(doc, "$", "members");
  if (!members.is_array() || members.empty()) schema_error("$.members", "expected a non-empty array");
  std::vector<std::string> labels;
  std::vector<FusionMember> ms;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const std::string p = "$.members[" + std::to_string(k) + "]";
    const Json& m = members[k];
    if (!m.is_object()) schema_error(p, "expected an object");
    labels.push_back(to_label(field(m, p, "atom"), p + ".atom"));
    FusionMember fm{parse_complex_matrix(field(m, p, "basis"), p + ".basis"),
                    to_real(field(m, p, "weight"), p + ".weight")};
    if (fm.basis.rows() != dim) schema_error(p + ".basis", "basis row count differs from dim");
    ms.push_back(std::move(fm));
  }
  return FusionFrame(dim, labels, ms, tol);
}

inline SampledGeneralizedFrame parse_sampled(const Json& doc) {
  const Index dim = to_count(field(doc, "$", "dim"), "$.dim");
  auto samples = to_vectors(field(doc, "$", "samples"), "$.samples", dim);
  if (samples.empty()) schema_error("$.samples", "need at least one sample");
  auto mu = to_reals(field(doc, "$", "mu"), "$.mu");
  if (mu.size() != samples.size()) schema_error("$.mu", "one weight per sample required");
  return SampledGeneralizedFrame(atoms_or_default(doc, samples.size()), mu, samples);
}

inline FramedPOVM parse_povm(const Json& doc, const Tolerances& tol) {
  const Index dim = to_count(field(doc, "$", "dim"), "$.dim");
  const Json& effects = field(doc, "$", "effects");
  if (!effects.is_object() || effects.empty()) schema_error("$.effects", "expected a non-empty object");
  std::vector<std::string> labels;
  if (doc.contains("atoms")) {
    labels = to_labels(doc["atoms"], "$.atoms");
    if (labels.size() != effects.size()) schema_error("$.atoms", "atoms and effects disagree");
  } else {
    for (auto it = effects.begin(); it != effects.end(); ++it) labels.push_back(it.key());
  }
  std::vector<PositiveOperator> ops;
  for (const auto& label : labels) {
    const std::string p = "$.effects." + label;
    auto it = effects.find(label);
    if (it == effects.end()) schema_error("$.effects", "missing effect for atom '" + label + "'");
    ComplexMatrix m = parse_complex_matrix(*it, p);
    if (m.rows() != dim || m.cols() != dim) schema_error(p, "effect must be dim x dim");
    ops.push_back(PositiveOperator::checked(std::move(m), tol));
  }
  return FramedPOVM::from_labeled(labels, std::move(ops));
}

inline ScalarMeasure parse_measure(const Json& doc) {
  auto weights = to_reals(field(doc, "$", "weights"), "$.weights");
  auto labels = atoms_or_default(doc, weights.size());
  std::vector<double> sorted;
  for (std::size_t idx : canonical_order(labels)) sorted.push_back(weights[idx]);
  return ScalarMeasure(DiscreteBorelSpace(labels), std::move(sorted));
}

inline NaimarkRepresentation parse_naimark(const Json& doc) {
  const Index dim = to_count(field(doc, "$", "dim"), "$.dim");
  const Index sharp = to_count(field(doc, "$", "sharp_dim"), "$.sharp_dim");
  const Json& blocks = field(doc, "$", "blocks");
  if (!blocks.is_object() || blocks.empty()) schema_error("$.blocks", "expected a non-empty object");
  ComplexMatrix v = parse_complex_matrix(field(doc, "$", "V"), "$.V");
  if (v.rows() != dim || v.cols() != sharp) schema_error("$.V", "V must be dim x sharp_dim");
  std::vector<std::string> labels;
  for (auto it = blocks.begin(); it != blocks.end(); ++it) labels.push_back(it.key());
  DiscreteBorelSpace space(labels);
  std::vector<Index> dims(space.size());
  for (std::size_t t = 0; t < space.size(); ++t) {
    dims[t] = to_count(blocks[space.label(t)], "$.blocks." + space.label(t));
  }
  if (auto it = doc.find("offsets"); it != doc.end()) {
    std::vector<Index> offsets(space.size());
    for (std::size_t t = 0; t < space.size(); ++t) {
      offsets[t] = to_count(field(*it, "$.offsets", space.label(t).c_str()), "$.offsets." + space.label(t));
    }
    return NaimarkRepresentation(std::move(space), std::move(v), std::move(offsets), std::move(dims));
  }
  return NaimarkRepresentation::canonical(std::move(space), std::move(v), dims);
}

inline Report parse_report(const Json& doc) {
  Report r;
  const Json& cmd = field(doc, "$", "command");
  if (!cmd.is_string()) schema_error("$.command", "expected a string");
  r.command = cmd.get<std::string>();
  const Json& flags = field(doc, "$", "flags");
  if (!flags.is_object()) schema_error("$.flags", "expected an object");
  for (auto it = flags.begin(); it != flags.end(); ++it) {
    if (!it->is_boolean()) schema_error("$.flags." + it.key(), "expected a boolean");
    r.flags.emplace_back(it.key(), it->get<bool>());
  }
  const Json& residuals = field(doc, "$", "residuals");
  if (!residuals.is_object()) schema_error("$.residuals", "expected an object");
  for (auto it = residuals.begin(); it != residuals.end(); ++it) {
    r.residuals.emplace_back(it.key(), to_real(*it, "$.residuals." + it.key()));
  }
  if (auto it = doc.find("bounds"); it != doc.end()) {
    auto b = to_reals(*it, "$.bounds");
    if (b.size() != 2) schema_error("$.bounds", "expected [A, B]");
    r.bounds = std::make_pair(b[0], b[1]);
  }
  if (auto it = doc.find("data"); it != doc.end()) r.data = *it;
  return r;
}

inline VectorValuedMeasure parse_vector_measure(const Json& doc) {
  const Json& values = field(doc, "$", "values");
  if (!values.is_array() || values.empty()) schema_error("$.values", "expected a non-empty array");
  std::vector<ComplexVector> vs;
  for (std::size_t k = 0; k < values.size(); ++k) vs.push_back(parse_complex_vector(values[k], "$.values[" + std::to_string(k) + "]"));
  auto labels = atoms_or_default(doc, vs.size());
  std::vector<ComplexVector> sorted;
  for (std::size_t idx : canonical_order(labels)) sorted.push_back(vs[idx]);
  return VectorValuedMeasure(DiscreteBorelSpace(labels), std::move(sorted));
}

}  // namespace detail

/// Parses and validates a document. Malformed JSON raises ErrorKind::parse,
/// structural problems ErrorKind::schema (with a field path), and violated
/// module invariants ErrorKind::validation.
inline Document parse(const std::string& text, const Tolerances& tol = {}) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) detail::schema_error("$", "expected a JSON object");
  const Json& kind_j = detail::field(doc, "$", "kind");
  if (!kind_j.is_string()) detail::schema_error("$.kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "frame") return detail::parse_frame(doc);
  if (kind == "fusion_frame") return detail::parse_fusion_frame(doc, tol);
  if (kind == "sampled_generalized_frame") return detail::parse_sampled(doc);
  if (kind == "povm") return detail::parse_povm(doc, tol);
  if (kind == "measure") return detail::parse_measure(doc);
  if (kind == "naimark") return detail::parse_naimark(doc);
  if (kind == "report") return detail::parse_report(doc);
  if (kind == "vector_measure") return detail::parse_vector_measure(doc);
  detail::schema_error("$.kind", "unrecognized kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Emission

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline Json matrix_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json labels_json(const DiscreteBorelSpace& space) {
  Json out = Json::array();
  for (const auto& l : space.atoms()) out.push_back(l);
  return out;
}

inline Json to_json(const Frame& f) {
  Json vectors = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) vectors.push_back(vector_json(f.vector(k)));
  return Json{{"kind", "frame"}, {"dim", f.dim()}, {"atoms", labels_json(f.space())}, {"vectors", std::move(vectors)}};
}

inline Json to_json(const FusionFrame& f) {
  Json members = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    members.push_back(Json{{"atom", f.space().label(k)}, {"weight", f.member(k).weight}, {"basis", matrix_json(f.member(k).basis)}});
  }
  return Json{{"kind", "fusion_frame"}, {"dim", f.dim()}, {"members", std::move(members)}};
}

inline Json to_json(const SampledGeneralizedFrame& g) {
  Json samples = Json::array();
  for (std::size_t k = 0; k < g.size(); ++k) samples.push_back(vector_json(g.sample(k)));
  return Json{{"kind", "sampled_generalized_frame"},
              {"dim", g.dim()},
              {"atoms", labels_json(g.space())},
              {"mu", g.quadrature().weights()},
              {"samples", std::move(samples)}};
}

inline Json to_json(const FramedPOVM& m) {
  Json effects = Json::object();
  for (std::size_t t = 0; t < m.size(); ++t) effects[m.space().label(t)] = matrix_json(m.atom_effect(t).matrix());
  return Json{{"kind", "povm"}, {"dim", m.dim()}, {"atoms", labels_json(m.space())}, {"effects", std::move(effects)}};
}

inline Json to_json(const ScalarMeasure& mu) {
  return Json{{"kind", "measure"}, {"atoms", labels_json(mu.space())}, {"weights", mu.weights()}};
}

inline Json to_json(const NaimarkRepresentation& rep) {
  Json blocks = Json::object();
  for (std::size_t t = 0; t < rep.space().size(); ++t) blocks[rep.space().label(t)] = rep.block_dim(t);
  Json out{{"kind", "naimark"}, {"dim", rep.dim()}, {"sharp_dim", rep.sharp_dim()}, {"blocks", std::move(blocks)}};
  if (!rep.has_canonical_layout()) {
    Json offsets = Json::object();
    for (std::size_t t = 0; t < rep.space().size(); ++t) offsets[rep.space().label(t)] = rep.offset(t);
    out["offsets"] = std::move(offsets);
  }
  out["V"] = matrix_json(rep.synthesis_map());
  return out;
}

inline Json to_json(const Report& r) {
  Json flags = Json::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  Json residuals = Json::object();
  for (const auto& [k, v] : r.residuals) residuals[k] = v;
  Json out{{"kind", "report"}, {"command", r.command}, {"flags", std::move(flags)}, {"residuals", std::move(residuals)}};
  if (r.bounds) out["bounds"] = Json::array({r.bounds->first, r.bounds->second});
  if (!r.data.is_null()) out["data"] = r.data;
  return out;
}

inline Json to_json(const VectorValuedMeasure& rho) {
  Json values = Json::array();
  for (const auto& v : rho.values()) values.push_back(vector_json(v));
  return Json{{"kind", "vector_measure"}, {"atoms", labels_json(rho.space())}, {"values", std::move(values)}};
}

inline Json to_json(const Document& d) {
  return std::visit([](const auto& x) { return to_json(x); }, d);
}

namespace detail {

inline std::string format_real(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::validation, "finite: cannot emit a non-finite real");
  // "-0" would come back as the integer 0
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline bool is_flat(const Json& j) {
  for (const auto& x : j) {
    if (x.is_object()) return false;
  }
  return true;
}

inline void write(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << "  " << Json(it.key()).dump() << ": ";
        write(out, *it, indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (is_flat(j)) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write(out, j[i], indent);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad << "  ";
        write(out, j[i], indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      out << format_real(j.get<double>());
      return;
    default:
      out << j.dump();
      return;
  }
}

}  // namespace detail

/// Canonical text of a JSON value: fixed key order as stored, reals with 17
/// significant digits, trailing newline.
inline std::string emit_json(const Json& j) {
  std::ostringstream out;
  detail::write(out, j, 0);
  out << "\n";
  return out.str();
}

inline std::string emit(const Document& d) { return emit_json(to_json(d)); }

}  // namespace fpovm::io
