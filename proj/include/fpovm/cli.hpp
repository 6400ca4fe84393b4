#pragma once

// Command-line pipeline: one command per invocation, one primary input
// document, optional auxiliary inputs, a report on stdout and an optional
// product document written to --out.
//
// Exit codes: 0 success, 1 failed validation or verification, 2 malformed
// input (parse, schema or usage), 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fpovm/duality.hpp"
#include "fpovm/frames.hpp"
#include "fpovm/io.hpp"
#include "fpovm/multiplicity.hpp"
#include "fpovm/naimark.hpp"
#include "fpovm/povm.hpp"
#include "fpovm/radon_nikodym.hpp"

namespace fpovm::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kBadInput = 2, kNumerical = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::schema:
      return kBadInput;
    case ErrorKind::numerical_failure:
      return kNumerical;
    default:
      return kFailed;
  }
}

struct RunConfig {
  std::string command;
  std::string in;
  std::string measure;
  std::string unitary;
  std::string vector;
  std::string out;
  Tolerances tol;
  std::uint64_t seed = 1;
};

struct CommandOutput {
  io::Report report;
  std::optional<std::string> product;  ///< canonical text written to --out
  int code = kOk;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"check", "bounds",     "dual",       "dilate",  "decompose",
                                                 "rn",    "analyze",    "synthesize", "isomorph"};
  return names;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::validation, "cannot write '" + path + "'");
  out << text;
}

inline std::string require_path(const std::string& path, const char* flag, const std::string& command) {
  if (path.empty()) throw Error(ErrorKind::schema, command + " requires " + flag);
  return path;
}

[[noreturn]] inline void wrong_kind(const std::string& command, const io::Document& doc) {
  throw Error(ErrorKind::schema, command + " does not accept documents of kind '" + io::kind_of(doc) + "'");
}

inline FramedPOVM as_povm(const io::Document& doc, const std::string& command) {
  if (auto* f = std::get_if<Frame>(&doc)) return povm_from_frame(*f);
  if (auto* f = std::get_if<FusionFrame>(&doc)) return povm_from_fusion_frame(*f);
  if (auto* g = std::get_if<SampledGeneralizedFrame>(&doc)) return povm_from_sampled_generalized_frame(*g);
  if (auto* m = std::get_if<FramedPOVM>(&doc)) return *m;
  if (auto* r = std::get_if<NaimarkRepresentation>(&doc)) return povm_from_representation(*r);
  wrong_kind(command, doc);
}

/// Standard basis vectors plus one seeded Gaussian vector.
inline std::vector<ComplexVector> probe_vectors(Index dim, std::uint64_t seed) {
  std::vector<ComplexVector> out;
  for (Index i = 0; i < dim; ++i) out.push_back(ComplexVector::Unit(dim, i));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector g(dim);
  for (Index i = 0; i < dim; ++i) g(i) = Complex(n(rng), n(rng));
  out.push_back(g);
  return out;
}

inline io::Json labels_json(const DiscreteBorelSpace& space, const std::vector<std::size_t>& atoms) {
  io::Json out = io::Json::array();
  for (std::size_t t : atoms) out.push_back(space.label(t));
  return out;
}

inline CommandOutput cmd_check(const RunConfig& cfg, const io::Document& doc) {
  const FramedPOVM m = as_povm(doc, cfg.command);
  const PovmReport pr = validate(m, cfg.tol);
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"is_povm", pr.is_povm},     {"framed", pr.framed},         {"tight", pr.tight},
                      {"probability", pr.probability}, {"spectral", pr.spectral}};
  out.report.residuals = pr.residuals;
  if (pr.bounds) out.report.bounds = std::make_pair(pr.bounds->lower, pr.bounds->upper);
  out.code = pr.is_povm && pr.framed ? kOk : kFailed;
  return out;
}

inline CommandOutput cmd_bounds(const RunConfig& cfg, const io::Document& doc) {
  FrameBounds b;
  if (auto* f = std::get_if<Frame>(&doc)) {
    b = frame_bounds(*f, cfg.tol);
  } else if (auto* ff = std::get_if<FusionFrame>(&doc)) {
    b = frame_bounds(*ff, cfg.tol);
  } else if (auto* g = std::get_if<SampledGeneralizedFrame>(&doc)) {
    b = frame_bounds(*g, cfg.tol);
  } else {
    b = bounds_of_operator(total_effect(as_povm(doc, cfg.command)), cfg.tol);
  }
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"tight", b.tight(cfg.tol)}};
  out.report.residuals = {{"lambda_min", b.lower}, {"lambda_max", b.upper}};
  out.report.bounds = std::make_pair(b.lower, b.upper);
  return out;
}

inline CommandOutput cmd_dual(const RunConfig& cfg, const io::Document& doc) {
  CommandOutput out;
  out.report.command = cfg.command;
  if (auto* f = std::get_if<Frame>(&doc)) {
    const Frame dual = canonical_dual(*f, cfg.tol);
    double worst = 0.0, worst_swapped = 0.0;
    for (const ComplexVector& v : probe_vectors(f->dim(), cfg.seed)) {
      worst = std::max(worst, (synthesize(dual, analyze(*f, v)) - v).norm() / v.norm());
      worst_swapped = std::max(worst_swapped, (synthesize(*f, analyze(dual, v)) - v).norm() / v.norm());
    }
    const FrameBounds db = frame_bounds(dual, cfg.tol);
    out.report.flags = {{"reconstruction", worst <= cfg.tol.rec && worst_swapped <= cfg.tol.rec}};
    out.report.residuals = {{"reconstruction", worst}, {"reconstruction_swapped", worst_swapped}};
    out.report.bounds = std::make_pair(db.lower, db.upper);
    out.product = io::emit(dual);
    out.code = out.report.flags[0].second ? kOk : kFailed;
    return out;
  }
  if (auto* f = std::get_if<FusionFrame>(&doc)) {
    const FusionFrame dual = canonical_dual(*f, cfg.tol);
    const ComplexMatrix inv = invert_positive(frame_operator(*f), cfg.tol).matrix();
    // f = sum_k w_k^2 Pi_{S^-1 W_k} S^-1 Pi_k f
    double worst = 0.0;
    for (const ComplexVector& v : probe_vectors(f->dim(), cfg.seed)) {
      ComplexVector rec = ComplexVector::Zero(f->dim());
      for (std::size_t k = 0; k < f->size(); ++k) {
        const double w = f->member(k).weight;
        rec += (w * w) * (dual.projection(k) * (inv * (f->projection(k) * v)));
      }
      worst = std::max(worst, (rec - v).norm() / v.norm());
    }
    const FrameBounds db = frame_bounds(dual, cfg.tol);
    out.report.flags = {{"reconstruction", worst <= cfg.tol.rec}};
    out.report.residuals = {{"reconstruction", worst}};
    out.report.bounds = std::make_pair(db.lower, db.upper);
    out.product = io::emit(dual);
    out.code = worst <= cfg.tol.rec ? kOk : kFailed;
    return out;
  }
  const FramedPOVM m = as_povm(doc, cfg.command);
  const DualPair pair = canonical_dual_povm(m, cfg.tol);
  double syn = 0.0, ana = 0.0, prod = 0.0;
  for (const ComplexVector& v : probe_vectors(m.dim(), cfg.seed)) {
    const DualityReport dr = verify_duality(pair, v, cfg.tol);
    syn = std::max(syn, dr.dual_synthesis_residual / v.norm());
    ana = std::max(ana, dr.dual_analysis_residual / v.norm());
    prod = dr.total_product_residual;
  }
  const LoewnerBounds pb = loewner_bounds(total_effect(m));
  const LoewnerBounds db = loewner_bounds(total_effect(pair.dual));
  const double slack = cfg.tol.dil;
  const bool contained = db.lower >= 1.0 / pb.upper - slack && db.upper <= 1.0 / pb.lower + slack;
  const bool ok = syn <= cfg.tol.rec && ana <= cfg.tol.rec && prod <= cfg.tol.dil && contained;
  out.report.flags = {{"reconstruction", syn <= cfg.tol.rec && ana <= cfg.tol.rec},
                      {"inverse_total", prod <= cfg.tol.dil},
                      {"bounds_contained", contained}};
  out.report.residuals = {{"dual_synthesis", syn}, {"dual_analysis", ana}, {"total_product", prod}};
  out.report.bounds = std::make_pair(db.lower, db.upper);
  out.product = io::emit(pair.dual);
  out.code = ok ? kOk : kFailed;
  return out;
}

inline CommandOutput cmd_dilate(const RunConfig& cfg, const io::Document& doc) {
  const FramedPOVM m = as_povm(doc, cfg.command);
  const NaimarkRepresentation rep = minimal_dilation(m, cfg.tol);
  const DilationReport dr = verify_dilation(m, rep, cfg.tol);
  const bool minimal = check_minimality(rep, cfg.tol);
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"verified", dr.ok}, {"minimal", minimal}};
  out.report.residuals = {{"max_atom_residual", dr.max_atom_residual},
                          {"total_residual", dr.total_residual},
                          {"bounds_residual", dr.bounds_residual},
                          {"spectral_residual", dr.spectral_residual},
                          {"scale", dr.scale}};
  if (dr.tight_residual) out.report.residuals.emplace_back("tight_residual", *dr.tight_residual);
  out.report.bounds = std::make_pair(dr.gram_lower, dr.gram_upper);
  out.report.data = io::Json{{"sharp_dim", rep.sharp_dim()}};
  out.product = io::emit(rep);
  out.code = dr.ok && minimal ? kOk : kFailed;
  return out;
}

inline CommandOutput cmd_decompose(const RunConfig& cfg, const io::Document& doc) {
  const FramedPOVM m = as_povm(doc, cfg.command);
  const MultiplicityDecomposition dec = decompose(m, cfg.tol);
  const DecompositionReport vr = verify_decomposition(m, dec, cfg.tol);
  io::Json signature = io::Json::array();
  for (const auto& entry : canonical_signature(m, cfg.tol)) {
    signature.push_back(io::Json{{"multiplicity", entry.multiplicity}, {"atoms", entry.atoms}});
  }
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"verified", vr.ok}};
  out.report.residuals = {{"max_atom_residual", vr.max_atom_residual},
                          {"reassembly_residual", vr.reassembly_residual},
                          {"cross_orthogonality", vr.cross_orthogonality},
                          {"sandwich_violation", vr.sandwich_violation}};
  out.report.bounds = std::make_pair(vr.sum_lower, vr.sum_upper);
  out.report.data = io::Json{{"signature", std::move(signature)},
                             {"zero_atoms", labels_json(m.space(), dec.zero_atoms)}};
  out.code = vr.ok ? kOk : kFailed;
  return out;
}

inline CommandOutput cmd_rn(const RunConfig& cfg, const io::Document& doc) {
  const FramedPOVM m = as_povm(doc, cfg.command);
  ScalarMeasure mu = base_measure(m);
  if (!cfg.measure.empty()) {
    io::Document md = io::parse(read_file(cfg.measure), cfg.tol);
    auto* given = std::get_if<ScalarMeasure>(&md);
    if (!given) throw Error(ErrorKind::schema, "--measure must be a measure document");
    mu = *given;
  }
  const RadonNikodymDecomposition dec = rn_derivative(m, mu, cfg.tol);
  const RadonNikodymReport vr = verify_rn(m, dec, cfg.tol);

  std::vector<std::string> labels;
  std::vector<PositiveOperator> ops;
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (dec.derivative[t]) {
      labels.push_back(m.space().label(t));
      ops.push_back(*dec.derivative[t]);
    }
  }
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"verified", vr.ok},
                      {"framed", vr.framed},
                      {"projection_valued", vr.max_idempotency <= cfg.tol.proj}};
  out.report.residuals = {{"max_atom_residual", vr.max_atom_residual},
                          {"bounds_residual", vr.bounds_residual},
                          {"max_trace_defect", vr.max_trace_defect},
                          {"max_idempotency", vr.max_idempotency}};
  out.report.bounds = std::make_pair(vr.lower, vr.upper);
  out.report.data = io::Json{{"base_measure", mu.weights()}, {"null_atoms", labels_json(m.space(), dec.null_atoms)}};
  if (!ops.empty()) out.product = io::emit(FramedPOVM::from_labeled(labels, std::move(ops)));
  out.code = vr.ok ? kOk : kFailed;
  return out;
}

inline NaimarkRepresentation as_representation(const io::Document& doc, const RunConfig& cfg) {
  if (auto* r = std::get_if<NaimarkRepresentation>(&doc)) return *r;
  return minimal_dilation(as_povm(doc, cfg.command), cfg.tol);
}

inline CommandOutput cmd_analyze(const RunConfig& cfg, const io::Document& doc) {
  const ComplexVector f =
      io::parse_complex_vector(io::parse_json(read_file(require_path(cfg.vector, "--vector", cfg.command))), "$");
  CommandOutput out;
  out.report.command = cfg.command;
  std::optional<VectorValuedMeasure> rho;
  if (auto* fr = std::get_if<Frame>(&doc)) {
    const ComplexVector c = analyze(*fr, f);
    std::vector<ComplexVector> values;
    for (Index k = 0; k < c.size(); ++k) values.push_back(ComplexVector::Constant(1, c(k)));
    rho.emplace(fr->space(), std::move(values));
  } else if (auto* ff = std::get_if<FusionFrame>(&doc)) {
    rho.emplace(ff->space(), analyze(*ff, f));
  } else {
    rho.emplace(analysis_measure(as_representation(doc, cfg), f));
  }
  double energy = 0.0;
  for (const auto& v : rho->values()) energy += v.squaredNorm();
  out.report.flags = {{"analyzed", true}};
  out.report.residuals = {{"energy", energy}};
  out.product = io::emit(*rho);
  return out;
}

inline CommandOutput cmd_synthesize(const RunConfig& cfg, const io::Document& doc) {
  io::Document vd = io::parse(read_file(require_path(cfg.vector, "--vector", cfg.command)), cfg.tol);
  auto* rho = std::get_if<VectorValuedMeasure>(&vd);
  if (!rho) throw Error(ErrorKind::schema, "--vector must be a vector_measure document for synthesize");
  ComplexVector result;
  if (auto* fr = std::get_if<Frame>(&doc)) {
    require_same_space(fr->space(), rho->space());
    if (rho->value_dim() != 1) throw Error(ErrorKind::dimension_mismatch, "frame synthesis takes one coefficient per atom");
    ComplexVector c(static_cast<Index>(rho->values().size()));
    for (std::size_t k = 0; k < rho->values().size(); ++k) c(static_cast<Index>(k)) = rho->value(k)(0);
    result = synthesize(*fr, c);
  } else if (auto* ff = std::get_if<FusionFrame>(&doc)) {
    require_same_space(ff->space(), rho->space());
    result = synthesize(*ff, rho->values());
  } else {
    result = synthesize_measure(as_representation(doc, cfg), *rho);
  }
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"synthesized", true}};
  out.report.residuals = {{"norm", result.norm()}};
  out.product = io::emit_json(io::vector_json(result));
  return out;
}

inline CommandOutput cmd_isomorph(const RunConfig& cfg, const io::Document& doc) {
  const ComplexMatrix u =
      io::parse_complex_matrix(io::parse_json(read_file(require_path(cfg.unitary, "--unitary", cfg.command))), "$");
  const FramedPOVM m1 = as_povm(doc, cfg.command);
  const NaimarkRepresentation rep1 = as_representation(doc, cfg);
  const TransportResult tr = transport(u, m1, rep1, cfg.tol);
  const double limit = cfg.tol.dil * std::max(1.0, operator_norm(total_effect(m1).matrix()));
  const bool ok = tr.diagram_residual <= limit && tr.conjugation_residual <= cfg.tol.dil &&
                  tr.unitarity_residual <= cfg.tol.dil;
  CommandOutput out;
  out.report.command = cfg.command;
  out.report.flags = {{"commutes", ok}};
  out.report.residuals = {{"diagram_residual", tr.diagram_residual},
                          {"conjugation_residual", tr.conjugation_residual},
                          {"unitarity_residual", tr.unitarity_residual}};
  out.report.data = io::Json{{"sharp_unitary", io::matrix_json(tr.sharp_unitary)}};
  out.product = io::emit(tr.transported);
  out.code = ok ? kOk : kFailed;
  return out;
}

}  // namespace detail

/// Runs one command. Errors are translated into exit codes with a message on `err`.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.tol.validate();
    const io::Document doc = io::parse(detail::read_file(detail::require_path(cfg.in, "--in", cfg.command)), cfg.tol);
    CommandOutput result;
    const std::string& c = cfg.command;
    if (c == "check") result = detail::cmd_check(cfg, doc);
    else if (c == "bounds") result = detail::cmd_bounds(cfg, doc);
    else if (c == "dual") result = detail::cmd_dual(cfg, doc);
    else if (c == "dilate") result = detail::cmd_dilate(cfg, doc);
    else if (c == "decompose") result = detail::cmd_decompose(cfg, doc);
    else if (c == "rn") result = detail::cmd_rn(cfg, doc);
    else if (c == "analyze") result = detail::cmd_analyze(cfg, doc);
    else if (c == "synthesize") result = detail::cmd_synthesize(cfg, doc);
    else if (c == "isomorph") result = detail::cmd_isomorph(cfg, doc);
    else throw Error(ErrorKind::schema, "unknown command '" + c + "'");
    if (result.product && !cfg.out.empty()) detail::write_file(cfg.out, *result.product);
    out << io::emit(result.report);
    return result.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: numerical-failure: " << e.what() << "\n";
    return kNumerical;
  }
}

/// Parses argv-style arguments (without the program name) and executes.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frames, fusion frames and framed POVMs: validation, dilation, duality and decomposition"};
  app.name("fpovm");
  app.require_subcommand(1);
  RunConfig cfg;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--in", cfg.in, "primary input document")->required();
    sub->add_option("--measure", cfg.measure, "measure document (rn)");
    sub->add_option("--unitary", cfg.unitary, "unitary matrix file (isomorph)");
    sub->add_option("--vector", cfg.vector, "vector or vector_measure file (analyze, synthesize)");
    sub->add_option("--out", cfg.out, "path for the product document");
    sub->add_option("--seed", cfg.seed, "seed for probe vectors");
    sub->add_option("--tol-herm", cfg.tol.herm);
    sub->add_option("--tol-psd", cfg.tol.psd);
    sub->add_option("--tol-proj", cfg.tol.proj);
    sub->add_option("--tol-rank", cfg.tol.rank);
    sub->add_option("--tol-inv", cfg.tol.inv);
    sub->add_option("--tol-rec", cfg.tol.rec);
    sub->add_option("--tol-dil", cfg.tol.dil);
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kBadInput;
  }
  return execute(cfg, out, err);
}

}  // namespace fpovm::cli
