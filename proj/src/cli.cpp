#include "coblab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "coblab/dilation.hpp"
#include "coblab/dyadic.hpp"
#include "coblab/io.hpp"
#include "coblab/oracle.hpp"
#include "coblab/solver.hpp"
#include "coblab/wold.hpp"

namespace coblab::cli {

namespace {

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"solve-isometry", Command::solve_isometry}, {"solve-contraction", Command::solve_contraction},
      {"solve-dyadic", Command::solve_dyadic},     {"check", Command::check},
      {"growth", Command::growth},                 {"wold", Command::wold},
      {"dilate-test", Command::dilate_test},       {"oracle", Command::oracle},
  };
  return names;
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "?";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_text(cfg.output, text);
  }
}

std::string to_text(const json& j) { return dump_json(j) + "\n"; }

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::solved: return kExitPass;
    case Verdict::not_coboundary: return kExitFail;
    case Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitUsage;
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.tolerances;
  o.cutoff = cfg.cutoff;
  o.browder_horizon = cfg.horizon;
  return o;
}

struct Inputs {
  std::optional<OperatorSpec> op;
  std::optional<CoeffVector> x;
  std::optional<CoeffVector> y;
  bool hermitian = false;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  const bool needs_op = cfg.command != Command::solve_dyadic;
  if (needs_op) {
    if (cfg.operator_file.empty()) throw Error("--op FILE is required for " + command_name(cfg.command));
    in.op = operator_from_json(read_json_file(cfg.operator_file), cfg.tolerances.zero_eps);
  }
  if (cfg.vector_file.empty()) throw Error("--vec FILE is required");
  const json vj = read_json_file(cfg.vector_file);
  const int base = in.op && in.op->space().kind() == Space::Kind::fourier ? in.op->space().base() : cfg.base;
  in.x = vector_from_json(vj, base);
  in.hermitian = vj.value("hermitian", false);
  if (in.op) require_same_space(in.op->space(), in.x->space(), "vector file");
  if (!cfg.solution_file.empty()) {
    json yj = read_json_file(cfg.solution_file);
    if (yj.contains("solution")) yj = yj.at("solution");
    if (yj.is_null()) throw Error(cfg.solution_file + ": report carries no solution");
    in.y = vector_from_json(yj, base);
    require_same_space(in.x->space(), in.y->space(), "solution file");
  }
  return in;
}

int run_solve(const RunConfig& cfg, const Inputs& in, std::ostream& out, bool contraction) {
  const auto result = contraction ? solve_contraction(*in.op, *in.x, solve_options(cfg))
                                  : solve_isometry(*in.op, *in.x, solve_options(cfg));
  json report = solve_result_to_json(result);
  report["command"] = command_name(cfg.command);
  report["operator_class"] = to_string(in.op->op_class());
  if (result.solution && !cfg.solution_out.empty()) {
    write_text(cfg.solution_out, to_text(vector_to_json(*result.solution)));
  }
  emit(cfg, to_text(report), out);
  return verdict_exit(result.verdict);
}

json conditions_json(const ContractionConditions& c) {
  json j;
  j["horizon"] = c.horizon;
  j["defect_partial_sum"] = c.defect_partial.back();
  j["defect_slope"] = c.defect_slope;
  j["defect_o_n"] = c.defect_o_n;
  j["kronecker_sum"] = c.kronecker.back();
  j["kronecker_converges"] = c.kronecker_converges;
  j["sqrt_ratio"] = c.sqrt_profile.back();
  j["o_sqrt_n"] = c.o_sqrt_n;
  j["heuristic"] = true;
  return j;
}

int run_check(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto& op = *in.op;
  const auto& x = *in.x;
  json report;
  report["command"] = "check";
  report["operator_class"] = to_string(op.op_class());
  report["norm_x"] = norm(x);
  const auto s = summability(op, x, cfg.cutoff);
  report["summability"] = {{"value", s.value}, {"exact", s.exact}, {"divergent", s.divergent}};
  std::optional<double> limit;
  if (op.is_isometric() && s.exact && !s.divergent) limit = ergodic_limit(op, x, cfg.cutoff);
  report["ergodic_limit"] = limit ? json(*limit) : json(nullptr);
  const auto b = browder_bound(op, x, cfg.horizon, cfg.tolerances.trend_tol);
  report["browder"] = {{"sup", b.sup}, {"bounded", b.bounded}, {"horizon", cfg.horizon}};
  const auto g = growth_profile(op, x, {cfg.horizon});
  report["growth_at_horizon"] = {{"n", g.front().first}, {"value", g.front().second}};
  if (!op.is_isometric()) {
    report["contraction_conditions"] = conditions_json(contraction_conditions(op, x, cfg.horizon, cfg.tolerances));
  }
  int code = kExitPass;
  if (in.y) {
    const double r = verify_coboundary(op, x, *in.y);
    const bool pass = r <= cfg.tolerances.residual_tol;
    report["verification"] = {{"residual", r}, {"pass", pass}};
    code = pass ? kExitPass : kExitFail;
  }
  emit(cfg, to_text(report), out);
  return code;
}

int run_growth(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= cfg.horizon; ++n) ns.push_back(n);
  const auto profile = growth_profile(*in.op, *in.x, ns);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "n,value\n";
    for (const auto& [n, v] : profile) os << n << ',' << fmt17(v) << '\n';
    emit(cfg, os.str(), out);
  } else {
    json j;
    j["command"] = "growth";
    j["heuristic"] = true;
    j["profile"] = json::array();
    for (const auto& [n, v] : profile) j["profile"].push_back(json::array({n, v}));
    emit(cfg, to_text(j), out);
  }
  return kExitPass;
}

int run_wold(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto split = wold_split(*in.op, *in.x, cfg.cutoff);
  json j = wold_split_to_json(split);
  j["command"] = "wold";
  j["decay"] = nullptr;
  if (split.exact) {
    try {
      const auto fit = component_decay(*in.op, *in.x, cfg.cutoff);
      j["decay"] = {{"beta", fit.beta}, {"fit_residual", fit.fit_residual}, {"points", fit.points}};
    } catch (const Error&) {
      // fewer than three nonzero components
    }
  }
  emit(cfg, to_text(j), out);
  return split.exact ? kExitPass : kExitInconclusive;
}

int run_dilate_test(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto& T = *in.op;
  const auto& x = *in.x;
  const DilationOperator R(T);
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, double err, double tol) {
    const bool pass = err <= tol;
    all = all && pass;
    checks.push_back({{"name", name}, {"error", err}, {"tolerance", tol}, {"pass", pass}});
  };

  // ||Tu||^2 + ||Du||^2 = ||u||^2 along u = T^k x.
  double pyth = 0.0;
  CoeffVector u = x;
  for (int k = 0; k < 8; ++k) {
    pyth = std::max(pyth, std::abs(norm_sq(apply(T, u)) + norm_sq(defect_apply(T, u)) - norm_sq(u)));
    u = apply(T, u);
  }
  record("defect_pythagoras", pyth, 1e-10);

  const SeqVector v(T.space(), {x, apply(T, x), defect_apply(T, x), x});
  record("dilation_isometry", std::abs(norm(apply(R, v)) - norm(v)), 1e-10);

  const auto sr = summability(R, SeqVector::lift(x), cfg.cutoff);
  const auto st = summability(T, x, cfg.cutoff);
  const double sum_err = (sr.exact == st.exact) ? std::abs(sr.value - st.value) : INFINITY;
  record("summability_equivalence", sum_err, 1e-10);

  // ||sum_{k<=n} R^k x~||^2 = ||sum_{k<=n} T^k x||^2 + sum_{k<n} ||D S_{k+1} x||^2
  const std::size_t N = std::min<std::size_t>(cfg.horizon, 200);
  SeqVector lifted_sum = SeqVector::lift(x);
  SeqVector lifted_term = SeqVector::lift(x);
  CoeffVector tsum = x;
  CoeffVector tterm = x;
  double defect_acc = 0.0;
  double lift_err = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    defect_acc += norm_sq(defect_apply(T, tsum));  // S_n x, before adding T^n x
    lifted_term = apply(R, lifted_term);
    lifted_sum.add_scaled(1.0, lifted_term);
    tterm = apply(T, tterm);
    tsum.add_scaled(1.0, tterm);
    const double lhs = norm(lifted_sum) * norm(lifted_sum);
    const double rhs = norm_sq(tsum) + defect_acc;
    lift_err = std::max(lift_err, std::abs(lhs - rhs));
  }
  record("lift_identity", lift_err, 1e-9);

  json j;
  j["command"] = "dilate-test";
  j["checks"] = checks;
  j["pass"] = all;
  emit(cfg, to_text(j), out);
  return all ? kExitPass : kExitFail;
}

int run_oracle(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto& op = *in.op;
  const auto& x = *in.x;
  const auto result = solve_isometry(op, x, solve_options(cfg));
  json j;
  j["command"] = "oracle";
  j["verdict"] = to_string(result.verdict);
  if (result.verdict == Verdict::inconclusive) {
    emit(cfg, to_text(j), out);
    return kExitInconclusive;
  }
  const auto window = auto_window(op, x, 3 * result.levels);
  const auto lsq = lsq_solve(op, x, window);
  j["window_size"] = window.indices.size();
  j["window_closed"] = window.closed;
  j["lsq_residual"] = lsq.residual;
  j["lsq_rank"] = lsq.rank;
  j["constructive_residual"] = result.residual;
  bool agree = false;
  if (result.solution) {
    const double d = norm(combine(1.0, *result.solution, -1.0, lsq.y));
    j["discrepancy"] = d;
    agree = d <= 1e-8 && lsq.residual <= cfg.tolerances.residual_tol;
  } else {
    j["discrepancy"] = nullptr;
    agree = lsq.residual > cfg.tolerances.residual_tol;
  }
  j["agree"] = agree;
  emit(cfg, to_text(j), out);
  return agree ? kExitPass : kExitFail;
}

int run_dyadic(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  if (in.x->space().kind() != Space::Kind::fourier) throw Error("solve-dyadic needs a Fourier coefficient file");
  const FourierSeries f(*in.x, in.hermitian);
  const auto verdict = chain_solve(f, cfg.tolerances.zero_eps);
  const int code = verdict.solvable ? kExitPass : kExitFail;

  if (cfg.format == "csv") {
    std::size_t m = cfg.samples;
    if (m == 0) {
      std::uint64_t top = 0;
      bool fits = true;
      if (verdict.g) {
        for (const auto& kv : verdict.g->coeffs().entries()) {
          const auto mode = std::get<FourierIndex>(kv.first.key).mode(f.base());
          if (!mode) {
            fits = false;
            break;
          }
          top = std::max<std::uint64_t>(top, static_cast<std::uint64_t>(std::llabs(*mode)));
        }
      }
      m = fits && top < 1u << 20 ? std::max<std::size_t>(64, 2 * top + 1) : 64;
    }
    std::ostringstream os;
    os << "t,re,im\n";
    if (verdict.g) {
      const auto values = synthesize_samples(*verdict.g, m);
      for (std::size_t j = 0; j < m; ++j) {
        os << fmt17(static_cast<double>(j) / static_cast<double>(m)) << ',' << fmt17(values[j].real()) << ','
           << fmt17(values[j].imag()) << '\n';
      }
    }
    emit(cfg, os.str(), out);
    return code;
  }

  json j = chain_verdict_to_json(verdict);
  j["command"] = "solve-dyadic";
  j["base"] = f.base();
  if (cfg.report) {
    json r;
    r["epsilon"] = cfg.epsilon;
    r["valuation_condition"] = valuation_condition(f, cfg.epsilon);
    const auto energy = block_energy_profile(f, 32);
    r["block_energy"] = json::array();
    for (const auto& [i, e] : energy.levels) {
      if (e > 0.0) r["block_energy"].push_back(json::array({i, e}));
    }
    r["alpha"] = energy.alpha ? json(*energy.alpha) : json(nullptr);
    r["ergodic_integral"] = {{"n", cfg.horizon}, {"value", ergodic_integral(f, cfg.horizon)}};
    r["truncation_note"] = "conditions are evaluated on the given finite support only";
    j["report"] = r;
  }
  if (verdict.g && !cfg.solution_out.empty()) write_text(cfg.solution_out, to_text(vector_to_json(verdict.g->coeffs())));
  emit(cfg, to_text(j), out);
  return code;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.tolerances.validate();
    if (cfg.format != "json" && cfg.format != "csv") throw Error("--format must be json or csv");
    const Inputs in = load_inputs(cfg);
    switch (cfg.command) {
      case Command::solve_isometry: return run_solve(cfg, in, out, false);
      case Command::solve_contraction: return run_solve(cfg, in, out, true);
      case Command::solve_dyadic: return run_dyadic(cfg, in, out);
      case Command::check: return run_check(cfg, in, out);
      case Command::growth: return run_growth(cfg, in, out);
      case Command::wold: return run_wold(cfg, in, out);
      case Command::dilate_test: return run_dilate_test(cfg, in, out);
      case Command::oracle: return run_oracle(cfg, in, out);
    }
  } catch (const std::exception& e) {
    err << "coblab: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("COBLAB_CUTOFF")) {
    try {
      cfg.cutoff = std::stoul(env);
    } catch (const std::exception&) {
      err << "coblab: COBLAB_CUTOFF must be a positive integer\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Coboundary solver for isometries, contractions and f(t) = g(t) - g(bt)", "coblab"};
  std::string command;
  app.add_option("command", command, "solve-isometry | solve-contraction | solve-dyadic | check | growth | wold | dilate-test | oracle")
      ->required();
  app.add_option("--op", cfg.operator_file, "operator description file");
  app.add_option("--vec", cfg.vector_file, "coefficient vector file");
  app.add_option("--sol", cfg.solution_file, "candidate solution y to verify (check)");
  app.add_option("--solution-out", cfg.solution_out, "write the solution vector to FILE");
  app.add_option("--tol", cfg.tolerances.residual_tol, "residual tolerance");
  app.add_option("--cutoff", cfg.cutoff, "adjoint-orbit cutoff");
  app.add_option("--base", cfg.base, "Fourier base b >= 2");
  app.add_option("--epsilon", cfg.epsilon, "valuation exponent slack");
  app.add_option("--horizon", cfg.horizon, "profile length");
  app.add_option("--samples", cfg.samples, "sample count for CSV export of g");
  app.add_flag("--report", cfg.report, "include the condition report");
  app.add_option("--out", cfg.output, "output file (default stdout)");
  app.add_option("--format", cfg.format, "json | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "coblab: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto it = command_names().find(command);
  if (it == command_names().end()) {
    err << "coblab: unknown command '" << command << "'\n";
    return kExitUsage;
  }
  cfg.command = it->second;
  if (cfg.cutoff == 0 || cfg.horizon == 0) {
    err << "coblab: --cutoff and --horizon must be positive\n";
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace coblab::cli
