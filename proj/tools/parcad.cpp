// parcad: clause-normal-form preprocessing and parallel CAD-based
// quantifier elimination over the reals.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "parcad/expgen.hpp"
#include "parcad/formula_io.hpp"
#include "parcad/normalize.hpp"
#include "parcad/orchestrator.hpp"

using json = nlohmann::json;
using namespace parcad;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

struct CommonOpts {
  std::size_t workers = 1;
  std::string backend = "internal";
  std::size_t cell_cap = 1000000;
  double timeout_s = 0;
  std::string format = "text";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  const char* env_workers = std::getenv("PARCAD_WORKERS");
  if (env_workers) o.workers = std::strtoull(env_workers, nullptr, 10);
  cmd->add_option("--workers", o.workers, "worker pool size");
  cmd->add_option("--backend", o.backend,
                  "internal|external:<command template>");
  cmd->add_option("--cell-cap", o.cell_cap, "cell-count resource cap");
  cmd->add_option("--timeout", o.timeout_s, "per-clause timeout in seconds");
  cmd->add_option("--format", o.format, "text|json|csv");
  cmd->add_option("--out", o.out, "output file (default stdout)");
}

OrchestratorConfig to_config(const CommonOpts& o) {
  OrchestratorConfig cfg;
  cfg.workers = std::max<std::size_t>(1, o.workers);
  cfg.cell_cap = o.cell_cap;
  cfg.per_clause_timeout_ms = o.timeout_s * 1000.0;
  if (o.backend.rfind("external:", 0) == 0) {
    cfg.backend = OrchestratorConfig::Backend::External;
    cfg.external_template = o.backend.substr(9);
  } else if (o.backend != "internal") {
    throw CLI::ValidationError("--backend",
                               "expected internal or external:<template>");
  }
  return cfg;
}

json ledger_json(const RunLedger& ledger, const VarTable& vars) {
  json per = json::array();
  for (const auto& o : ledger.per_clause) {
    json e;
    e["status"] = o.status == ClauseOutcome::Status::Done
                      ? "done"
                      : (o.status == ClauseOutcome::Status::Failed
                             ? "failed"
                             : "cancelled");
    e["wall_ms"] = o.wall_ms;
    if (!o.error.empty()) e["error"] = o.error;
    if (o.status == ClauseOutcome::Status::Done) {
      e["formula"] = print_matrix(o.result.formula, vars);
      e["total_cells"] = o.result.stats.total_cells;
    }
    per.push_back(std::move(e));
  }
  json j;
  j["per_clause"] = std::move(per);
  j["combine_ms"] = ledger.combine_ms;
  j["total_wall_ms"] = ledger.total_wall_ms;
  j["status"] =
      ledger.status == RunLedger::Status::Complete ? "complete" : "partial";
  j["clause_count"] = ledger.trace.clauses.size();
  return j;
}

json qe_json(const QeResult& res, const VarTable& vars) {
  json j;
  j["formula"] = print_matrix(res.formula, vars);
  j["extended_output"] = res.extended_output;
  json stats;
  stats["total_cells"] = res.stats.total_cells;
  stats["cells_per_level"] = res.stats.cells_per_level;
  stats["wall_ms"] = res.stats.wall_ms;
  stats["project_ms"] = res.stats.project_ms;
  stats["base_ms"] = res.stats.base_ms;
  stats["lift_ms"] = res.stats.lift_ms;
  stats["eval_ms"] = res.stats.eval_ms;
  stats["solution_ms"] = res.stats.solution_ms;
  stats["delineability_warnings"] = res.stats.delineability_warnings;
  j["stats"] = std::move(stats);
  if (!res.truth_table.empty()) {
    json rows = json::array();
    for (const auto& r : res.truth_table) {
      json e;
      e["cell_formula"] = print_matrix(r.cell_formula, vars);
      e["sample"] = r.sample;
      e["truth"] = r.truth;
      rows.push_back(std::move(e));
    }
    j["truth_table"] = std::move(rows);
  }
  return j;
}

int cmd_qe(const std::string& file, bool direct, const CommonOpts& o) {
  PrenexFormula f = parse_formula(read_file(file));
  OrchestratorConfig cfg = to_config(o);
  auto [res, ledger] = direct ? run_direct(f, cfg) : run_pipeline(f, cfg);
  if (o.format == "json") {
    json j;
    j["result"] = qe_json(res, f.vars);
    j["ledger"] = ledger_json(ledger, f.vars);
    write_output(o.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << print_matrix(res.formula, f.vars) << "\n";
    os << "# clauses: " << ledger.trace.clauses.size()
       << ", cells: " << res.stats.total_cells
       << ", wall: " << ledger.total_wall_ms << " ms, status: "
       << (ledger.status == RunLedger::Status::Complete ? "complete"
                                                        : "partial")
       << "\n";
    write_output(o.out, os.str());
  }
  return ledger.status == RunLedger::Status::Complete ? 0 : 2;
}

int cmd_preprocess(const std::string& file, const CommonOpts& o) {
  PrenexFormula f = parse_formula(read_file(file));
  PrenexFormula f1 = nnf(f);
  PrenexFormula f2 = apply_plan(f1);
  Decomposition d = separate(f2);
  d.trace.input = f;
  d.trace.nnf = f1;
  d.trace.vs = f2;
  SharingReport rep = sharing_report(d);
  if (o.format == "json") {
    json j;
    j["clauses"] = json::array();
    for (const auto& c : d.clauses) j["clauses"].push_back(print_formula(c));
    j["combine"] = d.combine == Decomposition::Combine::Conjunctive
                       ? "conjunctive"
                       : "disjunctive";
    j["trace"]["input"] = print_formula(d.trace.input);
    j["trace"]["nnf"] = print_formula(d.trace.nnf);
    j["trace"]["vs"] = print_formula(d.trace.vs);
    j["trace"]["cnf"] = print_formula(d.trace.cnf);
    j["sharing"] = rep.pair_factors;
    j["max_sharing_factor"] = rep.max_factor;
    write_output(o.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << "clauses: " << d.clauses.size() << "\n";
    for (std::size_t i = 0; i < d.clauses.size(); ++i)
      os << "  [" << i << "] " << print_formula(d.clauses[i]) << "\n";
    os << "max sharing factor: " << rep.max_factor << "\n";
    write_output(o.out, os.str());
  }
  return 0;
}

int cmd_analyze(const std::string& file, const CommonOpts& o) {
  PrenexFormula f = parse_formula(read_file(file));
  Decomposition d = separate(f);
  SharingReport rep = sharing_report(d);
  std::size_t sep = d.clauses.size();
  bool sclass = in_separable_class(f);
  std::ostringstream center;
  json centers = json::array();
  const std::size_t n = f.nvars();
  for (std::size_t k = 1; k <= n; ++k) {
    if (n % k != 0) continue;
    if (in_center(f, k)) {
      center << " C_" << k;
      centers.push_back(k);
    }
  }
  if (o.format == "json") {
    json j;
    j["separability"] = sep;
    j["in_separable_class"] = sclass;
    j["centers"] = centers;
    j["sharing"] = rep.pair_factors;
    j["max_sharing_factor"] = rep.max_factor;
    write_output(o.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << "separability: " << sep << "\n";
    os << "separable class: " << (sclass ? "yes" : "no") << "\n";
    os << "centers:" << (center.str().empty() ? " none" : center.str())
       << "\n";
    os << "sharing matrix:\n";
    for (const auto& row : rep.pair_factors) {
      os << " ";
      for (auto v : row) os << " " << v;
      os << "\n";
    }
    write_output(o.out, os.str());
  }
  return 0;
}

int cmd_gen(const GeneratorParams& params, const std::string& pattern,
            const CommonOpts& o) {
  GeneratorParams p = params;
  if (pattern == "shared")
    p.pattern = SharingPattern::SharedAll;
  else if (pattern == "disjoint")
    p.pattern = SharingPattern::BlockDisjoint;
  else if (pattern == "two-clause")
    p.pattern = SharingPattern::TwoClauseShared;
  else
    throw InvalidParams("expected --pattern shared, disjoint or two-clause");
  PrenexFormula f = gen_formula(p);
  write_output(o.out, print_formula(f) + "\n");
  return 0;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << csv_header() << "\n";
  for (const auto& r : rows) os << csv_line(r) << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clause-normal-form preprocessor and parallel CAD QE"};
  app.require_subcommand(1);

  CommonOpts opt;

  std::string qe_file;
  bool qe_direct = false;
  auto* qe_cmd =
      app.add_subcommand("qe", "eliminate quantifiers of a .pf file");
  qe_cmd->add_option("file", qe_file, "formula file")->required();
  qe_cmd->add_flag("--direct", qe_direct,
                   "single CAD run without the preprocessor");
  add_common(qe_cmd, opt);

  std::string pp_file;
  auto* pp_cmd =
      app.add_subcommand("preprocess", "run the clause-normal-form pipeline");
  pp_cmd->add_option("file", pp_file, "formula file")->required();
  add_common(pp_cmd, opt);

  std::string an_file;
  auto* an_cmd = app.add_subcommand(
      "analyze", "separability, sharing factors, center membership");
  an_cmd->add_option("file", an_file, "formula file")->required();
  add_common(an_cmd, opt);

  GeneratorParams gp;
  std::string pattern = "shared";
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded formula");
  gen_cmd->add_option("--n-vars", gp.n_vars, "variables per clause block");
  gen_cmd->add_option("--clauses", gp.clauses, "clause count");
  gen_cmd->add_option("--polys", gp.polys_per_clause,
                      "max polynomials per clause");
  gen_cmd->add_option("--max-terms", gp.max_terms, "max terms per polynomial");
  gen_cmd->add_option("--max-exponent", gp.max_exponent, "max exponent");
  gen_cmd->add_option("--seed", gp.seed, "generator seed");
  gen_cmd->add_option("--pattern", pattern, "shared|disjoint|two-clause");
  gen_cmd->add_option("--shared", gp.shared_count,
                      "shared variables (two-clause pattern)");
  gen_cmd->add_flag("--mixed-relations", gp.mixed_relations,
                    "draw all six relations instead of equations");
  add_common(gen_cmd, opt);

  auto* bench_cmd = app.add_subcommand("bench", "experiment harness");
  bench_cmd->require_subcommand(1);

  GeneratorParams bb;
  bb.n_vars = 2;
  bb.clauses = 1;
  bb.polys_per_clause = 2;
  bb.max_terms = 3;
  bb.max_exponent = 3;
  std::string sweep_kind = "T";
  std::string sweep_values = "1,2,3,4,5";
  std::size_t reps = 10;
  auto* sweep_cmd = bench_cmd->add_subcommand("sweep", "parameter sweeps");
  sweep_cmd->add_option("--kind", sweep_kind, "T|E|clauses");
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values");
  sweep_cmd->add_option("--reps", reps, "repetitions per value");
  sweep_cmd->add_option("--n-vars", bb.n_vars, "variables");
  sweep_cmd->add_option("--clauses", bb.clauses, "clauses");
  sweep_cmd->add_option("--polys", bb.polys_per_clause, "polys per clause");
  sweep_cmd->add_option("--max-terms", bb.max_terms, "T when not swept");
  sweep_cmd->add_option("--max-exponent", bb.max_exponent, "E when not swept");
  sweep_cmd->add_option("--seed", bb.seed, "base seed");
  add_common(sweep_cmd, opt);

  std::size_t dist_count = 100;
  std::uint64_t dist_seed = 0;
  std::size_t dist_vars = 3;
  auto* dist_cmd =
      bench_cmd->add_subcommand("distribution", "separability histogram");
  dist_cmd->add_option("--count", dist_count, "population size");
  dist_cmd->add_option("--seed", dist_seed, "base seed");
  dist_cmd->add_option("--n-vars", dist_vars, "variables");
  add_common(dist_cmd, opt);

  GeneratorParams sp;
  sp.n_vars = 2;
  sp.clauses = 100;
  sp.polys_per_clause = 5;
  sp.max_terms = 5;
  sp.max_exponent = 3;
  std::size_t speedup_seeds = 10;
  auto* speed_cmd =
      bench_cmd->add_subcommand("speedup", "direct vs pipeline comparison");
  speed_cmd->add_option("--reps", speedup_seeds, "seed count");
  speed_cmd->add_option("--n-vars", sp.n_vars, "variables per block");
  speed_cmd->add_option("--clauses", sp.clauses, "clauses");
  speed_cmd->add_option("--polys", sp.polys_per_clause, "polys per clause");
  speed_cmd->add_option("--max-terms", sp.max_terms, "T");
  speed_cmd->add_option("--max-exponent", sp.max_exponent, "E");
  speed_cmd->add_option("--seed", sp.seed, "base seed");
  add_common(speed_cmd, opt);

  std::uint64_t sharing_seed = 42;
  auto* share_cmd =
      bench_cmd->add_subcommand("sharing", "sharing-factor cell study");
  share_cmd->add_option("--seed", sharing_seed, "protocol seed");
  add_common(share_cmd, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (qe_cmd->parsed()) return cmd_qe(qe_file, qe_direct, opt);
    if (pp_cmd->parsed()) return cmd_preprocess(pp_file, opt);
    if (an_cmd->parsed()) return cmd_analyze(an_file, opt);
    if (gen_cmd->parsed()) return cmd_gen(gp, pattern, opt);
    if (sweep_cmd->parsed()) {
      SweepConfig cfg;
      cfg.base = bb;
      cfg.repetitions = reps;
      cfg.run = to_config(opt);
      std::stringstream vs(sweep_values);
      std::string tok;
      while (std::getline(vs, tok, ','))
        cfg.values.push_back(std::stoull(tok));
      SweepKind kind = sweep_kind == "T"
                           ? SweepKind::MaxTerms
                           : (sweep_kind == "E" ? SweepKind::MaxExponent
                                                : SweepKind::TotalTerms);
      write_output(opt.out, rows_to_csv(experiment_params_sweep(kind, cfg)));
      return 0;
    }
    if (dist_cmd->parsed()) {
      DistributionResult r =
          experiment_distribution(dist_count, dist_seed, dist_vars);
      if (opt.format == "json") {
        json j;
        j["histogram"] = json::object();
        for (auto& [k, v] : r.histogram)
          j["histogram"][std::to_string(k)] = v;
        j["one_separable_fraction"] = r.one_separable_fraction;
        write_output(opt.out, j.dump(2));
      } else {
        std::ostringstream os;
        os << "clauses,count\n";
        for (auto& [k, v] : r.histogram) os << k << "," << v << "\n";
        os << "# 1-separable fraction: " << r.one_separable_fraction << "\n";
        write_output(opt.out, os.str());
      }
      return 0;
    }
    if (speed_cmd->parsed()) {
      SpeedupConfig cfg;
      cfg.base = sp;
      cfg.seeds = speedup_seeds;
      cfg.run = to_config(opt);
      write_output(opt.out, rows_to_csv(experiment_speedup(cfg)));
      return 0;
    }
    if (share_cmd->parsed()) {
      QeConfig qc;
      qc.cell_cap = opt.cell_cap;
      auto rows = experiment_sharing(sharing_seed, qc);
      std::ostringstream os;
      os << "s,cells_with,cells_without,with_capped,without_capped\n";
      for (const auto& r : rows)
        os << r.shared << "," << r.cells_with << "," << r.cells_without
           << "," << r.with_capped << "," << r.without_capped << "\n";
      write_output(opt.out, os.str());
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const UndeclaredVariable& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParams& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidK& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource failure: " << e.what() << "\n";
    return 2;
  } catch (const BackendError& e) {
    std::cerr << "backend failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
