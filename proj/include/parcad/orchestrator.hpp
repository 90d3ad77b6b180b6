#ifndef PARCAD_ORCHESTRATOR_HPP
#define PARCAD_ORCHESTRATOR_HPP

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstring>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "parcad/cadqe.hpp"
#include "parcad/formula_io.hpp"
#include "parcad/normalize.hpp"
#include "parcad/virtsub.hpp"

namespace parcad {

struct OrchestratorConfig {
  std::size_t workers = 1;
  enum class Backend { Internal, External };
  Backend backend = Backend::Internal;
  std::string external_template;  // {vars}, {free_count}, {formula}
  std::size_t clause_budget = kDefaultClauseBudget;
  std::size_t cell_cap = 1000000;
  double per_clause_timeout_ms = 0;  // 0 = unlimited
};

struct ClauseOutcome {
  enum class Status { Done, Failed, Cancelled };
  Status status = Status::Cancelled;
  QeResult result;
  std::string error;
  double wall_ms = 0;
};

struct RunLedger {
  enum class Status { Complete, Partial };
  std::vector<ClauseOutcome> per_clause;
  double combine_ms = 0;
  double total_wall_ms = 0;
  Decomposition trace;
  Status status = Status::Complete;
};

/// Substitute the template placeholders for an external command line.
inline std::string instantiate_template(const std::string& tmpl,
                                        const PrenexFormula& clause) {
  std::string vars;
  for (std::size_t i = 0; i < clause.vars.size(); ++i) {
    if (i) vars += ",";
    vars += clause.vars.names[i];
  }
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.compare(i, 6, "{vars}") == 0) {
      out += vars;
      i += 6;
    } else if (tmpl.compare(i, 12, "{free_count}") == 0) {
      out += std::to_string(clause.free_vars.size());
      i += 12;
    } else if (tmpl.compare(i, 9, "{formula}") == 0) {
      out += print_formula(clause);
      i += 9;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

/// Run an external QE executable: the session script goes to its stdin, the
/// final answer is the last nonempty line of its stdout.
inline Formula external_eliminate(const PrenexFormula& clause,
                                  const std::string& cmd_template,
                                  double timeout_ms = 0) {
  std::string cmd = instantiate_template(cmd_template, clause);
  std::string script;
  for (std::size_t i = 0; i < clause.vars.size(); ++i) {
    if (i) script += ",";
    script += clause.vars.names[i];
  }
  script += "\n" + std::to_string(clause.free_vars.size()) + "\n" +
            print_formula(clause) + "\n";

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw BackendError(-1, "pipe failed");
  pid_t pid = fork();
  if (pid < 0) throw BackendError(-1, "fork failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  ssize_t ignored = write(in_pipe[1], script.data(), script.size());
  (void)ignored;
  close(in_pipe[1]);

  std::string output;
  char buf[4096];
  auto start = std::chrono::steady_clock::now();
  while (true) {
    if (timeout_ms > 0) {
      auto now = std::chrono::steady_clock::now();
      double left =
          timeout_ms -
          std::chrono::duration<double, std::milli>(now - start).count();
      if (left <= 0) {
        kill(pid, SIGKILL);
        close(out_pipe[0]);
        waitpid(pid, nullptr, 0);
        throw BackendTimeout();
      }
      fd_set fds;
      FD_ZERO(&fds);
      FD_SET(out_pipe[0], &fds);
      struct timeval tv;
      tv.tv_sec = static_cast<long>(left / 1000);
      tv.tv_usec = static_cast<long>((left - tv.tv_sec * 1000) * 1000);
      int rv = select(out_pipe[0] + 1, &fds, nullptr, nullptr, &tv);
      if (rv == 0) continue;  // deadline re-checked above
      if (rv < 0) break;
    }
    ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n > 0) {
      output.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    break;
  }
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != 0) throw BackendError(code, output);

  // last nonempty line is the answer
  std::string line;
  std::size_t end = output.find_last_not_of(" \t\r\n");
  if (end == std::string::npos) throw ParseBackError("empty backend answer");
  std::size_t begin = output.find_last_of('\n', end);
  line = output.substr(begin == std::string::npos ? 0 : begin + 1,
                       end - (begin == std::string::npos ? 0 : begin + 1) + 1);
  if (line == "TRUE") return Formula::tru();
  if (line == "FALSE") return Formula::fls();
  try {
    std::string text = line;
    if (text.empty() || text.front() != '[') text = "[" + text + "]";
    PrenexFormula parsed = parse_formula(text, clause.vars);
    if (!parsed.block.empty())
      throw ParseBackError("backend answer is not quantifier-free");
    return parsed.matrix;
  } catch (const SyntaxError& e) {
    throw ParseBackError(std::string("unparseable backend answer: ") +
                         e.what());
  } catch (const UndeclaredVariable& e) {
    throw ParseBackError(std::string("backend answer names an unknown "
                                     "variable: ") +
                         e.what());
  }
}

namespace orch_detail {

inline void shallow_simplify(std::vector<Formula>& parts, bool conjunctive) {
  std::vector<Formula> keep;
  for (auto& p : parts) {
    if (conjunctive ? p.is_true() : p.is_false()) continue;  // identity
    bool dup = false;
    for (const auto& k : keep) dup = dup || (k == p);
    if (!dup) keep.push_back(std::move(p));
  }
  parts = std::move(keep);
}

}  // namespace orch_detail

/// Merge per-clause formulas in clause-index order with shallow boolean
/// simplification; honors the decomposition's combiner.
inline Formula combine_results(const Decomposition& d,
                               const std::vector<ClauseOutcome>& outcomes) {
  const bool conj = d.combine == Decomposition::Combine::Conjunctive;
  std::vector<Formula> parts;
  for (const auto& o : outcomes) {
    if (o.status != ClauseOutcome::Status::Done) continue;
    const Formula& f = o.result.formula;
    if (conj && f.is_false()) return Formula::fls();
    if (!conj && f.is_true()) return Formula::tru();
    parts.push_back(f);
  }
  orch_detail::shallow_simplify(parts, conj);
  if (parts.empty()) return conj ? Formula::tru() : Formula::fls();
  return conj ? Formula::conj(std::move(parts))
              : Formula::disj(std::move(parts));
}

namespace orch_detail {

inline ClauseOutcome run_clause(const PrenexFormula& clause,
                                const OrchestratorConfig& cfg) {
  ClauseOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (cfg.backend == OrchestratorConfig::Backend::External) {
      Formula ans = external_eliminate(clause, cfg.external_template,
                                       cfg.per_clause_timeout_ms);
      out.result.formula = std::move(ans);
      out.result.vars = clause.vars;
    } else {
      QeConfig qc;
      qc.cell_cap = cfg.cell_cap;
      qc.timeout_ms = cfg.per_clause_timeout_ms;
      out.result = qe(clause, qc);
      if (out.result.extended_output)
        throw NotSignDefinable("clause produced extended output only");
    }
    out.status = ClauseOutcome::Status::Done;
  } catch (const std::exception& e) {
    out.status = ClauseOutcome::Status::Failed;
    out.error = e.what();
  }
  auto t1 = std::chrono::steady_clock::now();
  out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace orch_detail

/// Algorithm 2: NNF, virtual substitution, separation, one QE instance per
/// clause on a pool of `workers` threads, then the boolean combination.
/// The output formula is identical for any worker count.
inline std::pair<QeResult, RunLedger> run_pipeline(
    const PrenexFormula& f, const OrchestratorConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  PrenexFormula f1 = nnf(f);
  PrenexFormula f2 = apply_plan(f1);
  Decomposition d = separate(f2, cfg.clause_budget);
  d.trace.input = f;
  d.trace.nnf = f1;
  d.trace.vs = f2;

  const std::size_t m = d.clauses.size();
  std::vector<ClauseOutcome> outcomes(m);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> cancel{false};
  const bool conj = d.combine == Decomposition::Combine::Conjunctive;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= m) return;
      if (cancel.load()) {
        outcomes[i].status = ClauseOutcome::Status::Cancelled;
        continue;
      }
      outcomes[i] = orch_detail::run_clause(d.clauses[i], cfg);
      if (outcomes[i].status == ClauseOutcome::Status::Done) {
        const Formula& r = outcomes[i].result.formula;
        if ((conj && r.is_false()) || (!conj && r.is_true())) cancel.store(true);
      }
    }
  };
  std::size_t nthreads = std::max<std::size_t>(1, std::min(cfg.workers, m));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  auto t1 = std::chrono::steady_clock::now();
  QeResult merged;
  merged.vars = f.vars;
  merged.formula = combine_results(d, outcomes);
  for (const auto& o : outcomes) {
    merged.stats.total_cells += o.result.stats.total_cells;
    merged.stats.delineability_warnings +=
        o.result.stats.delineability_warnings;
  }
  auto t2 = std::chrono::steady_clock::now();

  RunLedger ledger;
  ledger.per_clause = std::move(outcomes);
  ledger.trace = std::move(d);
  ledger.combine_ms =
      std::chrono::duration<double, std::milli>(t2 - t1).count();
  ledger.total_wall_ms =
      std::chrono::duration<double, std::milli>(t2 - t0).count();
  ledger.status = RunLedger::Status::Complete;
  for (const auto& o : ledger.per_clause) {
    if (o.status == ClauseOutcome::Status::Failed)
      ledger.status = RunLedger::Status::Partial;
    if (o.status == ClauseOutcome::Status::Cancelled && !cancel.load())
      ledger.status = RunLedger::Status::Partial;
  }
  merged.stats.wall_ms = ledger.total_wall_ms;
  return {std::move(merged), std::move(ledger)};
}

/// Baseline: a single QE invocation on the whole formula, same ledger shape.
inline std::pair<QeResult, RunLedger> run_direct(const PrenexFormula& f,
                                                 const OrchestratorConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunLedger ledger;
  ledger.trace.clauses.push_back(f);
  ledger.trace.trace.input = f;
  ledger.trace.trace.nnf = f;
  ledger.trace.trace.vs = f;
  ledger.trace.trace.cnf = f;
  ClauseOutcome out;
  {
    OrchestratorConfig one = cfg;
    one.backend = cfg.backend;
    out = orch_detail::run_clause(f, one);
  }
  QeResult res = out.result;
  res.vars = f.vars;
  ledger.per_clause.push_back(std::move(out));
  auto t1 = std::chrono::steady_clock::now();
  ledger.total_wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  ledger.status = ledger.per_clause.front().status ==
                          ClauseOutcome::Status::Done
                      ? RunLedger::Status::Complete
                      : RunLedger::Status::Partial;
  return {std::move(res), std::move(ledger)};
}

}  // namespace parcad

#endif
