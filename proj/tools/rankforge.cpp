// rankforge: command-line front end for the rank-metric toolkit.
//
// Subcommands:
//   gen         write a seeded problem instance (rank-decoding or matrix-rank)
//   solve       run an algebraic attack on an instance file
//   estimate    bit-complexity reports for parameter sets, presets, and sweeps
//   experiment  measured-vs-predicted rank surveys, CSV output
//   verify      re-check a solve report against its instance, offline
//
// Exit codes: 0 success / verified; 1 runtime error; 2 usage error;
// 3 precondition violated (attack not applicable at these knobs);
// 4 rank-deficient system; 5 solution not found; 6 verification failed;
// 7 desk-scale budget exceeded (the estimated cost is printed instead).

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rankforge/estimator.hpp"
#include "rankforge/ffield.hpp"
#include "rankforge/instances.hpp"
#include "rankforge/linalg.hpp"
#include "rankforge/maxminors.hpp"
#include "rankforge/supportminors.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rankforge;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitRankDeficient = 4;
constexpr int kExitNotFound = 5;
constexpr int kExitVerifyFailed = 6;
constexpr int kExitBudget = 7;

// Raised when a requested plan exceeds the desk-scale budget; the message
// carries the estimated cost so the caller still learns what it would take.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(SolveFailReason reason) {
  switch (reason) {
    case SolveFailReason::RANK_DEFICIENT: return kExitRankDeficient;
    case SolveFailReason::VERIFICATION_FAILED: return kExitVerifyFailed;
    case SolveFailReason::NOT_FOUND: return kExitNotFound;
  }
  return kExitError;
}

const char* reason_name(SolveFailReason reason) {
  switch (reason) {
    case SolveFailReason::RANK_DEFICIENT: return "rank-deficient";
    case SolveFailReason::VERIFICATION_FAILED: return "verification-failed";
    case SolveFailReason::NOT_FOUND: return "not-found";
  }
  return "unknown";
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Shared command-line state, filled by the parser.
struct Options {
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  bool verbose = false;
};

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind;  // "rd" | "minrank"
  std::uint32_t q = 2;
  std::size_t m = 0, n = 0, k = 0, K = 0, r = 0;
  std::string out = "-";
  bool with_plant = false;
  bool unplanted = false;  // minrank only
};

int cmd_gen(const Options& opt, const GenArgs& a) {
  std::string file_text;
  std::string summary;
  std::optional<std::string> plant_blob;
  if (a.kind == "rd") {
    RdInstance inst = gen_rd(a.q, static_cast<std::uint32_t>(a.m), a.n, a.k,
                             a.r, opt.seed);
    validate(inst);
    plant_blob = ordered_json(inst.plant->e).dump();
    if (!a.with_plant) inst.plant.reset();
    file_text = serialize(inst);
    std::ostringstream os;
    os << "instance: rd q=" << a.q << " m=" << a.m << " n=" << a.n
       << " k=" << a.k << " r=" << a.r << " seed=" << opt.seed;
    summary = os.str();
  } else {
    MinRankInstance inst =
        gen_minrank(a.q, a.m, a.n, a.K, a.r, !a.unplanted, opt.seed);
    validate(inst);
    if (inst.plant) plant_blob = ordered_json(*inst.plant).dump();
    if (!a.with_plant) inst.plant.reset();
    file_text = serialize(inst);
    std::ostringstream os;
    os << "instance: minrank q=" << a.q << " m=" << a.m << " n=" << a.n
       << " K=" << a.K << " r=" << a.r << " seed=" << opt.seed
       << (plant_blob ? "" : " (unplanted)");
    summary = os.str();
    if (!minrank_uniqueness_ok(a.m, a.n, a.K, a.r)) {
      std::cerr << "warning: uniqueness bound K <= (m-r)(n-r) fails; "
                   "multiple solutions are likely\n";
    }
  }
  write_output(a.out, file_text);
  std::cerr << summary << "\n";
  if (plant_blob) {
    std::cerr << "plant fingerprint: " << hex64(fnv1a(*plant_blob)) << "\n";
    std::cerr << (a.with_plant ? "plant retained in the instance file\n"
                               : "plant stripped from the instance file\n");
  } else {
    std::cerr << "plant: none\n";
  }
  if (a.out != "-") std::cerr << "wrote " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string path;
  bool auto_plan = false;
  std::optional<std::size_t> p, a, b, n_prime;
  std::string solver = "auto";
  std::uint64_t budget = 200000;  // max linear-system columns; 0 = unlimited
  std::string format = "text";
  std::string out = "-";
};

SmSolverChoice solver_choice(const std::string& name) {
  if (name == "dense") return SmSolverChoice::DENSE;
  if (name == "blackbox") return SmSolverChoice::BLACK_BOX;
  return SmSolverChoice::AUTO;
}

// One runnable attack configuration with its estimated cost and memory need.
struct SolveCandidate {
  std::string attack;  // "overdetermined" | "punctured" | "hybrid" | ...
  std::size_t p = 0, a = 0, b = 0, n_prime = 0;
  double log2_cost = 0.0;
  BigInt columns;
  std::uint64_t guesses = 1;
};

std::string candidate_label(const SolveCandidate& c) {
  std::ostringstream os;
  os << c.attack;
  if (c.attack == "punctured") os << " p=" << c.p;
  if (c.attack == "hybrid") os << " a=" << c.a;
  if (c.attack == "combined") os << " b=" << c.b;
  if (c.attack == "support-minors") os << " b=" << c.b << " n'=" << c.n_prime;
  return os.str();
}

void check_budget(const SolveCandidate& c, std::uint64_t budget) {
  constexpr std::uint64_t kMaxGuesses = 1ull << 20;
  if (budget != 0 && c.columns > BigInt(budget)) {
    std::ostringstream os;
    os << candidate_label(c) << " needs " << c.columns
       << " columns, over the budget of " << budget
       << " (estimated cost 2^" << std::fixed << std::setprecision(2)
       << c.log2_cost << " operations); raise --budget to force";
    throw BudgetExceeded(os.str());
  }
  if (c.guesses > kMaxGuesses) {
    std::ostringstream os;
    os << candidate_label(c) << " needs " << c.guesses
       << " specialization guesses, over the fixed cap of " << kMaxGuesses
       << " (estimated cost 2^" << std::fixed << std::setprecision(2)
       << c.log2_cost << " operations)";
    throw BudgetExceeded(os.str());
  }
}

std::uint64_t pow_u64_capped(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (v > (1ull << 40)) return 1ull << 63;  // saturate, only used vs caps
    v *= base;
  }
  return v;
}

std::vector<SolveCandidate> rd_candidates(const RdInstance& inst) {
  const RdShape shape{inst.field.q(), inst.field.m(), inst.n, inst.k, inst.r};
  std::vector<SolveCandidate> out;
  const ComplexityReport rep = optimize_rd(shape);
  for (const AttackPlan& plan : rep.plans) {
    SolveCandidate c;
    switch (plan.variant) {
      case AttackVariant::OVERDETERMINED:
        c.attack = "overdetermined";
        c.columns = big_binom(shape.n, shape.r);
        break;
      case AttackVariant::PUNCTURED:
        c.attack = "punctured";
        c.p = plan.p;
        c.columns = big_binom(shape.n - plan.p, shape.r);
        break;
      case AttackVariant::HYBRID:
        c.attack = "hybrid";
        c.a = plan.a;
        c.columns = big_binom(shape.n - plan.a, shape.r);
        c.guesses = pow_u64_capped(shape.q, plan.a * shape.r);
        break;
      case AttackVariant::SM_RD_COMBINED: {
        // The combined solver works on the unshortened code only.
        const auto b0 = min_b_rd_combined(shape, 0);
        if (!b0) continue;
        c.attack = "combined";
        c.b = *b0;
        c.columns = rd_combined_counts(shape, *b0, 0).columns;
        c.log2_cost = cost_rd_combined(shape, *b0, 0, CostSolver::DENSE);
        out.push_back(c);
        continue;
      }
      default:
        continue;  // no desk-scale solver for this formula
    }
    c.log2_cost = plan.log2_cost;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const SolveCandidate& x, const SolveCandidate& y) {
              return x.log2_cost < y.log2_cost;
            });
  return out;
}

ordered_json instance_json(const RdInstance& inst) {
  return {{"kind", "rd"},     {"q", inst.field.q()}, {"m", inst.field.m()},
          {"n", inst.n},      {"k", inst.k},         {"r", inst.r},
          {"seed", inst.seed}};
}

ordered_json instance_json(const MinRankInstance& inst) {
  return {{"kind", "minrank"}, {"q", inst.base.q()}, {"m", inst.m},
          {"n", inst.n},       {"K", inst.K},        {"r", inst.r},
          {"seed", inst.seed}};
}

struct SolveOutcome {
  ordered_json report;
  int exit_code = kExitOk;
};

void emit_report(const SolveArgs& args, const ordered_json& report) {
  if (args.format == "json") {
    write_output(args.out, report.dump() + "\n");
    return;
  }
  std::ostringstream os;
  os << "plan: " << report["plan"]["attack"].get<std::string>();
  const auto& plan = report["plan"];
  for (const char* key : {"p", "a", "b", "n_prime"}) {
    if (plan.contains(key)) {
      os << " " << key << "=" << plan[key].get<std::uint64_t>();
    }
  }
  if (plan.contains("log2_cost")) {
    os << " (estimated 2^" << std::fixed << std::setprecision(2)
       << plan["log2_cost"].get<double>() << " operations)";
  }
  os << "\n";
  os << "verified: " << (report["verified"].get<bool>() ? "yes" : "no");
  if (report.contains("failure")) {
    os << " (" << report["failure"].get<std::string>() << ")";
  }
  os << "\n";
  os << "wall_ms: " << std::fixed << std::setprecision(1)
     << report["wall_ms"].get<double>() << "\n";
  if (report.contains("solution")) {
    const auto& sol = report["solution"];
    if (sol.contains("e")) os << "e: " << sol["e"].dump() << "\n";
    if (sol.contains("x")) os << "x: " << sol["x"].dump() << "\n";
  }
  write_output(args.out, os.str());
}

SolveOutcome solve_rd(const Options& opt, const SolveArgs& args,
                      const RdInstance& inst) {
  const RdShape shape{inst.field.q(), inst.field.m(), inst.n, inst.k, inst.r};
  SolveCandidate chosen;
  if (args.p) {
    chosen.attack = "punctured";
    chosen.p = *args.p;
    if (*args.p == 0) chosen.attack = "overdetermined";
    if (!overdetermined_ok(shape, *args.p)) {
      throw std::invalid_argument(
          "linearization is underdetermined at p=" + std::to_string(*args.p));
    }
    chosen.columns = big_binom(shape.n - *args.p, shape.r);
    chosen.log2_cost = cost_overdetermined(shape, *args.p);
  } else if (args.a) {
    chosen.attack = "hybrid";
    chosen.a = *args.a;
    if (!hybrid_ok(shape, *args.a)) {
      throw std::invalid_argument(
          "system stays underdetermined at a=" + std::to_string(*args.a));
    }
    chosen.columns = big_binom(shape.n - *args.a, shape.r);
    chosen.guesses = pow_u64_capped(shape.q, *args.a * shape.r);
    chosen.log2_cost = cost_hybrid(shape, *args.a);
  } else if (args.b) {
    chosen.attack = "combined";
    chosen.b = *args.b;
    if (!rd_combined_ok(shape, *args.b, 0)) {
      throw std::invalid_argument(
          "combined system is underdetermined at b=" + std::to_string(*args.b));
    }
    chosen.columns = rd_combined_counts(shape, *args.b, 0).columns;
    chosen.log2_cost = cost_rd_combined(shape, *args.b, 0, CostSolver::DENSE);
  } else {
    const auto cands = rd_candidates(inst);
    if (cands.empty()) {
      throw std::invalid_argument("no applicable attack plan for this shape");
    }
    if (opt.verbose) {
      for (const auto& c : cands) {
        std::cerr << "candidate: " << candidate_label(c) << " cost 2^"
                  << std::fixed << std::setprecision(2) << c.log2_cost
                  << " columns " << c.columns << "\n";
      }
    }
    std::optional<BudgetExceeded> first_refusal;
    bool picked = false;
    for (const auto& c : cands) {
      try {
        check_budget(c, args.budget);
        chosen = c;
        picked = true;
        break;
      } catch (const BudgetExceeded& e) {
        if (!first_refusal) first_refusal = e;
      }
    }
    if (!picked) throw *first_refusal;
  }
  check_budget(chosen, args.budget);

  ordered_json report;
  report["format"] = 1;
  report["instance"] = instance_json(inst);
  ordered_json plan{{"attack", chosen.attack}};
  if (chosen.attack == "punctured") plan["p"] = chosen.p;
  if (chosen.attack == "hybrid") plan["a"] = chosen.a;
  if (chosen.attack == "combined") plan["b"] = chosen.b;
  plan["log2_cost"] = chosen.log2_cost;
  report["plan"] = plan;

  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  try {
    ExtVector e;
    if (chosen.attack == "combined") {
      const SmSystem sys = build_rd_sm(inst, chosen.b);
      const FqVector kernel =
          solve_sm(sys, opt.seed, solver_choice(args.solver));
      const SmSolution sol = extract_solution(kernel, sys);
      e = recover_rd_error(inst, sol.x);
    } else if (chosen.attack == "hybrid") {
      e = solve_hybrid(inst, chosen.a, resolve_threads(opt.threads));
    } else {
      e = solve_overdetermined(inst, chosen.p);
    }
    report["verified"] = true;
    report["solution"] = ordered_json{{"e", e}};
  } catch (const SolveError& err) {
    report["verified"] = false;
    report["failure"] = reason_name(err.reason());
    report["message"] = err.what();
    out.exit_code = exit_code_for(err.reason());
  }
  const auto t1 = std::chrono::steady_clock::now();
  report["wall_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.report = std::move(report);
  return out;
}

SolveOutcome solve_minrank(const Options& opt, const SolveArgs& args,
                           const MinRankInstance& inst) {
  std::size_t b = 0;
  std::size_t n_prime = inst.n;
  if (args.b) {
    b = *args.b;
    if (args.n_prime) n_prime = *args.n_prime;
  } else {
    // Smallest degree whose linearization is expected to reach corank one,
    // judged by the field-aware rank prediction at full width.
    for (std::size_t cand = 1; cand <= inst.r + 1; ++cand) {
      if (inst.base.q() != 2 && inst.base.q() <= cand) break;
      std::uint64_t cols = 0, predicted = 0;
      try {
        cols = sm_monomial_count(inst.base.q(), inst.n, inst.K, inst.r, cand);
        predicted = sm_predicted_rank(inst.base.q(), inst.m, inst.n, inst.K,
                                      inst.r, cand, inst.plant.has_value());
      } catch (const std::overflow_error&) {
        break;
      }
      if (predicted + 1 >= cols) {
        b = cand;
        break;
      }
    }
    if (b == 0) {
      throw std::invalid_argument(
          "no linearization degree reaches corank one at this size");
    }
  }

  SolveCandidate chosen;
  chosen.attack = "support-minors";
  chosen.b = b;
  chosen.n_prime = n_prime;
  {
    BigInt xmons = 0;
    if (inst.base.q() == 2) {
      for (std::size_t j = 1; j <= b; ++j) xmons += big_binom(inst.K, j);
    } else {
      xmons = big_binom(inst.K + b - 1, b);
    }
    chosen.columns = big_binom(n_prime, inst.r) * xmons;
  }
  const MinRankShape shape{inst.base.q(), inst.m, inst.n, inst.K, inst.r};
  try {
    chosen.log2_cost = cost_sm(shape, b, n_prime);
  } catch (const std::invalid_argument&) {
    chosen.log2_cost = 2.0 * log2_big(chosen.columns);  // below the condition
  }
  check_budget(chosen, args.budget);

  ordered_json report;
  report["format"] = 1;
  report["instance"] = instance_json(inst);
  report["plan"] = ordered_json{{"attack", chosen.attack},
                                {"b", b},
                                {"n_prime", n_prime},
                                {"log2_cost", chosen.log2_cost}};

  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  try {
    const auto base_eqs = build_sm_base(inst);
    const SmSystem sys = linearize(inst, base_eqs, b, n_prime);
    const FqVector kernel = solve_sm(sys, opt.seed, solver_choice(args.solver));
    const SmSolution sol = extract_solution(kernel, sys);
    report["verified"] = true;
    report["solution"] = ordered_json{{"x", sol.x}};
  } catch (const SolveError& err) {
    report["verified"] = false;
    report["failure"] = reason_name(err.reason());
    report["message"] = err.what();
    out.exit_code = exit_code_for(err.reason());
  }
  const auto t1 = std::chrono::steady_clock::now();
  report["wall_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.report = std::move(report);
  return out;
}

int cmd_solve(const Options& opt, const SolveArgs& args) {
  const LoadedInstance loaded = parse_instance(read_input(args.path));
  SolveOutcome outcome;
  if (loaded.rd) {
    validate(*loaded.rd);
    if (args.n_prime) {
      throw std::invalid_argument(
          "--n-prime applies to matrix-rank instances only");
    }
    outcome = solve_rd(opt, args, *loaded.rd);
  } else {
    validate(*loaded.minrank);
    if (args.p || args.a) {
      throw std::invalid_argument(
          "puncturing/hybrid knobs apply to rank-decoding instances only");
    }
    outcome = solve_minrank(opt, args, *loaded.minrank);
  }
  emit_report(args, outcome.report);
  return outcome.exit_code;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
  std::string preset_name;
  std::string format = "text";
  double omega = kDefaultOmega;
  std::string out = "-";
  // single-shape mode
  std::uint32_t q = 2;
  std::size_t m = 0, n = 0, k = 0, K = 0, r = 0;
  // sweep mode
  std::size_t n_min = 50, n_max = 140, step = 2;
  double ratio_m_n = 1.18;
};

int emit_reports(const EstimateArgs& args,
                 const std::vector<SchemeReport>& reports) {
  const std::string text = args.format == "csv" ? format_reports_csv(reports)
                                                : format_reports_text(reports);
  write_output(args.out, text);
  return kExitOk;
}

int cmd_estimate_preset(const EstimateArgs& args) {
  return emit_reports(args, evaluate_preset(preset(args.preset_name),
                                            args.omega));
}

int cmd_estimate_rd(const EstimateArgs& args) {
  SchemeEntry entry;
  entry.name = "custom";
  entry.rd = RdShape{args.q, args.m, args.n, args.k, args.r};
  return emit_reports(args, evaluate_preset({entry}, args.omega));
}

int cmd_estimate_minrank(const EstimateArgs& args) {
  SchemeEntry entry;
  entry.name = "custom";
  entry.minrank = MinRankShape{args.q, args.m, args.n, args.K, args.r};
  return emit_reports(args, evaluate_preset({entry}, args.omega));
}

int cmd_estimate_sweep(const EstimateArgs& args) {
  const auto points = sweep_rd_family(args.r, args.n_min, args.n_max,
                                      args.step, args.omega, args.ratio_m_n);
  write_output(args.out, format_sweep_csv(points));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::uint32_t q = 2;
  std::size_t n = 0, k = 0, r = 0;
  std::vector<std::size_t> ps{0};
  std::vector<std::size_t> ms, rs, Ks, bs;
  std::size_t trials = 0;
  double work_cap = 2e9;
  bool unplanted = false;
  std::string out = "-";
};

int cmd_experiment_rank_heuristic(const Options& opt,
                                  const ExperimentArgs& args) {
  std::ostringstream os;
  os << "q,m,n,k,r,p,trials,hits,expected_rank,fraction\n";
  for (std::size_t p : args.ps) {
    const RankHeuristicResult res = verify_rank_heuristic(
        args.q, static_cast<std::uint32_t>(args.ms.at(0)), args.n, args.k,
        args.r, p, args.trials, opt.seed);
    os << args.q << "," << args.ms.at(0) << "," << args.n << "," << args.k
       << "," << args.r << "," << p << "," << res.trials << "," << res.hits
       << "," << res.expected_rank << "," << std::fixed
       << std::setprecision(6) << res.fraction() << "\n";
  }
  write_output(args.out, os.str());
  return kExitOk;
}

int cmd_experiment_dexp(const Options& opt, const ExperimentArgs& args) {
  SmRankGrid grid;
  grid.q = args.q;
  if (!args.ms.empty()) grid.ms = args.ms;
  if (!args.rs.empty()) grid.rs = args.rs;
  if (!args.Ks.empty()) grid.Ks = args.Ks;
  if (!args.bs.empty()) grid.bs = args.bs;
  grid.planted = !args.unplanted;
  const SmRankReport report = survey_sm_rank(
      grid, args.trials, opt.seed,
      static_cast<std::uint64_t>(args.work_cap), resolve_threads(opt.threads));
  std::ostringstream os;
  os << "q,m,n,K,r,b,rows,cols,predicted,measured,match,skipped,note\n";
  for (const SmRankCell& cell : report.cells) {
    os << cell.q << "," << cell.m << "," << cell.n << "," << cell.K << ","
       << cell.r << "," << cell.b << "," << cell.rows << "," << cell.cols
       << "," << cell.predicted << ",";
    if (cell.measured) os << *cell.measured;
    os << "," << (cell.match ? 1 : 0) << "," << (cell.skipped ? 1 : 0) << ",\""
       << cell.note << "\"\n";
  }
  write_output(args.out, os.str());
  std::cerr << "cells=" << report.cells.size()
            << " measured=" << report.measured_cells
            << " matched=" << report.matched
            << " skipped=" << report.skipped_cells << " fraction="
            << std::fixed << std::setprecision(4) << report.match_fraction()
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string instance_path;
  std::string report_path;
};

int cmd_verify(const VerifyArgs& args) {
  const LoadedInstance loaded = parse_instance(read_input(args.instance_path));
  const ordered_json report = ordered_json::parse(read_input(args.report_path));
  if (!report.contains("solution")) {
    std::cerr << "report carries no solution\n";
    return kExitVerifyFailed;
  }
  const auto& sol = report["solution"];
  const auto fail = [](const std::string& why) {
    std::cout << "verification: FAILED (" << why << ")\n";
    return kExitVerifyFailed;
  };
  if (loaded.rd) {
    const RdInstance& inst = *loaded.rd;
    if (!sol.contains("e")) return fail("no error vector in the report");
    ExtVector e;
    try {
      e = sol["e"].get<ExtVector>();
    } catch (const std::exception&) {
      return fail("malformed error vector");
    }
    if (e.size() != inst.n) return fail("error length mismatch");
    for (const ExtElt& coord : e) {
      if (coord.size() != inst.field.m()) return fail("coordinate size");
      for (std::uint32_t c : coord)
        if (c >= inst.field.q()) return fail("coefficient out of range");
    }
    const int w = rank_weight(inst.field, e);
    if (w > static_cast<int>(inst.r)) return fail("rank weight too large");
    ExtVector diff(inst.n, inst.field.zero());
    for (std::size_t j = 0; j < inst.n; ++j)
      diff[j] = inst.field.sub(inst.y[j], e[j]);
    if (!in_code(inst, diff)) return fail("y - e is not a codeword");
    std::cout << "verification: ok (rank weight " << w << ")\n";
    return kExitOk;
  }
  const MinRankInstance& inst = *loaded.minrank;
  if (!sol.contains("x")) return fail("no coefficient vector in the report");
  FqVector x;
  try {
    x = sol["x"].get<FqVector>();
  } catch (const std::exception&) {
    return fail("malformed coefficient vector");
  }
  if (x.size() != inst.K) return fail("coefficient length mismatch");
  bool nonzero = false;
  for (std::uint32_t c : x) {
    if (c >= inst.base.q()) return fail("coefficient out of range");
    nonzero = nonzero || c != 0;
  }
  if (!nonzero) return fail("zero vector");
  DenseMatrix acc(inst.base, inst.m, inst.n);
  for (std::size_t i = 0; i < inst.m; ++i)
    for (std::size_t j = 0; j < inst.n; ++j) {
      std::uint64_t v = 0;
      for (std::size_t t = 0; t < inst.K; ++t)
        v += static_cast<std::uint64_t>(x[t]) * inst.matrices[t].at(i, j);
      acc.set(i, j, static_cast<std::uint32_t>(v % inst.base.q()));
    }
  const std::size_t rank = rref(acc).rank;
  if (rank > inst.r) return fail("combination rank exceeds the target");
  std::cout << "verification: ok (rank " << rank << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  GenArgs gen_args;
  SolveArgs solve_args;
  EstimateArgs est_args;
  ExperimentArgs exp_args;
  VerifyArgs verify_args;
  int rc = kExitOk;

  CLI::App app{
      "rank-metric toolkit: generate, solve, and estimate algebraic attacks "
      "on rank-decoding and matrix-rank problems"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", opt.seed, "random seed (default: 1)")
      ->envname("RANKFORGE_SEED");
  app.add_option("--threads", opt.threads,
                 "worker thread cap; 0 means all available cores");
  app.add_flag("-v,--verbose", opt.verbose, "extra diagnostics on stderr");

  // gen ---------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "write a seeded problem instance");
  gen->require_subcommand(1);
  auto add_gen_common = [&](CLI::App* sub) {
    sub->add_option("--out", gen_args.out, "output file, or - for stdout");
    sub->add_flag("--with-plant", gen_args.with_plant,
                  "keep the planted solution in the file (default: strip it "
                  "and print only its fingerprint)");
  };
  auto* gen_rd_cmd = gen->add_subcommand("rd", "rank-decoding instance with a "
                                               "planted weight-r error");
  gen_rd_cmd->add_option("--q", gen_args.q, "base field size")
      ->check(CLI::Range(2u, 1u << 20));
  gen_rd_cmd->add_option("--m", gen_args.m, "extension degree")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_rd_cmd->add_option("--n", gen_args.n, "code length")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_rd_cmd->add_option("--k", gen_args.k, "code dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_rd_cmd->add_option("--r", gen_args.r, "error rank weight")
      ->required()
      ->check(CLI::PositiveNumber);
  add_gen_common(gen_rd_cmd);
  gen_rd_cmd->callback([&] {
    gen_args.kind = "rd";
    rc = cmd_gen(opt, gen_args);
  });
  auto* gen_mr_cmd =
      gen->add_subcommand("minrank", "matrix-rank instance (planted unless "
                                     "--unplanted)");
  gen_mr_cmd->add_option("--q", gen_args.q, "base field size")
      ->check(CLI::Range(2u, 1u << 20));
  gen_mr_cmd->add_option("--m", gen_args.m, "matrix rows")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_mr_cmd->add_option("--n", gen_args.n, "matrix columns")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_mr_cmd->add_option("--K", gen_args.K, "number of matrices")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_mr_cmd->add_option("--r", gen_args.r, "target rank")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_mr_cmd->add_flag("--unplanted", gen_args.unplanted,
                       "sample matrices without planting a solution");
  add_gen_common(gen_mr_cmd);
  gen_mr_cmd->callback([&] {
    gen_args.kind = "minrank";
    rc = cmd_gen(opt, gen_args);
  });

  // solve -------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run an algebraic attack on an "
                                            "instance file");
  solve->add_option("path", solve_args.path, "instance file, or - for stdin")
      ->required();
  auto* auto_flag =
      solve->add_flag("--auto", solve_args.auto_plan,
                      "pick the cheapest applicable plan (default when no "
                      "knob is given)");
  auto* p_opt = solve->add_option("--p", solve_args.p,
                                  "puncture this many trailing coordinates");
  auto* a_opt = solve->add_option(
      "--a", solve_args.a, "specialize this many trailing support columns");
  auto* b_opt =
      solve->add_option("--b", solve_args.b, "linearization degree");
  auto* np_opt = solve->add_option(
      "--n-prime", solve_args.n_prime,
      "retain only this many leading columns (matrix-rank instances)");
  auto_flag->excludes(p_opt)->excludes(a_opt)->excludes(b_opt)->excludes(
      np_opt);
  p_opt->excludes(a_opt)->excludes(b_opt);
  a_opt->excludes(b_opt);
  solve->add_option("--solver", solve_args.solver,
                    "kernel solver for linearized systems")
      ->check(CLI::IsMember({"auto", "dense", "blackbox"}));
  solve->add_option("--budget", solve_args.budget,
                    "column budget before refusing a plan; 0 = unlimited");
  solve->add_option("--format", solve_args.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  solve->add_option("--out", solve_args.out, "report destination");
  solve->callback([&] { rc = cmd_solve(opt, solve_args); });

  // estimate ----------------------------------------------------------------
  auto* est = app.add_subcommand(
      "estimate", "bit-complexity reports for attack parameter choices");
  auto* preset_opt =
      est->add_option("--preset", est_args.preset_name,
                      "evaluate a named parameter table")
          ->check(CLI::IsMember(preset_names()));
  est->add_option("--format", est_args.format, "output format")
      ->check(CLI::IsMember({"text", "csv"}));
  est->add_option("--omega", est_args.omega, "linear-algebra exponent");
  est->add_option("--out", est_args.out, "output destination");
  auto* est_rd = est->add_subcommand("rd", "one rank-decoding parameter set");
  est_rd->excludes(preset_opt);
  est_rd->add_option("--q", est_args.q, "base field size");
  est_rd->add_option("--m", est_args.m, "extension degree")->required();
  est_rd->add_option("--n", est_args.n, "code length")->required();
  est_rd->add_option("--k", est_args.k, "code dimension")->required();
  est_rd->add_option("--r", est_args.r, "error rank weight")->required();
  est_rd->callback([&] { rc = cmd_estimate_rd(est_args); });
  auto* est_mr =
      est->add_subcommand("minrank", "one matrix-rank parameter set");
  est_mr->excludes(preset_opt);
  est_mr->add_option("--q", est_args.q, "base field size");
  est_mr->add_option("--m", est_args.m, "matrix rows")->required();
  est_mr->add_option("--n", est_args.n, "matrix columns")->required();
  est_mr->add_option("--K", est_args.K, "number of matrices")->required();
  est_mr->add_option("--r", est_args.r, "target rank")->required();
  est_mr->callback([&] { rc = cmd_estimate_minrank(est_args); });
  auto* est_sweep = est->add_subcommand(
      "sweep", "cost curve over code lengths at rate one half");
  est_sweep->excludes(preset_opt);
  est_sweep->add_option("--r", est_args.r, "error rank weight")->required();
  est_sweep->add_option("--n-min", est_args.n_min, "smallest code length");
  est_sweep->add_option("--n-max", est_args.n_max, "largest code length");
  est_sweep->add_option("--step", est_args.step, "code length step")
      ->check(CLI::PositiveNumber);
  est_sweep->add_option("--ratio-m-n", est_args.ratio_m_n,
                        "extension degree = largest prime below n / ratio");
  est_sweep->add_flag("--n2k",
                      "fix code dimension k = n/2 (the supported family)");
  est_sweep->callback([&] { rc = cmd_estimate_sweep(est_args); });
  est->callback([&] {
    if (est->get_subcommands().empty()) {
      if (preset_opt->count() == 0) {
        throw CLI::RequiredError("estimate: --preset or a subcommand");
      }
      rc = cmd_estimate_preset(est_args);
    }
  });

  // experiment --------------------------------------------------------------
  auto* exp = app.add_subcommand(
      "experiment", "measured-vs-predicted rank surveys (CSV)");
  exp->require_subcommand(1);
  auto* exp_rank = exp->add_subcommand(
      "rank-heuristic",
      "frequency of full rank of the linearized decoding system over fresh "
      "planted instances");
  exp_rank->add_option("--q", exp_args.q, "base field size");
  exp_rank
      ->add_option("--m", exp_args.ms, "extension degree")
      ->required()
      ->expected(1);
  exp_rank->add_option("--n", exp_args.n, "code length")->required();
  exp_rank->add_option("--k", exp_args.k, "code dimension")->required();
  exp_rank->add_option("--r", exp_args.r, "error rank weight")->required();
  exp_rank->add_option("--p", exp_args.ps,
                       "puncture counts, one CSV row each (default: 0)");
  exp_rank->add_option("--trials", exp_args.trials, "instances per row")
      ->default_val(100)
      ->check(CLI::PositiveNumber);
  exp_rank->add_option("--out", exp_args.out, "output destination");
  exp_rank->callback([&] { rc = cmd_experiment_rank_heuristic(opt, exp_args); });
  auto* exp_dexp = exp->add_subcommand(
      "dexp", "measured rank of support-minors linearizations against the "
              "predicted value over a parameter grid");
  exp_dexp->add_option("--q", exp_args.q, "base field size")->default_val(13);
  exp_dexp->add_option("--grid", "grid selection (survey = the full built-in "
                                 "validation grid)")
      ->check(CLI::IsMember({"survey"}))
      ->default_str("survey");
  exp_dexp->add_option("--m", exp_args.ms, "restrict matrix row counts");
  exp_dexp->add_option("--r", exp_args.rs, "restrict target ranks");
  exp_dexp->add_option("--K", exp_args.Ks, "restrict matrix counts");
  exp_dexp->add_option("--b", exp_args.bs, "restrict linearization degrees");
  exp_dexp->add_option("--trials", exp_args.trials, "measurements per cell")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  exp_dexp->add_option("--work-cap", exp_args.work_cap,
                       "skip cells above this elimination work estimate");
  exp_dexp->add_flag("--unplanted", exp_args.unplanted,
                     "survey instances without planted solutions");
  exp_dexp->add_option("--out", exp_args.out, "output destination");
  exp_dexp->callback([&] { rc = cmd_experiment_dexp(opt, exp_args); });

  // verify ------------------------------------------------------------------
  auto* ver = app.add_subcommand(
      "verify", "re-check a solve report against its instance file");
  ver->add_option("instance", verify_args.instance_path, "instance file")
      ->required();
  ver->add_option("report", verify_args.report_path,
                  "solve report (json format)")
      ->required();
  ver->callback([&] { rc = cmd_verify(verify_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.reason());
  } catch (const BudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return rc;
}
