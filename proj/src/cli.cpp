#include "rsg/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rsg/core_algebra.hpp"
#include "rsg/dlo.hpp"
#include "rsg/errors.hpp"
#include "rsg/formats.hpp"
#include "rsg/relational.hpp"
#include "rsg/repsearch.hpp"

namespace rsg {

namespace {

std::size_t utf8_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xc0) != 0x80) ++w;
  return w;
}

std::string pad_left(const std::string& s, std::size_t width) {
  std::size_t w = utf8_width(s);
  return std::string(width > w ? width - w : 0, ' ') + s;
}

std::string pairs_to_string(const Relation& r) {
  std::string out;
  for (auto [i, j] : r.pairs()) out += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  return out.empty() ? "-" : out;
}

std::string pairs_to_machine(const Relation& r) {
  std::string out;
  for (auto [i, j] : r.pairs()) {
    if (!out.empty()) out += " ";
    out += std::to_string(i) + "," + std::to_string(j);
  }
  return out.empty() ? "-" : out;
}

void print_report_section(std::ostream& out, const FiniteOrderedAlgebra& alg,
                          const std::string& label, const AxiomReport& report) {
  if (report.passed) {
    out << label << ": pass\n";
  } else {
    out << label << ": FAIL (" << report.total_violations << " violation"
        << (report.total_violations == 1 ? "" : "s") << ")\n";
    for (const auto& v : report.violations) {
      out << "  " << v.axiom << ":";
      for (int idx : v.witness) out << " " << alg.elements[static_cast<std::size_t>(idx)];
      if (!v.detail.empty()) out << "  [" << v.detail << "]";
      out << "\n";
    }
  }
}

void print_table(std::ostream& out, const FiniteOrderedAlgebra& alg, TermOp op) {
  int m = alg.size();
  std::size_t w = 1;
  for (const auto& name : alg.elements) w = std::max(w, utf8_width(name));
  out << "table " << term_op_glyph(op) << "  (entry = row " << term_op_glyph(op) << " col)\n";
  out << pad_left("", w + 2);
  for (int c = 0; c < m; ++c) out << pad_left(alg.elements[static_cast<std::size_t>(c)], w + 2);
  out << "\n";
  for (int r = 0; r < m; ++r) {
    out << pad_left(alg.elements[static_cast<std::size_t>(r)], w + 2);
    for (int c = 0; c < m; ++c)
      out << pad_left(alg.elements[static_cast<std::size_t>(alg.apply(op, r, c))], w + 2);
    out << "\n";
  }
}

struct ImplicationRun {
  std::uint64_t units = 0;
  std::uint64_t antecedent_relations = 0;  // exhaustive mode: dense-transitive a's
  std::uint64_t pairs_checked = 0;         // (a, b) pairs with the antecedent evaluated true
  std::uint64_t samples = 0;               // random mode draws
  std::uint64_t counterexamples = 0;
  std::vector<std::string> counterexample_lines;

  void record_counterexample(const RelationalContext& ctx, const Relation& a, const Relation& b) {
    ++counterexamples;
    if (counterexample_lines.size() < 5)
      counterexample_lines.push_back("counterexample: unit=" + pairs_to_string(ctx.unit) +
                                     " a=" + pairs_to_string(a) + " b=" + pairs_to_string(b));
  }
};

ImplicationRun run_implication_exhaustive(int max_base, int jobs = 1) {
  auto units = enumerate_units(max_base, false);
  std::vector<ImplicationRun> per_unit(units.size());

  auto scan_unit = [&](std::size_t idx) {
    const RelationalContext& ctx = units[idx];
    ImplicationRun& run = per_unit[idx];
    run.units = 1;
    int wsize = ctx.unit.count();
    std::vector<Relation> dense;
    for (std::uint64_t amask = 0; amask < (std::uint64_t{1} << wsize); ++amask) {
      Relation a = relation_from_mask(ctx, amask);
      Relation aa = compose(a, a, ctx);
      if (a == aa) dense.push_back(std::move(a));  // antecedent filter
    }
    run.antecedent_relations += dense.size();
    for (std::uint64_t bmask = 0; bmask < (std::uint64_t{1} << wsize); ++bmask) {
      Relation b = relation_from_mask(ctx, bmask);
      Relation bres = rres(b, b, ctx);
      for (const Relation& a : dense) {
        ++run.pairs_checked;
        Relation consequent = compose(compose(a, bres, ctx), a, ctx);
        if (!a.subset_of(consequent)) run.record_counterexample(ctx, a, b);
      }
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < units.size(); ++i) scan_unit(i);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w)
      threads.emplace_back([&, w] {
        for (std::size_t i = static_cast<std::size_t>(w); i < units.size();
             i += static_cast<std::size_t>(jobs))
          scan_unit(i);
      });
    for (auto& t : threads) t.join();
  }

  ImplicationRun total;  // merge in unit order so output never depends on jobs
  for (const auto& r : per_unit) {
    total.units += r.units;
    total.antecedent_relations += r.antecedent_relations;
    total.pairs_checked += r.pairs_checked;
    total.counterexamples += r.counterexamples;
    for (const auto& line : r.counterexample_lines)
      if (total.counterexample_lines.size() < 5) total.counterexample_lines.push_back(line);
  }
  return total;
}

ImplicationRun run_implication_random(int max_base, std::uint64_t count, std::uint64_t seed) {
  ImplicationRun run;
  Rng rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_base));
    RelationalContext ctx = sample_unit(rng, k);
    ++run.units;
    int wsize = std::min(48, ctx.unit.count());
    for (int j = 0; j < 8; ++j) {
      Relation a = relation_from_mask(ctx, sample_subset_mask(rng, wsize));
      if (j % 2 == 0) a = dense_transitive_core(a, ctx);  // make the antecedent reachable
      Relation b = relation_from_mask(ctx, sample_subset_mask(rng, wsize));
      ++run.samples;
      Relation aa = compose(a, a, ctx);
      if (!(a.subset_of(aa) && aa.subset_of(a))) continue;
      ++run.pairs_checked;
      if (!check_density_implication(ctx, a, b)) run.record_counterexample(ctx, a, b);
    }
  }
  return run;
}

struct SearchDisplay {
  RepresentationResult result;
  bool verification_ok = true;
};

void print_search_result(std::ostream& out, const SearchDisplay& d, const std::string& target_label,
                         bool square) {
  const auto& r = d.result;
  out << "target: " << target_label << "\n";
  out << "mode: " << (square ? "square units" : "all transitive units") << "\n";
  out << "base bound: " << r.max_base << "\n";
  if (r.is_found()) {
    out << "verdict: found (base " << r.found->ctx.base_size << ")\n";
    out << "unit: " << pairs_to_string(r.found->ctx.unit) << "\n";
    for (const auto& [name, rel] : r.found->images)
      out << "image " << name << ": " << pairs_to_string(rel) << "\n";
    out << "verification: " << (d.verification_ok ? "pass" : "FAIL") << "\n";
  } else {
    out << "verdict: no representation up to base " << r.max_base << "\n";
  }
  out << "units examined: " << r.counters.units_examined << "\n";
  out << "assignments examined: " << r.counters.assignments_examined << "\n";
  out << "reflexive cuts: " << r.counters.reflexive_cuts << "\n";
  out << "---RESULT---\n";
  out << "command search-rep\n";
  out << "verdict " << (r.is_found() ? "found" : "not_found") << "\n";
  out << "max_base " << r.max_base << "\n";
  out << "units_examined " << r.counters.units_examined << "\n";
  out << "assignments_examined " << r.counters.assignments_examined << "\n";
  out << "reflexive_cuts " << r.counters.reflexive_cuts << "\n";
  if (r.is_found()) {
    out << "base " << r.found->ctx.base_size << "\n";
    out << "unit " << pairs_to_machine(r.found->ctx.unit) << "\n";
    for (const auto& [name, rel] : r.found->images)
      out << "image " << name << " " << pairs_to_machine(rel) << "\n";
  }
  out << "---RESULT---\n";
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

int cmd_validate(const std::string& path, const ValidateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() {
    FiniteOrderedAlgebra alg = load_algebra(path);
    out << "algebra: " << path << " (" << alg.size() << " elements)\n";
    AxiomReport order = check_order(alg, opts.witness_cap);
    AxiomReport semigroup = check_semigroup(alg, opts.witness_cap);
    AxiomReport monotonicity = check_monotonicity(alg, opts.witness_cap);
    AxiomReport residuation = check_residuation(alg, opts.witness_cap);
    print_report_section(out, alg, "order", order);
    print_report_section(out, alg, "semigroup", semigroup);
    print_report_section(out, alg, "monotonicity", monotonicity);
    print_report_section(out, alg, "residuation", residuation);
    out << "antisymmetry warnings: " << order.total_warnings << "\n";
    for (const auto& w : order.warnings) {
      out << "  warning " << w.axiom << ":";
      for (int idx : w.witness) out << " " << alg.elements[static_cast<std::size_t>(idx)];
      out << "\n";
    }
    bool passed = order.passed && semigroup.passed && monotonicity.passed && residuation.passed;
    out << "result: " << (passed ? "pass" : "FAIL") << "\n";
    return passed ? kExitOk : kExitPropertyFailure;
  });
}

int cmd_tables(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    FiniteOrderedAlgebra alg = load_algebra(path);
    out << "elements:";
    for (const auto& name : alg.elements) out << " " << name;
    out << "\n";
    for (TermOp op : {TermOp::comp, TermOp::rres, TermOp::lres}) print_table(out, alg, op);
    if (path != "builtin:paper") return kExitOk;

    TableCheck check = verify_tables(alg);
    out << "reference check: entry(row,col) = row•col matched " << (147 - check.row_col_mismatches)
        << "/147 cells\n";
    out << "reference check: entry(row,col) = col•row matched " << (147 - check.col_row_mismatches)
        << "/147 cells\n";
    if (check.exactly_one_orientation()) {
      out << "orientation: " << (check.col_row_ok() ? "entry(row,col) = col•row (transposed)"
                                                    : "entry(row,col) = row•col")
          << "\n";
      return kExitOk;
    }
    out << "orientation: unresolved\n";
    for (const auto& m : check.discrepancies)
      out << "cell mismatch [" << term_op_glyph(m.op) << "] row=" << reference_header()[static_cast<std::size_t>(m.row)]
          << " col=" << reference_header()[static_cast<std::size_t>(m.col)] << " expected=" << m.expected
          << " row•col=" << m.row_col << " col•row=" << m.col_row << "\n";
    return kExitPropertyFailure;
  });
}

int cmd_close(const std::string& path, const std::string& output_path, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&]() {
    RelationalContext ctx = load_rel_context(path);
    if (ctx.named.empty()) throw ParseError(path + ": no rel lines; nothing to close");
    auto family = close(ctx.named, ctx);
    FiniteOrderedAlgebra alg = to_abstract(family, ctx);
    if (output_path.empty()) {
      write_algebra_file(out, alg);
    } else {
      std::ofstream file(output_path);
      if (!file) throw ParseError(output_path + ": cannot open for writing");
      write_algebra_file(file, alg);
      out << "wrote " << output_path << " (" << alg.size() << " elements from "
          << ctx.named.size() << " generators)\n";
    }
    return kExitOk;
  });
}

int cmd_check_implication(const ImplicationOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    ImplicationRun run;
    if (opts.exhaustive) {
      run = run_implication_exhaustive(opts.max_base, opts.jobs);
      out << "mode: exhaustive\n";
      out << "base bound: " << opts.max_base << "\n";
      out << "units: " << run.units << "\n";
      out << "antecedent relations: " << run.antecedent_relations << "\n";
    } else {
      run = run_implication_random(opts.max_base, opts.random_count, opts.seed);
      out << "mode: random\n";
      out << "base bound: " << opts.max_base << "\n";
      out << "seed: " << opts.seed << "\n";
      out << "units sampled: " << run.units << "\n";
      out << "pairs sampled: " << run.samples << "\n";
    }
    out << "antecedent pairs checked: " << run.pairs_checked << "\n";
    out << "counterexamples: " << run.counterexamples << "\n";
    for (const auto& line : run.counterexample_lines) out << line << "\n";
    out << "---RESULT---\n";
    out << "command check-implication\n";
    out << "mode " << (opts.exhaustive ? "exhaustive" : "random") << "\n";
    out << "max_base " << opts.max_base << "\n";
    if (!opts.exhaustive) out << "seed " << opts.seed << "\n";
    out << "units " << run.units << "\n";
    out << "pairs_checked " << run.pairs_checked << "\n";
    out << "counterexamples " << run.counterexamples << "\n";
    out << "verdict " << (run.counterexamples == 0 ? "pass" : "fail") << "\n";
    out << "---RESULT---\n";
    return run.counterexamples == 0 ? kExitOk : kExitPropertyFailure;
  });
}

int cmd_search_rep(const std::string& path, const SearchRepOptions& opts, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&]() {
    SearchProblem problem =
        path == "builtin:paper"
            ? witness_search_problem(opts.max_base, opts.square)
            : identity_search_problem(load_algebra(path), opts.max_base, opts.square);
    SearchOptions sopts;
    sopts.jobs = opts.jobs;
    if (opts.progress) sopts.progress = &err;
    SearchDisplay display{search_representation(problem, sopts), true};
    if (display.result.is_found())
      display.verification_ok =
          verify_representation(display.result.found->ctx, display.result.found->images, problem)
              .passed;
    std::string label = path + " (" + std::to_string(problem.target.size()) + " elements, " +
                        std::to_string(problem.generators.size()) + " generators)";
    print_search_result(out, display, label, opts.square);
    if (display.result.is_found())
      return display.verification_ok ? kExitOk : kExitPropertyFailure;
    return kExitNotFound;
  });
}

int cmd_verify_paper(const VerifyPaperOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    bool all_ok = true;
    auto stage = [&](int num, const std::string& label, bool ok, const std::string& detail) {
      std::string line = "stage " + std::to_string(num) + "/7 " + label + " ";
      while (utf8_width(line) < 34) line += '.';
      out << line << " " << (ok ? "ok" : "FAIL");
      if (!detail.empty()) out << " (" << detail << ")";
      out << "\n";
      all_ok = all_ok && ok;
    };
    out << "verify builtin:paper (base bound " << opts.max_base << ")\n";

    const WitnessAlgebra& w = witness_algebra();
    stage(1, "closure", w.closure.size() == 7 && w.algebra.size() == 7, "7 elements");

    AxiomReport axioms = validate(w.algebra);
    stage(2, "axioms", axioms.passed,
          std::to_string(axioms.total_violations) + " violations, " +
              std::to_string(axioms.total_warnings) + " warnings");

    PatternRelation a = pattern_a(), b = pattern_b();
    PatternRelation bres = rres_sym(b, b);
    PatternRelation annihilator = compose_sym(compose_sym(a, bres), a);
    bool identities = compose_sym(a, a) == a && bres == w.relation_of("b′") &&
                      annihilator == PatternRelation{} && !a.subset_of(annihilator);
    stage(3, "identities", identities, "a=a∘a, b\\b=b′, a∘(b\\b)∘a=⊥, a⋢⊥");

    TableCheck tables = verify_tables(w.algebra);
    bool tables_ok = tables.exactly_one_orientation() && tables.col_row_ok();
    stage(4, "tables", tables_ok,
          "orientation col•row, " + std::to_string(147 - tables.col_row_mismatches) + "/147 cells");

    ImplicationRun imp = run_implication_exhaustive(3, opts.jobs);
    stage(5, "implication n≤3", imp.counterexamples == 0,
          std::to_string(imp.units) + " units, " + std::to_string(imp.pairs_checked) +
              " pairs, " + std::to_string(imp.counterexamples) + " counterexamples");

    SearchOptions sopts;
    sopts.jobs = opts.jobs;
    RepresentationResult search =
        search_representation(witness_search_problem(opts.max_base, false), sopts);
    stage(6, "search base≤" + std::to_string(opts.max_base), !search.is_found(),
          "not found; " + std::to_string(search.counters.units_examined) + " units, " +
              std::to_string(search.counters.assignments_examined) + " assignments");

    RepresentationResult square =
        search_representation(witness_search_problem(std::min(opts.max_base, 4), true), sopts);
    bool square_ok = !square.is_found() &&
                     square.counters.reflexive_cuts == square.counters.units_examined;
    stage(7, "square search", square_ok,
          "not found; " + std::to_string(square.counters.units_examined) + " units, " +
              std::to_string(square.counters.reflexive_cuts) + " cuts");

    out << "result: " << (all_ok ? "pass" : "FAIL") << "\n";
    return all_ok ? kExitOk : kExitPropertyFailure;
  });
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"finite-model toolkit for residuated semigroups"};
  app.require_subcommand(1);

  std::string path, output_path;
  ValidateOptions vopts;
  ImplicationOptions iopts;
  SearchRepOptions sopts;
  VerifyPaperOptions popts;

  auto* validate_cmd = app.add_subcommand("validate", "check the residuated-semigroup axioms");
  validate_cmd->add_option("file", path, "algebra file or builtin:paper")->required();
  validate_cmd->add_option("--witness-cap", vopts.witness_cap, "max recorded witnesses per axiom");

  auto* tables_cmd = app.add_subcommand("tables", "print the operation tables");
  tables_cmd->add_option("file", path, "algebra file or builtin:paper")->required();

  auto* close_cmd = app.add_subcommand("close", "close generators and export the abstract algebra");
  close_cmd->add_option("file", path, "relational structure file")->required();
  close_cmd->add_option("-o,--output", output_path, "write the algebra file here");

  auto* imp_cmd = app.add_subcommand("check-implication",
                                     "search for counterexamples to: a dense and transitive "
                                     "implies a ≤ a∘(b\\b)∘a");
  imp_cmd->add_option("--n", iopts.max_base, "base bound")->required();
  auto* exhaustive_flag = imp_cmd->add_flag("--exhaustive", iopts.exhaustive, "all units, all pairs");
  auto* random_opt = imp_cmd->add_option("--random", iopts.random_count, "number of random units");
  imp_cmd->add_option("--seed", iopts.seed, "random seed");
  imp_cmd->add_option("--jobs", iopts.jobs, "parallel workers (exhaustive mode)");
  exhaustive_flag->excludes(random_opt);

  auto* search_cmd = app.add_subcommand("search-rep", "search for a representation on a finite base");
  search_cmd->add_option("file", path, "algebra file or builtin:paper")->required();
  search_cmd->add_option("--max-base", sopts.max_base, "largest base size to try");
  search_cmd->add_flag("--square", sopts.square, "square units only");
  search_cmd->add_option("--jobs", sopts.jobs, "parallel workers");
  search_cmd->add_flag("--progress", sopts.progress, "per-unit progress on stderr");

  auto* verify_cmd = app.add_subcommand("verify-paper", "run the full built-in verification pipeline");
  verify_cmd->add_option("--max-base", popts.max_base, "base bound for the search stage");
  verify_cmd->add_option("--jobs", popts.jobs, "parallel workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (app.got_subcommand(validate_cmd)) return cmd_validate(path, vopts, std::cout, std::cerr);
  if (app.got_subcommand(tables_cmd)) return cmd_tables(path, std::cout, std::cerr);
  if (app.got_subcommand(close_cmd)) return cmd_close(path, output_path, std::cout, std::cerr);
  if (app.got_subcommand(imp_cmd)) {
    if (!iopts.exhaustive && iopts.random_count == 0) {
      std::cerr << "error: choose --exhaustive or --random COUNT\n";
      return kExitInputError;
    }
    return cmd_check_implication(iopts, std::cout, std::cerr);
  }
  if (app.got_subcommand(search_cmd)) return cmd_search_rep(path, sopts, std::cout, std::cerr);
  if (app.got_subcommand(verify_cmd)) return cmd_verify_paper(popts, std::cout, std::cerr);
  return kExitInputError;
}

}  // namespace rsg
