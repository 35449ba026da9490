// lineopt: joint rapid/slow transit line design.
//
// Subcommands: validate, gen, filter, solve, sequential, oracle, report,
// plot, lp. Exit codes: 0 success, 1 infeasible / no solution, 2 usage,
// 3 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"

#include "lineopt/benders.hpp"
#include "lineopt/bb.hpp"
#include "lineopt/formulation.hpp"
#include "lineopt/instance.hpp"
#include "lineopt/lp.hpp"
#include "lineopt/mps.hpp"
#include "lineopt/oracle.hpp"
#include "lineopt/report.hpp"
#include "lineopt/solution.hpp"
#include "lineopt/svg.hpp"
#include "lineopt/synthetic.hpp"

namespace {

using namespace lineopt;

struct SolveArgs {
  std::vector<std::string> instances;
  std::string method = "direct";
  double percentage = 0.0;
  int type = 2;
  double lambda = 0.5;
  double time_limit = 1e18;
  unsigned int seed = 1;
  std::string solution_out;
  std::string record_out;
  std::string cut_log;
  std::string export_mps;
  bool verbose = false;
  int jobs = 1;
};

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Derives per-instance output names when one run covers several instances.
std::string derived_name(const std::string& base, const std::string& instance, std::size_t count) {
  if (base.empty()) return "";
  if (count == 1) return base;
  std::filesystem::path p(base);
  const std::string ext = p.extension().string();
  return (p.parent_path() / (p.stem().string() + "-" + stem_of(instance) + ext)).string();
}

int solve_one(const SolveArgs& args, const std::string& path, std::mutex& io) {
  const TransitInstance inst = load_instance(path);

  RunRecord rec;
  rec.instance = stem_of(path);
  rec.method = args.method;
  rec.time_limit_s = args.time_limit;

  std::optional<DesignSolution> solution;
  if (args.method == "direct") {
    BuiltModel built = build_ind(inst);
    if (!args.export_mps.empty())
      write_mps_file(built.model, derived_name(args.export_mps, path, args.instances.size()));
    BbOptions opt;
    opt.limits.time_limit_s = args.time_limit;
    opt.log = args.verbose;
    opt.branch_priority = default_branch_priorities(built.dir);
    const MilpResult res = solve_milp(built.model, {}, opt);
    rec.stats = res.stats;
    if (res.values) solution = extract_solution(inst, built, *res.values);
  } else if (args.method == "benders") {
    BendersOptions opt;
    opt.partial.percentage = args.percentage;
    opt.partial.selection_type = args.type;
    opt.partial.seed = args.seed;
    opt.stabilization.lambda = args.lambda;
    opt.limits.time_limit_s = args.time_limit;
    opt.log = args.verbose;
    opt.collect_cuts = !args.cut_log.empty();
    rec.percentage = args.percentage;
    rec.selection_type = args.type;
    BendersResult res = solve_benders(inst, opt);
    rec.stats = res.stats;
    solution = res.solution;
    if (!args.cut_log.empty()) {
      std::ofstream log(derived_name(args.cut_log, path, args.instances.size()));
      for (const BendersCut& c : res.cuts) {
        log << "{\"pair\":" << c.pair << ",\"lambda\":" << c.lambda
            << ",\"dual_objective\":" << c.dual_objective << ",\"violation\":" << c.violation
            << ",\"nnz\":" << c.row.coef.size() << "}\n";
      }
    }
  } else {
    throw CLI::ValidationError("--method", "expected direct or benders");
  }

  if (solution) rec.coverage = solution->stats;
  if (!args.record_out.empty())
    save_run_record(rec, derived_name(args.record_out, path, args.instances.size()));
  if (solution && !args.solution_out.empty())
    save_solution(*solution, derived_name(args.solution_out, path, args.instances.size()), path);

  {
    std::lock_guard<std::mutex> lock(io);
    if (solution) {
      std::printf("%s: objective %lld (%s in %.2fs, %lld nodes, %lld cuts, gap %.4g%%)\n",
                  rec.instance.c_str(), static_cast<long long>(std::llround(solution->objective)),
                  rec.stats.termination.c_str(), rec.stats.wall_time_s, rec.stats.nodes,
                  rec.stats.cuts, rec.stats.gap_percent);
    } else {
      std::printf("%s: no solution (%s)\n", rec.instance.c_str(), rec.stats.termination.c_str());
    }
  }
  return solution ? 0 : 1;
}

int cmd_solve(const SolveArgs& args) {
  if (args.jobs <= 1 || args.instances.size() == 1) {
    int rc = 0;
    std::mutex io;
    for (const std::string& path : args.instances) rc = std::max(rc, solve_one(args, path, io));
    return rc;
  }
  std::mutex io;
  std::vector<std::thread> pool;
  std::vector<int> codes(args.instances.size(), 0);
  std::size_t next = 0;
  std::mutex next_mu;
  const int workers = std::min<std::size_t>(args.jobs, args.instances.size());
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t mine;
        {
          std::lock_guard<std::mutex> lock(next_mu);
          if (next >= args.instances.size()) return;
          mine = next++;
        }
        try {
          codes[mine] = solve_one(args, args.instances[mine], io);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(io);
          std::fprintf(stderr, "%s: %s\n", args.instances[mine].c_str(), e.what());
          codes[mine] = 3;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  int rc = 0;
  for (int c : codes) rc = std::max(rc, c);
  return rc;
}

int cmd_sequential(const std::string& path, const std::string& solution_out,
                   const std::string& record_out, double time_limit, bool verbose) {
  const TransitInstance inst = load_instance(path);
  SequentialModels seq = build_sequential(inst);

  BbOptions opt;
  opt.limits.time_limit_s = time_limit;
  opt.log = verbose;
  opt.branch_priority = default_branch_priorities(seq.stage1.dir);
  const MilpResult stage1 = solve_milp(seq.stage1.model, {}, opt);
  if (!stage1.values) {
    std::printf("%s: stage 1 found no rapid-only design (%s)\n", stem_of(path).c_str(),
                stage1.stats.termination.c_str());
    return 1;
  }
  const DesignSolution rapid_design = extract_solution(inst, seq.stage1, *stage1.values);
  std::printf("stage 1 (rapid only): objective %lld\n",
              static_cast<long long>(std::llround(rapid_design.objective)));

  BuiltModel stage2 = seq.stage2(rapid_design);
  BbOptions opt2 = opt;
  opt2.branch_priority = default_branch_priorities(stage2.dir);
  const MilpResult res2 = solve_milp(stage2.model, {}, opt2);
  if (!res2.values) {
    std::printf("%s: stage 2 found no slow re-fit (%s)\n", stem_of(path).c_str(),
                res2.stats.termination.c_str());
    return 1;
  }
  const DesignSolution sol = extract_solution(inst, stage2, *res2.values);
  std::printf("stage 2 (joint coverage): objective %lld\n",
              static_cast<long long>(std::llround(sol.objective)));

  if (!record_out.empty()) {
    RunRecord rec;
    rec.instance = stem_of(path);
    rec.method = "sequential";
    rec.time_limit_s = time_limit;
    rec.stats = res2.stats;
    rec.coverage = sol.stats;
    save_run_record(rec, record_out);
  }
  if (!solution_out.empty()) save_solution(sol, solution_out, path);
  return 0;
}

int cmd_oracle(const std::string& path, const std::string& solution_out, bool sequential,
               long long cap) {
  const TransitInstance inst = load_instance(path);
  OracleLimits lim;
  if (cap > 0) lim.max_design_pairs = cap;
  if (sequential) {
    const SequentialOracleResult res = solve_sequential_exact(inst, lim);
    std::printf("sequential oracle: stage1 %lld joint %lld\n",
                static_cast<long long>(res.stage1_objective), static_cast<long long>(res.objective));
    if (!solution_out.empty()) save_solution(res.solution, solution_out, path);
    return 0;
  }
  const OracleResult res = solve_exact(inst, lim);
  std::printf("oracle objective %lld over %lld designs\n", static_cast<long long>(res.objective),
              res.designs_seen);
  if (!solution_out.empty()) save_solution(res.solution, solution_out, path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint rapid/slow transit line design"};
  app.require_subcommand(1);

  // validate
  std::string v_file;
  auto* validate_cmd = app.add_subcommand("validate", "check an instance file");
  validate_cmd->add_option("file", v_file, "instance file")->required();

  // gen
  unsigned int g_seed = 1;
  std::string g_size = "tiny", g_out;
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--size", g_size, "tiny | small | seville-like");
  gen->add_option("-o,--out", g_out, "output instance file")->required();

  // filter
  std::int64_t f_min = 0;
  std::string f_in, f_out;
  auto* filter_cmd = app.add_subcommand("filter", "restrict to pairs with demand >= threshold");
  filter_cmd->add_option("--min-demand", f_min, "demand threshold")->required();
  filter_cmd->add_option("instance", f_in, "input instance")->required();
  filter_cmd->add_option("-o,--out", f_out, "output instance file")->required();

  // solve
  SolveArgs s;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("instance", s.instances, "instance file(s)")->required();
  solve_cmd->add_option("--method", s.method, "direct | benders");
  solve_cmd->add_option("--percentage", s.percentage, "share of pairs kept in the Benders master");
  solve_cmd->add_option("--type", s.type, "retained-pair rule: 1 random, 2 high demand, 3 low");
  solve_cmd->add_option("--lambda", s.lambda, "in-out separation weight");
  solve_cmd->add_option("--time-limit", s.time_limit, "seconds");
  solve_cmd->add_option("--seed", s.seed, "seed for the random retained-pair rule");
  solve_cmd->add_option("-o,--solution", s.solution_out, "solution file");
  solve_cmd->add_option("--record", s.record_out, "run record file");
  solve_cmd->add_option("--cut-log", s.cut_log, "benders cut log (json lines)");
  solve_cmd->add_option("--export-mps", s.export_mps, "write the model in MPS form");
  solve_cmd->add_option("--jobs", s.jobs, "solve instances concurrently");
  solve_cmd->add_flag("--verbose", s.verbose, "progress log");

  // sequential
  std::string q_in, q_sol, q_rec;
  double q_tl = 1e18;
  bool q_verbose = false;
  auto* seq_cmd = app.add_subcommand("sequential", "two-stage baseline: rapid first, slow re-fit");
  seq_cmd->add_option("instance", q_in, "instance file")->required();
  seq_cmd->add_option("-o,--solution", q_sol, "solution file");
  seq_cmd->add_option("--record", q_rec, "run record file");
  seq_cmd->add_option("--time-limit", q_tl, "seconds per stage");
  seq_cmd->add_flag("--verbose", q_verbose, "progress log");

  // oracle
  std::string o_in, o_sol;
  bool o_seq = false;
  long long o_cap = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive ground truth for tiny instances");
  oracle_cmd->add_option("instance", o_in, "instance file")->required();
  oracle_cmd->add_option("-o,--solution", o_sol, "solution file");
  oracle_cmd->add_flag("--sequential", o_seq, "two-stage enumeration instead of joint");
  oracle_cmd->add_option("--cap", o_cap, "design-pair cap override");

  // report
  std::vector<std::string> r_files;
  std::string r_format = "table";
  auto* report_cmd = app.add_subcommand("report", "tabulate run records");
  report_cmd->add_option("records", r_files, "run record files")->required();
  report_cmd->add_option("--format", r_format, "table | csv");

  // plot
  std::string p_sol, p_out, p_inst;
  auto* plot_cmd = app.add_subcommand("plot", "render a solution as SVG");
  plot_cmd->add_option("solution", p_sol, "solution file")->required();
  plot_cmd->add_option("-o,--out", p_out, "output SVG")->required();
  plot_cmd->add_option("--instance", p_inst, "instance file (overrides the embedded path)");

  // lp (standalone MPS debugging)
  std::string l_in;
  auto* lp_cmd = app.add_subcommand("lp", "solve the LP relaxation of an MPS file");
  lp_cmd->add_option("file", l_in, "MPS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate_cmd) {
      try {
        const TransitInstance inst = load_instance(v_file);
        std::printf("ok: %zu nodes, %zu edges, %zu centroids, %zu pairs, %zu walk links\n",
                    inst.nodes.size(), inst.edges.size(), inst.centroids.size(),
                    inst.demands.size(), inst.walk_links.size());
        return 0;
      } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid: %s\n", e.what());
        return 1;
      }
    }
    if (*gen) {
      TransitInstance inst = generate_synthetic(g_seed, size_class_from(g_size));
      inst.name = g_size + "-s" + std::to_string(g_seed);
      save_instance(inst, g_out);
      std::printf("wrote %s (%zu nodes, %zu edges, %zu centroids, %zu pairs)\n", g_out.c_str(),
                  inst.nodes.size(), inst.edges.size(), inst.centroids.size(), inst.demands.size());
      return 0;
    }
    if (*filter_cmd) {
      const TransitInstance inst = load_instance(f_in);
      const TransitInstance out = filter_by_demand(inst, f_min);
      save_instance(out, f_out);
      std::printf("kept %zu of %zu pairs\n", out.demands.size(), inst.demands.size());
      return 0;
    }
    if (*solve_cmd) return cmd_solve(s);
    if (*seq_cmd) return cmd_sequential(q_in, q_sol, q_rec, q_tl, q_verbose);
    if (*oracle_cmd) return cmd_oracle(o_in, o_sol, o_seq, o_cap);
    if (*report_cmd) {
      std::vector<RunRecord> recs;
      for (const std::string& f : r_files) recs.push_back(load_run_record(f));
      if (r_format == "csv") std::fputs(render_csv(recs).c_str(), stdout);
      else if (r_format == "table") std::fputs(render_table(recs).c_str(), stdout);
      else throw CLI::ValidationError("--format", "expected table or csv");
      return 0;
    }
    if (*plot_cmd) {
      std::string embedded;
      const DesignSolution sol = load_solution(p_sol, &embedded);
      const std::string inst_path = !p_inst.empty() ? p_inst : embedded;
      if (inst_path.empty()) {
        std::fprintf(stderr, "plot: no instance path (pass --instance)\n");
        return 2;
      }
      const TransitInstance inst = load_instance(inst_path);
      std::ofstream out(p_out);
      if (!out) throw std::runtime_error("cannot open " + p_out);
      out << render_design(inst, sol);
      return 0;
    }
    if (*lp_cmd) {
      const MilpModel model = read_mps_file(l_in);
      const LpOutcome res = solve_lp_relaxation(model);
      std::printf("%s", to_string(res.status));
      if (res.status == LpStatus::optimal) std::printf(" objective %.10g", res.objective);
      std::printf(" (%d iterations)\n", res.iterations);
      return res.status == LpStatus::optimal ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 2;
}
