#include "bitret/cli.hpp"

#include "bitret/bnb.hpp"
#include "bitret/diffset.hpp"
#include "bitret/experiments.hpp"
#include "bitret/instances.hpp"
#include "bitret/io.hpp"
#include "bitret/parallel.hpp"
#include "bitret/random.hpp"
#include "bitret/rrr.hpp"
#include "bitret/spectral.hpp"
#include "bitret/symmetric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>

namespace bitret {

using nlohmann::json;

namespace {

// Invalid input detected after argument parsing.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string> kGenerators = {"legendre", "random", "average", "sparse", "hadamard"};
const std::vector<std::string> kKinds = {"exact", "noisy", "fixed_precision"};

struct GenOptions {
  std::string generator = "legendre";
  int n = 0;
  double delta = 0.5;
  int pool = 100;
  std::optional<int> ones;
  double mu = 0.5;
  std::uint64_t seed = 0;
  std::string kind = "exact";
  std::optional<double> eta;
  std::optional<std::uint64_t> noise_seed;
};

void add_generator_options(CLI::App* cmd, GenOptions& o, bool require_n) {
  auto* n = cmd->add_option("--n", o.n, "Sequence length");
  if (require_n) n->required();
  cmd->add_option("--delta", o.delta, "Density of -1 entries (random)")->capture_default_str();
  cmd->add_option("--pool", o.pool, "Sample pool size (average)")->capture_default_str();
  cmd->add_option("--ones", o.ones, "Number of 1-bits (sparse)");
  cmd->add_option("--mu", o.mu, "Target mean multiplicity when --ones is absent (sparse)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  cmd->add_option("--type", o.kind, "Instance kind")->check(CLI::IsMember(kKinds))->capture_default_str();
  cmd->add_option("--eta", o.eta, "Magnitude tolerance (fixed_precision)");
  cmd->add_option("--noise-seed", o.noise_seed, "Noise seed (noisy); defaults to --seed");
}

Instance targets_instance(const Autocorrelation& a, InstanceKind kind, std::optional<double> eta) {
  const int n = static_cast<int>(a.size());
  auto build = [&](bool raw) {
    switch (kind) {
      case InstanceKind::Exact:
        return make_exact(a, raw);
      case InstanceKind::Noisy:
        return make_noisy(a, raw);
      case InstanceKind::FixedPrecision: {
        if (!eta) throw UsageError("--eta is required for fixed_precision");
        return make_fixed_precision(magnitudes_from_autocorrelation(a).sq, n, *eta);
      }
    }
    throw UsageError("unknown instance kind");
  };
  try {
    return build(false);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument&) {
    return build(true);
  }
}

Instance generate(const GenOptions& o) {
  if (o.n < 2) throw UsageError("--n must be at least 2");
  const InstanceKind kind = parse_instance_kind(o.kind);
  if (kind == InstanceKind::FixedPrecision && !o.eta) throw UsageError("--eta is required for fixed_precision");
  const std::uint64_t noise_seed = o.noise_seed.value_or(o.seed);

  if (o.generator == "hadamard") {
    Instance inst = targets_instance(hadamard_targets(o.n), kind, o.eta);
    inst.meta.generator = "hadamard";
    inst.meta.seed = o.seed;
    inst.meta.rng_id = kRngId;
    return inst;
  }

  SignSequence s = SignSequence::ones(o.n);
  InstanceMeta meta;
  meta.generator = o.generator;
  meta.seed = o.seed;
  if (o.generator == "legendre") {
    s = gen_legendre(o.n);
  } else if (o.generator == "random") {
    s = gen_random(o.n, o.delta, o.seed);
    meta.delta = o.delta;
  } else if (o.generator == "average") {
    auto r = gen_average_case(o.n, o.pool, o.seed);
    s = r.sequence;
  } else if (o.generator == "sparse") {
    const int ones = o.ones.value_or(ones_for_multiplicity(o.n, o.mu));
    auto r = gen_sparse(o.n, ones, o.seed);
    s = SignSequence::from_bits(r.bits);
    meta.mu = r.instance.mu;
  } else {
    throw UsageError("unknown generator '" + o.generator + "'");
  }
  Instance inst = make_instance(s, kind, o.eta, noise_seed);
  const double h = hardness_index(s).h;
  inst.meta.generator = meta.generator;
  inst.meta.seed = meta.seed;
  inst.meta.delta = meta.delta;
  inst.meta.mu = meta.mu;
  inst.meta.hardness = h;
  return inst;
}

std::string family_id(const GenOptions& o) {
  if (o.generator == "legendre" || o.generator == "hadamard") return o.generator + "-" + std::to_string(o.n);
  return o.generator + "-" + std::to_string(o.n) + "-s" + std::to_string(o.seed);
}

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json signs_json(const std::optional<SignSequence>& s) {
  if (!s) return nullptr;
  const auto& v = s->values();
  return std::vector<int>(v.begin(), v.end());
}

// ---------------------------------------------------------------- gen

int cmd_gen(const GenOptions& o, const std::string& path, std::ostream& out) {
  const Instance inst = generate(o);
  if (path.empty() || path == "-") out << instance_to_json(inst);
  else save_instance(inst, path);
  return kExitOk;
}

// ---------------------------------------------------------------- hardness

int cmd_hardness(const std::string& path, const std::string& seq, double slack, std::ostream& out) {
  HardnessReport report;
  if (!seq.empty()) {
    report = hardness_index(SignSequence::parse(seq));
  } else if (!path.empty()) {
    report = hardness_index(load_instance(path), slack);
  } else {
    throw UsageError("hardness needs -i or --seq");
  }
  out << "h," << format_double(report.h) << '\n';
  out << "q,sq_magnitude,excluded\n";
  for (int q = 0; q < static_cast<int>(report.magnitudes.sq.size()); ++q) {
    const bool excluded =
        std::find(report.excluded_q.begin(), report.excluded_q.end(), q) != report.excluded_q.end();
    out << q << ',' << format_double(report.magnitudes.sq[q]) << ',' << (excluded ? 1 : 0) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string path;
  std::string algo;
  double beta = 0.3;
  std::uint64_t max_iters = 10'000'000;
  std::uint64_t seed = 0;
  int p_bits = 8;
  std::uint64_t budget = kDefaultProposalBudget;
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  bool write_solution = false;
  bool wall_time = false;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  Instance inst = load_instance(o.path);
  json result = {{"algo", o.algo}, {"n", inst.n}, {"kind", to_string(inst.kind)}};
  std::optional<SignSequence> solution;
  const auto start = std::chrono::steady_clock::now();

  if (o.algo == "rrr") {
    RrrConfig config;
    config.beta = o.beta;
    config.max_iters = o.max_iters;
    config.seed = o.seed;
    config.validate();
    const RunResult r = run_rrr(inst, config);
    result["beta"] = o.beta;
    result["seed"] = o.seed;
    result["iterations"] = r.iterations;
    solution = r.solution;
  } else if (o.algo == "bnb") {
    BnbConfig config;
    config.max_nodes = o.max_nodes;
    const BnbResult r = branch_and_bound(inst, config);
    result["nodes"] = r.nodes;
    result["ellipsoid_iters"] = r.ellipsoid_iters;
    solution = r.solution;
  } else if (o.algo == "diffset") {
    if (inst.kind != InstanceKind::Exact) throw UsageError("diffset needs an exact instance");
    const DifferenceSetInstance d = difference_instance_from_autocorrelation(inst.autocorrelation);
    const BacktrackProfile r = backtrack_solve(d, o.budget);
    result["k_ones"] = d.k;
    result["mu"] = d.mu;
    result["proposals"] = r.proposals_total;
    result["status"] = to_string(r.status);
    if (r.solution_d) {
      SignSequence s = SignSequence::from_bits(BitSequence::from_support(inst.n, *r.solution_d));
      if (verify(s, inst)) solution = s;
    }
  } else if (o.algo == "sym2") {
    if (inst.kind != InstanceKind::Exact) throw UsageError("sym2 needs an exact instance");
    if (inst.n < 3 || !is_prime(static_cast<std::uint64_t>(inst.n)))
      throw UsageError("sym2 needs an odd prime length");
    try {
      solution = SignSequence::from_bits(solve_symmetric_mod2(inst.autocorrelation));
    } catch (const std::invalid_argument& e) {
      err << "sym2: " << e.what() << '\n';
    }
  } else if (o.algo == "lll") {
    if (inst.n % 2 == 0) throw UsageError("lll needs an odd length");
    const ReductionReport r = solve_symmetric_lll(inst, o.p_bits, inst.planted);
    result["p_bits"] = o.p_bits;
    if (r.span_criterion) result["span_criterion"] = *r.span_criterion;
    solution = r.found_solution;
  } else {
    throw UsageError("unknown algorithm '" + o.algo + "'");
  }

  const bool solved = solution && verify(*solution, inst);
  result["solved"] = solved;
  result["solution"] = solved ? signs_json(solution) : json(nullptr);
  if (o.wall_time) result["wall_ms"] = elapsed_ms(start);
  out << result.dump() << '\n';
  if (solved && o.write_solution) {
    inst.planted = solution;
    save_instance(inst, o.path);
  }
  return solved ? kExitOk : kExitUnsolved;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  std::string algo = "rrr";
  GenOptions gen;
  std::vector<int> ns;
  int instances = 1;
  int trials = 1;
  std::vector<double> betas = {0.3};
  std::vector<int> p_bits = {8};
  std::uint64_t max_iters = 10'000'000;
  std::uint64_t budget = kDefaultProposalBudget;
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t seed = 0;
  int jobs = 1;
  bool wall_time = false;
  std::string output;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.ns.empty()) throw UsageError("--n needs at least one value");
  if (o.instances < 1 || o.trials < 1) throw UsageError("--instances and --trials must be positive");
  const bool deterministic_family = o.gen.generator == "legendre" || o.gen.generator == "hadamard";

  struct Task {
    std::size_t instance;
    std::string id;
    double beta;
    int p_bits;
    int trial;
  };
  std::vector<Instance> instances;
  std::vector<Task> tasks;
  for (int n : o.ns) {
    const int count = deterministic_family ? 1 : o.instances;
    for (int i = 0; i < count; ++i) {
      GenOptions g = o.gen;
      g.n = n;
      g.seed = o.gen.seed + static_cast<std::uint64_t>(i);
      instances.push_back(generate(g));
      const std::size_t idx = instances.size() - 1;
      const std::string id = family_id(g);
      if (o.algo == "rrr") {
        for (double beta : o.betas)
          for (int t = 0; t < o.trials; ++t) tasks.push_back({idx, id, beta, 0, t});
      } else if (o.algo == "lll") {
        for (int p : o.p_bits) tasks.push_back({idx, id, 0, p, 0});
      } else if (o.algo == "bnb" || o.algo == "diffset") {
        tasks.push_back({idx, id, 0, 0, 0});
      } else {
        throw UsageError("unknown algorithm '" + o.algo + "'");
      }
    }
  }

  std::vector<BenchRecord> records(tasks.size());
  parallel_for(tasks.size(), o.jobs, [&](std::size_t i) {
    const Task& task = tasks[i];
    const Instance& inst = instances[task.instance];
    BenchRecord rec;
    rec.n = inst.n;
    rec.instance_id = task.id;
    rec.algo = o.algo;
    const auto start = std::chrono::steady_clock::now();
    if (o.algo == "rrr") {
      RrrConfig config;
      config.beta = task.beta;
      config.max_iters = o.max_iters;
      config.seed = derive_seed(o.seed, static_cast<std::uint64_t>(task.trial));
      const RunResult r = run_rrr(inst, config);
      rec.seed = config.seed;
      rec.beta = task.beta;
      rec.iterations_or_nodes = r.iterations;
      rec.solved = r.solved;
    } else if (o.algo == "bnb") {
      BnbConfig config;
      config.max_nodes = o.max_nodes;
      const BnbResult r = branch_and_bound(inst, config);
      rec.seed = inst.meta.seed;
      rec.iterations_or_nodes = r.nodes;
      rec.solved = r.solved;
    } else if (o.algo == "diffset") {
      const BacktrackProfile r =
          backtrack_solve(difference_instance_from_autocorrelation(inst.autocorrelation), o.budget);
      rec.seed = inst.meta.seed;
      rec.iterations_or_nodes = r.proposals_total;
      rec.solved = r.solved();
    } else {
      const ReductionReport r = solve_symmetric_lll(inst, task.p_bits);
      rec.seed = inst.meta.seed;
      rec.p_bits = task.p_bits;
      rec.solved = r.succeeded;
    }
    if (o.wall_time) rec.wall_ms = elapsed_ms(start);
    records[i] = rec;
  });

  OutputTarget target(o.output, out);
  write_bench_csv(target.stream(), records);
  return kExitOk;
}

// ---------------------------------------------------------------- stats

struct StatsOptions {
  std::string experiment;
  std::string path;
  GenOptions gen;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output;
  // magnitudes
  double beta = -1;
  std::optional<std::uint64_t> burn_in;
  std::uint64_t iterations = 1'000'000;
  int bins = 200;
  double max_value = 2.0;
  // cluster
  int facet_size = 6;
  bool smallest_facet = false;
  int draws = 50;
  std::uint64_t stride = 10'000;
  // treewidth
  std::vector<int> depths;
  int samples = 100;
  // beta-sweep
  std::vector<double> betas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 100;
  std::uint64_t max_iters = 10'000'000;
  // flip-prob
  bool exhaustive = false;
  int flip_index = 0;
};

Instance stats_instance(const StatsOptions& o, const std::string& default_generator, int default_n) {
  if (!o.path.empty()) return load_instance(o.path);
  GenOptions g = o.gen;
  if (g.generator.empty()) g.generator = default_generator;
  if (g.n == 0) g.n = default_n;
  return generate(g);
}

int cmd_stats(StatsOptions o, std::ostream& out) {
  OutputTarget target(o.output, out);
  std::ostream& csv = target.stream();

  if (o.experiment == "flip-prob") {
    if (o.gen.n < 2) throw UsageError("--n must be at least 2");
    csv << "n,method,fraction,probability,std_error,theory\n";
    const std::string theory = format_double(flip_probability_theory(o.gen.n));
    if (o.exhaustive) {
      if (o.gen.n > 24) throw UsageError("--exhaustive supports n <= 24");
      const Fraction f = flip_probability_exhaustive(o.gen.n, o.flip_index);
      csv << o.gen.n << ",exhaustive," << f.numerator << '/' << f.denominator << ',' << format_double(f.value())
          << ",0," << theory << '\n';
    } else {
      const auto est = flip_probability_monte_carlo(o.gen.n, static_cast<std::uint64_t>(o.trials), o.seed, o.flip_index);
      csv << o.gen.n << ",monte_carlo,," << format_double(est.probability) << ',' << format_double(est.std_error) << ','
          << theory << '\n';
    }
    return kExitOk;
  }

  if (o.experiment == "magnitudes") {
    const Instance inst = stats_instance(o, "hadamard", 41);
    HistogramConfig config;
    config.beta = o.beta > 0 ? o.beta : 0.01;
    config.burn_in = o.burn_in.value_or(100'000);
    config.iterations = o.iterations;
    config.seed = o.seed;
    config.bins = o.bins;
    config.max_value = o.max_value;
    const MagnitudeHistogram h = magnitude_histogram(inst, config);
    csv << "# n=" << inst.n << " beta=" << format_double(config.beta)
        << " below_cutoff=" << format_double(h.below_cutoff_fraction)
        << " background=" << format_double(h.background_fraction) << " anomaly_fraction="
        << format_double(h.anomaly_fraction) << " codimension=" << format_double(h.codimension)
        << " anomaly_width=" << format_double(h.anomaly_width) << '\n';
    csv << "bin_lo,bin_hi,count,density\n";
    const double width = h.bin_edges[1] - h.bin_edges[0];
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      const double density = static_cast<double>(h.counts[b]) / (static_cast<double>(h.samples) * width);
      csv << format_double(h.bin_edges[b]) << ',' << format_double(h.bin_edges[b + 1]) << ',' << h.counts[b] << ','
          << format_double(density) << '\n';
    }
    return kExitOk;
  }

  if (o.experiment == "cluster") {
    const Instance inst = stats_instance(o, "legendre", 41);
    if (!inst.planted) throw UsageError("cluster needs an instance with a known solution");
    ClusterExperimentConfig config;
    config.facet_size = o.facet_size;
    config.rrr_smallest_facet = o.smallest_facet;
    config.draws = o.draws;
    config.beta = o.beta > 0 ? o.beta : 0.01;
    config.burn_in = o.burn_in.value_or(100'000);
    config.stride = o.stride;
    config.seed = o.seed;
    config.jobs = o.jobs;
    // RRR and random points come from the a_k = -1 targets.
    const Instance targets = make_exact(hadamard_targets(inst.n), true);
    const ClusterPopulations pops = cluster_populations(inst, *inst.planted, targets, config);
    const auto s = summarize(pops.solutions), r = summarize(pops.rrr), u = summarize(pops.random);
    csv << "# n=" << inst.n << " facet_size=" << config.facet_size << " mean_solutions=" << format_double(s.mean)
        << " mean_rrr=" << format_double(r.mean) << " mean_random=" << format_double(u.mean) << '\n';
    csv << "population,draw,sigma_A\n";
    auto emit = [&](const char* name, const std::vector<double>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) csv << name << ',' << i << ',' << format_double(v[i]) << '\n';
    };
    emit("solution", pops.solutions);
    emit("rrr", pops.rrr);
    emit("random", pops.random);
    return kExitOk;
  }

  if (o.experiment == "treewidth") {
    const Instance inst = stats_instance(o, "average", 48);
    std::vector<int> depths = o.depths;
    if (depths.empty())
      for (int k = 1; k < inst.n; ++k) depths.push_back(k);
    const TreeWidthProfile p = tree_width_profile(inst, depths, o.samples, o.seed, {}, o.jobs);
    csv << "depth,y,p_feasible,w\n";
    for (std::size_t i = 0; i < p.depths.size(); ++i)
      csv << p.depths[i] << ',' << format_double(static_cast<double>(p.depths[i]) / p.n) << ','
          << format_double(p.p_feasible[i]) << ',' << format_double(p.w[i]) << '\n';
    return kExitOk;
  }

  if (o.experiment == "beta-sweep") {
    const Instance inst = stats_instance(o, "legendre", 43);
    const auto rows = beta_sweep(inst, o.betas, o.trials, o.max_iters, o.seed, o.jobs);
    csv << "beta,median,median_times_beta,censored,trials\n";
    for (const auto& row : rows)
      csv << format_double(row.beta) << ',' << format_double(row.median) << ','
          << format_double(row.median_times_beta) << ',' << row.censored << ',' << row.trials << '\n';
    return kExitOk;
  }

  throw UsageError("unknown experiment '" + o.experiment + "'");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bit retrieval instance generation, solvers and experiments", "bitret"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bitret 1.0");

  std::string path, output, seq;
  double slack = 1.0;

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--kind", gen_opts.generator, "Generator")->required()->check(CLI::IsMember(kGenerators));
  add_generator_options(gen, gen_opts, true);
  gen->add_option("-o,--output", output, "Output path, '-' for stdout")->required();

  auto* hard = app.add_subcommand("hardness", "Print the hardness index and magnitudes");
  hard->add_option("-i,--input", path, "Instance file");
  hard->add_option("--seq", seq, "Sign sequence such as '+-++' or '1,-1,1'");
  hard->add_option("--slack", slack, "Noise-floor multiplier for noisy instances")->capture_default_str();

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  solve->add_option("-i,--input", solve_opts.path, "Instance file")->required();
  solve->add_option("--algo", solve_opts.algo, "Solver")
      ->required()
      ->check(CLI::IsMember({"rrr", "bnb", "diffset", "sym2", "lll"}));
  solve->add_option("--beta", solve_opts.beta, "RRR step")->capture_default_str();
  solve->add_option("--max-iters", solve_opts.max_iters, "RRR iteration budget")->capture_default_str();
  solve->add_option("--seed", solve_opts.seed, "RRR start seed")->capture_default_str();
  solve->add_option("--p-bits", solve_opts.p_bits, "Lattice precision bits")->capture_default_str();
  solve->add_option("--budget", solve_opts.budget, "Backtracking proposal budget")->capture_default_str();
  solve->add_option("--max-nodes", solve_opts.max_nodes, "Branch-and-bound node budget");
  solve->add_flag("--write-solution", solve_opts.write_solution, "Store the solution in the instance file");
  solve->add_flag("--wall-time", solve_opts.wall_time, "Report wall time");

  BenchOptions bench_opts;
  bench_opts.jobs = default_jobs();
  auto* bench = app.add_subcommand("bench", "Sweep sizes, steps or precisions and write BenchRecord CSV");
  bench->add_option("--algo", bench_opts.algo, "Solver")
      ->check(CLI::IsMember({"rrr", "bnb", "diffset", "lll"}))
      ->capture_default_str();
  bench->add_option("--family", bench_opts.gen.generator, "Instance generator")
      ->check(CLI::IsMember(kGenerators))
      ->capture_default_str();
  bench->add_option("--n", bench_opts.ns, "Sizes")->required()->delimiter(',');
  bench->add_option("--instances", bench_opts.instances, "Instances per size (seeds seed, seed+1, ...)")
      ->capture_default_str();
  bench->add_option("--trials", bench_opts.trials, "RRR trials per instance and beta")->capture_default_str();
  bench->add_option("--beta", bench_opts.betas, "RRR steps")->delimiter(',');
  bench->add_option("--p-bits", bench_opts.p_bits, "Lattice precisions")->delimiter(',');
  bench->add_option("--delta", bench_opts.gen.delta, "Density of -1 entries (random)")->capture_default_str();
  bench->add_option("--pool", bench_opts.gen.pool, "Sample pool size (average)")->capture_default_str();
  bench->add_option("--mu", bench_opts.gen.mu, "Mean multiplicity (sparse)")->capture_default_str();
  bench->add_option("--type", bench_opts.gen.kind, "Instance kind")
      ->check(CLI::IsMember({"exact", "noisy"}))
      ->capture_default_str();
  bench->add_option("--instance-seed", bench_opts.gen.seed, "First instance seed")->capture_default_str();
  bench->add_option("--max-iters", bench_opts.max_iters, "RRR iteration budget")->capture_default_str();
  bench->add_option("--budget", bench_opts.budget, "Backtracking proposal budget")->capture_default_str();
  bench->add_option("--max-nodes", bench_opts.max_nodes, "Branch-and-bound node budget");
  bench->add_option("--seed", bench_opts.seed, "Trial seed base")->capture_default_str();
  bench->add_option("--jobs", bench_opts.jobs, "Worker threads (default BITRETRIEVAL_JOBS or core count)");
  bench->add_flag("--wall-time", bench_opts.wall_time, "Fill the wall_ms column");
  bench->add_option("-o,--output", bench_opts.output, "CSV path (default stdout)");

  StatsOptions stats_opts;
  stats_opts.jobs = default_jobs();
  stats_opts.gen.generator.clear();
  auto* stats = app.add_subcommand("stats", "Run an experiment and write its CSV");
  stats->add_option("--experiment", stats_opts.experiment, "Experiment")
      ->required()
      ->check(CLI::IsMember({"magnitudes", "cluster", "treewidth", "beta-sweep", "flip-prob"}));
  stats->add_option("-i,--input", stats_opts.path, "Instance file (otherwise generated)");
  stats->add_option("--family", stats_opts.gen.generator, "Instance generator")->check(CLI::IsMember(kGenerators));
  stats->add_option("--n", stats_opts.gen.n, "Sequence length");
  stats->add_option("--pool", stats_opts.gen.pool, "Sample pool size (average)")->capture_default_str();
  stats->add_option("--delta", stats_opts.gen.delta, "Density of -1 entries (random)")->capture_default_str();
  stats->add_option("--type", stats_opts.gen.kind, "Instance kind")
      ->check(CLI::IsMember({"exact", "noisy"}))
      ->capture_default_str();
  stats->add_option("--instance-seed", stats_opts.gen.seed, "Instance seed")->capture_default_str();
  stats->add_option("--seed", stats_opts.seed, "Experiment seed")->capture_default_str();
  stats->add_option("--jobs", stats_opts.jobs, "Worker threads");
  stats->add_option("--beta", stats_opts.beta, "RRR step (magnitudes 0.01, cluster 0.01)");
  stats->add_option("--burn-in", stats_opts.burn_in, "Iterations discarded before sampling (magnitudes 1e5, cluster 1e5)");
  stats->add_option("--iterations", stats_opts.iterations, "Sampled iterations (magnitudes)");
  stats->add_option("--bins", stats_opts.bins, "Histogram bins")->capture_default_str();
  stats->add_option("--max-value", stats_opts.max_value, "Histogram range")->capture_default_str();
  stats->add_option("--facet-size", stats_opts.facet_size, "|J| (cluster)")->capture_default_str();
  stats->add_option("--draws", stats_opts.draws, "Facet draws per population (cluster)")->capture_default_str();
  stats->add_option("--stride", stats_opts.stride, "Iterations between RRR samples (cluster)")
      ->capture_default_str();
  stats->add_flag("--smallest-facet", stats_opts.smallest_facet, "Use the smallest |x_k| as the facet for RRR points (cluster)");
  stats->add_option("--depths", stats_opts.depths, "Depths (treewidth); default all")->delimiter(',');
  stats->add_option("--samples", stats_opts.samples, "Samples per depth (treewidth)")->capture_default_str();
  stats->add_option("--betas", stats_opts.betas, "Steps (beta-sweep)")->delimiter(',');
  stats->add_option("--trials", stats_opts.trials, "Trials per beta (beta-sweep) or Monte Carlo draws (flip-prob)")
      ->capture_default_str();
  stats->add_option("--max-iters", stats_opts.max_iters, "RRR iteration budget (beta-sweep)")->capture_default_str();
  stats->add_flag("--exhaustive", stats_opts.exhaustive, "Exact enumeration (flip-prob)");
  stats->add_option("--flip-index", stats_opts.flip_index, "Flipped position (flip-prob)")->capture_default_str();
  stats->add_option("-o,--output", stats_opts.output, "CSV path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (gen->parsed()) return cmd_gen(gen_opts, output, out);
  if (hard->parsed()) return cmd_hardness(path, seq, slack, out);
  if (solve->parsed()) return cmd_solve(solve_opts, out, err);
  if (bench->parsed()) return cmd_bench(bench_opts, out);
  if (stats->parsed()) return cmd_stats(stats_opts, out);
  return kExitInvalid;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

int run_command(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace bitret
