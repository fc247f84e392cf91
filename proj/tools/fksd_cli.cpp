// fksd: experiment runner for the functional KSD goodness-of-fit tests.
// Emits a CSV table plus a JSON sidecar with the resolved config and
// per-repetition detail.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fksd/experiments.hpp"
#include "fksd/spectral1d.hpp"

using json = nlohmann::json;
using namespace fksd;

namespace {

struct Config {
  std::string experiment;
  std::string kernel{"se"};
  std::string t{"t1"};
  int n{0};  // 0 = experiment default
  int reps{0};
  int bootstrap{2000};
  double alpha{0.05};
  std::uint64_t seed{0};
  int grid_m{0};
  std::string out;
  std::vector<int> steps{5, 10, 15, 20, 25};
  double delta{std::numeric_limits<double>::quiet_NaN()};
  std::string mu{"gaussian"};
  int n_mc{100000};
  int threads{0};
};

const std::vector<std::string> kExperiments = {
    "exp1", "exp2",    "exp3",     "exp4",    "exp5",    "exp6",
    "exp7", "table1",  "table2",   "gibbs",   "em_study", "testfns",
    "oracle1d"};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
void read_key(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  static const std::vector<std::string> known = {
      "experiment", "kernel", "t",     "n",  "reps",  "bootstrap", "alpha",
      "seed",       "grid_m", "out",   "steps", "delta", "mu",     "n_mc",
      "threads"};
  std::vector<std::string> problems;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      problems.push_back("unknown config key: " + it.key());
  if (!problems.empty()) {
    std::ostringstream msg;
    for (const auto& p : problems) msg << p << "\n";
    throw ConfigError(msg.str());
  }
  Config c;
  try {
    read_key(j, "experiment", c.experiment);
    read_key(j, "kernel", c.kernel);
    read_key(j, "t", c.t);
    read_key(j, "n", c.n);
    read_key(j, "reps", c.reps);
    read_key(j, "bootstrap", c.bootstrap);
    read_key(j, "alpha", c.alpha);
    read_key(j, "seed", c.seed);
    read_key(j, "grid_m", c.grid_m);
    read_key(j, "out", c.out);
    read_key(j, "steps", c.steps);
    read_key(j, "delta", c.delta);
    read_key(j, "mu", c.mu);
    read_key(j, "n_mc", c.n_mc);
    read_key(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value error: ") + e.what());
  }
  return c;
}

bool is_table_cell(const std::string& exp) {
  return exp.rfind("exp", 0) == 0 || exp == "gibbs";
}

void validate(Config& c) {
  std::vector<std::string> problems;
  if (std::find(kExperiments.begin(), kExperiments.end(), c.experiment) ==
      kExperiments.end())
    problems.push_back("unknown experiment '" + c.experiment + "'");
  if (c.kernel != "se" && c.kernel != "imq")
    problems.push_back("kernel must be se or imq, got '" + c.kernel + "'");
  if (c.t != "t1" && c.t != "t2")
    problems.push_back("t must be t1 or t2, got '" + c.t + "'");
  if (!(c.alpha > 0.0 && c.alpha < 1.0))
    problems.push_back("alpha must lie in (0,1)");
  if (c.bootstrap < 1) problems.push_back("bootstrap must be positive");
  if (c.n < 0) problems.push_back("n must be positive");
  if (c.reps < 0) problems.push_back("reps must be positive");
  if (c.grid_m < 0) problems.push_back("grid_m must be positive");
  if (c.n_mc < 1) problems.push_back("n_mc must be positive");
  if (c.mu != "gaussian" && c.mu != "student2" && c.mu != "cauchy")
    problems.push_back("mu must be gaussian, student2 or cauchy");
  if (c.experiment == "gibbs" && std::isnan(c.delta))
    problems.push_back("gibbs requires --delta");
  if (c.experiment == "em_study") {
    if (c.steps.empty()) problems.push_back("em_study requires a steps list");
    for (int s : c.steps)
      if (s < 2) problems.push_back("steps entries must be >= 2");
  }
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ConfigError(msg.str());
  }

  // per-experiment defaults
  if (c.reps == 0) {
    if (c.experiment == "gibbs" || c.experiment == "exp6" ||
        c.experiment == "exp7" || c.experiment == "table2")
      c.reps = 100;
    else
      c.reps = 500;
  }
  if (c.grid_m == 0)
    c.grid_m = (c.experiment == "gibbs" || c.experiment == "em_study") ? 129 : 100;
  if (c.n == 0) {
    if (c.experiment == "gibbs")
      c.n = 100;
    else if (c.experiment == "em_study")
      c.n = 2000;
    else if (c.experiment == "oracle1d")
      c.n = 500;
    else if (is_table_cell(c.experiment))
      c.n = default_sample_count(Experiment(c.experiment[3] - '1'));
  }
  if (c.out.empty()) c.out = c.experiment + ".csv";
}

KernelFamily parse_family(const std::string& s) {
  return s == "se" ? KernelFamily::SE : KernelFamily::IMQ;
}

TChoice parse_t(const std::string& s) {
  return s == "t1" ? TChoice::T1 : TChoice::T2;
}

SpectralFamily parse_mu(const std::string& s) {
  if (s == "gaussian") return SpectralFamily::Gaussian;
  if (s == "student2") return SpectralFamily::StudentT2;
  return SpectralFamily::Cauchy;
}

json config_echo(const Config& c) {
  json j;
  j["experiment"] = c.experiment;
  j["kernel"] = c.kernel;
  j["t"] = c.t;
  j["n"] = c.n;
  j["reps"] = c.reps;
  j["bootstrap"] = c.bootstrap;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["grid_m"] = c.grid_m;
  j["out"] = c.out;
  j["steps"] = c.steps;
  if (!std::isnan(c.delta)) j["delta"] = c.delta;
  j["mu"] = c.mu;
  j["n_mc"] = c.n_mc;
  j["threads"] = c.threads;
  return j;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct CellRow {
  std::string experiment, kernel, t;
  int n;
  std::vector<RepetitionRecord> records;
  double runtime_s;
};

CellRow run_cell_row(const Config& c, const std::string& exp_name,
                     KernelFamily family, TChoice t_choice) {
  TestConfig cfg;
  cfg.n_bootstrap = c.bootstrap;
  cfg.alpha = c.alpha;
  auto t0 = std::chrono::steady_clock::now();
  CellRow row;
  row.experiment = exp_name;
  row.kernel = family == KernelFamily::SE ? "se" : "imq";
  row.t = t_choice == TChoice::T1 ? "t1" : "t2";
  if (exp_name == "gibbs") {
    GibbsCell cell;
    cell.family = family;
    cell.t_choice = t_choice;
    cell.delta = c.delta;
    cell.n_samples = c.n;
    cell.grid_m = c.grid_m;
    row.n = c.n;
    row.records = run_gibbs_cell(cell, cfg, c.reps, c.seed, c.threads);
  } else {
    Experiment exp = Experiment(exp_name[3] - '1');
    BmCell cell;
    cell.experiment = exp;
    cell.family = family;
    cell.t_choice = t_choice;
    cell.n_samples = c.n;
    cell.grid_m = c.grid_m;
    row.n = c.n > 0 ? c.n : default_sample_count(exp);
    row.records = run_bm_cell(cell, cfg, c.reps, c.seed, c.threads);
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

void write_cell_outputs(const Config& c, const std::vector<CellRow>& rows) {
  std::ofstream csv(c.out);
  if (!csv) throw std::runtime_error("cannot write " + c.out);
  csv << "experiment,kernel,t,n,reps,seed,reject_rate,mean_stat,runtime_s\n";
  json detail = json::array();
  for (const auto& row : rows) {
    double mean_stat = 0.0;
    for (const auto& r : row.records) mean_stat += r.statistic;
    mean_stat /= double(row.records.size());
    csv << row.experiment << ',' << row.kernel << ',' << row.t << ',' << row.n
        << ',' << row.records.size() << ',' << c.seed << ','
        << fmt(rejection_rate(row.records)) << ',' << fmt(mean_stat) << ','
        << fmt(row.runtime_s) << '\n';
    json reps = json::array();
    for (const auto& r : row.records)
      reps.push_back({{"statistic", r.statistic},
                      {"threshold", r.threshold},
                      {"gamma", r.gamma},
                      {"reject", r.reject}});
    detail.push_back({{"experiment", row.experiment},
                      {"kernel", row.kernel},
                      {"t", row.t},
                      {"n", row.n},
                      {"reject_rate", rejection_rate(row.records)},
                      {"repetitions", reps}});
  }
  json side;
  side["config"] = config_echo(c);
  side["cells"] = detail;
  std::ofstream js(c.out + ".json");
  js << side.dump(2) << '\n';
}

int run_tables(const Config& c, int first, int last) {
  std::vector<CellRow> rows;
  for (int e = first; e <= last; ++e) {
    Config cell_cfg = c;
    std::string name = "exp" + std::to_string(e);
    for (auto family : {KernelFamily::SE, KernelFamily::IMQ})
      for (auto t : {TChoice::T1, TChoice::T2})
        rows.push_back(run_cell_row(cell_cfg, name, family, t));
  }
  write_cell_outputs(c, rows);
  return 0;
}

int run_em(const Config& c) {
  auto t0 = std::chrono::steady_clock::now();
  auto points = run_em_study(c.steps, c.n, parse_t(c.t), 1.0, c.grid_m, c.seed,
                             c.threads);
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream csv(c.out);
  if (!csv) throw std::runtime_error("cannot write " + c.out);
  csv << "em_steps,v_stat,gamma\n";
  json detail = json::array();
  for (const auto& p : points) {
    csv << p.em_steps << ',' << fmt(p.v_stat) << ',' << fmt(p.gamma) << '\n';
    detail.push_back(
        {{"em_steps", p.em_steps}, {"v_stat", p.v_stat}, {"gamma", p.gamma}});
  }
  json side;
  side["config"] = config_echo(c);
  side["points"] = detail;
  side["runtime_s"] = secs;
  std::ofstream js(c.out + ".json");
  js << side.dump(2) << '\n';
  return 0;
}

ScalarModel demo_model() {
  // p(x) ~ exp(-((x-3)/3)^3)
  return {[](double x) { return -(x - 3.0) * (x - 3.0) / 9.0; }, "skew-cubic"};
}

int run_testfns(const Config& c) {
  Rng rng(c.seed);
  auto rows =
      emit_testfunction_data(demo_model(), parse_mu(c.mu), 10, -10.0, 10.0, 400, rng);
  std::ofstream csv(c.out);
  if (!csv) throw std::runtime_error("cannot write " + c.out);
  csv << "curve,s,x,real_part,score\n";
  for (const auto& r : rows)
    csv << r.curve << ',' << fmt(r.s) << ',' << fmt(r.x) << ','
        << fmt(r.real_part) << ',' << fmt(r.score) << '\n';
  json side;
  side["config"] = config_echo(c);
  side["n_rows"] = rows.size();
  std::ofstream js(c.out + ".json");
  js << side.dump(2) << '\n';
  return 0;
}

int run_oracle1d(const Config& c) {
  auto t0 = std::chrono::steady_clock::now();
  ScalarModel model{[](double x) { return -x; }, "N(0,1)"};
  Rng rng(c.seed);
  std::vector<double> xs(c.n);
  for (double& x : xs) x = 0.5 + rng.normal();

  const int n = c.n;
  Matrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = stein_kernel_1d(xs[i], xs[j], model, KernelFamily::SE, 1.0);
  double vstat = gram.sum() / double(n) / double(n);
  double ustat = (gram.sum() - gram.trace()) / (double(n) * double(n - 1));

  auto est = spectral_ksd_mc(xs, model, parse_mu(c.mu), c.n_mc, rng);
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ofstream csv(c.out);
  if (!csv) throw std::runtime_error("cannot write " + c.out);
  csv << "n,n_mc,seed,spectral_mc,std_error,gram_v,gram_u,runtime_s\n";
  csv << n << ',' << c.n_mc << ',' << c.seed << ',' << fmt(est.value) << ','
      << fmt(est.std_error) << ',' << fmt(vstat) << ',' << fmt(ustat) << ','
      << fmt(secs) << '\n';
  json side;
  side["config"] = config_echo(c);
  side["spectral_mc"] = est.value;
  side["std_error"] = est.std_error;
  side["gram_v"] = vstat;
  side["gram_u"] = ustat;
  std::ofstream js(c.out + ".json");
  js << side.dump(2) << '\n';

  std::cout << "spectral_mc=" << est.value << " gram_v=" << vstat
            << " |diff|=" << std::abs(est.value - vstat) << " (3se="
            << 3.0 * est.std_error << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functional kernel Stein discrepancy experiment runner"};
  std::string config_path;
  Config flags;
  app.add_option("--config", config_path, "JSON config file (flags override)");
  auto* opt_exp = app.add_option("--experiment", flags.experiment,
                                 "exp1..exp7|table1|table2|gibbs|em_study|testfns|oracle1d");
  auto* opt_kernel = app.add_option("--kernel", flags.kernel, "se|imq");
  auto* opt_t = app.add_option("--t", flags.t, "t1|t2");
  auto* opt_n = app.add_option("--n", flags.n, "samples per repetition");
  auto* opt_reps = app.add_option("--reps", flags.reps, "repetitions");
  auto* opt_boot = app.add_option("--bootstrap", flags.bootstrap, "bootstrap replicates");
  auto* opt_alpha = app.add_option("--alpha", flags.alpha, "test level");
  auto* opt_seed = app.add_option("--seed", flags.seed, "master seed");
  auto* opt_m = app.add_option("--grid-m", flags.grid_m, "grid points");
  auto* opt_out = app.add_option("--out", flags.out, "output CSV path");
  auto* opt_steps = app.add_option("--steps", flags.steps, "EM step counts")
                        ->delimiter(',');
  auto* opt_delta =
      app.add_option("--delta", flags.delta, "gibbs endpoint deviation");
  auto* opt_mu = app.add_option("--mu", flags.mu, "gaussian|student2|cauchy");
  auto* opt_nmc = app.add_option("--n-mc", flags.n_mc, "spectral MC draws");
  auto* opt_threads = app.add_option("--threads", flags.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Config c;
  try {
    if (!config_path.empty()) c = load_config_file(config_path);
    if (*opt_exp) c.experiment = flags.experiment;
    if (*opt_kernel) c.kernel = flags.kernel;
    if (*opt_t) c.t = flags.t;
    if (*opt_n) c.n = flags.n;
    if (*opt_reps) c.reps = flags.reps;
    if (*opt_boot) c.bootstrap = flags.bootstrap;
    if (*opt_alpha) c.alpha = flags.alpha;
    if (*opt_seed) c.seed = flags.seed;
    if (*opt_m) c.grid_m = flags.grid_m;
    if (*opt_out) c.out = flags.out;
    if (*opt_steps) c.steps = flags.steps;
    if (*opt_delta) c.delta = flags.delta;
    if (*opt_mu) c.mu = flags.mu;
    if (*opt_nmc) c.n_mc = flags.n_mc;
    if (*opt_threads) c.threads = flags.threads;
    if (c.experiment.empty()) throw ConfigError("no experiment specified");
    validate(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (c.experiment == "table1") return run_tables(c, 1, 5);
    if (c.experiment == "table2") return run_tables(c, 6, 7);
    if (c.experiment == "em_study") return run_em(c);
    if (c.experiment == "testfns") return run_testfns(c);
    if (c.experiment == "oracle1d") return run_oracle1d(c);
    std::vector<CellRow> rows{
        run_cell_row(c, c.experiment, parse_family(c.kernel), parse_t(c.t))};
    write_cell_outputs(c, rows);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
