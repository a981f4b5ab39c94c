#include "critlab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "critlab/collapse.hpp"
#include "critlab/datasets.hpp"
#include "critlab/io.hpp"
#include "critlab/suites.hpp"
#include "critlab/surrogate.hpp"
#include "critlab/svg.hpp"
#include "critlab/train.hpp"

namespace critlab {

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double token_number(const std::string& token, const std::string& arg) {
  try {
    std::size_t pos = 0;
    double v = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("criterion token '" + token + "': bad number '" + arg + "'");
  }
}

DispersionFunction rho_from_args(const std::string& token,
                                 const std::vector<std::string>& args,
                                 std::size_t* consumed) {
  if (args.empty())
    throw ConfigError("criterion token '" + token + "': missing rho name");
  const std::string& name = args[0];
  auto num = [&](std::size_t i) {
    if (i >= args.size())
      throw ConfigError("criterion token '" + token + "': missing parameter for " +
                        name);
    return token_number(token, args[i]);
  };
  if (name == "identity") { *consumed = 1; return DispersionFunction::identity(); }
  if (name == "tilt") { *consumed = 2; return DispersionFunction::exp_tilt(num(1)); }
  if (name == "cvar") { *consumed = 2; return DispersionFunction::cvar_hinge(num(1)); }
  if (name == "cressie-read") {
    *consumed = 3;
    return DispersionFunction::cressie_read_power(num(1), num(2));
  }
  if (name == "abs") { *consumed = 1; return DispersionFunction::absolute_value(); }
  if (name == "pseudo-huber") { *consumed = 1; return DispersionFunction::pseudo_huber(); }
  if (name == "quadratic") { *consumed = 1; return DispersionFunction::quadratic(); }
  throw ConfigError("criterion token '" + token + "': unknown rho '" + name + "'");
}


double resolve_double(RunConfig& cfg, const std::string& key, double dflt) {
  if (!cfg.has(key)) cfg.set_double(key, dflt);
  return cfg.get_double(key);
}

long resolve_int(RunConfig& cfg, const std::string& key, long dflt) {
  if (!cfg.has(key)) cfg.set_int(key, dflt);
  return cfg.get_int(key);
}

std::string resolve_string(RunConfig& cfg, const std::string& key,
                           const std::string& dflt) {
  if (!cfg.has(key)) cfg.set(key, dflt);
  return cfg.get(key);
}

std::filesystem::path out_path(const CliOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return std::filesystem::path(opt.out_dir) / name;
}

void resolve_seed(RunConfig& cfg, const CliOptions& opt) {
  if (opt.seed)
    cfg.set_int("seed", static_cast<long>(*opt.seed));
  else if (!cfg.has("seed"))
    cfg.set_int("seed", 1);
}

std::uint64_t seed_of(const RunConfig& cfg) {
  return static_cast<std::uint64_t>(cfg.get_int("seed"));
}

// ---- dataset / model resolution shared by train and sweep ----

SplitDataset resolve_dataset(RunConfig& cfg) {
  std::string kind = resolve_string(cfg, "data.kind", "blobs2");
  long n_train = resolve_int(cfg, "data.train", 2000);
  long n_val = resolve_int(cfg, "data.val", 500);
  long n_test = resolve_int(cfg, "data.test", 500);
  std::uint64_t seed = seed_of(cfg);

  SplitDataset data;
  if (kind == "blobs2") {
    double sep = resolve_double(cfg, "data.sep", 1.2);
    double noise = resolve_double(cfg, "data.noise", 0.5);
    data = split_blobs_binary(seed, static_cast<int>(n_train),
                              static_cast<int>(n_val), static_cast<int>(n_test),
                              sep, noise);
  } else if (kind == "blobs3") {
    long k = resolve_int(cfg, "data.classes", 3);
    double radius = resolve_double(cfg, "data.radius", 1.5);
    double noise = resolve_double(cfg, "data.noise", 0.4);
    data = split_blobs_multi(seed, static_cast<int>(n_train),
                             static_cast<int>(n_val), static_cast<int>(n_test),
                             static_cast<int>(k), radius, noise);
  } else if (kind == "file") {
    if (!cfg.has("data.file"))
      throw ConfigError("data.kind = file requires data.file");
    std::string path = cfg.get("data.file");
    if (!std::filesystem::exists(path))
      throw ConfigError("dataset file not found: " + path);
    Dataset all = load_dataset(path);
    if (n_train + n_val + n_test > all.size())
      throw ConfigError("dataset file " + path + " has " +
                        std::to_string(all.size()) +
                        " examples, fewer than the requested splits");
    auto slice = [&](int from, int count) {
      Dataset d;
      d.dim = all.dim;
      d.classes = all.classes;
      d.X.assign(all.X.begin() + static_cast<std::size_t>(from) * all.dim,
                 all.X.begin() + static_cast<std::size_t>(from + count) * all.dim);
      d.y.assign(all.y.begin() + from, all.y.begin() + from + count);
      return d;
    };
    data.train = slice(0, static_cast<int>(n_train));
    data.val = slice(static_cast<int>(n_train), static_cast<int>(n_val));
    data.test = slice(static_cast<int>(n_train + n_val), static_cast<int>(n_test));
  } else {
    throw ConfigError("data.kind must be blobs2, blobs3 or file, got " + kind);
  }

  if (cfg.has("data.dump")) save_dataset(cfg.get("data.dump"), data.train);
  return data;
}

LossKind resolve_loss(RunConfig& cfg, const SplitDataset& data) {
  bool multiclass = data.train.classes > 2 ||
                    (!data.train.y.empty() &&
                     *std::min_element(data.train.y.begin(), data.train.y.end()) >= 0);
  std::string fallback = multiclass ? "cross-entropy" : "logistic";
  std::string name = resolve_string(cfg, "loss", fallback);
  LossKind loss = loss_kind_from_name(name);
  if (is_margin_loss(loss) && multiclass)
    throw ConfigError("margin loss '" + name + "' needs labels in {-1,+1}");
  if (!is_margin_loss(loss) && !multiclass)
    throw ConfigError("cross-entropy needs labels 0..K-1");
  return loss;
}

Model resolve_model(RunConfig& cfg, const SplitDataset& data, LossKind loss) {
  std::string arch = resolve_string(cfg, "model.arch", "mlp");
  int out_dim = is_margin_loss(loss) ? 1 : data.train.classes;
  if (arch == "linear") return Model::linear(data.train.dim, out_dim);
  if (arch == "mlp") {
    long hidden = resolve_int(cfg, "model.hidden", 16);
    return Model::mlp(data.train.dim, static_cast<int>(hidden), out_dim);
  }
  throw ConfigError("model.arch must be linear or mlp, got " + arch);
}

TrainConfig resolve_train_protocol(RunConfig& cfg, LossKind loss) {
  TrainConfig tc;
  tc.loss = loss;
  tc.step_size = resolve_double(cfg, "train.step_size", 0.1);
  tc.momentum = resolve_double(cfg, "train.momentum", 0.9);
  tc.epochs = static_cast<int>(resolve_int(cfg, "train.epochs", 100));
  tc.batch_size = static_cast<int>(resolve_int(cfg, "train.batch_size", 100));
  tc.seed = seed_of(cfg);
  return tc;
}

void apply_method_hypers(RunConfig& cfg, TrainConfig& tc) {
  tc.method = method_from_name(resolve_string(cfg, "train.method", "erm"));
  switch (tc.method) {
    case Method::erm:
      break;
    case Method::tilted:
      tc.gamma = cfg.get_double("train.gamma");
      break;
    case Method::cvar:
      tc.beta = cfg.get_double("train.beta");
      if (!(tc.beta >= 0.0 && tc.beta < 1.0))
        throw ConfigError("train.beta must lie in [0,1)");
      break;
    case Method::dro:
      tc.eps = cfg.get_double("train.eps");
      tc.dro_c = resolve_double(cfg, "train.dro_c", 2.0);
      if (!(tc.eps >= 0.0)) throw ConfigError("train.eps must be >= 0");
      break;
    case Method::flooding:
    case Method::softad:
      tc.theta = cfg.get_double("train.theta");
      break;
  }
}

const std::vector<std::string> kTrainKeys = {
    "task",        "seed",          "plot",
    "data.kind",   "data.file",     "data.train",    "data.val",
    "data.test",   "data.sep",      "data.noise",    "data.radius",
    "data.classes", "data.dump",
    "model.arch",  "model.hidden",  "loss",
    "train.method", "train.step_size", "train.momentum", "train.epochs",
    "train.batch_size", "train.gamma", "train.beta", "train.eps",
    "train.theta", "train.dro_c"};

const std::vector<std::string> kSweepKeys = {
    "task",        "seed",
    "data.kind",   "data.file",     "data.train",    "data.val",
    "data.test",   "data.sep",      "data.noise",    "data.radius",
    "data.classes", "data.dump",
    "model.arch",  "model.hidden",  "loss",
    "train.step_size", "train.momentum", "train.epochs", "train.batch_size",
    "sweep.methods", "sweep.trials", "sweep.select",
    "grid.cvar", "grid.dro", "grid.flooding", "grid.softad", "grid.tilted",
    "grid.erm"};

}  // namespace

CriterionSpec parse_criterion_token(const std::string& token_in) {
  std::string token = trim_copy(token_in);
  std::string name = token;
  std::vector<std::string> args;
  auto open = token.find('(');
  if (open != std::string::npos) {
    if (token.back() != ')')
      throw ConfigError("criterion token '" + token + "': missing ')'");
    name = trim_copy(token.substr(0, open));
    std::string inner = token.substr(open + 1, token.size() - open - 2);
    std::string item;
    std::istringstream ss(inner);
    while (std::getline(ss, item, ',')) {
      item = trim_copy(item);
      if (!item.empty()) args.push_back(item);
    }
  }
  auto num = [&](std::size_t i) {
    if (i >= args.size())
      throw ConfigError("criterion token '" + token + "': missing argument");
    return token_number(token, args[i]);
  };
  auto expect_args = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("criterion token '" + token + "': expected " +
                        std::to_string(n) + " arguments");
  };

  try {
    if (name == "expected") { expect_args(0); return CriterionSpec::expected(); }
    if (name == "fixed-fn") { expect_args(2); return CriterionSpec::fixed_fn(num(0), num(1)); }
    if (name == "quantile") { expect_args(1); return CriterionSpec::quantile(num(0)); }
    if (name == "cvar") { expect_args(1); return CriterionSpec::cvar(num(0)); }
    if (name == "tilted") { expect_args(1); return CriterionSpec::tilted(num(0)); }
    if (name == "cressie-read-dro") { expect_args(2); return CriterionSpec::cressie_read_dro(num(0), num(1)); }
    if (name == "orlicz") { expect_args(1); return CriterionSpec::orlicz(num(0)); }
    if (name == "variantile") { expect_args(1); return CriterionSpec::variantile(num(0)); }
    if (name == "oce") {
      std::size_t used = 0;
      DispersionFunction rho = rho_from_args(token, args, &used);
      if (used != args.size())
        throw ConfigError("criterion token '" + token + "': extra arguments");
      return CriterionSpec::oce(std::move(rho));
    }
    if (name == "inner-restrain" || name == "outer-restrain") {
      std::size_t used = 0;
      DispersionFunction rho = rho_from_args(token, args, &used);
      if (used + 1 != args.size())
        throw ConfigError("criterion token '" + token +
                          "': expected <rho>,theta");
      double theta = num(used);
      return name == "inner-restrain"
                 ? CriterionSpec::inner_restrain(std::move(rho), theta)
                 : CriterionSpec::outer_restrain(std::move(rho), theta);
    }
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("criterion token '" + token + "': " + ex.what());
  }
  throw ConfigError("unknown criterion: " + name);
}

std::string echo_header(const std::string& subcommand, const RunConfig& cfg) {
  std::string out = "# critlab " + subcommand + "\n# config:\n";
  for (const auto& [k, v] : cfg.items()) out += "# " + k + " = " + v + "\n";
  out += "# end-config\n";
  return out;
}

RunConfig extract_embedded_config(const std::string& file_content) {
  std::istringstream in(file_content);
  std::string line, body;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line == "# config:") { inside = true; continue; }
    if (line == "# end-config") break;
    if (inside && line.size() >= 2 && line[0] == '#' && line[1] == ' ')
      body += line.substr(2) + "\n";
  }
  return RunConfig::parse_string(body);
}

int run_collapse_check(RunConfig cfg, const CliOptions& opt) {
  resolve_seed(cfg, opt);
  std::string task = resolve_string(cfg, "task", "class");
  double tol = resolve_double(cfg, "tol", 1e-9);

  if (task == "class") {
    cfg.require_known_keys({"task", "seed", "tol", "class.errs", "criterion",
                            "assert"});
    auto errs = cfg.get_double_list("class.errs");
    CriterionSpec spec = parse_criterion_token(cfg.get("criterion"));
    std::string assertion = resolve_string(cfg, "assert", "none");
    if (assertion != "none" && assertion != "herr-in-argmin" &&
        assertion != "equality")
      throw ConfigError("assert must be none, herr-in-argmin or equality");

    auto cls = HypothesisClass::from_errs(errs);
    auto report = check_collapse(spec, cls, tol);

    std::ostringstream csv;
    csv << echo_header("collapse-check", cfg);
    report.write_csv(csv);
    write_text_file(out_path(opt, "collapse_values.csv").string(), csv.str());

    std::ostringstream txt;
    txt << echo_header("collapse-check", cfg);
    report.write_text(txt);
    write_text_file(out_path(opt, "collapse_summary.txt").string(), txt.str());

    if (assertion == "herr-in-argmin" && !report.herr_in_argmin) return 1;
    if (assertion == "equality" && !report.equality) return 1;
    return 0;
  }

  cfg.require_known_keys({"task", "seed", "tol", "suite.classes",
                          "suite.min_size", "suite.max_size"});
  SuiteOptions so;
  so.tol = tol;
  so.classes = static_cast<int>(resolve_int(
      cfg, "suite.classes", task == "variantile-suite" ? 100 : 200));
  so.min_size = static_cast<int>(resolve_int(cfg, "suite.min_size", 2));
  so.max_size = static_cast<int>(resolve_int(cfg, "suite.max_size", 50));
  std::uint64_t seed = seed_of(cfg);

  SuiteReport report;
  if (task == "quantile-suite")
    report = quantile_inclusion_suite(seed, so);
  else if (task == "monotone-suite")
    report = monotone_dispersion_suite(seed, so);
  else if (task == "variantile-suite")
    report = variantile_extremes_suite(seed, so);
  else if (task == "cvar-regimes")
    report = cvar_regime_demo(tol);
  else
    throw ConfigError(
        "task must be class, quantile-suite, monotone-suite, variantile-suite "
        "or cvar-regimes, got " + task);

  std::ostringstream csv;
  csv << echo_header("collapse-check", cfg);
  report.write_csv(csv);
  write_text_file(out_path(opt, "suite_summary.csv").string(), csv.str());

  std::ostringstream txt;
  txt << echo_header("collapse-check", cfg);
  report.write_text(txt);
  write_text_file(out_path(opt, "suite_summary.txt").string(), txt.str());

  return report.all_pass() ? 0 : 1;
}

int run_surrogate_demo(RunConfig cfg, const CliOptions& opt) {
  resolve_seed(cfg, opt);
  cfg.require_known_keys({"seed", "example.a", "example.p", "criteria",
                          "witnesses", "witness.betas", "witness.masses"});
  double a = resolve_double(cfg, "example.a", 2.0);
  double p = resolve_double(cfg, "example.p", 0.9);
  if (!(a > 1.0)) throw ConfigError("example.a must be > 1");
  if (!(p > 0.5 && p < 1.0)) throw ConfigError("example.p must lie in (1/2, 1)");

  std::string crit_list = resolve_string(
      cfg, "criteria",
      "expected, tilted(3), tilted(-3), cvar(0.7), quantile(0.5)");
  std::vector<CriterionSpec> specs;
  for (const auto& token : RunConfig::parse_string("criteria = " + crit_list)
                               .get_list("criteria"))
    specs.push_back(parse_criterion_token(token));

  ThreePointExample ex(a, p);
  DivergenceReport report = divergence_report(ex, specs);

  std::ostringstream csv;
  csv << echo_header("surrogate-demo", cfg);
  report.write_csv(csv);
  write_text_file(out_path(opt, "surrogate_table.csv").string(), csv.str());

  std::ostringstream txt;
  txt << echo_header("surrogate-demo", cfg);
  report.write_text(txt);

  bool witnesses = cfg.get_bool_or("witnesses", false);
  cfg.set("witnesses", witnesses ? "true" : "false");
  if (witnesses) {
    std::vector<double> betas{1.0, 0.0};
    std::vector<double> masses{0.5, 0.5};
    if (cfg.has("witness.betas")) betas = cfg.get_double_list("witness.betas");
    if (cfg.has("witness.masses")) masses = cfg.get_double_list("witness.masses");
    if (betas.size() != masses.size())
      throw ConfigError("witness.betas and witness.masses must have equal length");
    std::vector<DiscreteProblem::Point> pts;
    for (std::size_t i = 0; i < betas.size(); ++i)
      pts.push_back({"x" + std::to_string(i + 1), masses[i], betas[i]});
    DiscreteProblem problem(std::move(pts));

    txt << "\nrestraint witnesses (error-optimal vs criterion-optimal):\n";
    for (const auto& phi : {MarginPenalty::logistic(), MarginPenalty::exponential()}) {
      for (const auto& rho : {DispersionFunction::absolute_value(),
                              DispersionFunction::pseudo_huber()}) {
        auto inner = inner_restraint_witness(problem, phi, rho);
        auto outer = outer_restraint_witness(problem, phi, rho);
        for (const auto* w : {&inner, &outer}) {
          bool disjoint = w->report.herr_disjoint_from_argmin();
          txt << (w == &inner ? "inner " : "outer ") << phi.name() << " + "
              << rho.name() << ": theta = " << fmt_g9(w->theta)
              << ", rescale = " << fmt_g9(w->rescale) << ", disjoint = "
              << (disjoint ? "true" : "false") << '\n';
          for (const auto& row : w->report.rows)
            txt << "    " << row.id << ": criterion " << fmt_g9(row.value)
                << ", err " << fmt_g9(row.err.value_or(-1.0)) << '\n';
        }
      }
    }
  }
  write_text_file(out_path(opt, "surrogate_summary.txt").string(), txt.str());
  return 0;
}

int run_train(RunConfig cfg, const CliOptions& opt) {
  resolve_seed(cfg, opt);
  if (opt.plot) cfg.set("plot", "true");
  bool plot = cfg.get_bool_or("plot", false);
  cfg.set("plot", plot ? "true" : "false");
  cfg.require_known_keys(kTrainKeys);

  SplitDataset data = resolve_dataset(cfg);
  LossKind loss = resolve_loss(cfg, data);
  Model model = resolve_model(cfg, data, loss);
  TrainConfig tc = resolve_train_protocol(cfg, loss);
  apply_method_hypers(cfg, tc);

  model.init_params(tc.seed);
  TrainOutcome outcome = train(model, data, tc);

  std::ostringstream csv;
  csv << echo_header("train", cfg);
  outcome.record.write_csv(csv);
  write_text_file(out_path(opt, "train_record.csv").string(), csv.str());

  if (plot)
    write_train_svg(out_path(opt, "train_record.svg").string(), outcome.record,
                    std::string(to_string(tc.method)) + " on " +
                        cfg.get("data.kind"));

  if (outcome.diverged) {
    write_text_file(out_path(opt, "train_diverged.txt").string(),
                    outcome.diagnostic + "\n");
    return 3;
  }
  return 0;
}

int run_sweep(RunConfig cfg, const CliOptions& opt) {
  resolve_seed(cfg, opt);
  cfg.require_known_keys(kSweepKeys);

  SplitDataset data = resolve_dataset(cfg);
  LossKind loss = resolve_loss(cfg, data);
  Model proto = resolve_model(cfg, data, loss);
  TrainConfig base = resolve_train_protocol(cfg, loss);

  std::string methods_csv = resolve_string(cfg, "sweep.methods",
                                           "cvar,dro,flooding,softad,tilted");
  int trials = static_cast<int>(resolve_int(cfg, "sweep.trials", 5));
  std::string select = resolve_string(cfg, "sweep.select", "per-trial");
  if (select != "per-trial" && select != "mean")
    throw ConfigError("sweep.select must be per-trial or mean");

  std::vector<Method> methods;
  for (const auto& name :
       RunConfig::parse_string("m = " + methods_csv).get_list("m"))
    methods.push_back(method_from_name(name));

  std::ostringstream sel_csv, val_csv;
  sel_csv << echo_header("sweep", cfg);
  val_csv << echo_header("sweep", cfg);
  sel_csv << "method,selected,selected_std,val_acc,test_acc\n";
  val_csv << "method,value,val_acc\n";

  for (Method m : methods) {
    std::vector<double> grid = default_grid(m);
    std::string grid_key = std::string("grid.") + to_string(m);
    if (cfg.has(grid_key)) grid = cfg.get_double_list(grid_key);
    SweepResult res = sweep(data, m, grid, trials, base, proto, opt.parallel);

    for (std::size_t g = 0; g < res.grid.size(); ++g)
      val_csv << to_string(m) << ',' << fmt_g9(res.grid[g]) << ','
              << fmt_g9(res.mean_val_acc[g]) << '\n';

    if (select == "per-trial") {
      double val_at_sel = 0.0;
      for (int t = 0; t < trials; ++t) {
        auto it = std::find(res.grid.begin(), res.grid.end(),
                            res.per_trial_selected[t]);
        val_at_sel += res.val_acc[it - res.grid.begin()][t];
      }
      val_at_sel /= trials;
      sel_csv << to_string(m) << ',' << fmt_g9(res.selected_mean) << ','
              << fmt_g9(res.selected_std) << ',' << fmt_g9(val_at_sel) << ','
              << fmt_g9(res.test_acc_at_selected) << '\n';
    } else {
      auto it =
          std::find(res.grid.begin(), res.grid.end(), res.selected_by_mean);
      std::size_t g = static_cast<std::size_t>(it - res.grid.begin());
      double test_mean = 0.0;
      for (int t = 0; t < trials; ++t) test_mean += res.test_acc[g][t];
      test_mean /= trials;
      sel_csv << to_string(m) << ',' << fmt_g9(res.selected_by_mean) << ",0,"
              << fmt_g9(res.mean_val_acc[g]) << ',' << fmt_g9(test_mean) << '\n';
    }
  }

  write_text_file(out_path(opt, "sweep_selection.csv").string(), sel_csv.str());
  write_text_file(out_path(opt, "sweep_values.csv").string(), val_csv.str());
  return 0;
}

}  // namespace critlab
