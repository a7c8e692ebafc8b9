#include "egbm_cli/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "egbm/blackbox.hpp"
#include "egbm/dataset.hpp"
#include "egbm/error.hpp"
#include "egbm/explain.hpp"
#include "egbm/local.hpp"
#include "egbm/model_io.hpp"
#include "egbm/parallel.hpp"
#include "egbm/synthetic.hpp"
#include "egbm/trainer.hpp"
#include "egbm_cli/report.hpp"

namespace egbm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) throw ConfigError(flag + ": cannot parse '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError(flag + ": expected a comma separated list of numbers");
  return values;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) names.push_back(item);
  return names;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

fs::path sibling(const fs::path& base, const std::string& suffix) {
  fs::path p = base;
  p.replace_extension();
  p += "." + suffix + ".csv";
  return p;
}

// Flags shared by train and explain-local.
struct TrainFlags {
  int iterations = 100;
  double alpha = 0.3;
  double learning_rate = 0.1;
  int inner_steps = 1;
  std::optional<double> lasso_lambda;
  int cv_folds = 5;
  int grid_size = 20;
  std::string task = "regression";
  std::optional<int> pretrain_steps;
  std::uint64_t seed = 0;
  int threads = default_thread_count();
  bool zero_initial_residuals = false;
  bool double_weight_targets = false;
  bool lasso_on_residuals = false;

  void add_to(CLI::App* app) {
    app->add_option("--iterations", iterations, "Outer iterations T")->capture_default_str();
    app->add_option("--alpha", alpha, "Weight smoothing parameter in (0, 1]")->capture_default_str();
    app->add_option("--learning-rate", learning_rate, "Per-stump learning rate")->capture_default_str();
    app->add_option("--inner-steps", inner_steps, "Stumps per feature per iteration")->capture_default_str();
    app->add_option("--lasso-lambda", lasso_lambda, "Fixed Lasso penalty (disables cross validation)");
    app->add_option("--cv-folds", cv_folds, "Cross-validation folds")->capture_default_str();
    app->add_option("--grid-size", grid_size, "Lambda grid size")->capture_default_str();
    app->add_option("--task", task, "regression or classification")->capture_default_str();
    app->add_option("--pretrain-steps", pretrain_steps, "Classification pretraining steps (default 10)");
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads")->capture_default_str();
    app->add_flag("--zero-initial-residuals", zero_initial_residuals, "Start from r = 0");
    app->add_flag("--double-weight-targets", double_weight_targets, "GBM targets r * w_k^2");
    app->add_flag("--lasso-on-residuals", lasso_on_residuals, "Fit the Lasso to the previous residuals");
  }

  [[nodiscard]] TrainConfig config() const {
    TrainConfig c;
    c.iterations = iterations;
    c.alpha = alpha;
    c.learning_rate = learning_rate;
    c.inner_steps = inner_steps;
    if (lasso_lambda) {
      c.lasso.cross_validate = false;
      c.lasso.lambda = *lasso_lambda;
    }
    c.lasso.folds = cv_folds;
    c.lasso.grid_size = grid_size;
    c.task = task_from_string(task);
    if (pretrain_steps) c.pretrain_steps = *pretrain_steps;
    c.seed = seed;
    c.threads = threads;
    c.zero_initial_residuals = zero_initial_residuals;
    c.double_weight_targets = double_weight_targets;
    c.lasso_target = lasso_on_residuals ? LassoTarget::kPreviousResiduals : LassoTarget::kTargets;
    c.validate();
    return c;
  }
};

ImportanceScale importance_scale_from(const std::string& name) {
  if (name == "shape") return ImportanceScale::kShapeValues;
  if (name == "feature") return ImportanceScale::kFeatureValues;
  throw ConfigError("unknown importance scale '" + name + "' (expected shape or feature)");
}

void write_report(const json& report, const fs::path& path, const std::string& format,
                  const std::vector<std::pair<std::string, std::string>>& csv, std::vector<fs::path>& outputs) {
  if (format == "json" || format == "both") {
    write_file_atomic(path, dump(report));
    outputs.push_back(path);
  }
  if (format == "csv" || format == "both") {
    for (const auto& [suffix, text] : csv) {
      const fs::path p = sibling(path, suffix);
      write_file_atomic(p, text);
      outputs.push_back(p);
    }
  }
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv" && format != "both") {
    throw ConfigError("unknown report format '" + format + "' (expected json, csv or both)");
  }
}

Dataset standardized_copy(const Dataset& d, const ColumnStats& stats) {
  Dataset out = d;
  out.features = standardize_columns(d.features, stats);
  return out;
}

// --- synth -----------------------------------------------------------------

struct SynthFlags {
  std::string kind;
  Eigen::Index n = 1000;
  double noise = kDefaultNoiseStd;
  int cells = 4;
  std::string labels = "pm1";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  SyntheticSpec spec;
  spec.kind = synthetic_kind_from_string(f.kind);
  spec.rows = f.n;
  spec.noise_std = f.noise;
  spec.cells = f.cells;
  spec.seed = f.seed;
  if (f.labels != "pm1" && f.labels != "01") throw ConfigError("--labels must be pm1 or 01");
  spec.zero_one_labels = f.labels == "01";
  const Dataset d = generate(spec);
  write_file_atomic(f.out, to_csv(d, "y"));
  RunManifest manifest{"synth",
                       {{"kind", f.kind}, {"n", f.n}, {"noise", f.noise}, {"cells", f.cells}, {"labels", f.labels}},
                       f.seed, {}, {f.out}};
  write_manifest(manifest, f.out);
  out << "wrote " << d.rows() << " rows x " << d.cols() + 1 << " columns to " << f.out << "\n";
  return kExitOk;
}

// --- train -----------------------------------------------------------------

struct TrainCmdFlags {
  TrainFlags train;
  std::string data;
  std::string target = "y";
  std::string model_out;
  std::string report_out;
  std::string format = "json";
  bool standardize_features = false;
  std::string importance_scale = "shape";
  std::optional<int> window;
  double threshold = kDefaultConvergenceThreshold;
};

int cmd_train(const TrainCmdFlags& f, std::ostream& out) {
  check_format(f.format);
  const TrainConfig config = f.train.config();
  const ImportanceScale scale = importance_scale_from(f.importance_scale);
  const Dataset data = load_csv(f.data, f.target);
  TrainResult result;
  if (f.standardize_features) {
    const ColumnStats stats = column_stats(data.features);
    result = train(standardized_copy(data, stats), config);
    result.model = unstandardize_inputs(std::move(result.model), stats);
  } else {
    result = train(data, config);
  }
  const int window = f.window.value_or(std::min(default_convergence_window(config.iterations), config.iterations));
  const ConvergenceDiagnostic diag = convergence_check(result.history, window, f.threshold);
  json report = train_report(result.model, result.history, data, diag, scale);
  report["command"] = "train";

  std::vector<fs::path> outputs;
  if (!f.model_out.empty()) {
    save_model(result.model, f.model_out);
    outputs.push_back(f.model_out);
  }
  const ImportanceReport importance = feature_importances(result.model, data, scale);
  write_report(report, f.report_out, f.format, history_csv(result.history, importance, data.feature_names), outputs);

  json cfg = config_to_json(config);
  cfg["standardize_features"] = f.standardize_features;
  cfg["importance_scale"] = f.importance_scale;
  cfg["target"] = f.target;
  cfg["convergence_window"] = window;
  cfg["convergence_threshold"] = f.threshold;
  write_manifest({"train", cfg, config.seed, {f.data}, outputs}, f.report_out);

  out << "trained " << to_string(config.task) << " model on " << data.rows() << " rows, " << data.cols()
      << " features; stabilized=" << (diag.stabilized ? "true" : "false") << "\n";
  for (const auto k : importance.ranking) {
    out << "  " << data.feature_names[k] << " " << format_double(importance.importance(static_cast<Eigen::Index>(k)))
        << "\n";
  }
  return kExitOk;
}

// --- explain-local -----------------------------------------------------------

struct LocalCmdFlags {
  TrainFlags train;
  std::string blackbox;
  std::string point;
  std::string midpoint_of;
  std::string target = "y";
  std::string feature_names;
  std::string sigma = "0.025";
  bool box = false;
  std::string box_lower;
  std::string box_upper;
  Eigen::Index n = 1000;
  bool no_standardize = false;
  int grid = 50;
  std::string report_out;
  std::string model_out;
  std::string format = "json";
};

int cmd_explain_local(const LocalCmdFlags& f, std::ostream& out) {
  check_format(f.format);
  const TrainConfig config = f.train.config();
  std::vector<fs::path> inputs;

  Eigen::VectorXd x;
  std::vector<std::string> names;
  std::optional<MidpointPoi> poi;
  if (!f.point.empty() && !f.midpoint_of.empty()) throw ConfigError("use either --point or --midpoint-of");
  if (!f.point.empty()) {
    x = to_vector(parse_list(f.point, "--point"));
  } else if (!f.midpoint_of.empty()) {
    const Dataset d = load_csv(f.midpoint_of, f.target);
    poi = midpoint_poi(d, config.seed);
    x = poi->x;
    names = d.feature_names;
    inputs.emplace_back(f.midpoint_of);
  } else {
    throw ConfigError("a point of interest is required (--point or --midpoint-of)");
  }
  if (!f.feature_names.empty()) names = split_names(f.feature_names);
  if (names.empty()) {
    for (Eigen::Index j = 1; j <= x.size(); ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != x.size()) {
    throw ConfigError("--feature-names lists " + std::to_string(names.size()) + " names for a " +
                      std::to_string(x.size()) + "-dimensional point");
  }

  PerturbationSpec spec;
  spec.count = f.n;
  spec.seed = config.seed;
  if (f.box) {
    Eigen::VectorXd lower, upper;
    if (!f.box_lower.empty() || !f.box_upper.empty()) {
      lower = to_vector(parse_list(f.box_lower, "--box-lower"));
      upper = to_vector(parse_list(f.box_upper, "--box-upper"));
    } else if (poi) {
      lower = poi->x1;
      upper = poi->x2;
    } else {
      throw ConfigError("--box needs --box-lower/--box-upper or --midpoint-of");
    }
    spec.kind = UniformBoxPerturbation{lower, upper};
  } else {
    spec.kind = GaussianPerturbation{to_vector(parse_list(f.sigma, "--sigma"))};
  }

  ProcessBlackBox blackbox(f.blackbox, names);
  LocalOptions options;
  options.standardize_features = !f.no_standardize;
  options.feature_names = names;
  LocalExplanation e = explain_local(x, blackbox, spec, config, options);
  EGBMModel model = e.standardized_features ? unstandardize_inputs(e.surrogate, e.feature_stats) : e.surrogate;

  const int window = std::min(default_convergence_window(config.iterations), config.iterations);
  const ConvergenceDiagnostic diag = convergence_check(e.history, window, kDefaultConvergenceThreshold);
  json shapes = json::array();
  for (std::size_t k = 0; k < names.size(); ++k) {
    shapes.push_back(shape_to_json(export_shape(model, e.raw_points, k, f.grid, false), names[k]));
  }
  json report = {{"command", "explain-local"},
                 {"point", std::vector<double>(x.data(), x.data() + x.size())},
                 {"feature_names", names},
                 {"fidelity", e.fidelity},
                 {"importance", importance_to_json(e.importance, names)},
                 {"shapes", shapes},
                 {"convergence", convergence_to_json(diag)},
                 {"history", history_to_json(e.history)},
                 {"standardized_features", e.standardized_features}};
  if (poi) {
    report["poi_bounds"] = {{"x1", std::vector<double>(poi->x1.data(), poi->x1.data() + poi->x1.size())},
                            {"x2", std::vector<double>(poi->x2.data(), poi->x2.data() + poi->x2.size())}};
  }

  std::vector<fs::path> outputs;
  if (!f.model_out.empty()) {
    save_model(model, f.model_out);
    outputs.push_back(f.model_out);
  }
  write_report(report, f.report_out, f.format, history_csv(e.history, e.importance, names), outputs);
  json cfg = config_to_json(config);
  cfg["blackbox"] = f.blackbox;
  cfg["n"] = f.n;
  cfg["perturbation"] = f.box ? "uniform_box" : "gaussian";
  if (!f.box) cfg["sigma"] = f.sigma;
  cfg["standardize_features"] = !f.no_standardize;
  cfg["grid"] = f.grid;
  write_manifest({"explain-local", cfg, config.seed, inputs, outputs}, f.report_out);

  out << "local explanation at (" << f.point << (poi ? "midpoint" : "") << "): fidelity " << format_double(e.fidelity)
      << "\n";
  for (const auto k : e.importance.ranking) {
    out << "  " << names[k] << " " << format_double(e.importance.importance(static_cast<Eigen::Index>(k))) << "\n";
  }
  return kExitOk;
}

// --- shapes ----------------------------------------------------------------

struct ShapesFlags {
  std::string model;
  std::string data;
  std::string features;
  int grid = 50;
  bool scaled = false;
  std::string out;
};

int cmd_shapes(const ShapesFlags& f, std::ostream& out, std::ostream& err) {
  const EGBMModel model = load_model(f.model);
  const Eigen::MatrixXd x = parse_feature_csv(read_file(f.data), model.feature_names, f.data);
  if (x.rows() < 1) throw DataError(f.data + ": no data rows");
  std::vector<std::size_t> selected;
  if (f.features.empty()) {
    for (std::size_t k = 0; k < model.feature_names.size(); ++k) selected.push_back(k);
  } else {
    for (const auto& name : split_names(f.features)) {
      const auto it = std::find(model.feature_names.begin(), model.feature_names.end(), name);
      if (it == model.feature_names.end()) throw ConfigError("unknown feature '" + name + "'");
      selected.push_back(static_cast<std::size_t>(it - model.feature_names.begin()));
    }
  }
  fs::create_directories(f.out);
  std::vector<fs::path> outputs;
  for (const auto k : selected) {
    const ShapeTable t = export_shape(model, x, k, f.grid, f.scaled);
    if (t.constant) err << "warning: shape of '" << model.feature_names[k] << "' is constant\n";
    std::string csv = "x,contribution\n";
    for (Eigen::Index i = 0; i < t.grid.size(); ++i) {
      csv += format_double(t.grid(i)) + "," + format_double(t.contribution(i)) + "\n";
    }
    const fs::path p = fs::path(f.out) / (model.feature_names[k] + ".csv");
    write_file_atomic(p, csv);
    outputs.push_back(p);
  }
  write_manifest({"shapes", {{"features", f.features}, {"grid", f.grid}, {"scaled", f.scaled}}, 0,
                  {f.model, f.data}, outputs},
                 fs::path(f.out) / "shapes");
  out << "wrote " << outputs.size() << " shape tables to " << f.out << "\n";
  return kExitOk;
}

// --- predict / blackbox -------------------------------------------------------

std::string read_all(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int cmd_predict(const std::string& model_path, const std::string& data, std::istream& in, std::ostream& out) {
  const EGBMModel model = load_model(model_path);
  const std::string text = data.empty() || data == "-" ? read_all(in) : read_file(data);
  const Eigen::VectorXd p = model_predict(model, parse_feature_csv(text, model.feature_names, data.empty() ? "<stdin>" : data));
  for (Eigen::Index i = 0; i < p.size(); ++i) out << format_double(p(i)) << "\n";
  return kExitOk;
}

struct BlackboxFlags {
  std::string kind = "chessboard";
  int cells = 4;
  double sharpness = 10.0;
  std::string parity = "odd";
  std::string coefficients;
};

int cmd_blackbox(const BlackboxFlags& f, std::istream& in, std::ostream& out) {
  const std::string text = read_all(in);
  const std::string header = text.substr(0, text.find('\n'));
  std::vector<std::string> names = split_names(header);
  for (auto& n : names) {
    while (!n.empty() && (n.back() == '\r' || n.back() == ' ')) n.pop_back();
  }
  const Eigen::MatrixXd rows = parse_feature_csv(text, names, "<stdin>");
  std::unique_ptr<BlackBox> bb;
  if (f.kind == "chessboard") {
    if (f.parity != "odd" && f.parity != "even") throw ConfigError("--parity must be odd or even");
    bb = chessboard_blackbox({f.cells, f.sharpness, f.parity == "even"});
  } else if (f.kind == "linear") {
    bb = linear_blackbox(to_vector(parse_list(f.coefficients, "--coefficients")));
  } else {
    throw ConfigError("unknown black box kind '" + f.kind + "' (expected chessboard or linear)");
  }
  const Eigen::VectorXd p = checked_query(*bb, rows);
  for (Eigen::Index i = 0; i < p.size(); ++i) out << format_double(p(i)) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretable additive models from per-feature gradient boosting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--kind", synth.kind, "linear, nonlinear, chessboard or polynomial")->required();
  synth_cmd->add_option("--n", synth.n, "Rows")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Noise standard deviation")->capture_default_str();
  synth_cmd->add_option("--cells", synth.cells, "Chessboard cells per axis")->capture_default_str();
  synth_cmd->add_option("--labels", synth.labels, "Chessboard labels: pm1 or 01")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output CSV")->required();

  TrainCmdFlags tr;
  auto* train_cmd = app.add_subcommand("train", "Train a global model and write a report");
  tr.train.add_to(train_cmd);
  train_cmd->add_option("--data", tr.data, "Input CSV")->required();
  train_cmd->add_option("--target", tr.target, "Target column")->capture_default_str();
  train_cmd->add_option("--model-out", tr.model_out, "Model JSON output");
  train_cmd->add_option("--report-out", tr.report_out, "Report output path")->required();
  train_cmd->add_option("--format", tr.format, "json, csv or both")->capture_default_str();
  train_cmd->add_flag("--standardize-features", tr.standardize_features, "Standardize feature columns first");
  train_cmd->add_option("--importance-scale", tr.importance_scale, "shape or feature")->capture_default_str();
  train_cmd->add_option("--convergence-window", tr.window, "Trailing window for the drift diagnostic");
  train_cmd->add_option("--convergence-threshold", tr.threshold, "Drift threshold")->capture_default_str();

  LocalCmdFlags lo;
  auto* local_cmd = app.add_subcommand("explain-local", "Explain a black box around a point");
  lo.train.add_to(local_cmd);
  local_cmd->add_option("--blackbox", lo.blackbox, "Shell command implementing the black box")->required();
  local_cmd->add_option("--point", lo.point, "Point of interest, comma separated");
  local_cmd->add_option("--midpoint-of", lo.midpoint_of, "Use the midpoint of two random rows of this CSV");
  local_cmd->add_option("--target", lo.target, "Target column of --midpoint-of data")->capture_default_str();
  local_cmd->add_option("--feature-names", lo.feature_names, "Comma separated feature names");
  local_cmd->add_option("--sigma", lo.sigma, "Gaussian sigma, scalar or per feature")->capture_default_str();
  local_cmd->add_flag("--box", lo.box, "Uniform box perturbations instead of Gaussian");
  local_cmd->add_option("--box-lower", lo.box_lower, "Box corner");
  local_cmd->add_option("--box-upper", lo.box_upper, "Opposite box corner");
  local_cmd->add_option("--n", lo.n, "Number of points including the point of interest")->capture_default_str();
  local_cmd->add_flag("--no-standardize-features", lo.no_standardize, "Train on raw perturbed features");
  local_cmd->add_option("--grid", lo.grid, "Shape grid size")->capture_default_str();
  local_cmd->add_option("--report-out", lo.report_out, "Report output path")->required();
  local_cmd->add_option("--model-out", lo.model_out, "Surrogate model output");
  local_cmd->add_option("--format", lo.format, "json, csv or both")->capture_default_str();

  ShapesFlags sh;
  auto* shapes_cmd = app.add_subcommand("shapes", "Export shape functions as CSV");
  shapes_cmd->add_option("--model", sh.model, "Model JSON")->required();
  shapes_cmd->add_option("--data", sh.data, "CSV with the model's feature columns")->required();
  shapes_cmd->add_option("--features", sh.features, "Comma separated feature names (default: all)");
  shapes_cmd->add_option("--grid", sh.grid, "Grid points")->capture_default_str();
  shapes_cmd->add_flag("--scaled", sh.scaled, "Scale each shape to [0, 1]");
  shapes_cmd->add_option("--out", sh.out, "Output directory")->required();

  std::string predict_model, predict_data;
  auto* predict_cmd = app.add_subcommand("predict", "Predict one value per CSV row");
  predict_cmd->add_option("--model", predict_model, "Model JSON")->required();
  predict_cmd->add_option("--data", predict_data, "Input CSV (default: stdin)");

  BlackboxFlags bbf;
  auto* bb_cmd = app.add_subcommand("blackbox", "Built-in analytic black box speaking the subprocess protocol");
  bb_cmd->add_option("--kind", bbf.kind, "chessboard or linear")->capture_default_str();
  bb_cmd->add_option("--cells", bbf.cells, "Chessboard cells per axis")->capture_default_str();
  bb_cmd->add_option("--sharpness", bbf.sharpness, "Chessboard edge sharpness")->capture_default_str();
  bb_cmd->add_option("--parity", bbf.parity, "Chessboard parity of the class-1 cells: odd or even")->capture_default_str();
  bb_cmd->add_option("--coefficients", bbf.coefficients, "Linear coefficients, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(e.get_name() == "--help" && app.get_subcommands().size() == 1 ? app.get_subcommands()[0]->get_name() : "");
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*train_cmd) return cmd_train(tr, out);
    if (*local_cmd) return cmd_explain_local(lo, out);
    if (*shapes_cmd) return cmd_shapes(sh, out, err);
    if (*predict_cmd) return cmd_predict(predict_model, predict_data, in, out);
    if (*bb_cmd) return cmd_blackbox(bbf, in, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace egbm::cli
