#include "uqdesk/cli.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqdesk/calibration.hpp"
#include "uqdesk/checkpoint.hpp"
#include "uqdesk/error.hpp"
#include "uqdesk/io.hpp"
#include "uqdesk/recalibration.hpp"
#include "uqdesk/report.hpp"
#include "uqdesk/screening.hpp"
#include "uqdesk/synthetic.hpp"
#include "uqdesk/uq_methods.hpp"

#ifndef UQDESK_VERSION
#define UQDESK_VERSION "0.0.0"
#endif

namespace uqdesk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams for the stages that share one --seed.
enum Stream : std::uint64_t {
  kInit = 1,
  kTrain = 2,
  kFolds = 3,
  kMcDropout = 4,
  kCalibSplit = 5,
  kAdversarial = 6,
  kTrainData = 10,
  kTestData = 11,
};

RngSeed stream(std::uint64_t seed, Stream s) { return {seed, s}; }

std::vector<std::size_t> parse_widths(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = io::parse_double(item);
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw Error(ErrorCode::InvalidArgument, "hidden widths must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one hidden layer");
  return out;
}

// Files produced by a command, written together with the manifest only after
// the command has fully succeeded.
struct Outputs {
  std::vector<std::pair<fs::path, std::string>> files;
  fs::path manifest;
};

json option_record(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
    }
    cfg[name] = value;
  }
  return cfg;
}

void commit(const Outputs& o, const CLI::App& sub, const json& seeds,
            const std::vector<std::string>& inputs,
            std::chrono::steady_clock::time_point start) {
  for (const auto& [path, contents] : o.files) io::write_file(path, contents);
  json outputs = json::array();
  for (const auto& f : o.files) outputs.push_back(f.first.string());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"artifact", "uqdesk"},
                   {"artifact_version", UQDESK_VERSION},
                   {"command", sub.get_name()},
                   {"config", option_record(sub)},
                   {"seeds", seeds},
                   {"inputs", inputs},
                   {"outputs", outputs},
                   {"wall_clock_seconds", seconds}};
  io::write_file(o.manifest, report::dump(manifest));
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  auto q = p;
  q.replace_extension();
  q += suffix;
  return q;
}

fs::path manifest_for(const fs::path& p) {
  auto q = p;
  q += ".manifest.json";
  return q;
}

std::string to_csv(const PredictionSet& p) {
  std::ostringstream ss;
  io::write_predictions_csv(ss, p);
  return ss.str();
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorCode::InvalidArgument, "--config needs a path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return args;

  json j;
  try {
    j = json::parse(io::read_file(config_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "config '" + config_path + "': " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");

  std::string command;
  json items = j;
  if (j.contains("config") && j.contains("command")) {
    command = j.at("command").get<std::string>();
    items = j.at("config");
  }
  if (!rest.empty() && rest.front().rfind("-", 0) != 0) {
    if (!command.empty() && command != rest.front()) {
      throw Error(ErrorCode::InvalidArgument,
                  "manifest is for '" + command + "', not '" + rest.front() + "'");
    }
    command = rest.front();
    rest.erase(rest.begin());
  }
  if (command.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no subcommand given with --config");
  }

  std::vector<std::string> out{command};
  for (const auto& [key, value] : items.items()) {
    std::string v;
    if (value.is_string()) {
      v = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        v += (i ? "," : "") + (value[i].is_string() ? value[i].get<std::string>()
                                                    : value[i].dump());
      }
    } else {
      v = value.dump();
    }
    if (v.empty()) continue;  // unset optional flag
    out.push_back("--" + key + "=" + v);
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uncertainty quantification toolkit for regression: train UQ "
               "producers, evaluate, recalibrate and screen predictions.", "uqdesk"};
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", UQDESK_VERSION);
  // Handled by expand_config; declared so it shows up in --help.
  std::string unused_config;
  app.add_option("--config", unused_config,
                 "JSON file of flag values, or a run manifest to replay");

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed");
  };

  // generate
  synthetic::GeneratorConfig gen;
  std::size_t n_train = 5000, n_test = 2000;
  std::string gen_out = "data";
  auto* generate = app.add_subcommand("generate", "Write synthetic train/test CSV datasets");
  generate->add_option("--n-train", n_train, "Training rows");
  generate->add_option("--n-test", n_test, "Test rows");
  generate->add_option("--features", gen.n_features, "Feature dimension")->check(CLI::PositiveNumber);
  generate->add_option("--groups", gen.n_groups, "Number of group tags (0 = no group column)");
  generate->add_option("--out", gen_out, "Output directory (train.csv, test.csv)");
  add_seed(generate);

  // train
  std::string method = "evidential", train_path, model_out = "model.json";
  std::string hidden = "32,32", activation = "tanh", member_training = "one_fold_each";
  std::size_t epochs = 600, batch = 32, k = 5;
  double lr = 0.003, dropout_rate = 0.05, lambda = 0.05;
  auto* train = app.add_subcommand("train", "Train a UQ model and write a checkpoint");
  train->add_option("--method", method, "ensemble | dropout | evidential")
      ->check(CLI::IsMember({"ensemble", "dropout", "evidential"}));
  train->add_option("--train", train_path, "Training dataset CSV")->required();
  train->add_option("--out", model_out, "Checkpoint JSON path");
  train->add_option("--hidden", hidden, "Comma-separated hidden layer widths");
  train->add_option("--activation", activation, "relu | tanh | softplus")
      ->check(CLI::IsMember({"relu", "tanh", "softplus"}));
  train->add_option("--epochs", epochs, "Training epochs");
  train->add_option("--batch-size", batch, "Mini-batch size")->check(CLI::PositiveNumber);
  train->add_option("--lr", lr, "SGD learning rate")->check(CLI::PositiveNumber);
  train->add_option("--k", k, "Ensemble size (folds)");
  train->add_option("--member-training", member_training,
                    "one_fold_each | leave_one_fold_out")
      ->check(CLI::IsMember({"one_fold_each", "leave_one_fold_out"}));
  train->add_option("--dropout-rate", dropout_rate, "Dropout rate for the dropout method")
      ->check(CLI::Range(0.0, 0.5));
  train->add_option("--lambda", lambda, "Evidential regularizer weight")
      ->check(CLI::NonNegativeNumber);
  add_seed(train);

  // predict
  std::string model_path, test_path, pred_out = "predictions.csv";
  std::string channel = "epistemic";
  std::size_t samples = 1000;
  bool sqrt_uncertainty = false;
  auto* predict = app.add_subcommand("predict", "Predict mu and sigma for a dataset");
  predict->add_option("--model", model_path, "Checkpoint JSON")->required();
  predict->add_option("--test", test_path, "Dataset CSV")->required();
  predict->add_option("--out", pred_out, "Prediction CSV path");
  predict->add_option("--samples", samples, "MC dropout samples per point");
  predict->add_option("--channel", channel, "Evidential sigma: epistemic | aleatoric")
      ->check(CLI::IsMember({"epistemic", "aleatoric"}));
  predict->add_flag("--sqrt-uncertainty", sqrt_uncertainty,
                    "Take the square root of the evidential uncertainty");
  add_seed(predict);

  // evaluate
  std::string pred_path, report_out = "report.json", curve_out, violin_out;
  std::size_t grid_size = calibration::kDefaultGridSize;
  auto* evaluate = app.add_subcommand("evaluate", "Compute the full metric report");
  evaluate->add_option("--pred", pred_path, "Prediction CSV")->required();
  evaluate->add_option("--out", report_out, "Report JSON path");
  evaluate->add_option("--curve-out", curve_out,
                       "Calibration curve CSV (default: <out>.curve.csv)");
  evaluate->add_option("--violin-out", violin_out,
                       "Sigma KDE table CSV (default: <out>.violin.csv)");
  evaluate->add_option("--grid-size", grid_size, "Calibration grid points")
      ->check(CLI::PositiveNumber);
  add_seed(evaluate);

  // adversarial
  std::vector<double> fractions{0.0025, 0.005, 0.01, 0.02, 0.05, 0.1,
                                0.2,    0.3,   0.5,  0.75, 1.0};
  std::size_t trials = 100, subgroups = 10;
  std::string adv_out = "adversarial.csv";
  auto* adversarial =
      app.add_subcommand("adversarial", "Worst-subgroup calibration across group sizes");
  adversarial->add_option("--pred", pred_path, "Prediction CSV")->required();
  adversarial->add_option("--fractions", fractions, "Comma-separated group fractions")
      ->delimiter(',');
  adversarial->add_option("--trials", trials, "Trials per fraction")->check(CLI::PositiveNumber);
  adversarial->add_option("--subgroups", subgroups, "Subgroups per trial")
      ->check(CLI::PositiveNumber);
  adversarial->add_option("--grid-size", grid_size, "Calibration grid points")
      ->check(CLI::PositiveNumber);
  adversarial->add_option("--out", adv_out, "Adversarial CSV path");
  add_seed(adversarial);

  // recalibrate
  std::string fit_policy = "split", recal_out = "recalibrated.csv", result_out;
  double calib_fraction = 0.5;
  recalibration::FitOptions fit;
  auto* recal = app.add_subcommand("recalibrate", "Fit and apply a scalar sigma multiplier");
  recal->add_option("--pred", pred_path, "Prediction CSV")->required();
  recal->add_option("--fit", fit_policy, "split (fit on a random subset) | self")
      ->check(CLI::IsMember({"split", "self"}));
  recal->add_option("--calib-fraction", calib_fraction, "Fraction used for fitting with --fit split")
      ->check(CLI::Range(0.0, 1.0));
  recal->add_option("--bracket-lo", fit.bracket_lo, "Lower bound on the scalar");
  recal->add_option("--bracket-hi", fit.bracket_hi, "Upper bound on the scalar");
  recal->add_option("--grid-size", fit.grid_size, "Calibration grid points")
      ->check(CLI::PositiveNumber);
  recal->add_option("--out", recal_out, "Recalibrated prediction CSV");
  recal->add_option("--result-out", result_out,
                    "Result JSON (default: <out>.scalar.json)");
  add_seed(recal);

  // screen
  screening::ScreenCriteria crit;
  std::string screen_out = "screen.json";
  auto* screen = app.add_subcommand("screen", "Window + sigma-ceiling screening with honesty audit");
  screen->add_option("--pred", pred_path, "Prediction CSV")->required();
  screen->add_option("--lo", crit.value_lo, "Lower edge of the mu window");
  screen->add_option("--hi", crit.value_hi, "Upper edge of the mu window");
  screen->add_option("--sigma-max", crit.sigma_max, "Sigma ceiling");
  screen->add_option("--multiplier", crit.honesty_multiplier, "Honesty interval half-width in sigmas");
  screen->add_option("--out", screen_out, "Screen report JSON");
  add_seed(screen);

  try {
    auto args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << UQDESK_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Outputs o;
    std::vector<std::string> inputs;
    json seeds = {{"seed", seed}};
    const CLI::App* sub = app.get_subcommands().front();

    if (sub == generate) {
      const fs::path dir(gen_out);
      auto g = gen;
      g.n = n_train;
      g.id_prefix = "train";
      auto tr = synthetic::generate(g, stream(seed, kTrainData));
      g.n = n_test;
      g.id_prefix = "test";
      auto te = synthetic::generate(g, stream(seed, kTestData));
      std::ostringstream a, b;
      io::write_dataset_csv(a, tr);
      io::write_dataset_csv(b, te);
      o.files = {{dir / "train.csv", a.str()}, {dir / "test.csv", b.str()}};
      o.manifest = dir / "manifest.json";
      out << "wrote " << tr.size() << " train / " << te.size() << " test rows to "
          << dir.string() << '\n';
    } else if (sub == train) {
      inputs.push_back(train_path);
      const auto data = io::load_dataset(train_path);
      validate_dataset(data);
      neural::MlpConfig mlp;
      mlp.layer_widths.push_back(data.n_features);
      for (auto w : parse_widths(hidden)) mlp.layer_widths.push_back(w);
      mlp.activation = neural::activation_from_string(activation);
      mlp.seed = stream(seed, kInit);
      neural::TrainConfig tc;
      tc.epochs = epochs;
      tc.batch_size = batch;
      tc.learning_rate = lr;
      tc.seed = stream(seed, kTrain);

      checkpoint::Checkpoint ck;
      ck.method = checkpoint::method_from_string(method);
      ck.training = {{"epochs", epochs}, {"batch_size", batch}, {"learning_rate", lr},
                     {"optimizer", "sgd"}, {"hidden", hidden}, {"activation", activation}};
      if (ck.method == checkpoint::Method::ensemble) {
        mlp.layer_widths.push_back(1);
        uq::EnsembleSpec spec;
        spec.k = k;
        spec.member_training = member_training == "one_fold_each"
                                   ? uq::MemberTraining::one_fold_each
                                   : uq::MemberTraining::leave_one_fold_out;
        spec.mlp = mlp;
        tc.loss = neural::LossSpec::squared_error();
        spec.train = tc;
        spec.fold_seed = stream(seed, kFolds);
        ck.members = uq::train_ensemble(data, spec).members;
        ck.training["k"] = k;
        ck.training["member_training"] = member_training;
        ck.training["loss"] = "squared_error";
      } else {
        const bool evidential = ck.method == checkpoint::Method::evidential;
        mlp.layer_widths.push_back(evidential ? 4 : 1);
        if (!evidential) mlp.dropout_rate = dropout_rate;
        tc.loss = evidential ? neural::LossSpec::evidential(lambda)
                             : neural::LossSpec::squared_error();
        auto res = neural::train(neural::MlpModel::initialize(mlp), data, tc);
        for (const auto& w : res.warnings) err << "warning: " << w << '\n';
        ck.members.push_back(std::move(res.model));
        ck.training["loss"] = evidential ? "evidential" : "squared_error";
        if (evidential) ck.training["lambda"] = lambda;
        if (!evidential) ck.training["dropout_rate"] = dropout_rate;
        ck.training["final_loss"] = res.loss_history.empty() ? 0.0 : res.loss_history.back();
      }
      o.files = {{model_out, checkpoint::to_json(ck).dump() + "\n"}};
      o.manifest = manifest_for(model_out);
      out << "trained " << method << " (" << ck.members.size() << " model"
          << (ck.members.size() > 1 ? "s" : "") << ") -> " << model_out << '\n';
    } else if (sub == predict) {
      inputs = {model_path, test_path};
      const auto ck = checkpoint::from_json(json::parse(io::read_file(model_path)));
      const auto test = io::load_dataset(test_path);
      PredictionSet p;
      switch (ck.method) {
        case checkpoint::Method::ensemble:
          p = uq::ensemble_predict(uq::Ensemble{ck.members}, test);
          break;
        case checkpoint::Method::dropout: {
          uq::DropoutSpec spec;
          spec.samples = samples;
          spec.seed = stream(seed, kMcDropout);
          p = uq::mc_dropout_predict(ck.members.front(), test, spec);
          break;
        }
        case checkpoint::Method::evidential: {
          uq::EvidentialSpec spec;
          spec.channel = channel == "epistemic" ? uq::EvidentialChannel::epistemic
                                                : uq::EvidentialChannel::aleatoric;
          spec.take_sqrt = sqrt_uncertainty;
          p = uq::evidential_predict(ck.members.front(), test, spec);
          break;
        }
      }
      validate_prediction_set(p);
      o.files = {{pred_out, to_csv(p)}};
      o.manifest = manifest_for(pred_out);
      out << "wrote " << p.size() << " predictions -> " << pred_out << '\n';
    } else if (sub == evaluate) {
      inputs.push_back(pred_path);
      const auto p = io::load_predictions(pred_path);
      const auto ev = report::evaluate(p, grid_size);
      const fs::path rep(report_out);
      o.files = {{rep, report::dump(report::to_json(ev.report))}};
      if (ev.curve) {
        o.files.emplace_back(curve_out.empty() ? sibling(rep, ".curve.csv") : fs::path(curve_out),
                             report::curve_csv(*ev.curve));
      }
      if (ev.sigma_distribution) {
        o.files.emplace_back(
            violin_out.empty() ? sibling(rep, ".violin.csv") : fs::path(violin_out),
            report::violin_csv(*ev.sigma_distribution));
      }
      o.manifest = manifest_for(rep);
      commit(o, *sub, seeds, inputs, start);
      if (!ev.report.errors.empty()) {
        for (const auto& e : ev.report.errors) err << "error: " << e << '\n';
        err << "partial report written to " << rep.string() << '\n';
        return 2;
      }
      out << "report -> " << rep.string() << '\n';
      return 0;
    } else if (sub == adversarial) {
      inputs.push_back(pred_path);
      const auto p = io::load_predictions(pred_path);
      const auto seed_adv = stream(seed, kAdversarial);
      seeds["adversarial"] = {seed_adv.seed, seed_adv.stream_id};
      const auto curve = calibration::adversarial_group_calibration(
          p, fractions, seed_adv, trials, subgroups, grid_size);
      o.files = {{adv_out, report::adversarial_csv(curve)}};
      o.manifest = manifest_for(adv_out);
      out << "adversarial curve (" << curve.group_fractions.size() << " fractions) -> "
          << adv_out << '\n';
    } else if (sub == recal) {
      inputs.push_back(pred_path);
      const auto p = io::load_predictions(pred_path);
      PredictionSet fit_set = p;
      if (fit_policy == "split") {
        std::vector<std::size_t> rows(p.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        CounterRng rng(stream(seed, kCalibSplit));
        shuffle(std::span(rows), rng);
        const auto m = static_cast<std::size_t>(
            std::llround(calib_fraction * static_cast<double>(p.size())));
        rows.resize(m);
        std::sort(rows.begin(), rows.end());
        fit_set = p.subset(rows);
      }
      const auto res = recalibration::fit_scalar(fit_set, fit);
      const auto recalibrated = recalibration::apply_scalar(p, res.scalar);
      auto j = report::to_json(res);
      j["fit_policy"] = fit_policy;
      j["n_fit"] = fit_set.size();
      j["full_set"] = {
          {"n", p.size()},
          {"area_before", calibration::calibration_curve(p, fit.grid_size).miscalibration_area},
          {"area_after",
           calibration::calibration_curve(recalibrated, fit.grid_size).miscalibration_area}};
      const fs::path rec(recal_out);
      o.files = {{rec, to_csv(recalibrated)},
                 {result_out.empty() ? sibling(rec, ".scalar.json") : fs::path(result_out),
                  report::dump(j)}};
      o.manifest = manifest_for(rec);
      out << "scalar " << j["scalar_4sig"].get<std::string>() << " -> " << recal_out << '\n';
    } else if (sub == screen) {
      inputs.push_back(pred_path);
      const auto p = io::load_predictions(pred_path);
      const auto rep = screening::screen(p, crit);
      o.files = {{screen_out, report::dump(report::to_json(rep, crit))}};
      o.manifest = manifest_for(screen_out);
      out << rep.selected_ids.size() << " selected, " << rep.honest_ids.size()
          << " honest -> " << screen_out << '\n';
    }
    commit(o, *sub, seeds, inputs, start);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace uqdesk::cli
