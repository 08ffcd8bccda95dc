#include "uqdesk/report.hpp"

#include <set>
#include <sstream>

#include "uqdesk/error.hpp"
#include "uqdesk/io.hpp"
#include "uqdesk/scoring.hpp"

namespace uqdesk::report {

using nlohmann::json;

namespace {

template <typename F>
void attempt(std::vector<std::string>& errors, const char* family, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    errors.push_back(std::string(family) + ": " + e.what());
  }
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ParseError, std::string(where) + " must be an object");
  }
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) {
      throw Error(ErrorCode::ParseError,
                  "unknown field '" + k + "' in " + std::string(where));
    }
  }
}

json accuracy_json(const metrics::AccuracyReport& a) {
  return {{"n", a.n},
          {"mae", a.mae},
          {"rmse", a.rmse},
          {"mdae", a.mdae},
          {"marpd", a.marpd},
          {"marpd_zero_denominators", a.marpd_zero_denominators},
          {"r2", opt(a.r2)},
          {"pearson_r", opt(a.pearson_r)}};
}

metrics::AccuracyReport accuracy_from(const json& j) {
  require_keys(j, {"n", "mae", "rmse", "mdae", "marpd", "marpd_zero_denominators",
                   "r2", "pearson_r"},
               "accuracy");
  metrics::AccuracyReport a;
  a.n = j.at("n").get<std::size_t>();
  a.mae = j.at("mae").get<double>();
  a.rmse = j.at("rmse").get<double>();
  a.mdae = j.at("mdae").get<double>();
  a.marpd = j.at("marpd").get<double>();
  a.marpd_zero_denominators = j.at("marpd_zero_denominators").get<std::size_t>();
  a.r2 = opt_from(j.at("r2"));
  a.pearson_r = opt_from(j.at("pearson_r"));
  a.constant_target = !a.r2.has_value();
  return a;
}

json box_json(const metrics::BoxStats& b) {
  return {{"n", b.n},
          {"q1", b.q1},
          {"q2", b.q2},
          {"q3", b.q3},
          {"iqr", b.iqr},
          {"whisker_lo", b.whisker_lo},
          {"whisker_hi", b.whisker_hi},
          {"data_whisker_lo", b.data_whisker_lo},
          {"data_whisker_hi", b.data_whisker_hi},
          {"outliers_below", b.outliers_below},
          {"outliers_above", b.outliers_above},
          {"outlier_count", b.outlier_count},
          {"min", b.min},
          {"max", b.max}};
}

}  // namespace

Evaluation evaluate(const PredictionSet& p, std::size_t grid_size,
                    std::size_t kde_points) {
  Evaluation ev;
  auto& r = ev.report;
  r.n = p.size();
  auto& errs = r.errors;
  attempt(errs, "accuracy", [&] {
    r.accuracy = metrics::accuracy(p);
    if (r.accuracy->constant_target) {
      errs.push_back("accuracy: ConstantTarget: r2 and pearson_r are undefined");
    }
  });
  attempt(errs, "sharpness", [&] { r.sharpness = metrics::sharpness(p); });
  attempt(errs, "dispersion", [&] {
    r.dispersion = metrics::dispersion(p);
    if (!r.dispersion->cv) errs.push_back("dispersion: ZeroMeanSigma: cv is undefined");
  });
  attempt(errs, "calibration", [&] {
    ev.curve = calibration::calibration_curve(p, grid_size);
    r.calibration = CalibrationSummary{ev.curve->miscalibration_area, grid_size,
                                       ev.curve->n_used,
                                       ev.curve->n_excluded_zero_sigma};
  });
  attempt(errs, "tightness", [&] {
    r.mean_interval_score = scoring::interval_score(p).mean_score;
  });
  attempt(errs, "honesty", [&] {
    r.honesty_rate = screening::honesty_rate(p, r.honesty_multiplier);
  });
  if (p.groups) {
    attempt(errs, "groups", [&] { r.groups = metrics::grouped_metrics(p); });
  }
  attempt(errs, "violin", [&] {
    ev.sigma_distribution = metrics::distribution_summary(
        p.sigma, metrics::default_kde_grid(p.sigma, kde_points));
  });
  return ev;
}

json to_json(const MetricsReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["n"] = r.n;
  j["accuracy"] = r.accuracy ? accuracy_json(*r.accuracy) : json(nullptr);
  j["sharpness"] = opt(r.sharpness);
  if (r.dispersion) {
    auto d = box_json(*r.dispersion);
    d["cv"] = opt(r.dispersion->cv);
    d["sharpness"] = r.dispersion->sharpness;
    j["dispersion"] = d;
  } else {
    j["dispersion"] = nullptr;
  }
  if (r.calibration) {
    j["calibration"] = {{"miscalibration_area", r.calibration->miscalibration_area},
                        {"grid_size", r.calibration->grid_size},
                        {"n_used", r.calibration->n_used},
                        {"n_excluded_zero_sigma", r.calibration->n_excluded_zero_sigma}};
  } else {
    j["calibration"] = nullptr;
  }
  j["tightness"] = {{"mean_interval_score", opt(r.mean_interval_score)}};
  j["honesty"] = {{"multiplier", r.honesty_multiplier}, {"rate", opt(r.honesty_rate)}};
  if (r.groups) {
    json g = json::object();
    for (const auto& [tag, m] : *r.groups) {
      g[tag] = {{"n", m.n},
                {"mae", m.mae},
                {"sharpness", m.sharpness},
                {"accuracy", m.accuracy ? accuracy_json(*m.accuracy) : json(nullptr)}};
    }
    j["groups"] = g;
  } else {
    j["groups"] = nullptr;
  }
  j["errors"] = r.errors;
  return j;
}

MetricsReport metrics_report_from_json(const json& j) {
  try {
    require_keys(j, {"schema_version", "n", "accuracy", "sharpness", "dispersion",
                     "calibration", "tightness", "honesty", "groups", "errors"},
                 "report");
    MetricsReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
      throw Error(ErrorCode::ParseError,
                  "unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.n = j.at("n").get<std::size_t>();
    if (!j.at("accuracy").is_null()) r.accuracy = accuracy_from(j.at("accuracy"));
    r.sharpness = opt_from(j.at("sharpness"));
    if (const auto& d = j.at("dispersion"); !d.is_null()) {
      require_keys(d, {"n", "q1", "q2", "q3", "iqr", "whisker_lo", "whisker_hi",
                       "data_whisker_lo", "data_whisker_hi", "outliers_below",
                       "outliers_above", "outlier_count", "min", "max", "cv",
                       "sharpness"},
                   "dispersion");
      metrics::DispersionReport dr;
      dr.n = d.at("n").get<std::size_t>();
      dr.q1 = d.at("q1").get<double>();
      dr.q2 = d.at("q2").get<double>();
      dr.q3 = d.at("q3").get<double>();
      dr.iqr = d.at("iqr").get<double>();
      dr.whisker_lo = d.at("whisker_lo").get<double>();
      dr.whisker_hi = d.at("whisker_hi").get<double>();
      dr.data_whisker_lo = d.at("data_whisker_lo").get<double>();
      dr.data_whisker_hi = d.at("data_whisker_hi").get<double>();
      dr.outliers_below = d.at("outliers_below").get<std::size_t>();
      dr.outliers_above = d.at("outliers_above").get<std::size_t>();
      dr.outlier_count = d.at("outlier_count").get<std::size_t>();
      dr.min = d.at("min").get<double>();
      dr.max = d.at("max").get<double>();
      dr.cv = opt_from(d.at("cv"));
      dr.sharpness = d.at("sharpness").get<double>();
      r.dispersion = dr;
    }
    if (const auto& c = j.at("calibration"); !c.is_null()) {
      require_keys(c, {"miscalibration_area", "grid_size", "n_used",
                       "n_excluded_zero_sigma"},
                   "calibration");
      r.calibration = CalibrationSummary{
          c.at("miscalibration_area").get<double>(), c.at("grid_size").get<std::size_t>(),
          c.at("n_used").get<std::size_t>(),
          c.at("n_excluded_zero_sigma").get<std::size_t>()};
    }
    require_keys(j.at("tightness"), {"mean_interval_score"}, "tightness");
    r.mean_interval_score = opt_from(j.at("tightness").at("mean_interval_score"));
    require_keys(j.at("honesty"), {"multiplier", "rate"}, "honesty");
    r.honesty_multiplier = j.at("honesty").at("multiplier").get<double>();
    r.honesty_rate = opt_from(j.at("honesty").at("rate"));
    if (const auto& g = j.at("groups"); !g.is_null()) {
      std::map<std::string, metrics::GroupMetrics> groups;
      for (const auto& [tag, v] : g.items()) {
        require_keys(v, {"n", "mae", "sharpness", "accuracy"}, "group");
        metrics::GroupMetrics m;
        m.n = v.at("n").get<std::size_t>();
        m.mae = v.at("mae").get<double>();
        m.sharpness = v.at("sharpness").get<double>();
        if (!v.at("accuracy").is_null()) m.accuracy = accuracy_from(v.at("accuracy"));
        groups.emplace(tag, m);
      }
      r.groups = std::move(groups);
    }
    r.errors = j.at("errors").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

json to_json(const recalibration::RecalibrationResult& r) {
  return {{"scalar", r.scalar},
          {"scalar_4sig", [&] {
             std::ostringstream ss;
             ss.precision(4);
             ss << r.scalar;
             return ss.str();
           }()},
          {"area_before", r.area_before},
          {"area_after", r.area_after},
          {"bracket", {r.bracket_lo, r.bracket_hi}},
          {"grid_size", r.grid_size},
          {"brent",
           {{"argmin_log_scalar", r.brent.argmin},
            {"value", r.brent.value},
            {"iterations", r.brent.iterations},
            {"evaluations", r.brent.evaluations},
            {"converged", r.brent.converged}}}};
}

json to_json(const screening::ScreenReport& r, const screening::ScreenCriteria& c) {
  return {{"criteria",
           {{"value_lo", c.value_lo},
            {"value_hi", c.value_hi},
            {"sigma_max", c.sigma_max},
            {"honesty_multiplier", c.honesty_multiplier}}},
          {"selected_ids", r.selected_ids},
          {"honest_ids", r.honest_ids},
          {"dishonest_ids", r.dishonest_ids},
          {"selected_count", r.selected_ids.size()},
          {"honest_count", r.honest_ids.size()},
          {"dishonest_count", r.dishonest_ids.size()}};
}

std::string curve_csv(const calibration::CalibrationCurve& c) {
  std::string out = "expected,observed\n";
  for (std::size_t j = 0; j < c.expected.size(); ++j) {
    out += io::format_double(c.expected[j]) + ',' + io::format_double(c.observed[j]) + '\n';
  }
  return out;
}

std::string violin_csv(const metrics::DistributionSummary& s) {
  std::string out = "sigma,density\n";
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    out += io::format_double(s.grid[j]) + ',' + io::format_double(s.density[j]) + '\n';
  }
  return out;
}

std::string adversarial_csv(const calibration::AdversarialCurve& a) {
  std::string out = "fraction,mean_worst_area,std_error\n";
  for (std::size_t j = 0; j < a.group_fractions.size(); ++j) {
    out += io::format_double(a.group_fractions[j]) + ',' +
           io::format_double(a.mean_worst_area[j]) + ',' +
           io::format_double(a.std_error[j]) + '\n';
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace uqdesk::report
