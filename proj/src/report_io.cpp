#include "ssbc/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace ssbc {

namespace {

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json regime_inputs(Json inputs, const CoverageRegime& regime) {
  inputs["regime"] = regime.label();
  inputs["m"] = regime.is_window() ? Json(regime.m) : Json(nullptr);
  return inputs;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

}  // namespace

Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_g12(v).c_str(), nullptr);
}

Json to_json(const CoverageRegime& regime) {
  Json j;
  j["kind"] = regime.label();
  j["m"] = regime.is_window() ? Json(regime.m) : Json(nullptr);
  return j;
}

Json to_json(const AdjustmentReport& report) {
  Json j;
  j["method"] = to_string(report.method);
  j["feasible"] = report.feasible;
  j["alpha_adj"] = optional_number(report.alpha_adj);
  j["u_star"] = report.u_star;
  j["achieved_tail"] = json_number(report.achieved_tail);
  j["achieved_violation"] = json_number(report.achieved_violation);
  if (report.method == Method::DKWM) j["epsilon"] = optional_number(report.epsilon);
  Json inputs;
  inputs["n"] = report.context.n;
  inputs["alpha_target"] = json_number(report.context.alpha_target);
  inputs["delta"] = json_number(report.context.delta);
  j["inputs"] = regime_inputs(std::move(inputs), report.regime);
  j["skipped_rungs"] = report.skipped_rungs;
  j["notes"] = report.notes;
  return j;
}

Json to_json(const FeasibilityReport& report) {
  Json j;
  Json inputs;
  inputs["n"] = report.n;
  inputs["delta"] = json_number(report.delta);
  inputs["m"] = optional_int(report.m);
  j["inputs"] = std::move(inputs);
  j["alpha_star_inf"] = json_number(report.alpha_star_inf);
  j["alpha_star_m"] = optional_number(report.alpha_star_m);
  j["alpha_star_m_laplace"] = optional_number(report.alpha_star_m_laplace);
  j["delta_max"] = json_number(report.delta_max_grid);
  j["implementable"] = report.implementable;
  return j;
}

Json to_json(const RungTable& table) {
  Json j;
  Json inputs;
  inputs["n"] = table.n;
  inputs["alpha_target"] = json_number(table.alpha_target);
  j["inputs"] = regime_inputs(std::move(inputs), table.regime);
  Json rungs = Json::array();
  for (const Rung& r : table.rungs) {
    Json row;
    row["u"] = r.u;
    row["alpha_prime"] = json_number(r.alpha_prime);
    row["attainable_delta"] = json_number(r.attainable_delta);
    rungs.push_back(std::move(row));
  }
  j["rungs"] = std::move(rungs);
  return j;
}

Json to_json(const SimReport& report) {
  const SimConfig& c = report.config;
  Json j;
  Json config;
  config["n"] = c.n;
  config["m"] = c.m;
  config["alpha_target"] = json_number(c.alpha_target);
  config["delta"] = json_number(c.delta);
  config["runs"] = c.runs;
  config["seed"] = c.seed;
  config["score_model"] = to_string(c.score_model);
  Json methods = Json::array();
  for (const SimMethod m : c.methods) methods.push_back(to_string(m));
  config["methods"] = std::move(methods);
  j["config"] = std::move(config);
  j["runs_completed"] = report.runs_completed;
  j["seed_echo"] = report.seed_echo;

  Json results = Json::array();
  for (const MethodResult& r : report.methods) {
    Json mj;
    mj["method"] = to_string(r.method);
    mj["skipped"] = r.skipped;
    mj["notes"] = r.notes;
    if (!r.skipped) {
      mj["alpha_used"] = json_number(r.alpha_used);
      mj["u_star"] = optional_int(r.u_star);
      mj["order_index"] = r.order_index;
      mj["violations"] = r.violations;
      mj["empirical_violation_rate"] = json_number(r.empirical_violation_rate);
      mj["theory_violation_rate"] = json_number(r.theory_violation_rate);
      mj["total_variation"] = json_number(r.total_variation);
      mj["coverage_histogram"] = r.coverage_histogram;
      Json pmf = Json::array();
      for (const double p : r.theory_pmf) pmf.push_back(json_number(p));
      mj["theory_pmf"] = std::move(pmf);
    }
    results.push_back(std::move(mj));
  }
  j["methods"] = std::move(results);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_rungs_csv(std::ostream& os, const RungTable& table) {
  os << "u,alpha_prime,attainable_delta\n";
  for (const Rung& r : table.rungs) {
    os << r.u << ',' << format_g12(r.alpha_prime) << ',' << format_g12(r.attainable_delta) << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const MethodResult& result, int m) {
  os << "coverage_level,count,theory_pmf\n";
  for (std::size_t c = 0; c < result.coverage_histogram.size(); ++c) {
    os << format_g12(static_cast<double>(c) / m) << ',' << result.coverage_histogram[c] << ','
       << format_g12(result.theory_pmf[c]) << '\n';
  }
}

void write_human(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (!j.is_object()) {
    os << pad << scalar_text(j) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      os << pad << key << ":\n";
      write_human(os, value, indent + 2);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      os << pad << key << ":\n";
      for (const Json& item : value) {
        os << pad << "  -\n";
        write_human(os, item, indent + 4);
      }
    } else if (value.is_array()) {
      os << pad << key << ": [";
      for (std::size_t i = 0; i < value.size(); ++i) os << (i ? ", " : "") << scalar_text(value[i]);
      os << "]\n";
    } else {
      os << pad << key << ": " << scalar_text(value) << '\n';
    }
  }
}

}  // namespace ssbc
