#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bipart/calibration.hpp"
#include "bipart/errors.hpp"
#include "bipart/exact_count.hpp"
#include "bipart/formal_series.hpp"
#include "bipart/gibbs_model.hpp"
#include "bipart/partition_asymptotics.hpp"

namespace {

using namespace bipart;
using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string parts = "strict";
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  bool table = false;
  std::string variant = "c";
  int order = 1;
  double t = 1.0;
  std::vector<std::int64_t> n2_grid{100, 225, 400, 625, 900};
  double t_min = 0.01;
  double t_max = 4.0;
  int steps = 100;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  double tv_budget = 1e-6;
  double tol = 0.0;  // 0 keeps each command's default
  std::string out;
  std::string format;
};

std::int64_t cell_budget() {
  const char* env = std::getenv("BIPART_CELL_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultCellBudget;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v <= 0) throw ConfigError("BIPART_CELL_BUDGET must be a positive integer");
  return v;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw ConfigError("unsupported --format '" + cfg.format + "' for this command");
}

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tol > 0.0 ? cfg.tol : fallback; }

void cmd_count(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format.empty() || cfg.format == "csv") {
    const PartSet ps = parse_part_set(cfg.parts);
    if (cfg.table) {
      count_table(ps, cfg.n1, cfg.n2, cell_budget()).write_csv(out);
      return;
    }
    out << count_table(ps, cfg.n1, cfg.n2, cell_budget()).at(cfg.n1, cfg.n2).get_str() << '\n';
    return;
  }
  require_format(cfg, {"json"});
  const PartSet ps = parse_part_set(cfg.parts);
  const CountTable tab = count_table(ps, cfg.n1, cfg.n2, cell_budget());
  ojson j;
  j["n1"] = cfg.n1;
  j["n2"] = cfg.n2;
  j["part_set"] = to_string(ps);
  j["count"] = tab.at(cfg.n1, cfg.n2).get_str();
  out << j.dump(2) << '\n';
}

void cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  series::CoeffReport rep;
  if (cfg.variant == "c") {
    rep = series::unbarred_coeffs(cfg.order);
  } else if (cfg.variant == "cbar") {
    rep = series::barred_coeffs(cfg.order);
  } else {
    throw ConfigError("--variant must be c or cbar");
  }
  if (cfg.format.empty() || cfg.format == "text") {
    out << rep.to_string();
    return;
  }
  require_format(cfg, {"json"});
  ojson j;
  j["variant"] = cfg.variant;
  j["order"] = cfg.order;
  std::vector<std::string> lines;
  std::istringstream in(rep.to_string());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  j["coefficients"] = lines;
  out << j.dump(2) << '\n';
}

void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const PartSet ps = parse_part_set(cfg.parts);
  if (!(cfg.t > 0.0)) throw ConfigError("--t must be > 0");
  if (cfg.n2_grid.empty()) throw ConfigError("--n2-grid must not be empty");
  std::int64_t max1 = 1;
  std::int64_t max2 = 1;
  std::vector<Target> targets;
  for (const std::int64_t n2 : cfg.n2_grid) {
    if (n2 < 1) throw ConfigError("--n2-grid entries must be >= 1");
    const auto n1 = std::max<std::int64_t>(1, std::llround(cfg.t * std::sqrt(static_cast<double>(n2))));
    targets.push_back({n1, n2});
    max1 = std::max(max1, n1);
    max2 = std::max(max2, n2);
  }
  const CountTable tab = count_table(ps, max1, max2, cell_budget());
  ojson rows = ojson::array();
  if (cfg.format.empty() || cfg.format == "csv") out << "n2,n1,p_exact,log_pred,log_ratio\n";
  else require_format(cfg, {"json"});
  for (const Target& target : targets) {
    const mpz_class& p = tab.at(target.n1, target.n2);
    const double log_pred = theorem_estimate(target, ps).log_value;
    const double log_ratio = log_mpz(p) - log_pred;
    if (cfg.format == "json") {
      ojson r;
      r["n2"] = target.n2;
      r["n1"] = target.n1;
      r["p_exact"] = p.get_str();
      r["log_pred"] = log_pred;
      r["log_ratio"] = log_ratio;
      rows.push_back(r);
    } else {
      out << target.n2 << ',' << target.n1 << ',' << p.get_str() << ',' << format_real(log_pred)
          << ',' << format_real(log_ratio) << '\n';
    }
  }
  if (cfg.format == "json") out << rows.dump(2) << '\n';
}

void cmd_rates(const RunConfig& cfg, std::ostream& out) {
  const auto rows = rate_table(linear_grid(cfg.t_min, cfg.t_max, cfg.steps),
                               tol_or(cfg, kDefaultRelTol));
  if (cfg.format.empty() || cfg.format == "csv") {
    write_rate_csv(out, rows);
    return;
  }
  require_format(cfg, {"json"});
  ojson arr = ojson::array();
  for (const RateRow& r : rows) arr.push_back({{"t", r.t}, {"h", r.h}, {"hbar", r.h_bar}});
  out << arr.dump(2) << '\n';
}

void cmd_sample(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty()) require_format(cfg, {"json"});
  if (cfg.reps < 1) throw ConfigError("--reps must be >= 1");
  const PartSet ps = parse_part_set(cfg.parts);
  const CalibrationResult cal = calibrate({cfg.n1, cfg.n2}, ps, tol_or(cfg, kDefaultRelTol));
  SamplerSpec spec{cal.params, ps, cfg.tv_budget, cfg.seed};
  const BoltzmannSampler sampler(spec);
  const auto draws = sampler.draw_many(cfg.reps);
  ojson j;
  j["n1"] = cfg.n1;
  j["n2"] = cfg.n2;
  j["part_set"] = to_string(ps);
  j["alpha"] = cal.params.alpha;
  j["beta"] = cal.params.beta;
  j["seed"] = cfg.seed;
  j["tv_budget"] = cfg.tv_budget;
  j["retained_parts"] = sampler.part_count();
  ojson samples = ojson::array();
  for (const SampledPartition& s : draws) {
    ojson parts = ojson::array();
    for (const auto& [x, k] : s.multiplicities) parts.push_back({x.first, x.second, k});
    ojson one;
    one["N"] = {s.n1, s.n2};
    one["parts"] = parts;
    samples.push_back(one);
  }
  j["samples"] = samples;
  out << j.dump(2) << '\n';
}

void cmd_llt(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.format.empty()) require_format(cfg, {"json"});
  const PartSet ps = parse_part_set(cfg.parts);
  out << llt_check({cfg.n1, cfg.n2}, ps, cell_budget()).to_json() << '\n';
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
  sub->add_option("--format", cfg.format, "Output format (csv, json, or text for coeffs)");
  sub->add_option("--tol", cfg.tol, "Tolerance override")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite partition counting and asymptotics"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto parts_opt = [&](CLI::App* sub) {
    sub->add_option("--parts", cfg.parts, "Part set: strict or nonzero")
        ->check(CLI::IsMember({"strict", "nonzero"}));
  };
  const auto target_opts = [&](CLI::App* sub) {
    sub->add_option("--n1", cfg.n1)->required()->check(CLI::NonNegativeNumber);
    sub->add_option("--n2", cfg.n2)->required()->check(CLI::NonNegativeNumber);
  };

  auto* count = app.add_subcommand("count", "Exact count p_X(n1, n2)");
  target_opts(count);
  parts_opt(count);
  count->add_flag("--table", cfg.table, "Dump the full count table as CSV");

  auto* coeffs = app.add_subcommand("coeffs", "Exact subcritical expansion coefficients");
  coeffs->add_option("--variant", cfg.variant)->check(CLI::IsMember({"c", "cbar"}));
  coeffs->add_option("--order", cfg.order)->required();

  auto* compare = app.add_subcommand("compare", "Exact counts against the asymptotic formula");
  parts_opt(compare);
  compare->add_option("--t", cfg.t);
  compare->add_option("--n2-grid", cfg.n2_grid)->delimiter(',');

  auto* rates = app.add_subcommand("rates", "Rate functions h and hbar on a grid");
  rates->add_option("--t-min", cfg.t_min);
  rates->add_option("--t-max", cfg.t_max);
  rates->add_option("--steps", cfg.steps);

  auto* samp = app.add_subcommand("sample", "Boltzmann samples at calibrated parameters");
  target_opts(samp);
  parts_opt(samp);
  samp->add_option("--reps", cfg.reps);
  samp->add_option("--seed", cfg.seed);
  samp->add_option("--tv-budget", cfg.tv_budget);

  auto* llt = app.add_subcommand("llt", "Local limit theorem report");
  target_opts(llt);
  parts_opt(llt);

  for (CLI::App* sub : {count, coeffs, compare, rates, samp, llt}) add_common(sub, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostringstream buffer;
    if (count->parsed()) cmd_count(cfg, buffer);
    else if (coeffs->parsed()) cmd_coeffs(cfg, buffer);
    else if (compare->parsed()) cmd_compare(cfg, buffer);
    else if (rates->parsed()) cmd_rates(cfg, buffer);
    else if (samp->parsed()) cmd_sample(cfg, buffer);
    else if (llt->parsed()) cmd_llt(cfg, buffer);

    if (cfg.out.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file " + cfg.out);
      file << buffer.str();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
