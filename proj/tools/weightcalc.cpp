// weightcalc CLI: batch condition suites and nuclearity analyses over
// built-in or user-supplied weights and sequences, with deterministic
// JSON/text reports and CSV curve export.
//
// Subjects:
//   --family   omega0 | power:<a> | log^<a> | gevrey:<s> | table:<path>
//   --sequence gevreyseq:<s> | file:<path>
//
// Exit codes: 0 completed (whatever the verdicts), 2 input error.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weightcalc/weightcalc.hpp"

namespace wc = weightcalc;
using wc::ordered_json;

namespace {

wc::WeightFunction parse_family(const std::string& spec) {
  const auto param_after = [&](std::size_t pos) {
    const std::string tail = spec.substr(pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tail, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown family: " + spec);
    }
    if (used != tail.size()) throw std::invalid_argument("unknown family: " + spec);
    return v;
  };
  if (spec == "omega0") return wc::WeightFunction::omega0();
  if (spec.rfind("power:", 0) == 0) return wc::WeightFunction::power(param_after(6));
  if (spec.rfind("log^", 0) == 0) return wc::WeightFunction::log_power(param_after(4));
  if (spec.rfind("log", 0) == 0 && spec.size() > 3 &&
      (std::isdigit(static_cast<unsigned char>(spec[3])) || spec[3] == '.')) {
    return wc::WeightFunction::log_power(param_after(3));  // "log2" == "log^2"
  }
  if (spec.rfind("gevrey:", 0) == 0) return wc::WeightFunction::gevrey(param_after(7));
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open weight file: " + path);
    ordered_json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("malformed weight JSON in " + path + ": " + e.what());
    }
    return wc::weight_from_json(j);
  }
  throw std::invalid_argument("unknown family: " + spec);
}

wc::WeightSequence parse_sequence(const std::string& spec, std::size_t order) {
  if (spec.rfind("gevreyseq:", 0) == 0) {
    const std::string tail = spec.substr(10);
    try {
      return wc::gevrey_sequence(std::stod(tail), order);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown sequence spec: " + spec);
    }
  }
  if (spec.rfind("file:", 0) == 0) return wc::load_sequence(spec.substr(5));
  throw std::invalid_argument("unknown sequence spec: " + spec);
}

std::set<std::string> parse_suite(const std::string& spec) {
  static const std::set<std::string> known = {"axioms", "bmm",        "cond4", "conjugate",
                                              "bridge", "nuclearity", "all"};
  std::set<std::string> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!known.count(item)) throw std::invalid_argument("unknown suite entry: " + item);
    out.insert(item);
  }
  if (out.empty()) throw std::invalid_argument("empty suite");
  if (out.count("all")) {
    out = {"axioms", "bmm", "cond4", "conjugate", "bridge", "nuclearity"};
  }
  return out;
}

/// Runs one suite item; refusals (violated preconditions) become
/// Inconclusive entries rather than aborting the whole report.
template <typename F>
void guarded(ordered_json& results, const std::string& name, F&& fn) {
  try {
    results[name] = fn();
  } catch (const std::domain_error& e) {
    results[name] =
        wc::to_json(wc::ConditionVerdict::inconclusive_with(std::string("refused: ") + e.what()));
  } catch (const std::invalid_argument& e) {
    results[name] =
        wc::to_json(wc::ConditionVerdict::inconclusive_with(std::string("refused: ") + e.what()));
  }
}

struct AnalyzeParams {
  double t_min = 1.0;
  double t_max = 1e8;
  std::size_t grid_n = 512;
  std::size_t j_max = 8;
  std::size_t k_max = 1000000;
  std::size_t order = 256;
};

void analyze_weight(const wc::WeightFunction& w, const std::set<std::string>& suite,
                    const AnalyzeParams& p, ordered_json& results) {
  const wc::LogGrid grid = wc::make_log_grid(p.t_min, p.t_max, p.grid_n);

  if (suite.count("axioms")) {
    results["alpha"] = wc::to_json(wc::check_alpha(w, grid));
    results["beta"] = wc::to_json(wc::check_beta(w, grid));
    results["gamma"] = wc::to_json(wc::check_gamma(w, grid));
    results["delta"] = wc::to_json(wc::check_delta(w));
  }
  if (suite.count("bmm")) {
    results["bmm"] = wc::to_json(wc::check_BMM(w, grid));
  }
  if (suite.count("cond4")) {
    results["cond4"] = wc::to_json(wc::check_condition4(w, grid));
  }
  if (suite.count("conjugate")) {
    guarded(results, "conjugate", [&]() {
      const wc::ConjugateTable table = wc::young_conjugate(w, 32.0, 2048);
      double min_d2 = std::numeric_limits<double>::infinity();
      bool ratio_monotone = true;
      double prev_ratio = 0.0;
      for (std::size_t i = 1; i <= table.finite_up_to(); ++i) {
        const double ratio = table.value(i) / table.slope(i);
        if (i > 1 && ratio < prev_ratio - 1e-9) ratio_monotone = false;
        prev_ratio = ratio;
        if (i + 1 <= table.finite_up_to()) {
          min_d2 = std::min(min_d2,
                            table.value(i - 1) - 2.0 * table.value(i) + table.value(i + 1));
        }
      }
      std::vector<double> xs(512);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = 8.0 * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
      }
      ordered_json e;
      e["phistarAtZero"] = table.value(0);
      e["minSecondDifference"] = min_d2;
      e["ratioMonotone"] = ratio_monotone;
      e["finiteUpToSlope"] = table.slope(table.finite_up_to());
      e["biconjugateMaxError"] = wc::biconjugate_check(w, table, xs);
      return e;
    });
  }
  if (suite.count("bridge")) {
    guarded(results, "bridge_agreement", [&]() {
      const wc::WeightSequence a = wc::sequence_from_weight(w, p.order);
      const wc::WeightSequence b = wc::sequence_from_weight_product_form(w, p.order);
      const std::size_t n = std::min(a.order(), b.order());
      double max_diff = 0.0;
      for (std::size_t q = 0; q <= n; ++q) {
        max_diff = std::max(max_diff, std::abs(a.log_value(q) - b.log_value(q)));
      }
      ordered_json e;
      e["maxAbsDiff"] = max_diff;
      e["entries"] = n + 1;
      e["truncated"] = a.truncated() || b.truncated();
      return e;
    });
    guarded(results, "m1_derived", [&]() {
      const wc::WeightSequence seq = wc::sequence_from_weight(w, p.order);
      if (seq.order() < 2) {
        throw std::domain_error("derived sequence too short for (M1)");
      }
      return wc::to_json(wc::check_M1(seq));
    });
    const wc::LogGrid sandwich_grid =
        wc::make_log_grid(p.t_min, std::min(p.t_max, 5e3), p.grid_n);
    guarded(results, "sandwich", [&]() {
      const wc::WeightSequence seq = wc::sequence_from_weight(w, p.order);
      const wc::SandwichResult r = wc::equivalence_sandwich(w, seq, sandwich_grid);
      ordered_json e = wc::to_json(r.verdict);
      e["A"] = r.A;
      return e;
    });
    const wc::LogGrid transfer_grid = wc::make_log_grid(p.t_min, std::min(p.t_max, 256.0),
                                                        std::min<std::size_t>(p.grid_n, 128));
    guarded(results, "bmm_transfer", [&]() {
      const wc::WeightSequence seq = wc::sequence_from_weight(w, p.order);
      return wc::to_json(wc::run_bmm_transfer(w, seq, grid, transfer_grid));
    });
    guarded(results, "seminorm", [&]() {
      const wc::ConditionVerdict bmm = wc::check_BMM(w, grid);
      if (!bmm.holds()) {
        throw std::domain_error("(BMM) precondition not certified for " + w.label());
      }
      const wc::WeightSequence seq = wc::sequence_from_weight(w, p.order);
      // modest witness grids; wider ones hit the structural j = lambda^s tie
      // and exhaust honestly
      static constexpr double lambdas[] = {0.5, 1.0, 2.0};
      static constexpr int js[] = {1, 2, 4};
      return wc::to_json(wc::seminorm_equivalence_check(w, seq, lambdas, js));
    });
    guarded(results, "cond4_associated", [&]() {
      const wc::WeightSequence seq = wc::sequence_from_weight(w, p.order);
      const wc::LogGrid m_grid = wc::make_log_grid(p.t_min, std::min(p.t_max, 1e3), 256);
      return wc::to_json(wc::check_condition4(seq, m_grid));
    });
  }
  if (suite.count("nuclearity")) {
    guarded(results, "nuclearity", [&]() {
      const wc::KoetheMatrix mat = wc::KoetheMatrix::from_weight(w, p.j_max, p.k_max);
      const wc::NuclearityReport rep =
          wc::gp_nuclearity(mat, {}, 8 * p.j_max, p.k_max, grid);
      ordered_json e = wc::to_json(rep);
      e["analyticCond4"] = wc::to_json(rep.analytic_condition4);
      e["note"] = rep.note;
      for (const wc::PerJResult& pj : rep.per_j) {
        if (pj.m && (pj.route == "series" || pj.route == "both")) {
          const wc::Condition4FromGp c4 =
              wc::condition4_from_gp(mat, pj.j, *pj.m, p.k_max, grid);
          ordered_json w4;
          w4["Hhat"] = c4.H_hat;
          w4["Ahat"] = c4.A_hat;
          w4["verdict"] = wc::to_json(c4.verdict);
          e["cond4FromGp"] = std::move(w4);
          break;
        }
      }
      return e;
    });
  }
}

void analyze_sequence(const wc::WeightSequence& seq, const std::set<std::string>& suite,
                      const AnalyzeParams& p, ordered_json& results) {
  const wc::LogGrid grid = wc::make_log_grid(p.t_min, p.t_max, p.grid_n);

  if (suite.count("axioms")) {
    guarded(results, "lower_root_bound",
            [&]() { return wc::to_json(wc::check_lower_root_bound(seq)); });
    guarded(results, "m1", [&]() { return wc::to_json(wc::check_M1(seq)); });
    guarded(results, "m2prime", [&]() { return wc::to_json(wc::check_M2prime(seq)); });
    guarded(results, "m2", [&]() { return wc::to_json(wc::check_M2(seq)); });
    guarded(results, "condition_1_1",
            [&]() { return wc::to_json(wc::check_condition_1_1(seq, 1.0)); });
  }
  if (suite.count("bmm")) {
    guarded(results, "bmm_associated", [&]() {
      const wc::ExponentMap M = wc::exponent_map(seq);
      return wc::to_json(wc::detail::exists_witness_over_grid(
          grid,
          [&](double t) -> std::optional<double> {
            const auto v = M(t);
            if (!v) return std::nullopt;
            return 2.0 * *v;
          },
          [&](double t, double H) -> std::optional<double> {
            const auto v = M(H * t);
            if (!v) return std::nullopt;
            return *v + H;
          },
          wc::detail::kBmmH, "H", "(BMM) for the associated function"));
    });
  }
  if (suite.count("cond4")) {
    guarded(results, "cond4", [&]() { return wc::to_json(wc::check_condition4(seq, grid)); });
  }
  if (suite.count("conjugate")) {
    results["conjugate"] = wc::to_json(
        wc::ConditionVerdict::inconclusive_with("not applicable to sequence subjects"));
  }
  if (suite.count("bridge")) {
    results["bridge_agreement"] = wc::to_json(
        wc::ConditionVerdict::inconclusive_with("not applicable to sequence subjects"));
  }
  if (suite.count("nuclearity")) {
    guarded(results, "nuclearity", [&]() {
      const wc::KoetheMatrix mat = wc::KoetheMatrix::from_sequence(seq, p.j_max, p.k_max);
      const wc::NuclearityReport rep =
          wc::gp_nuclearity(mat, {}, 8 * p.j_max, p.k_max, grid);
      ordered_json e = wc::to_json(rep);
      e["analyticCond4"] = wc::to_json(rep.analytic_condition4);
      e["note"] = rep.note;
      return e;
    });
  }
}

std::string render_text(const ordered_json& report) {
  std::ostringstream out;
  out << "weightcalc report\n";
  out << "subject: " << report["subject"].dump() << "\n";
  out << std::string(78, '-') << "\n";
  char line[256];
  for (const auto& [name, entry] : report["results"].items()) {
    std::string status = "-";
    std::string detail;
    if (entry.is_object() && entry.contains("status")) {
      status = entry["status"].get<std::string>();
      if (entry.contains("witness") && entry["witness"].is_object() &&
          !entry["witness"].empty()) {
        detail += "witness " + entry["witness"].dump();
      }
      if (entry.contains("counterexample") && !entry["counterexample"].is_null()) {
        detail += " counterexample " + entry["counterexample"].dump();
      }
      if (entry.contains("note") && entry["note"].is_string() &&
          !entry["note"].get<std::string>().empty()) {
        detail += " [" + entry["note"].get<std::string>() + "]";
      }
    } else {
      detail = entry.dump();
    }
    if (detail.size() > 180) detail = detail.substr(0, 177) + "...";
    std::snprintf(line, sizeof(line), "%-20s %-26s %s\n", name.c_str(), status.c_str(),
                  detail.c_str());
    out << line;
    if (name == "nuclearity" && entry.contains("perJ")) {
      for (const auto& pj : entry["perJ"]) {
        std::snprintf(line, sizeof(line), "  j=%-3lld m=%-6s nu=%-10.4g route=%s\n",
                      static_cast<long long>(pj["j"].get<std::size_t>()),
                      pj["m"].is_null() ? "-" : pj["m"].dump().c_str(),
                      pj["nu"].get<double>(), pj["route"].get<std::string>().c_str());
        out << line;
      }
    }
  }
  return out.str();
}

int write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write output path: " << out_path << "\n";
    return 2;
  }
  out << content;
  return out.good() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "weightcalc: growth/regularity condition suites and nuclearity analyses\n"
      "for weight sequences and weight functions. All computation is\n"
      "deterministic (WEIGHTCALC_SEED is reserved, currently unused)."};
  app.require_subcommand(1);

  std::string family_spec, sequence_spec, suite_spec = "all", out_path, format = "text";
  std::string what = "omega";
  AnalyzeParams params;
  double s_max = 32.0;
  std::size_t slope_n = 1024;

  CLI::App* analyze = app.add_subcommand("analyze", "run condition suites over a subject");
  analyze->add_option("--family", family_spec, "weight family spec");
  analyze->add_option("--sequence", sequence_spec, "sequence spec");
  analyze->add_option("--suite", suite_spec,
                      "comma list of axioms,bmm,cond4,conjugate,bridge,nuclearity,all");
  analyze->add_option("--tmin", params.t_min, "grid lower end");
  analyze->add_option("--tmax", params.t_max, "grid upper end");
  analyze->add_option("--grid-n", params.grid_n, "grid point count");
  analyze->add_option("--jmax", params.j_max, "Koethe matrix row count");
  analyze->add_option("--kmax", params.k_max, "Koethe matrix column sweep limit");
  analyze->add_option("--order", params.order, "sequence truncation order P");
  analyze->add_option("--out", out_path, "output path (default stdout)");
  analyze->add_option("--format", format, "json or text");

  CLI::App* exp = app.add_subcommand("export", "export curve data as CSV");
  exp->add_option("--family", family_spec, "weight family spec");
  exp->add_option("--sequence", sequence_spec, "sequence spec");
  exp->add_option("--what", what, "omega | M | phistar | summand:<j>,<m>");
  exp->add_option("--tmin", params.t_min, "grid lower end");
  exp->add_option("--tmax", params.t_max, "grid upper end");
  exp->add_option("--grid-n", params.grid_n, "grid point count");
  exp->add_option("--smax", s_max, "slope range for phistar");
  exp->add_option("--slope-n", slope_n, "slope count for phistar");
  exp->add_option("--kmax", params.k_max, "k sweep limit for summand");
  exp->add_option("--order", params.order, "sequence truncation order P");
  exp->add_option("--out", out_path, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (family_spec.empty() == sequence_spec.empty()) {
      std::cerr << "error: exactly one of --family / --sequence is required\n";
      return 2;
    }

    if (analyze->parsed()) {
      if (format != "json" && format != "text") {
        std::cerr << "error: analyze supports --format json|text (csv is for export)\n";
        return 2;
      }
      const std::set<std::string> suite = parse_suite(suite_spec);
      ordered_json report;
      report["tool"] = "weightcalc";
      ordered_json params_json;
      params_json["tMin"] = params.t_min;
      params_json["tMax"] = params.t_max;
      params_json["gridN"] = params.grid_n;
      params_json["jMax"] = params.j_max;
      params_json["kMax"] = params.k_max;
      params_json["order"] = params.order;
      report["params"] = std::move(params_json);
      report["suite"] = std::vector<std::string>(suite.begin(), suite.end());
      ordered_json results = ordered_json::object();
      if (!family_spec.empty()) {
        const wc::WeightFunction w = parse_family(family_spec);
        report["subject"] = wc::to_json(w);
        analyze_weight(w, suite, params, results);
      } else {
        const wc::WeightSequence seq = parse_sequence(sequence_spec, params.order);
        report["subject"] = wc::to_json(seq);
        analyze_sequence(seq, suite, params, results);
      }
      report["results"] = std::move(results);
      const std::string payload =
          (format == "json") ? report.dump(2) + "\n" : render_text(report);
      return write_output(payload, out_path);
    }

    // export
    std::ostringstream csv;
    if (what == "omega") {
      if (family_spec.empty()) throw std::invalid_argument("omega export needs --family");
      const wc::WeightFunction w = parse_family(family_spec);
      const wc::LogGrid grid = wc::make_log_grid(params.t_min, params.t_max, params.grid_n);
      std::vector<std::vector<double>> rows;
      for (double t : grid.points) rows.push_back({t, w(t)});
      wc::write_csv(csv, {"t", "omega"}, rows);
    } else if (what == "M") {
      wc::WeightSequence seq = family_spec.empty()
                                   ? parse_sequence(sequence_spec, params.order)
                                   : wc::sequence_from_weight(parse_family(family_spec),
                                                              params.order);
      const wc::LogGrid grid = wc::make_log_grid(params.t_min, params.t_max, params.grid_n);
      std::vector<std::vector<double>> rows;
      for (double t : grid.points) {
        rows.push_back({t, wc::associated_function(seq, t).value});
      }
      wc::write_csv(csv, {"t", "M"}, rows);
    } else if (what == "phistar") {
      if (family_spec.empty()) throw std::invalid_argument("phistar export needs --family");
      const wc::WeightFunction w = parse_family(family_spec);
      wc::write_conjugate_csv(csv, wc::young_conjugate(w, s_max, slope_n));
    } else if (what.rfind("summand:", 0) == 0) {
      const std::string args = what.substr(8);
      const std::size_t comma = args.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("summand export needs --what summand:<j>,<m>");
      }
      const std::size_t j = std::stoul(args.substr(0, comma));
      const std::size_t m = std::stoul(args.substr(comma + 1));
      const std::size_t j_hi = std::max(j, m);
      const wc::KoetheMatrix mat =
          family_spec.empty()
              ? wc::KoetheMatrix::from_sequence(parse_sequence(sequence_spec, params.order),
                                                j_hi, params.k_max)
              : wc::KoetheMatrix::from_weight(parse_family(family_spec), j_hi, params.k_max);
      wc::write_summand_csv(csv, mat, j, m, params.k_max);
    } else {
      throw std::invalid_argument("unknown export kind: " + what);
    }
    return write_output(csv.str(), out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
