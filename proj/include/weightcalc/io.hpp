// weightcalc: JSON and CSV serialization of subjects, verdicts and reports.
//
// JSON uses ordered objects throughout so that identical inputs always
// produce byte-identical documents. CSV numbers are printed with 17
// significant digits (full double round-trip).

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "weightcalc/bridge.hpp"
#include "weightcalc/conjugate.hpp"
#include "weightcalc/koethe.hpp"
#include "weightcalc/sequences.hpp"
#include "weightcalc/verdict.hpp"
#include "weightcalc/weights.hpp"

namespace weightcalc {

using ordered_json = nlohmann::ordered_json;

inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Verdicts.

inline ordered_json to_json(const ConditionVerdict& v) {
  ordered_json j;
  j["status"] = to_string(v.status);
  ordered_json w = ordered_json::object();
  for (const auto& [key, value] : v.witness) w[key] = value;
  j["witness"] = std::move(w);
  if (v.counterexample) {
    j["counterexample"] = {{"point", v.counterexample->point},
                           {"lhs", v.counterexample->lhs},
                           {"rhs", v.counterexample->rhs}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (v.grid) {
    j["grid"] = {{"tMin", v.grid->t_min}, {"tMax", v.grid->t_max}, {"n", v.grid->n}};
  } else {
    j["grid"] = nullptr;
  }
  j["note"] = v.note;
  return j;
}

// ---------------------------------------------------------------------------
// Sequences: {"label": str, "logM": [float...]}.

inline ordered_json to_json(const WeightSequence& seq) {
  ordered_json j;
  j["label"] = seq.label();
  j["logM"] = std::vector<double>(seq.log_values().begin(), seq.log_values().end());
  if (seq.truncated()) j["truncated"] = true;
  return j;
}

inline WeightSequence sequence_from_json(const ordered_json& j) {
  if (!j.contains("label") || !j.contains("logM") || !j["logM"].is_array()) {
    throw std::invalid_argument("sequence JSON must carry label and logM");
  }
  std::vector<double> lv = j["logM"].get<std::vector<double>>();
  const bool truncated = j.value("truncated", false);
  return WeightSequence(std::move(lv), j["label"].get<std::string>(), truncated);
}

inline WeightSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sequence file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed sequence JSON in " + path + ": " + e.what());
  }
  return sequence_from_json(j);
}

// ---------------------------------------------------------------------------
// Weights: {"family": str, "params": {...}}.

inline ordered_json to_json(const WeightFunction& w) {
  ordered_json j;
  ordered_json params = ordered_json::object();
  switch (w.family()) {
    case WeightFunction::Family::Omega0:
      j["family"] = "omega0";
      break;
    case WeightFunction::Family::Power:
      j["family"] = "power";
      params["a"] = w.param();
      break;
    case WeightFunction::Family::LogPower:
      j["family"] = "log";
      params["a"] = w.param();
      break;
    case WeightFunction::Family::Gevrey:
      j["family"] = "gevrey";
      params["s"] = w.param();
      break;
    case WeightFunction::Family::Table:
      j["family"] = "table";
      params["xMax"] = w.table_x_max();
      params["phi"] = std::vector<double>(w.table().begin(), w.table().end());
      break;
  }
  j["params"] = std::move(params);
  return j;
}

inline WeightFunction weight_from_json(const ordered_json& j) {
  const std::string family = j.at("family").get<std::string>();
  const ordered_json params = j.value("params", ordered_json::object());
  if (family == "omega0") return WeightFunction::omega0();
  if (family == "power") return WeightFunction::power(params.at("a").get<double>());
  if (family == "log") return WeightFunction::log_power(params.at("a").get<double>());
  if (family == "gevrey") return WeightFunction::gevrey(params.at("s").get<double>());
  if (family == "table") {
    return WeightFunction::from_phi_samples(params.at("phi").get<std::vector<double>>(),
                                            params.at("xMax").get<double>());
  }
  throw std::invalid_argument("unknown weight family: " + family);
}

// ---------------------------------------------------------------------------
// Nuclearity report:
// {"source": str, "perJ": [{"j","m","nu","supBound","route"}], "status": str}.

inline ordered_json to_json(const NuclearityReport& rep) {
  ordered_json j;
  j["source"] = rep.source;
  ordered_json per = ordered_json::array();
  for (const PerJResult& pj : rep.per_j) {
    ordered_json e;
    e["j"] = pj.j;
    if (pj.m) {
      e["m"] = *pj.m;
    } else {
      e["m"] = nullptr;
    }
    e["nu"] = pj.nu;
    e["supBound"] = pj.sup_bound;
    e["route"] = pj.route;
    per.push_back(std::move(e));
  }
  j["perJ"] = std::move(per);
  j["status"] = to_string(rep.status);
  return j;
}

// ---------------------------------------------------------------------------
// CSV artifacts.

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_number(row[i]);
    }
    out << "\n";
  }
}

/// ConjugateTable export: columns s, phistar (divergent entries print inf).
inline void write_conjugate_csv(std::ostream& out, const ConjugateTable& table) {
  std::vector<std::vector<double>> rows;
  rows.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    rows.push_back({table.slope(i), table.value(i)});
  }
  write_csv(out, {"s", "phistar"}, rows);
}

/// Summand trace for a (j, m) pair: columns k, exponent, partial_sum.
inline void write_summand_csv(std::ostream& out, const KoetheMatrix& mat, std::size_t j,
                              std::size_t m, std::size_t K) {
  std::vector<std::vector<double>> rows;
  NeumaierSum acc;
  for (std::size_t k : detail::geometric_sweep(K)) {
    const double e = mat.exponent(j, k) - mat.exponent(m, k);
    acc.add(e > kExpOverflowGuard ? std::numeric_limits<double>::infinity() : std::exp(e));
    rows.push_back({static_cast<double>(k), e, acc.total()});
  }
  write_csv(out, {"k", "exponent", "partial_sum"}, rows);
}

}  // namespace weightcalc
