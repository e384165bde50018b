#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "behent/coverage.hpp"
#include "behent/dataset.hpp"
#include "behent/density.hpp"
#include "behent/entropy.hpp"
#include "behent/error.hpp"
#include "behent/rewards.hpp"
#include "behent/study.hpp"

namespace behent {

enum class FileFormat { Csv, Ndjson };

inline FileFormat format_from_path(const std::string& path) {
  const auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".ndjson") || ends_with(".jsonl") || ends_with(".json")) return FileFormat::Ndjson;
  return FileFormat::Csv;
}

// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const std::from_chars_result res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw_io("io", "cannot parse number '" + std::string(tok) + "' " + where);
  return v;
}

inline std::int64_t parse_int(std::string_view tok, const std::string& where) {
  std::int64_t v = 0;
  const std::from_chars_result res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw_io("io", "cannot parse integer '" + std::string(tok) + "' " + where);
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

struct Column {
  enum Kind { State, Action, Episode, Step, Reward } kind;
  int index = 0; // for State/Action
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io", "cannot open input file " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("io", "cannot open output file " + path);
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw_io("io", "write failed for " + path);
}

inline std::string chop_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

} // namespace detail

// CSV with a header of state columns s0..s{d-1} plus optional a0.., episode,
// step, and reward columns.
inline Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw_io("io", "empty file " + path);
  line = detail::chop_cr(line);

  std::vector<detail::Column> cols;
  int state_dim = 0, action_dim = 0;
  int n_episode = 0, n_step = 0, n_reward = 0;
  const std::vector<std::string_view> header = detail::split_csv(line);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string_view tok = header[c];
    detail::Column col{};
    if (tok == "episode") {
      col.kind = detail::Column::Episode;
      ++n_episode;
    } else if (tok == "step") {
      col.kind = detail::Column::Step;
      ++n_step;
    } else if (tok == "reward") {
      col.kind = detail::Column::Reward;
      ++n_reward;
    } else if (tok.size() >= 2 && (tok[0] == 's' || tok[0] == 'a')) {
      col.kind = tok[0] == 's' ? detail::Column::State : detail::Column::Action;
      col.index = static_cast<int>(detail::parse_int(tok.substr(1), "in header column " + std::to_string(c + 1)));
      (tok[0] == 's' ? state_dim : action_dim) += 1;
    } else {
      throw_io("io", "unrecognized header column '" + std::string(tok) + "' at line 1");
    }
    cols.push_back(col);
  }
  if (state_dim == 0) throw_io("io", "header has no state columns (s0..) at line 1");
  if (n_episode > 1 || n_step > 1 || n_reward > 1)
    throw_io("io", "duplicate episode/step/reward column at line 1");
  // the sN / aN indices must be exactly 0..dim-1
  std::vector<bool> seen_s(static_cast<std::size_t>(state_dim), false);
  std::vector<bool> seen_a(static_cast<std::size_t>(action_dim), false);
  for (const detail::Column& col : cols) {
    if (col.kind == detail::Column::State || col.kind == detail::Column::Action) {
      std::vector<bool>& seen = col.kind == detail::Column::State ? seen_s : seen_a;
      if (col.index < 0 || col.index >= static_cast<int>(seen.size()) || seen[static_cast<std::size_t>(col.index)])
        throw_io("io", "state/action columns must cover 0..dim-1 exactly once at line 1");
      seen[static_cast<std::size_t>(col.index)] = true;
    }
  }

  Dataset ds;
  ds.d = state_dim;
  ds.action_dim = action_dim;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::chop_cr(line);
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break; // trailing newline
    const std::vector<std::string_view> toks = detail::split_csv(line);
    if (toks.size() != cols.size())
      throw_io("io", "expected " + std::to_string(cols.size()) + " columns, got " + std::to_string(toks.size()) +
                         " at line " + std::to_string(lineno));
    const std::string where = "at line " + std::to_string(lineno);
    std::vector<double> state(static_cast<std::size_t>(state_dim));
    std::vector<double> action(static_cast<std::size_t>(action_dim));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const detail::Column& col = cols[c];
      switch (col.kind) {
        case detail::Column::State: state[static_cast<std::size_t>(col.index)] = detail::parse_double(toks[c], where); break;
        case detail::Column::Action: action[static_cast<std::size_t>(col.index)] = detail::parse_double(toks[c], where); break;
        case detail::Column::Episode: ds.episodes.push_back(detail::parse_int(toks[c], where)); break;
        case detail::Column::Step: ds.steps.push_back(detail::parse_int(toks[c], where)); break;
        case detail::Column::Reward: ds.rewards.push_back(detail::parse_double(toks[c], where)); break;
      }
    }
    ds.points.insert(ds.points.end(), state.begin(), state.end());
    ds.actions.insert(ds.actions.end(), action.begin(), action.end());
    ++ds.n;
  }
  if (action_dim == 0) ds.actions.clear();
  ds.validate();
  return ds;
}

// One JSON object per line: {"state": [...], "action": [...]|null,
// "reward": x, "episode": e, "step": s}; optional fields must be present on
// either every row or none.
inline Dataset load_dataset_ndjson(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  bool has_action = false, has_episode = false, has_step = false, has_reward = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::chop_cr(line);
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw_io("io", "invalid JSON at line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!row.is_object() || !row.contains("state") || !row["state"].is_array())
      throw_io("io", "expected an object with a state array at line " + std::to_string(lineno));

    const auto& state = row["state"];
    const bool row_action = row.contains("action") && !row["action"].is_null();
    const bool row_episode = row.contains("episode") && !row["episode"].is_null();
    const bool row_step = row.contains("step") && !row["step"].is_null();
    const bool row_reward = row.contains("reward") && !row["reward"].is_null();
    if (first) {
      ds.d = static_cast<int>(state.size());
      has_action = row_action;
      has_episode = row_episode;
      has_step = row_step;
      has_reward = row_reward;
      if (row_action) ds.action_dim = static_cast<int>(row["action"].size());
      first = false;
    }
    if (static_cast<int>(state.size()) != ds.d)
      throw_io("io", "state dimension changed at line " + std::to_string(lineno));
    if (row_action != has_action || row_episode != has_episode || row_step != has_step || row_reward != has_reward)
      throw_io("io", "optional fields must be present on every row or none; mismatch at line " + std::to_string(lineno));

    for (const auto& v : state) {
      if (!v.is_number()) throw_io("io", "non-numeric state entry at line " + std::to_string(lineno));
      ds.points.push_back(v.get<double>());
    }
    if (has_action) {
      if (static_cast<int>(row["action"].size()) != ds.action_dim)
        throw_io("io", "action dimension changed at line " + std::to_string(lineno));
      for (const auto& v : row["action"]) {
        if (!v.is_number()) throw_io("io", "non-numeric action entry at line " + std::to_string(lineno));
        ds.actions.push_back(v.get<double>());
      }
    }
    if (has_episode) {
      if (!row["episode"].is_number_integer())
        throw_io("io", "episode must be an integer at line " + std::to_string(lineno));
      ds.episodes.push_back(row["episode"].get<std::int64_t>());
    }
    if (has_step) {
      if (!row["step"].is_number_integer())
        throw_io("io", "step must be an integer at line " + std::to_string(lineno));
      ds.steps.push_back(row["step"].get<std::int64_t>());
    }
    if (has_reward) {
      if (!row["reward"].is_number())
        throw_io("io", "reward must be a number at line " + std::to_string(lineno));
      ds.rewards.push_back(row["reward"].get<double>());
    }
    ++ds.n;
  }
  if (first) throw_io("io", "no rows in " + path);
  ds.validate();
  return ds;
}

inline Dataset load_dataset(const std::string& path, FileFormat format) {
  return format == FileFormat::Csv ? load_dataset_csv(path) : load_dataset_ndjson(path);
}

namespace detail {

inline void write_dataset_csv_stream(std::ostream& out, const Dataset& ds) {
  std::string header;
  for (int j = 0; j < ds.d; ++j) header += (j ? ",s" : "s") + std::to_string(j);
  for (int j = 0; j < ds.action_dim; ++j) header += ",a" + std::to_string(j);
  if (ds.has_episodes()) header += ",episode";
  if (ds.has_steps()) header += ",step";
  if (ds.has_rewards()) header += ",reward";
  out << header << '\n';
  for (std::int64_t i = 0; i < ds.n; ++i) {
    std::string row;
    for (double v : ds.row(i)) {
      if (!row.empty()) row += ',';
      row += format_double(v);
    }
    if (ds.action_dim > 0)
      for (double v : ds.action_row(i)) row += ',' + format_double(v);
    if (ds.has_episodes()) row += ',' + std::to_string(ds.episodes[static_cast<std::size_t>(i)]);
    if (ds.has_steps()) row += ',' + std::to_string(ds.steps[static_cast<std::size_t>(i)]);
    if (ds.has_rewards()) row += ',' + format_double(ds.rewards[static_cast<std::size_t>(i)]);
    out << row << '\n';
  }
}

inline void write_dataset_ndjson_stream(std::ostream& out, const Dataset& ds) {
  for (std::int64_t i = 0; i < ds.n; ++i) {
    nlohmann::ordered_json row;
    row["state"] = ds.row(i);
    if (ds.action_dim > 0) row["action"] = ds.action_row(i);
    if (ds.has_rewards()) row["reward"] = ds.rewards[static_cast<std::size_t>(i)];
    if (ds.has_episodes()) row["episode"] = ds.episodes[static_cast<std::size_t>(i)];
    if (ds.has_steps()) row["step"] = ds.steps[static_cast<std::size_t>(i)];
    out << row.dump() << '\n';
  }
}

} // namespace detail

inline void write_dataset(const std::string& path, const Dataset& ds, FileFormat format) {
  ds.validate();
  std::ofstream out = detail::open_output(path);
  if (format == FileFormat::Csv)
    detail::write_dataset_csv_stream(out, ds);
  else
    detail::write_dataset_ndjson_stream(out, ds);
  detail::finish_output(out, path);
}

inline void write_transitions(const std::string& path, const std::vector<TransitionRecord>& records,
                              FileFormat format) {
  if (records.empty()) throw_validation("io", "no transition records to write");
  std::ofstream out = detail::open_output(path);
  const int d = static_cast<int>(records.front().state.size());
  const bool has_action = records.front().action.has_value();
  if (format == FileFormat::Csv) {
    std::string header;
    for (int j = 0; j < d; ++j) header += (j ? ",s" : "s") + std::to_string(j);
    if (has_action)
      for (std::size_t j = 0; j < records.front().action->size(); ++j) header += ",a" + std::to_string(j);
    out << header << ",episode,step,reward\n";
    for (const TransitionRecord& rec : records) {
      std::string row;
      for (double v : rec.state) {
        if (!row.empty()) row += ',';
        row += format_double(v);
      }
      if (has_action)
        for (double v : *rec.action) row += ',' + format_double(v);
      row += ',' + std::to_string(rec.episode);
      row += ',' + std::to_string(rec.step);
      row += ',' + format_double(rec.reward);
      out << row << '\n';
    }
  } else {
    for (const TransitionRecord& rec : records) {
      nlohmann::ordered_json row;
      row["state"] = rec.state;
      if (rec.action)
        row["action"] = *rec.action;
      else
        row["action"] = nullptr;
      row["reward"] = rec.reward;
      row["episode"] = rec.episode;
      row["step"] = rec.step;
      out << row.dump() << '\n';
    }
  }
  detail::finish_output(out, path);
}

inline void write_study_csv(const std::string& path, const StudyReport& report) {
  std::ofstream out = detail::open_output(path);
  out << "n,k,mean,mae,variance\n";
  for (const StudyCell& cell : report.cells) {
    out << cell.n << ',' << cell.k << ',' << format_double(cell.mean) << ',' << format_double(cell.mae) << ','
        << format_double(cell.variance) << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_coverage_csv(const std::string& path, const CoverageCurve& curve) {
  std::ofstream out = detail::open_output(path);
  out << "step,radius,normalized_radius,truncated_flag\n";
  for (const CoverageCheckpoint& cp : curve.checkpoints) {
    out << cp.step << ',' << format_double(cp.radius) << ',' << format_double(cp.normalized) << ','
        << (cp.truncated ? 1 : 0) << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_curve_csv(const std::string& path, const std::vector<RewardCurveEntry>& entries) {
  std::ofstream out = detail::open_output(path);
  out << "alpha,R,reward\n";
  for (const RewardCurveEntry& e : entries) {
    out << (e.baseline ? std::string("se") : format_double(e.alpha)) << ',' << format_double(e.r) << ','
        << format_double(e.reward) << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_density_csv(const std::string& path, const DensityEstimate& est) {
  std::ofstream out = detail::open_output(path);
  out << "row,density,log_density\n";
  for (std::size_t i = 0; i < est.log_values.size(); ++i) {
    out << i << ',' << format_double(std::exp(est.log_values[i])) << ',' << format_double(est.log_values[i]) << '\n';
  }
  detail::finish_output(out, path);
}

inline void write_estimates_csv(const std::string& path, const std::vector<EntropyEstimate>& estimates) {
  std::ofstream out = detail::open_output(path);
  out << "estimator,value,k,n,d,q,alpha,beta\n";
  for (const EntropyEstimate& e : estimates) {
    std::string q, alpha, beta;
    if (e.spec.kind == EstimatorKind::RenyiPlugin) q = format_double(e.spec.q);
    if (e.spec.kind == EstimatorKind::BENaive || e.spec.kind == EstimatorKind::BECorrected) {
      alpha = format_double(e.spec.weighting.params().alpha);
      beta = format_double(e.spec.weighting.params().beta);
    }
    out << e.spec.name() << ',' << format_double(e.value) << ',' << e.k << ',' << e.n << ',' << e.d << ',' << q << ','
        << alpha << ',' << beta << '\n';
  }
  detail::finish_output(out, path);
}

} // namespace behent
