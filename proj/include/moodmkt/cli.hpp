#pragma once

// Command-line driver. run() is the whole program minus main(), so tests call it in-process.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "moodmkt/causality.hpp"
#include "moodmkt/lexicon.hpp"
#include "moodmkt/market.hpp"
#include "moodmkt/panel.hpp"
#include "moodmkt/report.hpp"
#include "moodmkt/sentiment_io.hpp"
#include "moodmkt/synth.hpp"

namespace moodmkt {

inline constexpr std::string_view kToolVersion = "moodmkt 1.0.0";

struct RunConfig {
  std::string subcommand;
  std::string config_path;

  std::string tweets;
  std::string lexicon;
  std::string sentiment;
  std::vector<std::string> markets;  // "path" or "label=path"
  std::string panel;
  std::string out;
  std::string plot_csv;
  std::string tweets_out;
  std::string market_out;
  std::string panel_out;

  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<std::string> columns;
  std::vector<std::string> sentiment_cols;
  std::vector<std::string> market_cols;

  int ma_window = 3;
  std::string shifts = "-2..+2";
  std::vector<int> lags{1, 2, 3};
  double level = 0.05;
  std::string gap_policy = "reject";
  int horizon = kDefaultDeltaHorizon;
  std::string format = "table";
  std::string adf_spec = "ct";
  std::string max_lags = "auto";
  bool no_stationarity_gate = false;
  std::uint64_t seed = SyntheticStudyOptions{}.seed;
  std::size_t days = SyntheticStudyOptions{}.days;
};

namespace detail {

/// Usage problems found after CLI11 parsing (bad enum values, malformed ranges).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

inline int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw UsageError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

/// "-2..+2" or a comma list such as "-2,-1,1,2".
inline std::vector<int> parse_shifts(std::string_view spec) {
  std::vector<int> out;
  if (auto dots = spec.find(".."); dots != std::string_view::npos) {
    const int lo = parse_int(spec.substr(0, dots), "shift range");
    const int hi = parse_int(spec.substr(dots + 2), "shift range");
    if (lo > hi) throw UsageError("shift range '" + std::string(spec) + "' is empty");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = std::min(spec.find(',', pos), spec.size());
    out.push_back(parse_int(spec.substr(pos, comma - pos), "shift"));
    pos = comma + 1;
  }
  return out;
}

inline std::string join(const std::vector<int>& v, bool sign) {
  std::string out;
  for (int k : v) {
    if (!out.empty()) out += ',';
    out += (sign && k > 0 ? "+" : "") + std::to_string(k);
  }
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

inline GapPolicy gap_policy(std::string_view s) {
  if (s == "reject") return GapPolicy::reject;
  if (s == "interpolate-linear") return GapPolicy::interpolate_linear;
  throw UsageError("--gap-policy must be reject or interpolate-linear (got '" + std::string(s) + "')");
}

inline Deterministic adf_spec(std::string_view s) {
  if (s == "none") return Deterministic::none;
  if (s == "c") return Deterministic::constant;
  if (s == "ct") return Deterministic::constant_trend;
  throw UsageError("--adf-spec must be none, c or ct (got '" + std::string(s) + "')");
}

inline std::optional<std::size_t> max_lags(std::string_view s) {
  if (s == "auto") return std::nullopt;
  const int v = parse_int(s, "--max-lags");
  if (v < 0) throw UsageError("--max-lags must be non-negative");
  return static_cast<std::size_t>(v);
}

inline void check_format(std::string_view f) {
  if (f != "csv" && f != "json" && f != "table")
    throw UsageError("--format must be csv, json or table (got '" + std::string(f) + "')");
}

inline void check_level(double level) {
  try {
    adf_level(level);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct Inputs {
  std::vector<std::pair<std::string, std::string>> digests;  // (description, fnv1a64)
};

inline std::string load(const std::string& path, const std::string& role, Inputs* inputs) {
  std::string content = read_file(path);
  if (inputs) inputs->digests.emplace_back(role + " " + path, hex64(fnv1a64(content)));
  return content;
}

inline Lexicon load_lexicon(const RunConfig& c, Inputs* inputs) {
  if (c.lexicon.empty()) return Lexicon{};
  return parse_lexicon_json(load(c.lexicon, "lexicon", inputs));
}

inline std::vector<DailySentiment> sentiment_series(const RunConfig& c, Inputs* inputs, std::string_view stage_for) {
  if (!c.sentiment.empty()) return parse_sentiment_csv(load(c.sentiment, "sentiment", inputs));
  if (!c.tweets.empty()) {
    const auto lex = load_lexicon(c, inputs);
    const auto tweets = parse_tweets(load(c.tweets, "tweets", inputs));
    return aggregate_daily(filter_bots(tweets, lex), lex);
  }
  throw Error("missing artifact for stage 'extract': " + std::string(stage_for) + " needs --tweets or --sentiment");
}

inline bool is_label(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

inline std::vector<MarketInput> market_inputs(const RunConfig& c, Inputs* inputs, std::string_view stage_for) {
  if (c.markets.empty())
    throw Error("missing artifact for stage 'derive': " + std::string(stage_for) + " needs --market");
  std::vector<MarketInput> out;
  for (const auto& spec : c.markets) {
    MarketInput m;
    std::string path = spec;
    if (auto eq = spec.find('='); eq != std::string::npos && is_label(std::string_view(spec).substr(0, eq))) {
      m.label = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    }
    m.rows = parse_market_csv(load(path, "market", inputs));
    out.push_back(std::move(m));
  }
  if (out.size() > 1) {
    for (const auto& m : out) {
      if (m.label.empty()) throw UsageError("several --market inputs need labels (label=path)");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        if (out[i].label == out[j].label) throw UsageError("duplicate market label '" + out[i].label + "'");
      }
    }
  }
  return out;
}

inline AlignOptions align_options(const RunConfig& c) { return AlignOptions{gap_policy(c.gap_policy), c.horizon}; }

inline AlignedPanel panel_from(const RunConfig& c, Inputs* inputs, std::string_view stage_for) {
  if (!c.panel.empty()) return parse_panel_csv(load(c.panel, "panel", inputs));
  const auto opts = align_options(c);
  auto sent = sentiment_series(c, inputs, stage_for);
  auto markets = market_inputs(c, inputs, stage_for);
  return align(sent, markets, opts);
}

inline std::vector<std::string> default_sentiment_columns() {
  return {std::string(kColPositive), std::string(kColNegative), std::string(kColEmotions),
          std::string(kColUncertainty), std::string(kColRatio)};
}

inline std::string prefixed(const std::string& label, std::string_view field) {
  return label.empty() ? std::string(field) : label + "_" + std::string(field);
}

inline std::string tweets_jsonl(const std::vector<TweetRecord>& tweets) {
  std::string out;
  for (const auto& t : tweets) {
    nlohmann::ordered_json j{{"id", t.id}, {"author", t.author}, {"timestamp", t.timestamp}, {"text", t.text}};
    out += j.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

inline std::string cmd_extract(const RunConfig& c) {
  if (c.tweets.empty()) throw UsageError("extract needs --tweets");
  RunConfig cc = c;
  cc.sentiment.clear();
  return write_sentiment_csv(sentiment_series(cc, nullptr, "extract"));
}

inline std::string cmd_derive(const RunConfig& c) {
  if (c.markets.size() != 1) throw UsageError("derive takes exactly one --market");
  if (c.horizon < 1) throw UsageError("--horizon must be at least 1");
  const auto m = market_inputs(c, nullptr, "derive");
  return write_derived_csv(m.front().rows, derive_indicators(m.front().rows, c.horizon), c.horizon);
}

inline std::string cmd_align(const RunConfig& c) {
  if (c.horizon < 1) throw UsageError("--horizon must be at least 1");
  RunConfig cc = c;
  cc.panel.clear();
  return write_panel_csv(panel_from(cc, nullptr, "align"));
}

inline std::string cmd_correlate(const RunConfig& c) {
  if (c.panel.empty()) throw UsageError("correlate needs --panel");
  if (c.x.empty() || c.y.empty()) throw UsageError("correlate needs --x and --y");
  if (c.ma_window < 1 || c.ma_window % 2 == 0) throw UsageError("--ma must be a positive odd window");
  check_format(c.format);
  const auto shifts = parse_shifts(c.shifts);
  const auto panel = panel_from(c, nullptr, "correlate");
  std::vector<CorrelationCell> cells;
  std::vector<std::pair<std::string, int>> ys;
  for (const auto& y : c.y) {
    for (int s : shifts) ys.emplace_back(y, s);
  }
  for (const auto& x : c.x) {
    for (const auto& [y, s] : ys) cells.push_back(correlate_cell(panel, x, y, s, c.ma_window));
  }
  if (c.format == "csv") return correlation_csv(cells);
  if (c.format == "json") return correlation_json(cells).dump(2) + "\n";
  std::vector<std::string> rows;
  for (const auto& x : c.x) rows.push_back(c.ma_window > 1 ? moving_average_name(x, c.ma_window) : x);
  for (auto& cell : cells) cell.x = c.ma_window > 1 ? moving_average_name(cell.x, c.ma_window) : cell.x;
  return correlation_markdown(cells, rows, ys) + "\n" + std::string(kStarFootnote) + "\n";
}

inline std::string cmd_adf(const RunConfig& c) {
  if (c.panel.empty()) throw UsageError("adf needs --panel");
  check_format(c.format);
  check_level(c.level);
  const auto spec = adf_spec(c.adf_spec);
  const auto lags = max_lags(c.max_lags);
  const auto panel = panel_from(c, nullptr, "adf");
  std::vector<std::string> cols = c.columns;
  if (cols.empty()) {
    for (const auto& col : panel.columns()) cols.push_back(col.name);
  }
  std::vector<StationarityCheck> checks;
  for (const auto& name : cols) {
    StationarityCheck check{name, std::nullopt, {}};
    const auto& values = panel.column(name);
    try {
      check.adf = adf_test(values, c.level, spec, lags);
    } catch (const Error& e) {
      check.error = e.what();
    }
    checks.push_back(std::move(check));
  }
  if (c.format == "csv") return adf_csv(checks);
  if (c.format == "json") return adf_json(checks).dump(2) + "\n";
  return adf_markdown(checks);
}

inline GrangerMatrix granger_for(const RunConfig& c, const AlignedPanel& panel, const std::string& market_label) {
  check_level(c.level);
  for (int lag : c.lags) {
    if (lag < 1) throw UsageError("--lags entries must be at least 1");
  }
  auto sent = c.sentiment_cols.empty() ? default_sentiment_columns() : c.sentiment_cols;
  std::vector<std::string> mk = c.market_cols;
  if (mk.empty()) {
    for (auto f : {"close", "volume_btc", "intraday_spread", "intraday_return"}) mk.push_back(prefixed(market_label, f));
  }
  GrangerMatrixOptions opts;
  opts.level = c.level;
  opts.override_stationarity = c.no_stationarity_gate;
  opts.adf_spec = adf_spec(c.adf_spec);
  opts.adf_max_lags = max_lags(c.max_lags);
  return granger_matrix(panel, sent, mk, c.lags, opts);
}

inline std::string cmd_granger(const RunConfig& c) {
  if (c.panel.empty()) throw UsageError("granger needs --panel");
  check_format(c.format);
  adf_spec(c.adf_spec);
  max_lags(c.max_lags);
  const auto panel = panel_from(c, nullptr, "granger");
  const auto m = granger_for(c, panel, "");
  if (c.format == "csv") return granger_csv(m);
  if (c.format == "json") return granger_json(m).dump(2) + "\n";
  return granger_markdown(m);
}

inline std::string cmd_synth(const RunConfig& c) {
  SyntheticStudyOptions opt;
  opt.seed = c.seed;
  opt.days = c.days;
  const auto study = synthesize_study(opt);
  const auto lex = Lexicon{};
  const auto panel = align(aggregate_daily(filter_bots(study.tweets, lex), lex), study.market);
  if (!c.tweets_out.empty()) write_file(c.tweets_out, tweets_jsonl(study.tweets));
  if (!c.market_out.empty()) write_file(c.market_out, write_market_csv(study.market));
  if (!c.panel_out.empty()) {
    write_file(c.panel_out, write_panel_csv(panel));
    return {};
  }
  return write_panel_csv(panel);
}

// ---------------------------------------------------------------------------------------------
// Report

inline std::string plot_csv(const AlignedPanel& panel, const std::string& label) {
  const auto m = [&](std::string_view f) { return prefixed(label, f); };
  const std::vector<std::pair<std::string, std::vector<std::string>>> figures = {
      {"volume_close_spread", {m("volume_btc"), m("close"), m("intraday_spread")}},
      {"sentiment_pools_close",
       {std::string(kColPositive), std::string(kColNegative), std::string(kColUncertainty), m("close")}},
      {"volume_emotions", {m("volume_btc"), std::string(kColEmotions)}},
      {"close_negative", {m("close"), std::string(kColNegative)}},
      {"close_positive", {m("close"), std::string(kColPositive)}},
      {"volume_uncertainty", {m("volume_btc"), std::string(kColUncertainty)}},
  };
  std::string out = "figure,date,series,value\n";
  for (const auto& [fig, series] : figures) {
    for (const auto& s : series) {
      const auto& v = panel.column(s);
      for (std::size_t r = 0; r < panel.size(); ++r)
        out += fig + ',' + panel.date(r).iso() + ',' + csv_escape(s) + ',' + format_number(v[r]) + '\n';
    }
  }
  return out;
}

inline std::string cmd_report(const RunConfig& c, std::string* plot) {
  if (c.ma_window < 1 || c.ma_window % 2 == 0) throw UsageError("--ma must be a positive odd window");
  if (c.horizon < 1) throw UsageError("--horizon must be at least 1");
  check_level(c.level);
  const auto spec = adf_spec(c.adf_spec);
  max_lags(c.max_lags);
  gap_policy(c.gap_policy);
  const auto shifts = parse_shifts(c.shifts);

  Inputs inputs;
  const auto sent = sentiment_series(c, &inputs, "report");
  const auto markets = market_inputs(c, &inputs, "report");
  const auto panel = align(sent, markets, align_options(c));
  const std::string primary = markets.front().label;
  const auto mcol = [&](std::string_view f) { return prefixed(primary, f); };
  const auto sentiment_cols = default_sentiment_columns();

  std::string doc = "# Sentiment and market report\n\n";
  doc += "## Run configuration\n\n";
  doc += "- tool version: " + std::string(kToolVersion) + "\n";
  doc += "- subcommand: report\n";
  doc += "- tweets: " + (c.tweets.empty() ? std::string("(none)") : c.tweets) + "\n";
  doc += "- sentiment: " + (c.sentiment.empty() ? std::string("(derived from tweets)") : c.sentiment) + "\n";
  doc += "- lexicon: " + (c.lexicon.empty() ? std::string("(built-in)") : c.lexicon) + "\n";
  doc += "- market: " + join(c.markets) + "\n";
  doc += "- moving-average window: " + std::to_string(c.ma_window) + " (centered)\n";
  doc += "- shifts: " + join(shifts, true) + "\n";
  doc += "- granger lags: " + join(c.lags, false) + "\n";
  doc += "- significance level: " + format_number(c.level) + "\n";
  doc += "- gap policy: " + c.gap_policy + "\n";
  doc += "- delta horizon: " + std::to_string(c.horizon) + " days\n";
  doc += "- adf deterministic terms: " + std::string(to_string(spec)) + "\n";
  doc += "- adf max lags: " + c.max_lags + "\n";
  doc += "- stationarity gate: " + std::string(c.no_stationarity_gate ? "overridden" : "enforced") + "\n";
  doc += "- output format: " + c.format + "\n";
  doc += "- seed: " + std::to_string(c.seed) + " (synth only)\n";
  doc += "- plot csv: " + (c.plot_csv.empty() ? std::string("(none)") : c.plot_csv) + "\n";
  for (const auto& [what, digest] : inputs.digests) doc += "- input " + what + ": fnv1a64 " + digest + "\n";
  doc += "- panel: " + panel.date(0).iso() + " to " + panel.date(panel.size() - 1).iso() + " (" +
         std::to_string(panel.size()) + " days)\n\n";

  auto grid = [&](const std::vector<std::string>& xs, const std::vector<std::pair<std::string, int>>& ys, int ma) {
    std::vector<CorrelationCell> cells;
    for (const auto& x : xs) {
      for (const auto& [y, s] : ys) cells.push_back(correlate_cell(panel, x, y, s, ma));
      for (auto& cell : cells) {
        if (cell.x == x && ma > 1) cell.x = moving_average_name(x, ma);
      }
    }
    std::vector<std::string> rows;
    for (const auto& x : xs) rows.push_back(ma > 1 ? moving_average_name(x, ma) : x);
    return correlation_markdown(cells, rows, ys);
  };
  const std::string note = "n = " + std::to_string(panel.size()) + " days before shifting and smoothing; " +
                           std::string(kStarFootnote) + "\n\n";

  doc += "## Sentiment signals vs close price\n\n";
  {
    std::vector<std::pair<std::string, int>> ys;
    for (const auto& m : markets) ys.emplace_back(prefixed(m.label, "close"), 0);
    doc += grid(sentiment_cols, ys, 1) + "\n" + note;
  }

  doc += "## Sentiment signals vs market indicators\n\n";
  {
    std::vector<std::pair<std::string, int>> ys;
    for (auto f : {"close", "volume_btc", "intraday_spread", "intraday_return"}) ys.emplace_back(mcol(f), 0);
    doc += grid(sentiment_cols, ys, 1) + "\n" + note;
  }

  doc += "## Smoothed sentiment vs shifted close price\n\n";
  {
    std::vector<std::pair<std::string, int>> ys;
    for (int s : shifts) ys.emplace_back(mcol("close"), s);
    doc += grid(sentiment_cols, ys, c.ma_window) + "\n" + note;
  }

  doc += "## Sentiment vs shifted volume and delta price\n\n";
  {
    std::vector<std::pair<std::string, int>> ys;
    std::vector<int> nonzero;
    for (int s : shifts) {
      if (s != 0) nonzero.push_back(s);
    }
    for (int s : nonzero) ys.emplace_back(mcol("volume_btc"), s);
    if (!nonzero.empty()) {
      ys.emplace_back(mcol(delta_column_name(c.horizon)), nonzero.front());
      if (nonzero.back() != nonzero.front()) ys.emplace_back(mcol(delta_column_name(c.horizon)), nonzero.back());
    } else {
      ys.emplace_back(mcol("volume_btc"), 0);
    }
    doc += grid(sentiment_cols, ys, 1) + "\n" + note;
  }

  doc += "## Granger causality\n\n";
  const auto gm = granger_for(c, panel, primary);
  doc += "Stationarity (ADF, " + std::string(to_string(spec)) + ", level " + format_number(c.level) + "):\n\n";
  for (const auto& s : gm.stationarity) {
    doc += "- " + s.column + ": ";
    if (s.adf) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "t = %.3f, critical %.3f, lags %zu, ", s.adf->t_stat, s.adf->critical_value(),
                    s.adf->lags_used);
      doc += buf + std::string(s.adf->reject_unit_root ? "stationary" : "unit root not rejected");
    } else {
      doc += "error: " + s.error;
    }
    doc += "\n";
  }
  if (gm.gate_overridden) doc += "\nStationarity gate overridden by flag.\n";
  doc += "\nCells show p-values.\n\n";
  doc += granger_markdown(gm);

  if (plot) *plot = plot_csv(panel, primary);
  return doc;
}

// ---------------------------------------------------------------------------------------------
// Config file: JSON object whose keys are long option names without the dashes. Values become
// option defaults, so explicit flags still win.

inline std::string json_to_arg(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + json_to_arg(e);
    return out;
  }
  throw UsageError("config: unsupported value " + v.dump());
}

inline void apply_config(CLI::App& sub, const std::string& path) {
  const std::string content = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config '" + path + "' must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "config") throw UsageError("config: nested config is not allowed");
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("config: unknown option '" + key + "' for " + sub.get_name());
    }
    try {
      opt->default_val(json_to_arg(value));
    } catch (const CLI::Error& e) {
      throw UsageError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Tweet sentiment vs market statistics pipeline", "moodmkt"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* s) { s->add_option("--config", c.config_path, "JSON file of option defaults"); };
  auto sentiment_inputs = [&](CLI::App* s) {
    s->add_option("--tweets", c.tweets, "tweets file (JSONL or delimited with header)");
    s->add_option("--lexicon", c.lexicon, "lexicon JSON overriding the built-in one");
  };
  auto panel_build = [&](CLI::App* s) {
    s->add_option("--sentiment", c.sentiment, "daily sentiment CSV");
    s->add_option("--market", c.markets, "market CSV, as path or label=path; repeatable")->delimiter(',');
    s->add_option("--gap-policy", c.gap_policy, "reject | interpolate-linear");
    s->add_option("--horizon", c.horizon, "delta price horizon in days");
  };
  auto stats = [&](CLI::App* s) {
    s->add_option("--level", c.level, "significance level (0.01, 0.05, 0.10)");
    s->add_option("--adf-spec", c.adf_spec, "ADF deterministic terms: none | c | ct");
    s->add_option("--max-lags", c.max_lags, "ADF lag cap or auto");
  };

  auto* extract = app.add_subcommand("extract", "classify tweets into daily sentiment counts");
  common(extract);
  sentiment_inputs(extract);

  auto* derive = app.add_subcommand("derive", "derived market indicators");
  common(derive);
  derive->add_option("--market", c.markets, "market CSV");
  derive->add_option("--horizon", c.horizon, "delta price horizon in days");

  auto* align_cmd = app.add_subcommand("align", "join sentiment and market series into a panel");
  common(align_cmd);
  sentiment_inputs(align_cmd);
  panel_build(align_cmd);

  auto* correlate = app.add_subcommand("correlate", "lagged correlations with significance");
  common(correlate);
  correlate->add_option("--panel", c.panel, "panel CSV");
  correlate->add_option("--x", c.x, "signal column(s)")->delimiter(',');
  correlate->add_option("--y", c.y, "target column(s)")->delimiter(',');
  correlate->add_option("--shifts", c.shifts, "shift range such as -2..+2, or a list");
  correlate->add_option("--ma", c.ma_window, "centered moving-average window for x");
  correlate->add_option("--format", c.format, "csv | json | table");

  auto* adf = app.add_subcommand("adf", "augmented Dickey-Fuller unit-root tests");
  common(adf);
  adf->add_option("--panel", c.panel, "panel CSV");
  adf->add_option("--columns", c.columns, "columns to test (default: all)")->delimiter(',');
  stats(adf);
  adf->add_option("--format", c.format, "csv | json | table");

  auto* granger = app.add_subcommand("granger", "Granger causality matrix in both directions");
  common(granger);
  granger->add_option("--panel", c.panel, "panel CSV");
  granger->add_option("--sentiment", c.sentiment_cols, "sentiment columns")->delimiter(',');
  granger->add_option("--market", c.market_cols, "market columns")->delimiter(',');
  granger->add_option("--lags", c.lags, "lag orders")->delimiter(',');
  stats(granger);
  granger->add_flag("--no-stationarity-gate", c.no_stationarity_gate, "run even if a unit root is not rejected");
  granger->add_option("--format", c.format, "csv | json | table");

  auto* synth = app.add_subcommand("synth", "synthetic tweets and market with known causal structure");
  common(synth);
  synth->add_option("--seed", c.seed, "generator seed");
  synth->add_option("--days", c.days, "number of tweet days");
  synth->add_option("--tweets-out", c.tweets_out, "write tweets JSONL here");
  synth->add_option("--market-out", c.market_out, "write market CSV here");
  synth->add_option("--panel-out", c.panel_out, "write panel CSV here instead of stdout");

  auto* report = app.add_subcommand("report", "full pipeline to a markdown report");
  common(report);
  sentiment_inputs(report);
  panel_build(report);
  report->add_option("--ma", c.ma_window, "centered moving-average window");
  report->add_option("--shifts", c.shifts, "shift range such as -2..+2, or a list");
  report->add_option("--lags", c.lags, "Granger lag orders")->delimiter(',');
  stats(report);
  report->add_flag("--no-stationarity-gate", c.no_stationarity_gate, "run even if a unit root is not rejected");
  report->add_option("--plot-csv", c.plot_csv, "write long-format plot data here");
  report->add_option("--out", c.out, "write the report here instead of stdout");

  // "--shifts -2..+2" would otherwise be read as a short flag; glue such values to their option.
  std::vector<std::string> argv;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if ((args[i] == "--shifts" || args[i] == "--lags") && i + 1 < args.size() && args[i + 1].starts_with("-") &&
        args[i + 1].size() > 1 && (std::isdigit(static_cast<unsigned char>(args[i + 1][1])) != 0)) {
      argv.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      argv.push_back(args[i]);
    }
  }

  try {
    for (std::size_t i = 0; i < argv.size(); ++i) {
      CLI::App* sub = nullptr;
      for (auto* s : app.get_subcommands({})) {
        if (s->get_name() == argv[i]) sub = s;
      }
      if (!sub) continue;
      for (std::size_t k = i + 1; k < argv.size(); ++k) {
        std::string path;
        if (argv[k] == "--config" && k + 1 < argv.size()) path = argv[k + 1];
        if (argv[k].starts_with("--config=")) path = argv[k].substr(9);
        if (!path.empty()) detail::apply_config(*sub, path);
      }
      break;
    }
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::string result;
    if (extract->parsed()) result = detail::cmd_extract(c);
    if (derive->parsed()) result = detail::cmd_derive(c);
    if (align_cmd->parsed()) result = detail::cmd_align(c);
    if (correlate->parsed()) result = detail::cmd_correlate(c);
    if (adf->parsed()) result = detail::cmd_adf(c);
    if (granger->parsed()) result = detail::cmd_granger(c);
    if (synth->parsed()) result = detail::cmd_synth(c);
    if (report->parsed()) {
      std::string plot;
      result = detail::cmd_report(c, c.plot_csv.empty() ? nullptr : &plot);
      if (!c.plot_csv.empty()) detail::write_file(c.plot_csv, plot);
      if (!c.out.empty()) {
        detail::write_file(c.out, result);
        result.clear();
      }
    }
    out << result;
    out.flush();
    return 0;
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace moodmkt
