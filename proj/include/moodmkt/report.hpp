#pragma once

// Rendering of correlation grids, ADF summaries and Granger matrices as CSV, JSON and
// markdown tables laid out like the classic sentiment-vs-market tables.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodmkt/causality.hpp"
#include "moodmkt/correlation.hpp"
#include "moodmkt/panel.hpp"

namespace moodmkt {

struct CorrelationCell {
  std::string x;
  std::string y;
  int shift = 0;
  int ma_window = 1;
  std::optional<CorrelationResult> result;
  std::string error;
};

/// Correlates x (optionally centered-MA smoothed) with y shifted by `shift` days. Each cell trims
/// its own panel copy, so n varies with shift and window.
inline CorrelationCell correlate_cell(const AlignedPanel& panel, std::string_view x, std::string_view y, int shift,
                                      int ma_window) {
  CorrelationCell cell{std::string(x), std::string(y), shift, ma_window, std::nullopt, {}};
  panel.column(x);
  panel.column(y);
  try {
    AlignedPanel p = panel;
    std::string xn(x), yn(y);
    if (ma_window > 1) {
      auto t = moving_average(p, xn, ma_window);
      p = std::move(t.panel);
      xn = std::move(t.column);
    } else if (ma_window < 1 || ma_window % 2 == 0) {
      moving_average(p, xn, ma_window);
    }
    if (shift != 0) {
      auto t = moodmkt::shift(p, yn, shift);
      p = std::move(t.panel);
      yn = std::move(t.column);
    }
    cell.result = correlate(p.column(xn), p.column(yn));
  } catch (const Error& e) {
    if (std::string_view(e.what()).find("window must be") != std::string_view::npos) throw;
    cell.error = e.what();
  }
  return cell;
}

inline std::string shifted_label(std::string_view y, int shift) {
  if (shift == 0) return std::string(y);
  return (shift > 0 ? "+" : "") + std::to_string(shift) + "d_" + std::string(y);
}

inline std::string markdown_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

inline std::string format_correlation(const CorrelationCell& c) {
  if (!c.result) return "n/a";
  return format_coefficient(c.result->r) + std::string(to_string(c.result->stars));
}

inline constexpr std::string_view kStarFootnote = "`**` p < 0.01, `*` p < 0.05 (two-tailed)";
inline constexpr std::string_view kFStarFootnote = "`**` p < 0.01, `*` p < 0.05 (F test)";

/// Rows are x columns; one column per (y, shift) pair in the order given.
inline std::string correlation_markdown(const std::vector<CorrelationCell>& cells, const std::vector<std::string>& xs,
                                        const std::vector<std::pair<std::string, int>>& ys) {
  std::vector<std::string> header{""};
  for (const auto& [y, s] : ys) header.push_back(shifted_label(y, s));
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : xs) {
    std::vector<std::string> row{x};
    for (const auto& [y, s] : ys) {
      std::string cell = "n/a";
      for (const auto& c : cells) {
        if (c.x == x && c.y == y && c.shift == s) cell = format_correlation(c);
      }
      row.push_back(cell);
    }
    rows.push_back(std::move(row));
  }
  return markdown_table(header, rows);
}

inline std::string correlation_csv(const std::vector<CorrelationCell>& cells) {
  std::string out = "x,y,shift,ma_window,n,r,t_stat,p_value,stars\n";
  for (const auto& c : cells) {
    out += csv_escape(c.x) + ',' + csv_escape(c.y) + ',' + std::to_string(c.shift) + ',' + std::to_string(c.ma_window) + ',';
    if (c.result) {
      out += std::to_string(c.result->n) + ',' + format_number(c.result->r) + ',' + format_number(c.result->t_stat) +
             ',' + format_number(c.result->p_two_tailed) + ',' + std::string(to_string(c.result->stars));
    } else {
      out += ",,,,error";
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json correlation_json(const std::vector<CorrelationCell>& cells) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json j{{"x", c.x}, {"y", c.y}, {"shift", c.shift}, {"ma_window", c.ma_window}};
    if (c.result) {
      j["n"] = c.result->n;
      j["r"] = c.result->r;
      j["t_stat"] = std::isfinite(c.result->t_stat) ? nlohmann::ordered_json(c.result->t_stat) : nlohmann::ordered_json();
      j["p_value"] = c.result->p_two_tailed;
      j["stars"] = to_string(c.result->stars);
    } else {
      j["error"] = c.error;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

// ---------------------------------------------------------------------------------------------

inline std::string adf_csv(const std::vector<StationarityCheck>& checks) {
  std::string out = "column,t_stat,gamma_hat,lags_used,n_obs,deterministic,cv_1,cv_5,cv_10,level,reject_unit_root\n";
  for (const auto& c : checks) {
    out += csv_escape(c.column) + ',';
    if (c.adf) {
      const auto& a = *c.adf;
      out += format_number(a.t_stat) + ',' + format_number(a.gamma_hat) + ',' + std::to_string(a.lags_used) + ',' +
             std::to_string(a.n_obs) + ',' + std::string(to_string(a.deterministic)) + ',' +
             format_number(a.critical_values[0]) + ',' + format_number(a.critical_values[1]) + ',' +
             format_number(a.critical_values[2]) + ',' + format_number(a.level) + ',' +
             (a.reject_unit_root ? "true" : "false");
    } else {
      out += ",,,,,,,,,error";
    }
    out += '\n';
  }
  return out;
}

inline std::string adf_markdown(const std::vector<StationarityCheck>& checks) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : checks) {
    if (!c.adf) {
      rows.push_back({c.column, "error: " + c.error, "", "", ""});
      continue;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", c.adf->t_stat);
    char cv[32];
    std::snprintf(cv, sizeof cv, "%.3f", c.adf->critical_value());
    rows.push_back({c.column, buf, std::to_string(c.adf->lags_used), cv, c.adf->reject_unit_root ? "stationary" : "unit root"});
  }
  return markdown_table({"column", "ADF t", "lags", "critical value", "decision"}, rows);
}

inline nlohmann::ordered_json adf_json(const std::vector<StationarityCheck>& checks) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json j{{"column", c.column}};
    if (c.adf) {
      const auto& a = *c.adf;
      j["t_stat"] = a.t_stat;
      j["gamma_hat"] = a.gamma_hat;
      j["lags_used"] = a.lags_used;
      j["n_obs"] = a.n_obs;
      j["deterministic"] = to_string(a.deterministic);
      j["critical_values"] = {{"1%", a.critical_values[0]}, {"5%", a.critical_values[1]}, {"10%", a.critical_values[2]}};
      j["level"] = a.level;
      j["reject_unit_root"] = a.reject_unit_root;
    } else {
      j["error"] = c.error;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

// ---------------------------------------------------------------------------------------------

inline constexpr std::string_view kGrangerHeader = "cause,effect,lag,f_stat,p_value,stars,rss0,rss1,n_eff";

inline std::string granger_csv(const GrangerMatrix& m) {
  std::string out(kGrangerHeader);
  out += '\n';
  auto row = [&](const GrangerOutcome& o, const std::string& cause, const std::string& effect, int lag) {
    out += csv_escape(cause) + ',' + csv_escape(effect) + ',' + std::to_string(lag) + ',';
    if (o.result) {
      const auto& r = *o.result;
      out += format_number(r.f_stat) + ',' + format_number(r.p_value) + ',' + std::string(to_string(r.stars())) + ',' +
             format_number(r.rss_restricted) + ',' + format_number(r.rss_unrestricted) + ',' +
             std::to_string(r.n_effective);
    } else {
      out += ",,error,,,";
    }
    out += '\n';
  };
  for (const auto& c : m.cells) {
    row(c.twitter_to_bitcoin, c.sentiment, c.market, c.lag);
    row(c.bitcoin_to_twitter, c.market, c.sentiment, c.lag);
  }
  return out;
}

inline nlohmann::ordered_json granger_json(const GrangerMatrix& m) {
  auto outcome = [](const GrangerOutcome& o, const std::string& cause, const std::string& effect) {
    nlohmann::ordered_json j{{"cause", cause}, {"effect", effect}};
    if (o.result) {
      const auto& r = *o.result;
      j["f_stat"] = r.f_stat;
      j["p_value"] = r.p_value;
      j["stars"] = to_string(r.stars());
      j["rss0"] = r.rss_restricted;
      j["rss1"] = r.rss_unrestricted;
      j["n_eff"] = r.n_effective;
      j["df"] = {r.df_num, r.df_den};
    } else {
      j["error"] = o.error;
    }
    return j;
  };
  nlohmann::ordered_json j;
  j["level"] = m.level;
  j["stationarity_gate"] = m.gate_overridden ? "overridden" : "passed";
  j["stationarity"] = adf_json(m.stationarity);
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : m.cells) {
    cells.push_back({{"sentiment", c.sentiment},
                     {"market", c.market},
                     {"lag", c.lag},
                     {"twitter_to_bitcoin", outcome(c.twitter_to_bitcoin, c.sentiment, c.market)},
                     {"bitcoin_to_twitter", outcome(c.bitcoin_to_twitter, c.market, c.sentiment)}});
  }
  j["cells"] = std::move(cells);
  return j;
}

/// Sentiment rows grouped by lag, market columns, each cell "(p twitter->bitcoin) p bitcoin->twitter".
/// Cells significant at 0.01 get a footnote letter carrying the F statistic.
inline std::string granger_markdown(const GrangerMatrix& m) {
  std::vector<std::string> sentiments, markets;
  std::vector<int> lags;
  auto add_unique = [](auto& v, const auto& x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const auto& c : m.cells) {
    add_unique(sentiments, c.sentiment);
    add_unique(markets, c.market);
    add_unique(lags, c.lag);
  }

  std::vector<std::string> footnotes;
  std::optional<std::size_t> n_eff;
  auto fmt = [&](const GrangerOutcome& o) -> std::string {
    if (!o.result) return "err";
    if (!n_eff) n_eff = o.result->n_effective + static_cast<std::size_t>(o.result->lag);
    std::string s = format_coefficient(o.result->p_value) + std::string(to_string(o.result->stars()));
    if (o.result->stars() == Stars::two) {
      const char letter = static_cast<char>('a' + footnotes.size() % 26);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%c: F = %.2f (%s -> %s, lag %d)", letter, o.result->f_stat,
                    o.result->cause.c_str(), o.result->effect.c_str(), o.result->lag);
      footnotes.push_back(buf);
      s += std::string(" <sup>") + letter + "</sup>";
    }
    return s;
  };

  std::vector<std::string> header{""};
  header.insert(header.end(), markets.begin(), markets.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : sentiments) {
    std::vector<std::string> group{"**" + s + "**"};
    group.resize(header.size());
    rows.push_back(std::move(group));
    for (int lag : lags) {
      std::vector<std::string> row{"Lag = " + std::to_string(lag)};
      for (const auto& mk : markets) {
        std::string cell = "n/a";
        for (const auto& c : m.cells) {
          if (c.sentiment == s && c.market == mk && c.lag == lag) {
            const std::string fwd = fmt(c.twitter_to_bitcoin);
            cell = "(" + fwd + ") " + fmt(c.bitcoin_to_twitter);
          }
        }
        row.push_back(cell);
      }
      rows.push_back(std::move(row));
    }
  }
  std::string out = markdown_table(header, rows);
  out += "\n";
  if (n_eff) out += "n = " + std::to_string(*n_eff) + "\n\n";
  out += "Twitter -> Bitcoin (sentiment predicts market) in parentheses; Bitcoin -> Twitter (market predicts "
         "sentiment) without.\n\n";
  for (const auto& f : footnotes) out += f + "\n\n";
  out += std::string(kFStarFootnote) + "\n";
  return out;
}

}  // namespace moodmkt
