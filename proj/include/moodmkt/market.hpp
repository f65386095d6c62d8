#pragma once

// Daily OHLCV rows and the derived indicators.
//
// Sign convention: intraday_return = open - close, i.e. positive when the price fell during the
// day. This is deliberately the reverse of the usual close - open.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moodmkt/core.hpp"

namespace moodmkt {

struct DailyMarket {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;
  double volume_btc = 0;
  double volume_ccy = 0;

  bool operator==(const DailyMarket&) const = default;
};

struct DerivedMarket {
  Date date;
  double intraday_spread = 0;
  double intraday_return = 0;
  std::optional<double> delta_price;  // close(date + horizon) - close(date)
};

inline constexpr int kDefaultDeltaHorizon = 2;
inline constexpr std::string_view kMarketHeader = "date,open,high,low,close,volume_btc,volume_ccy";

/// Parses the market CSV. Output is sorted by date; gaps are allowed, duplicates are not.
inline std::vector<DailyMarket> parse_market_csv(std::string_view content) {
  auto lines = detail::split_lines(content);
  std::size_t h = 0;
  while (h < lines.size() && detail::blank(lines[h])) ++h;
  if (h == lines.size()) throw Error("market file: missing header");
  auto header = split_delimited(lines[h], ',');
  auto column = [&](std::string_view name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (detail::trim(header[c]) == name) return c;
    }
    throw Error("market file header lacks column '" + std::string(name) + "'");
  };
  const std::size_t c_date = column("date"), c_open = column("open"), c_high = column("high"),
                    c_low = column("low"), c_close = column("close"), c_vb = column("volume_btc"),
                    c_vc = column("volume_ccy");

  std::vector<DailyMarket> rows;
  std::size_t row_index = 0;
  for (std::size_t i = h + 1; i < lines.size(); ++i) {
    if (detail::blank(lines[i])) continue;
    ++row_index;
    auto f = split_delimited(lines[i], ',');
    const std::string where = "market file row " + std::to_string(row_index);
    if (f.size() != header.size()) throw Error(where + ": expected " + std::to_string(header.size()) + " fields");
    auto date = parse_iso_date(detail::trim(f[c_date]));
    if (!date) throw Error(where + ": invalid date '" + f[c_date] + "'");
    auto num = [&](std::size_t c) {
      auto v = parse_number(f[c]);
      if (!v) throw Error(where + ": malformed number '" + f[c] + "' in column " + header[c]);
      return *v;
    };
    DailyMarket m{*date, num(c_open), num(c_high), num(c_low), num(c_close), num(c_vb), num(c_vc)};
    if (m.open <= 0 || m.high <= 0 || m.low <= 0 || m.close <= 0)
      throw Error(where + ": non-positive price at " + m.date.iso());
    if (m.volume_btc < 0 || m.volume_ccy < 0) throw Error(where + ": negative volume at " + m.date.iso());
    if (m.high < m.low) throw Error("inverted range at " + m.date.iso());
    rows.push_back(m);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date) throw Error("duplicate date " + rows[i].date.iso());
  }
  return rows;
}

inline std::string write_market_csv(const std::vector<DailyMarket>& rows) {
  std::string out(kMarketHeader);
  out += '\n';
  for (const auto& m : rows) {
    out += m.date.iso();
    for (double v : {m.open, m.high, m.low, m.close, m.volume_btc, m.volume_ccy}) out += ',' + format_number(v);
    out += '\n';
  }
  return out;
}

/// Spread, return and the `horizon`-day close delta. The delta is looked up by calendar date, so
/// it is undefined when the target day is missing or past the end of the series.
inline std::vector<DerivedMarket> derive_indicators(const std::vector<DailyMarket>& series,
                                                    int horizon = kDefaultDeltaHorizon) {
  if (series.empty()) throw Error("market series is empty");
  if (horizon < 1) throw Error("delta horizon must be positive");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i - 1].date < series[i].date)) throw Error("market series must be sorted by date");
  }
  std::vector<DerivedMarket> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& m = series[i];
    DerivedMarket d{m.date, m.high - m.low, m.open - m.close, std::nullopt};
    const Date target = m.date + horizon;
    for (std::size_t j = i + 1; j < series.size() && series[j].date <= target; ++j) {
      if (series[j].date == target) d.delta_price = series[j].close - m.close;
    }
    out.push_back(d);
  }
  return out;
}

inline std::string delta_column_name(int horizon = kDefaultDeltaHorizon) {
  return "delta_price_" + std::to_string(horizon) + "d";
}

inline std::string write_derived_csv(const std::vector<DailyMarket>& series,
                                     const std::vector<DerivedMarket>& derived,
                                     int horizon = kDefaultDeltaHorizon) {
  std::string out(kMarketHeader);
  out += ",intraday_spread,intraday_return," + delta_column_name(horizon) + "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& m = series[i];
    const auto& d = derived[i];
    out += m.date.iso();
    for (double v : {m.open, m.high, m.low, m.close, m.volume_btc, m.volume_ccy, d.intraday_spread,
                     d.intraday_return})
      out += ',' + format_number(v);
    out += ',';
    if (d.delta_price) out += format_number(*d.delta_price);
    out += '\n';
  }
  return out;
}

}  // namespace moodmkt
