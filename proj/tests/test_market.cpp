#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "moodmkt/market.hpp"
#include "moodmkt/synth.hpp"

using namespace moodmkt;

namespace {

const std::string kThreeRows =
    "date,open,high,low,close,volume_btc,volume_ccy\n"
    "2014-01-01,100,110,98,105,10,1050\n"
    "2014-01-02,105,107,101,103,12.5,1287.5\n"
    "2014-01-03,103,104,99,100,8,800\n";

std::string message_of(const std::string& csv) {
  try {
    parse_market_csv(csv);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

DailyMarket flat(Date d, double close) { return DailyMarket{d, close, close, close, close, 1, close}; }

}  // namespace

TEST(ParseMarket, ThreeRows) {
  const auto rows = parse_market_csv(kThreeRows);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].date, Date(2014, 1, 1));
  EXPECT_EQ(rows[2].date, Date(2014, 1, 3));
  EXPECT_EQ(rows[1].volume_btc, 12.5);
  EXPECT_EQ(rows[1].volume_ccy, 1287.5);
}

TEST(ParseMarket, InvertedRange) {
  const auto msg = message_of(
      "date,open,high,low,close,volume_btc,volume_ccy\n2014-01-05,100,98,110,100,1,1\n");
  EXPECT_EQ(msg, "inverted range at 2014-01-05");
}

TEST(ParseMarket, MalformedNumberNamesRow) {
  const auto msg = message_of(
      "date,open,high,low,close,volume_btc,volume_ccy\n2014-01-01,1,2,1,1,1,1\n2014-01-02,1,2,x1,1,1,1\n");
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("x1"), std::string::npos) << msg;
}

TEST(ParseMarket, DuplicateDate) {
  const auto msg = message_of(
      "date,open,high,low,close,volume_btc,volume_ccy\n2014-01-01,1,2,1,1,1,1\n2014-01-01,1,2,1,1,1,1\n");
  EXPECT_NE(msg.find("duplicate date 2014-01-01"), std::string::npos) << msg;
}

TEST(ParseMarket, OtherErrors) {
  EXPECT_FALSE(message_of("").empty());
  EXPECT_FALSE(message_of("date,open,high,low,close\n").empty());
  EXPECT_FALSE(message_of("date,open,high,low,close,volume_btc,volume_ccy\n2014-01-01,0,2,1,1,1,1\n").empty());
  EXPECT_FALSE(message_of("date,open,high,low,close,volume_btc,volume_ccy\n2014-01-01,1,2,1,1,-1,1\n").empty());
  EXPECT_FALSE(message_of("date,open,high,low,close,volume_btc,volume_ccy\n2014-13-01,1,2,1,1,1,1\n").empty());
}

TEST(ParseMarket, ShuffledInputSorted) {
  const auto study = synthesize_study({.days = 30});
  auto shuffled = study.market;
  SplitMix64 rng(3);
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  ASSERT_NE(shuffled, study.market);
  const auto parsed = parse_market_csv(write_market_csv(shuffled));
  auto reference = shuffled;
  std::sort(reference.begin(), reference.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  EXPECT_EQ(parsed, reference);
}

TEST(ParseMarket, ColumnOrderFromHeader) {
  const auto rows = parse_market_csv("close,date,low,high,open,volume_ccy,volume_btc\n105,2014-01-01,98,110,100,1050,10\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].open, 100);
  EXPECT_EQ(rows[0].close, 105);
  EXPECT_EQ(rows[0].volume_btc, 10);
}

TEST(ParseMarket, RoundTrip) {
  const auto study = synthesize_study({.days = 15});
  const auto text = write_market_csv(study.market);
  EXPECT_EQ(parse_market_csv(text), study.market);
  EXPECT_EQ(write_market_csv(parse_market_csv(text)), text);
}

TEST(Derive, FlatDay) {
  const auto d = derive_indicators({flat(Date(2014, 1, 1), 100)});
  EXPECT_EQ(d[0].intraday_spread, 0);
  EXPECT_EQ(d[0].intraday_return, 0);
  EXPECT_FALSE(d[0].delta_price);
}

TEST(Derive, SpreadAndReturn) {
  const auto d = derive_indicators({DailyMarket{Date(2014, 1, 1), 105, 110, 98, 100, 1, 1}});
  EXPECT_EQ(d[0].intraday_spread, 12);
  EXPECT_EQ(d[0].intraday_return, 5);
}

TEST(Derive, DeltaPrice) {
  const auto d = derive_indicators({flat(Date(2014, 1, 1), 100), flat(Date(2014, 1, 2), 105), flat(Date(2014, 1, 3), 103)});
  ASSERT_TRUE(d[0].delta_price);
  EXPECT_EQ(*d[0].delta_price, 3);
  EXPECT_FALSE(d[1].delta_price);
  EXPECT_FALSE(d[2].delta_price);
}

TEST(Derive, DeltaUndefinedAcrossGap) {
  const auto d = derive_indicators({flat(Date(2014, 1, 1), 100), flat(Date(2014, 1, 2), 101), flat(Date(2014, 1, 4), 99),
                                    flat(Date(2014, 1, 5), 98)});
  EXPECT_FALSE(d[0].delta_price);
  ASSERT_TRUE(d[1].delta_price);
  EXPECT_EQ(*d[1].delta_price, -2);
}

TEST(Derive, CustomHorizon) {
  const auto d = derive_indicators({flat(Date(2014, 1, 1), 100), flat(Date(2014, 1, 2), 105)}, 1);
  ASSERT_TRUE(d[0].delta_price);
  EXPECT_EQ(*d[0].delta_price, 5);
  EXPECT_EQ(delta_column_name(1), "delta_price_1d");
  EXPECT_THROW(derive_indicators({flat(Date(2014, 1, 1), 100)}, 0), Error);
}

TEST(Derive, SpreadBoundsReturnWhenOpenCloseInsideRange) {
  const auto study = synthesize_study({.days = 60});
  const auto d = derive_indicators(study.market);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& m = study.market[i];
    EXPECT_GE(d[i].intraday_spread, 0);
    if (m.low <= std::min(m.open, m.close) && std::max(m.open, m.close) <= m.high) {
      EXPECT_GE(d[i].intraday_spread, std::fabs(d[i].intraday_return));
    }
  }
}

TEST(Derive, UnsortedRejected) {
  EXPECT_THROW(derive_indicators({flat(Date(2014, 1, 2), 1), flat(Date(2014, 1, 1), 1)}), Error);
  EXPECT_THROW(derive_indicators({}), Error);
}

TEST(Derive, CsvHasEmptyUndefinedDelta) {
  const auto rows = parse_market_csv(kThreeRows);
  const auto csv = write_derived_csv(rows, derive_indicators(rows));
  EXPECT_EQ(csv,
            "date,open,high,low,close,volume_btc,volume_ccy,intraday_spread,intraday_return,delta_price_2d\n"
            "2014-01-01,100,110,98,105,10,1050,12,-5,-5\n"
            "2014-01-02,105,107,101,103,12.5,1287.5,6,2,\n"
            "2014-01-03,103,104,99,100,8,800,5,3,\n");
}
