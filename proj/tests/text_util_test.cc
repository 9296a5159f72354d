#include "semtensor/text_util.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "semtensor/random.h"

namespace semtensor::text {
namespace {

TEST(TextUtil, SplitKeepsEmptyFields) {
  const auto f = Split("a\t\tb\t", '\t');
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "");
  EXPECT_EQ(f[2], "b");
  EXPECT_EQ(f[3], "");
}

TEST(TextUtil, LabelEscapingRoundTrips) {
  for (std::string label : {"plain", "two words", "tab\there", "back\\slash", "", "\n\r"}) {
    const std::string escaped = EscapeLabel(label);
    EXPECT_EQ(escaped.find_first_of(" \t\n\r"), std::string::npos) << escaped;
    EXPECT_FALSE(escaped.empty());
    EXPECT_EQ(UnescapeLabel(escaped), label);
  }
}

TEST(TextUtil, FormatDoubleRoundTripsExactly) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.Normal() * std::pow(10.0, rng.Uniform(-20, 20));
    double y;
    ASSERT_TRUE(ParseDouble(FormatDouble(x), &y));
    EXPECT_EQ(x, y);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(3.0), "3");
}

TEST(TextUtil, FormatFixedHasNoNegativeZero) {
  EXPECT_EQ(FormatFixed(-0.00001, 3), "0.000");
  EXPECT_EQ(FormatFixed(10.0, 1), "10.0");
  EXPECT_EQ(FormatFixed(-2.5, 2), "-2.50");
}

TEST(TextUtil, StrictParsers) {
  std::int64_t i;
  double d;
  bool b;
  EXPECT_TRUE(ParseInt("+12", &i));
  EXPECT_EQ(i, 12);
  EXPECT_FALSE(ParseInt("12x", &i));
  EXPECT_FALSE(ParseInt("", &i));
  EXPECT_TRUE(ParseDouble("-1.5e3", &d));
  EXPECT_EQ(d, -1500.0);
  EXPECT_TRUE(ParseDouble(" 1.5 ", &d));
  EXPECT_FALSE(ParseDouble("1.5 x", &d));
  EXPECT_FALSE(ParseDouble("1.5.2", &d));
  EXPECT_TRUE(ParseBool("true", &b));
  EXPECT_TRUE(b);
  EXPECT_TRUE(ParseBool("false", &b));
  EXPECT_FALSE(b);
  EXPECT_FALSE(ParseBool("yes please", &b));
}

TEST(TextUtil, Fnv1aKnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Hex64(0xabcULL), "0000000000000abc");
}

}  // namespace
}  // namespace semtensor::text
