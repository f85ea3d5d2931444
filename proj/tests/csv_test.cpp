#include "d2means/csv.hpp"

#include <string>

#include <gtest/gtest.h>

#include "d2means/errors.hpp"

namespace {

using namespace d2means;

TEST(ParseCsv, PlainNumericRows) {
  const Dataset data = parse_csv("0,0\n3,4\n");
  ASSERT_EQ(data.n(), 2u);
  ASSERT_EQ(data.dim(), 2u);
  EXPECT_DOUBLE_EQ(data.points[0][0], 0.0);
  EXPECT_DOUBLE_EQ(data.points[1][0], 3.0);
  EXPECT_DOUBLE_EQ(data.points[1][1], 4.0);
}

TEST(ParseCsv, MissingFinalNewlineAccepted) {
  const Dataset data = parse_csv("1,2\n3,4");
  EXPECT_EQ(data.n(), 2u);
}

TEST(ParseCsv, HeaderRowSkipped) {
  const Dataset data = parse_csv("x,y\n1,2\n");
  ASSERT_EQ(data.n(), 1u);
  EXPECT_DOUBLE_EQ(data.points[0][1], 2.0);
}

TEST(ParseCsv, NonNumericPastFirstLineRejected) {
  try {
    parse_csv("1,2\nx,y\n", "rows.csv");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("rows.csv:line 2"), std::string::npos);
  }
}

TEST(ParseCsv, ArityMismatchNamesLine) {
  try {
    parse_csv("1,2\n3\n");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseCsv, CrlfAndPaddingTolerated) {
  const Dataset data = parse_csv(" 1 , 2 \r\n\t3,4\r\n");
  ASSERT_EQ(data.n(), 2u);
  EXPECT_DOUBLE_EQ(data.points[0][0], 1.0);
  EXPECT_DOUBLE_EQ(data.points[1][0], 3.0);
}

TEST(ParseCsv, ScientificNotationAndNegatives) {
  const Dataset data = parse_csv("-1.5e2,0.25\n1e-3,-7\n");
  EXPECT_DOUBLE_EQ(data.points[0][0], -150.0);
  EXPECT_DOUBLE_EQ(data.points[1][0], 0.001);
  EXPECT_DOUBLE_EQ(data.points[1][1], -7.0);
}

TEST(ParseCsv, NonFiniteValuesRejected) {
  EXPECT_THROW(parse_csv("1,2\n3,inf\n"), parse_error);
  EXPECT_THROW(parse_csv("1,2\nnan,0\n"), parse_error);
}

TEST(ParseCsv, EmptyInputsRejected) {
  EXPECT_THROW(parse_csv(""), parse_error);
  EXPECT_THROW(parse_csv("x,y\n"), parse_error);  // header only, no data
  EXPECT_THROW(parse_csv("1,2\n\n3,4\n"), parse_error);  // blank interior row
}

TEST(ParseCsv, TrailingCommaRejected) {
  EXPECT_THROW(parse_csv("1,2,\n"), parse_error);
}

TEST(LoadDataset, MissingFileNamesPath) {
  try {
    load_dataset("/nonexistent/dir/points.csv");
    FAIL() << "expected parse_error";
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("points.csv"), std::string::npos);
  }
}

}  // namespace
