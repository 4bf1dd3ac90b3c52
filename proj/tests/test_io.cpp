#include <simplexd/io.hpp>
#include <simplexd/simplexd.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace simplexd;

namespace {

TEST(Numbers, ExactFormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -96.04000000000001, 1e-300, 3000.2}) EXPECT_EQ(std::stod(io::exact(x)), x);
  EXPECT_EQ(io::readable(1.0 / 3.0), "0.333333");
}

TEST(Json, TensorShapes) {
  EXPECT_EQ(io::to_json(DerivTensor::from_vector(Vector{{1.0, 2.0}})).dump(), "[1.0,2.0]");
  EXPECT_EQ(io::to_json(DerivTensor::from_matrix(Matrix{{1, 2}, {3, 4}})).dump(), "[[1.0,2.0],[3.0,4.0]]");
  const io::json t = io::to_json(DerivTensor({2, 1, 1}));
  EXPECT_EQ(t["dims"], io::json::parse("[2,1,1]"));
}

TEST(Json, ValuesRoundTrip) {
  const double x = 0.1 + 0.2;
  const io::json j = io::to_json(Vector{{x}});
  EXPECT_EQ(io::json::parse(j.dump())[0].get<double>(), x);
}

TEST(Csv, PlanHasOneRowPerPoint) {
  const SamplePlan plan = enumerate({SchemeKind::full_gcsh_minimal, 2, 1.0}, Vector::Zero(2));
  const std::string csv = io::plan_csv(plan);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,x1,x2,provenance");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7);
}

TEST(Table, ParsesAndFillsCache) {
  std::istringstream in("x1,x2,f,comment\n0,0,1.5,a\n0.1,0,2.5,b\n\n");
  const io::EvaluationTable t = io::parse_table(in);
  EXPECT_EQ(t.n, 2);
  ASSERT_EQ(t.rows.size(), 2u);
  EvalCache cache;
  t.fill(cache);
  EXPECT_DOUBLE_EQ(cache.at(Vector{{0.1, 0.0}}), 2.5);
}

TEST(Table, ReportsMalformedInput) {
  std::istringstream no_f("x1,x2\n1,2\n");
  EXPECT_THROW(io::parse_table(no_f), std::runtime_error);
  std::istringstream gap("x1,x3,f\n1,2,3\n");
  EXPECT_THROW(io::parse_table(gap), std::runtime_error);
  std::istringstream bad("x1,f\n1,abc\n");
  EXPECT_THROW(io::parse_table(bad), std::runtime_error);
  std::istringstream short_row("x1,x2,f\n1,2\n");
  EXPECT_THROW(io::parse_table(short_row), std::runtime_error);
  std::istringstream empty("");
  EXPECT_THROW(io::parse_table(empty), std::runtime_error);
}

TEST(Report, CsvAndJsonAgree) {
  SweepReport r;
  r.scheme = "gsh-minimal";
  r.function = "f";
  r.rows.push_back({0.1, 0.1, 0.02, 0.5, 10, true});
  r.rows.push_back({0.05, 0.05, 0.01, std::nullopt, 10, true});
  r.slope = 1.0;
  const io::json j = io::to_json(r);
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j["rows"][1]["bound"].is_null());
  EXPECT_EQ(j["slope"].get<double>(), 1.0);
  EXPECT_EQ(io::report_csv(r), "h,delta_u,error,bound,evaluations,pass\n0.10000000000000001,0.10000000000000001,"
                               "0.02,0.5,10,true\n0.050000000000000003,0.050000000000000003,0.01,,10,true\n");
}

}  // namespace
