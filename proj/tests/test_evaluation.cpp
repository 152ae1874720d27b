#include "glossfill/evaluation.hpp"

#include <doctest.h>

#include <cmath>

using namespace glossfill;

namespace {

CellRef cell(std::string variant, int i) { return {{variant, variant}, SlotTemplate::parse("ROOT-S" + std::to_string(i))}; }

// n gold cells for `variant`, of which the first `correct` are predicted right.
void add_cells(CellForms& preds, CellForms& golds, const std::string& variant, int correct, int n) {
  for (int i = 0; i < n; ++i) {
    golds[cell(variant, i)] = "g" + std::to_string(i);
    preds[cell(variant, i)] = i < correct ? "g" + std::to_string(i) : "wrong";
  }
}

template <typename Fn> std::string error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

const VariantRegistry& dialects() {
  static const auto reg = parse_variants("e\tL\tCanonical\t\neast\tL\tDialect\tEast\nwest\tL\tDialect\tWest\no\tL\tOrthographic\t\n");
  return reg;
}

} // namespace

TEST_CASE("accuracy") {
  CellForms preds, golds;
  add_cells(preds, golds, "x", 108, 124);
  auto r = accuracy(preds, golds);
  CHECK(r.correct == 108);
  CHECK(r.total == 124);
  CHECK(std::abs(r.accuracy - 0.8709) < 1e-4);

  CellForms same = golds;
  CHECK(accuracy(same, golds).accuracy == 1.0);
  CHECK(error_code([] { accuracy({}, {}); }) == "DegenerateEvalSet");
  preds.erase(cell("x", 3));
  try {
    accuracy(preds, golds);
    FAIL("expected MissingPrediction");
  } catch (const EvalError& e) {
    CHECK(e.code() == "MissingPrediction");
    CHECK(std::string(e.what()).find("x/x/ROOT-S3") != std::string::npos);
  }
}

TEST_CASE("per-dialect groups") {
  CellForms preds, golds;
  add_cells(preds, golds, "east", 9, 10);
  add_cells(preds, golds, "west", 8, 10);
  auto groups = per_dialect_report(preds, golds, dialects());
  REQUIRE(groups.size() == 2);
  CHECK(groups.at("East") == GroupScore{9, 10});
  CHECK(groups.at("West").accuracy() == 0.8);
  CHECK(dialect_stddev(groups) == 0.05);

  CellForms p2, g2;
  add_cells(p2, g2, "e", 3, 4);
  add_cells(p2, g2, "o", 1, 4);
  add_cells(p2, g2, "unregistered", 2, 2);
  auto unmarked = per_dialect_report(p2, g2, dialects());
  REQUIRE(unmarked.size() == 1);
  CHECK(unmarked.at("unmarked") == GroupScore{6, 10});
}

TEST_CASE("standard deviation") {
  CHECK(dialect_stddev(std::map<std::string, GroupScore>{{"a", {1, 2}}}) == 0.0);
  CHECK(dialect_stddev(std::map<std::string, GroupScore>{{"a", {1, 1}}, {"b", {0, 1}}}) == 0.5);
  const std::vector<double> v{0.9, 0.8};
  CHECK(std::abs(dialect_stddev(v) - 0.05) < 1e-15);
  const std::vector<double> w{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(dialect_stddev(w) == 2.0);
  CHECK(error_code([] { dialect_stddev(std::map<std::string, GroupScore>{}); }) == "DegenerateEvalSet");
  CHECK(error_code([] { dialect_stddev(std::map<std::string, GroupScore>{{"a", {0, 0}}}); }) == "DegenerateEvalSet");
}

TEST_CASE("generalized entropy index") {
  for (int k = 1; k <= 9; ++k) {
    std::vector<double> b(10, 0.0);
    for (int i = 0; i < k; ++i) b[i] = 1.0;
    const double mu = k / 10.0;
    CAPTURE(k);
    CHECK(std::abs(generalized_entropy(b, 2.0) - (1 - mu) / (2 * mu)) < 1e-12);
  }
  const std::vector<double> equal{0.7, 0.7, 0.7};
  CHECK(std::abs(generalized_entropy(equal, 2.0)) < 1e-15);
  CHECK(std::abs(generalized_entropy(equal, 0.5)) < 1e-15);
  const std::vector<double> spread{1, 2, 3};
  CHECK(generalized_entropy(spread, 3.0) > 0.0);
  CHECK(error_code([] { generalized_entropy(std::vector<double>{0, 0}, 2.0); }) == "ZeroMeanBenefit");
  CHECK(error_code([] { generalized_entropy(std::vector<double>{1}, 1.0); }) == "InvalidAlpha");
  CHECK(error_code([] { generalized_entropy(std::vector<double>{1}, 0.0); }) == "InvalidAlpha");
  CHECK(error_code([] { generalized_entropy(std::vector<double>{}, 2.0); }) == "DegenerateEvalSet");
}

TEST_CASE("full report") {
  CellForms preds, golds;
  add_cells(preds, golds, "east", 9, 10);
  add_cells(preds, golds, "west", 8, 10);
  auto r = evaluate(preds, golds, dialects());
  CHECK(r.correct == 17);
  CHECK(r.total == 20);
  CHECK(r.dialect_stddev == 0.05);
  CHECK(std::abs(r.gei - (1 - 0.85) / (2 * 0.85)) < 1e-12);
  auto by_dialect = evaluate(preds, golds, dialects(), 2.0, BenefitMode::PerDialect);
  CHECK(by_dialect.gei > 0.0);
  CHECK(by_dialect.gei < r.gei);

  const auto text = r.to_text();
  CHECK(text.find("accuracy: 0.850000\n") != std::string::npos);
  CHECK(text.find("accuracy[East]: 0.900000\n") != std::string::npos);
  CHECK(text.find("dialect_stddev: 0.050000\n") != std::string::npos);
  CHECK(r.dialect_tsv() == "dialect\tcorrect\ttotal\taccuracy\nEast\t9\t10\t0.900000\nWest\t8\t10\t0.800000\n");

  auto perfect = evaluate(golds, golds, dialects());
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.gei == 0.0);
}

TEST_CASE("cell form files") {
  CellForms preds, golds;
  add_cells(preds, golds, "east", 2, 3);
  auto tsv = write_cell_forms(preds);
  CHECK(tsv.rfind("lexeme_id\tvariant_form\tslot\tform\n", 0) == 0);
  CHECK(read_cell_forms(tsv) == preds);
  CHECK(error_code([] { read_cell_forms("h\nx\tx\tROOT\n"); }) == "MalformedRow");
  CHECK(error_code([] { read_cell_forms("h\nx\tx\tROOT\ta\nx\tx\tROOT\tb\n"); }) == "MalformedRow");
}
