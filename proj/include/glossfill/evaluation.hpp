#pragma once

// Exact-match accuracy on held-out cells and dialect fairness measures:
// per-dialect accuracy, the population standard deviation across dialects,
// and the generalized entropy index over per-item benefits.

#include "glossfill/error.hpp"
#include "glossfill/lexicon.hpp"
#include "glossfill/reinflection.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace glossfill {

class EvalError : public Error {
public:
  using Error::Error;
};

using CellForms = std::map<CellRef, std::string>;

struct GroupScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
  bool operator==(const GroupScore&) const = default;
};

/// How benefits for the generalized entropy index are formed.
enum class BenefitMode : std::uint8_t {
  PerCell,    ///< 1 for each correct prediction, 0 otherwise
  PerDialect, ///< one benefit per dialect group: its accuracy
};

struct EvalReport {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
  std::map<std::string, GroupScore> per_dialect;
  double dialect_stddev = 0.0;
  double gei = 0.0;
  double alpha = 2.0;
  BenefitMode benefits = BenefitMode::PerCell;

  /// `key: value` lines.
  std::string to_text() const;
  /// `dialect \t correct \t total \t accuracy` rows with a header.
  std::string dialect_tsv() const;
};

/// Throws EvalError(DegenerateEvalSet) for an empty gold set and
/// EvalError(MissingPrediction) listing gold cells without a prediction.
EvalReport accuracy(const CellForms& predictions, const CellForms& golds);

/// Groups cells by the dialect of their table's variant form; canonical and
/// orthographic variants form the group "unmarked". Dialects absent from
/// `golds` are absent from the result.
std::map<std::string, GroupScore> per_dialect_report(const CellForms& predictions, const CellForms& golds,
                                                     const VariantRegistry& registry);

/// Population standard deviation of group accuracies, computed exactly from
/// the counts before the final square root.
double dialect_stddev(const std::map<std::string, GroupScore>& groups);
/// Population standard deviation of plain values.
double dialect_stddev(std::span<const double> accuracies);

/// GE_alpha = 1/(n a (a-1)) * sum((b_i/mu)^a - 1). Throws
/// EvalError(ZeroMeanBenefit | InvalidAlpha | DegenerateEvalSet).
double generalized_entropy(std::span<const double> benefits, double alpha = 2.0);

EvalReport evaluate(const CellForms& predictions, const CellForms& golds, const VariantRegistry& registry,
                    double alpha = 2.0, BenefitMode mode = BenefitMode::PerCell);

/// `lexeme_id \t variant_form \t slot \t form` rows after a header line.
std::string write_cell_forms(const CellForms& cells);
CellForms read_cell_forms(std::string_view tsv);

} // namespace glossfill
