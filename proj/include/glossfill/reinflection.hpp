#pragma once

// Filling empty paradigm cells by pairwise reinflection.
//
// Every ordered pair of attested forms in a table is a training example
// (source form, source slot, target slot) -> target form. The built-in
// transducer is a counted string-rewrite model; any other transducer can be
// plugged in through `Reinflector`. Missing cells are predicted once from
// each attested cell of their table and the most frequent prediction wins.

#include "glossfill/error.hpp"
#include "glossfill/paradigm.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace glossfill {

class ReinflectionError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Splits

struct SplitSpec {
  std::uint64_t seed = 13;
  std::array<double, 3> ratios{0.668, 0.235, 0.097}; ///< train, dev, test

  /// Throws ReinflectionError(InvalidSplitSpec).
  void validate() const;
};

struct CellRef {
  TableKey table;
  SlotTemplate slot;
  auto operator<=>(const CellRef&) const = default;
  bool operator==(const CellRef&) const = default;
};

struct SplitResult {
  std::vector<CellRef> train, dev, test; ///< each sorted
  bool operator==(const SplitResult&) const = default;
};

/// Target sizes for `total` items by largest remainder; remainder ties go to
/// the earlier split.
std::array<std::size_t, 3> split_sizes(std::size_t total, const std::array<double, 3>& ratios);

/// Cell-level split of attested cells. Every table keeps at least one train
/// cell, so single-cell tables go wholly to train. Determined by the seed.
SplitResult split_cells(const TableSet& tables, const SplitSpec& spec);

/// Keep only the listed cells.
TableSet restrict_to(const TableSet& tables, const std::vector<CellRef>& cells);

std::string write_split_tsv(const SplitResult& split, const SplitSpec& spec, const TableSet& tables);
std::pair<SplitSpec, SplitResult> read_split_tsv(std::string_view tsv);

// ---------------------------------------------------------------------------
// Pairs

struct ReinflectionPair {
  TableKey table;
  SlotTemplate src_slot, tgt_slot;
  std::string src_form, tgt_form;
  bool operator==(const ReinflectionPair&) const = default;
};

/// k*(k-1) ordered pairs per table of k attested cells, in table then slot
/// order. Tables never pair across variants.
std::vector<ReinflectionPair> generate_pairs(const TableSet& train_tables);

std::string write_pairs_tsv(const std::vector<ReinflectionPair>& pairs, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Transducers

struct Prediction {
  std::string form;
  std::size_t support = 0; ///< summed counts of the rules applied; 0 = copied
  bool operator==(const Prediction&) const = default;
};

class Reinflector {
public:
  virtual ~Reinflector() = default;
  virtual Prediction reinflect(std::string_view form, const SlotTemplate& src, const SlotTemplate& tgt) const = 0;
};

enum class RuleSide : std::uint8_t { Prefix, Suffix, Whole };

/// Counted prefix/suffix/whole-string rewrites keyed by (source, target) slot.
/// Immutable once trained; safe for concurrent readers.
class RuleModel final : public Reinflector {
public:
  using SlotPair = std::pair<SlotTemplate, SlotTemplate>;
  using Rewrites = std::map<std::u32string, std::map<std::u32string, std::size_t>>; ///< src -> tgt -> count

  void add(RuleSide side, const SlotPair& key, std::u32string src, std::u32string tgt, std::size_t count = 1);
  void learn(const ReinflectionPair& p);
  void merge(const RuleModel& other);

  /// Whole-string rule on an exact match; otherwise the best suffix rewrite
  /// followed by the best prefix rewrite; otherwise a copy with support 0.
  /// Best = longest source side, then highest count, then smallest target.
  Prediction reinflect(std::string_view form, const SlotTemplate& src, const SlotTemplate& tgt) const override;

  const std::map<SlotPair, Rewrites>& rules(RuleSide side) const;
  std::size_t rule_count() const;

  /// Line-based TSV: side (P|S|W), src_slot, tgt_slot, src_side, tgt_side,
  /// count; sorted by all columns.
  std::string to_tsv() const;
  static RuleModel from_tsv(std::string_view tsv);

  bool operator==(const RuleModel& o) const {
    return prefix_ == o.prefix_ && suffix_ == o.suffix_ && whole_ == o.whole_;
  }

private:
  std::map<SlotPair, Rewrites> prefix_, suffix_, whole_;
};

/// Longest common contiguous substring; ties go to the leftmost position in
/// `a`, then in `b`. Returns (start in a, start in b, length).
std::array<std::size_t, 3> longest_common_substring(std::u32string_view a, std::u32string_view b);

/// Throws ReinflectionError(EmptyTrainingSet). Counting is split over
/// `threads` workers and merged; the result does not depend on `threads`.
RuleModel train_rules(const std::vector<ReinflectionPair>& pairs, unsigned threads = 1);

Prediction apply_rules(const RuleModel& model, std::string_view form, const SlotTemplate& src, const SlotTemplate& tgt);

// ---------------------------------------------------------------------------
// Filling

struct Vote {
  SlotTemplate src_slot;
  std::string prediction;
  std::size_t support;
};

struct FillResult {
  std::string prediction;
  std::vector<Vote> votes;
};

/// One prediction per attested cell of `table`; the most frequent string
/// wins, then the highest summed support, then the smallest string.
/// Throws ReinflectionError(NoSourceCells | SlotNotEmpty).
FillResult fill_cell(const Reinflector& model, const ParadigmTable& table, const SlotTemplate& tgt_slot);

/// Predict every empty inventory slot of every table. Attested cells are
/// untouched; predicted cells carry Provenance::Predicted.
TableSet fill_tables(const Reinflector& model, const TableSet& tables, const SlotInventory& inv);

// ---------------------------------------------------------------------------
// Neural transducer plug-in support

/// Encoder-decoder settings for an external transformer toolkit.
struct NeuralConfig {
  int layers = 4; ///< encoder and decoder each
  int heads = 4;
  int embedding = 256;
  int hidden = 512;
  std::string optimizer = "adam";
  double learning_rate = 0.001;
  int batch_size = 400;
  int max_updates = 20000;

  /// Throws ReinflectionError(InvalidNeuralConfig) unless all values are positive.
  void validate() const;
  /// Command-line flags for fairseq-train.
  std::vector<std::string> fairseq_args() const;
};

inline constexpr std::string_view kSeparatorToken = "<S>";

struct NeuralExample {
  std::vector<std::string> input;  ///< source characters, <S>, source labels, <S>, target labels
  std::vector<std::string> output; ///< target characters
  bool operator==(const NeuralExample&) const = default;
};

NeuralExample encode_neural_pair(const ReinflectionPair& p);

struct DecodedPair {
  std::string src_form, tgt_form;
  SlotTemplate src_slot, tgt_slot;
  bool operator==(const DecodedPair&) const = default;
};

/// Throws ReinflectionError(MalformedExample) if the separators are missing.
DecodedPair decode_neural_pair(const NeuralExample& e);

/// Parallel source/target files, one space-separated example per line.
std::pair<std::string, std::string> write_neural_dataset(const std::vector<ReinflectionPair>& pairs);

} // namespace glossfill
