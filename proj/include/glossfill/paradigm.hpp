#pragma once

// Sparse inflection tables built from parsed IGT, and their on-disk TSV form.
//
// A table row is `slot \t gloss \t segmentation \t surface \t stem_tag`, e.g.
//
//   ROOT-TR-3.II	find-TR-3.II	'wa-i-t	'wayit	'wa-TR-3.II
//
// Empty cells render their four value columns as `_`. Machine-predicted
// cells have no segmentation and render it as `?`.

#include "glossfill/error.hpp"
#include "glossfill/igt.hpp"
#include "glossfill/lexicon.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace glossfill {

class TableError : public Error {
public:
  TableError(std::string code, const std::string& detail, int line = -1);
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Inflectional labels around a single ROOT placeholder, rendered joined by
/// `-` (ROOT-TR-3.II). Ordered by rendered name.
class SlotTemplate {
public:
  static constexpr std::string_view kRoot = "ROOT";

  SlotTemplate() : SlotTemplate(std::vector<std::string>{std::string(kRoot)}) {}
  /// Throws TableError(UnknownSlot) unless exactly one label is ROOT.
  explicit SlotTemplate(std::vector<std::string> labels);
  static SlotTemplate parse(std::string_view name);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& name() const noexcept { return name_; }

  /// Labels joined by `-` with ROOT replaced by `root`.
  std::string fill_root(std::string_view root) const;

  bool operator==(const SlotTemplate& o) const { return name_ == o.name_; }
  std::strong_ordering operator<=>(const SlotTemplate& o) const { return name_ <=> o.name_; }

private:
  std::vector<std::string> labels_;
  std::string name_;
};

enum class Provenance : std::uint8_t { Attested, Predicted };
std::string_view to_string(Provenance p);

struct Cell {
  std::string gloss;
  std::string segmentation; ///< empty for predicted cells
  std::string surface;
  std::string stem_tag;
  Provenance provenance = Provenance::Attested;

  bool operator==(const Cell&) const = default;
};

using TableKey = std::pair<std::string, std::string>; ///< (lexeme_id, variant_form)

struct ParadigmTable {
  std::string lexeme_id;
  std::string variant_form;
  VariantKind variant_kind;
  std::map<SlotTemplate, Cell> cells; ///< absent slot == empty cell

  TableKey key() const { return {lexeme_id, variant_form}; }
  std::size_t attested_count() const;
  /// Lexical gloss of the stem, read off the first cell in slot order.
  std::string stem_gloss() const;

  bool operator==(const ParadigmTable&) const = default;
};

using TableSet = std::map<TableKey, ParadigmTable>;

struct SlotInventory {
  std::vector<SlotTemplate> slots;
  std::vector<std::size_t> counts; ///< tables attesting each slot

  bool contains(const SlotTemplate& s) const;
  bool operator==(const SlotInventory&) const = default;
};

struct BuildOptions {
  bool include_covert = false;    ///< keep covert inflectional labels in slot names
  bool fold_initial_case = true;  ///< undo sentence-initial capitalisation
};

struct CellCandidate {
  std::string lexeme_id;
  std::string variant_form;
  VariantKind variant_kind;
  SlotTemplate slot;
  Cell cell;
  std::vector<std::string> covert_labels; ///< covert units left out of the slot
};

enum class SkipReason : std::uint8_t { NoStem, SurfaceRecoveryFailed, Codeswitch };
std::string_view to_string(SkipReason r);

struct Skip {
  SkipReason reason;
  std::string detail;
};

using AnalysisResult = std::variant<CellCandidate, Skip>;

AnalysisResult analyze_word(const AnalyzedWord& w, const MorphClassLexicon& morph_lex, const VariantRegistry& variants,
                            const BuildOptions& opts = {}, ReviewLog* review = nullptr);

struct SlotConflict {
  TableKey table;
  SlotTemplate slot;
  std::map<std::string, std::size_t> surfaces; ///< surface -> token count
  std::string kept;
};

struct BuildReport {
  std::size_t words = 0;
  std::size_t candidates = 0;
  std::map<SkipReason, std::size_t> skips;
  std::vector<std::pair<std::string, Skip>> skipped; ///< (source_id, skip)
  std::size_t duplicates_collapsed = 0;
  std::size_t attested_cells = 0;
  std::vector<SlotConflict> conflicts;
  std::map<DefaultedClass, std::size_t> defaulted;

  std::string summary() const;
};

struct BuildResult {
  TableSet tables;
  BuildReport report;
};

BuildResult build_tables(const std::vector<IgtEntry>& corpus, const MorphClassLexicon& morph_lex,
                         const VariantRegistry& variants, const BuildOptions& opts = {});

SlotInventory compute_inventory(const TableSet& tables);

std::string write_table_tsv(const ParadigmTable& t, const SlotInventory& inv);

/// Parse one table file. Table identity is not part of the row format and is
/// passed in. Throws TableError(ColumnCountError | UnknownSlot | MalformedCell
/// | DuplicateSlot); slots outside `inv` are UnknownSlot when `inv` is given.
ParadigmTable read_table_tsv(std::string_view tsv, std::string lexeme_id, std::string variant_form,
                             VariantKind kind = {}, const SlotInventory* inv = nullptr);

/// `<lexeme_id>__<variant_form>.tsv` with `/` mapped to `_`.
std::string table_filename(const TableKey& key);

/// A directory of tables: one TSV per table plus `index.tsv` (identity and
/// variant kind of each file) and `inventory.tsv` (slot order and counts).
void write_table_dir(const std::string& dir, const TableSet& tables, const SlotInventory& inv);
std::pair<TableSet, SlotInventory> read_table_dir(const std::string& dir);

} // namespace glossfill
