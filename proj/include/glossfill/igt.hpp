#pragma once

// Interlinear glossed text in a Toolbox-style marker format:
//
//   \w Giigwis Maryhl gayt.
//   \m giikw-i[-t]=s Mary=hl gayt
//   \g buy-TR-3.II=PN Mary=CN hat
//   \f Mary bought a hat.
//
// Entries are separated by blank lines. Within a segmentation or gloss token
// `-` joins affixes, `=` clitics and `~` a reduplicant; `[...]` wraps a covert
// (phonologically null) unit and a leading `*` marks a code-switched unit.

#include "glossfill/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glossfill {

enum class Boundary : std::uint8_t { Stem, Affix, Clitic, Reduplicant };
enum class GlossKind : std::uint8_t { Lexical, Grammatical };

/// How a unit is written on one tier.
enum class TierMark : std::uint8_t {
  Plain,     ///< written normally
  Bracketed, ///< written inside `[...]`
  Absent,    ///< not written on this tier (bracketed on the other one)
};

struct Morpheme {
  std::string form;  ///< segmentation-tier spelling, possibly a template like CVC
  std::string gloss; ///< gloss label without brackets or `*`
  Boundary boundary = Boundary::Stem;
  GlossKind gloss_kind = GlossKind::Lexical;

  /// Separator written before this unit inside its token: 0 for the first
  /// unit, otherwise one of `-`, `=`, `~`.
  char joiner = 0;
  TierMark seg_mark = TierMark::Plain;
  TierMark gloss_mark = TierMark::Plain;
  bool seg_star = false;
  bool gloss_star = false;

  bool covert() const noexcept { return seg_mark != TierMark::Plain || gloss_mark != TierMark::Plain; }
  bool codeswitch() const noexcept { return seg_star || gloss_star; }

  bool operator==(const Morpheme&) const = default;
};

struct AnalyzedWord {
  std::string surface;
  std::vector<Morpheme> morphemes;

  /// Index of the stem: the first overt, non-reduplicant unit with a lexical
  /// gloss. Pure function words have none.
  std::optional<std::size_t> stem_index() const;

  bool operator==(const AnalyzedWord&) const = default;
};

struct IgtEntry {
  std::vector<std::string> words;
  std::vector<AnalyzedWord> analyses;
  std::string translation;
  std::string source_id;

  bool operator==(const IgtEntry&) const = default;
};

/// Parse failure. `entry` is the 0-based entry index and `line` the 1-based
/// line number; both are -1 when the failure came from `parse_word` alone.
class IgtError : public Error {
public:
  IgtError(std::string code, const std::string& detail, int entry = -1, int line = -1);

  int entry() const noexcept { return entry_; }
  int line() const noexcept { return line_; }
  /// Message without the entry/line prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  std::string detail_;
  int entry_;
  int line_;
};

GlossKind classify_gloss_label(std::string_view label);

/// Split one segmentation token and its gloss token into aligned morphemes.
/// Throws IgtError with code MorphemeCountMismatch, UnbalancedBrackets,
/// BoundaryMismatch or MalformedToken.
AnalyzedWord parse_word(std::string_view surface, std::string_view seg_token, std::string_view gloss_token);

/// Render the segmentation and gloss tokens of a word. Inverse of parse_word.
std::string render_segmentation(const AnalyzedWord& w);
std::string render_gloss(const AnalyzedWord& w);

/// Parse a whole document. Entry `i` gets source_id `<source_name>#<i>`.
/// Throws IgtError (TierMissing, TokenCountMismatch, UnexpectedLine, or any
/// parse_word code) tagged with entry index and line number.
std::vector<IgtEntry> parse_document(std::string_view text, std::string_view source_name = "");

std::string serialize_document(const std::vector<IgtEntry>& entries);

struct ValidationIssue {
  int entry;
  int line;
  std::string code;
  std::string detail;
};

/// Like parse_document but collects every entry-level failure instead of
/// stopping at the first one.
std::vector<ValidationIssue> validate_document(std::string_view text);

std::string_view to_string(Boundary b);
std::string_view to_string(GlossKind k);

} // namespace glossfill
