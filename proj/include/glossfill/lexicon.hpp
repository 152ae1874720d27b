#pragma once

// Expert-supplied classifications: which morpheme labels are inflectional
// and which are derivational, and which stem spellings are variants of the
// same lexeme.

#include "glossfill/error.hpp"
#include "glossfill/igt.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace glossfill {

enum class MorphClass : std::uint8_t { Inflectional, Derivational };

std::string_view to_string(MorphClass c);

class LexiconError : public Error {
public:
  LexiconError(std::string code, const std::string& detail, int line = -1);
  int line() const noexcept { return line_; }

private:
  int line_;
};

/// A classification the lexicon did not list and that fell back to the
/// default rule (grammatical label -> inflectional, lexical -> derivational).
struct DefaultedClass {
  std::string label;
  std::string form;
  MorphClass cls;
  bool operator<(const DefaultedClass& o) const {
    return std::tie(label, form, cls) < std::tie(o.label, o.form, o.cls);
  }
};

/// Collects defaulted classifications for linguist review. Thread-safe.
class ReviewLog {
public:
  void record(const DefaultedClass& d);
  std::map<DefaultedClass, std::size_t> snapshot() const;

private:
  mutable std::mutex mu_;
  std::map<DefaultedClass, std::size_t> counts_;
};

class MorphClassLexicon {
public:
  static constexpr std::string_view kAnyForm = "*";

  /// Throws LexiconError(DuplicateKey) when (label, form) is already present.
  void add(std::string label, std::string form, MorphClass cls, int line = -1);

  /// Exact (label, form) first, then (label, *).
  std::optional<MorphClass> lookup(std::string_view label, std::string_view form) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

private:
  std::map<std::pair<std::string, std::string>, MorphClass, std::less<>> entries_;
};

/// TSV with columns label, form-or-`*`, class. `#` lines are comments.
MorphClassLexicon parse_morph_classes(std::string_view tsv);
MorphClassLexicon load_morph_classes(const std::string& path);

/// Class of an affix or reduplicant. Unlisted labels default by gloss kind;
/// defaults are recorded in `review` when given.
MorphClass classify_morph(const MorphClassLexicon& lex, const Morpheme& m, ReviewLog* review = nullptr);

struct VariantKind {
  enum class Tag : std::uint8_t { Canonical, Orthographic, Dialect };
  Tag tag = Tag::Canonical;
  std::string dialect; ///< only for Dialect

  static VariantKind canonical() { return {}; }
  static VariantKind orthographic() { return {Tag::Orthographic, {}}; }
  static VariantKind of_dialect(std::string name) { return {Tag::Dialect, std::move(name)}; }

  /// Dialect name, or "unmarked" for canonical and orthographic variants.
  std::string group() const;
  std::string_view tag_name() const;

  bool operator==(const VariantKind&) const = default;
};

struct VariantEntry {
  std::string lexeme_id;
  VariantKind kind;
  bool operator==(const VariantEntry&) const = default;
};

class VariantRegistry {
public:
  /// Throws LexiconError(ConflictingLexeme | DuplicateForm).
  void add(std::string form, VariantEntry entry, int line = -1);

  /// Throws LexiconError(MissingCanonical) when a lexeme lacks a canonical form.
  void validate() const;

  /// Registered forms return their entry; anything else is its own canonical
  /// lexeme, keyed by form.
  VariantEntry resolve_lexeme(std::string_view stem_form) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, VariantEntry, std::less<>>& entries() const noexcept { return entries_; }

private:
  std::map<std::string, VariantEntry, std::less<>> entries_;
};

/// TSV with columns form, lexeme_id, kind (Canonical|Orthographic|Dialect),
/// dialect name (required for Dialect, empty otherwise).
VariantRegistry parse_variants(std::string_view tsv);
VariantRegistry load_variants(const std::string& path);

} // namespace glossfill
