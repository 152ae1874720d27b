#include "glossfill/lexicon.hpp"

#include "glossfill/text.hpp"

#include <set>

namespace glossfill {

LexiconError::LexiconError(std::string code, const std::string& detail, int line)
    : Error(std::move(code), (line >= 0 ? "line " + std::to_string(line) + ": " : std::string()) + detail), line_(line) {}

std::string_view to_string(MorphClass c) { return c == MorphClass::Inflectional ? "Inflectional" : "Derivational"; }

void ReviewLog::record(const DefaultedClass& d) {
  std::lock_guard lock(mu_);
  ++counts_[d];
}

std::map<DefaultedClass, std::size_t> ReviewLog::snapshot() const {
  std::lock_guard lock(mu_);
  return counts_;
}

void MorphClassLexicon::add(std::string label, std::string form, MorphClass cls, int line) {
  auto key = std::make_pair(std::move(label), std::move(form));
  if (entries_.contains(key))
    throw LexiconError("DuplicateKey", "duplicate entry for (" + key.first + ", " + key.second + ")", line);
  entries_.emplace(std::move(key), cls);
}

std::optional<MorphClass> MorphClassLexicon::lookup(std::string_view label, std::string_view form) const {
  if (auto it = entries_.find(std::make_pair(std::string(label), std::string(form))); it != entries_.end()) return it->second;
  if (auto it = entries_.find(std::make_pair(std::string(label), std::string(kAnyForm))); it != entries_.end())
    return it->second;
  return std::nullopt;
}

namespace {

// Yields (line number, fields) for every non-blank, non-comment row.
template <typename Fn> void for_each_row(std::string_view tsv, Fn&& fn) {
  int lineno = 0;
  for (const auto& raw : text::lines(tsv)) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim_ascii(line).empty() || line.front() == '#') continue;
    fn(lineno, text::split(line, '\t'));
  }
}

} // namespace

MorphClassLexicon parse_morph_classes(std::string_view tsv) {
  MorphClassLexicon lex;
  for_each_row(tsv, [&](int lineno, std::vector<std::string> f) {
    if (f.size() != 3 || f[0].empty() || f[1].empty())
      throw LexiconError("MalformedRow", "expected 3 columns: label, form-or-*, class", lineno);
    MorphClass cls;
    if (f[2] == "Inflectional")
      cls = MorphClass::Inflectional;
    else if (f[2] == "Derivational")
      cls = MorphClass::Derivational;
    else
      throw LexiconError("UnknownClassName", "unknown class '" + f[2] + "'", lineno);
    lex.add(std::move(f[0]), std::move(f[1]), cls, lineno);
  });
  return lex;
}

MorphClassLexicon load_morph_classes(const std::string& path) { return parse_morph_classes(text::read_file(path)); }

MorphClass classify_morph(const MorphClassLexicon& lex, const Morpheme& m, ReviewLog* review) {
  if (auto c = lex.lookup(m.gloss, m.form)) return *c;
  MorphClass c = m.gloss_kind == GlossKind::Grammatical ? MorphClass::Inflectional : MorphClass::Derivational;
  if (review) review->record({m.gloss, m.form, c});
  return c;
}

std::string VariantKind::group() const { return tag == Tag::Dialect ? dialect : "unmarked"; }

std::string_view VariantKind::tag_name() const {
  switch (tag) {
  case Tag::Canonical: return "Canonical";
  case Tag::Orthographic: return "Orthographic";
  case Tag::Dialect: return "Dialect";
  }
  return "?";
}

void VariantRegistry::add(std::string form, VariantEntry entry, int line) {
  if (auto it = entries_.find(form); it != entries_.end()) {
    if (it->second.lexeme_id != entry.lexeme_id)
      throw LexiconError("ConflictingLexeme",
                         "form '" + form + "' listed under '" + it->second.lexeme_id + "' and '" + entry.lexeme_id + "'", line);
    throw LexiconError("DuplicateForm", "form '" + form + "' listed twice", line);
  }
  entries_.emplace(std::move(form), std::move(entry));
}

void VariantRegistry::validate() const {
  std::set<std::string> lexemes, canonical;
  for (const auto& [form, e] : entries_) {
    lexemes.insert(e.lexeme_id);
    if (e.kind.tag == VariantKind::Tag::Canonical) canonical.insert(e.lexeme_id);
  }
  for (const auto& id : lexemes)
    if (!canonical.contains(id)) throw LexiconError("MissingCanonical", "lexeme '" + id + "' has no Canonical form");
}

VariantEntry VariantRegistry::resolve_lexeme(std::string_view stem_form) const {
  if (auto it = entries_.find(stem_form); it != entries_.end()) return it->second;
  return {std::string(stem_form), VariantKind::canonical()};
}

VariantRegistry parse_variants(std::string_view tsv) {
  VariantRegistry reg;
  for_each_row(tsv, [&](int lineno, std::vector<std::string> f) {
    if (f.size() == 3) f.emplace_back();
    if (f.size() != 4 || f[0].empty() || f[1].empty())
      throw LexiconError("MalformedRow", "expected 4 columns: form, lexeme_id, kind, dialect", lineno);
    VariantKind kind;
    if (f[2] == "Canonical")
      kind = VariantKind::canonical();
    else if (f[2] == "Orthographic")
      kind = VariantKind::orthographic();
    else if (f[2] == "Dialect")
      kind = VariantKind::of_dialect(f[3]);
    else
      throw LexiconError("UnknownKind", "unknown variant kind '" + f[2] + "'", lineno);
    if ((kind.tag == VariantKind::Tag::Dialect) == f[3].empty())
      throw LexiconError("MalformedRow", "dialect column must be set exactly for Dialect rows", lineno);
    reg.add(std::move(f[0]), {std::move(f[1]), std::move(kind)}, lineno);
  });
  reg.validate();
  return reg;
}

VariantRegistry load_variants(const std::string& path) { return parse_variants(text::read_file(path)); }

} // namespace glossfill
