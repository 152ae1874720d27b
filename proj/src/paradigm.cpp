#include "glossfill/paradigm.hpp"

#include "glossfill/text.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <sstream>
#include <tuple>

namespace glossfill {

TableError::TableError(std::string code, const std::string& detail, int line)
    : Error(std::move(code), (line >= 0 ? "line " + std::to_string(line) + ": " : std::string()) + detail), line_(line) {}

SlotTemplate::SlotTemplate(std::vector<std::string> labels) : labels_(std::move(labels)) {
  auto roots = std::count(labels_.begin(), labels_.end(), std::string(kRoot));
  if (roots != 1) throw TableError("UnknownSlot", "slot needs exactly one ROOT: " + text::join(labels_, "-"));
  for (const auto& l : labels_)
    if (l.empty()) throw TableError("UnknownSlot", "empty label in slot " + text::join(labels_, "-"));
  name_ = text::join(labels_, "-");
}

SlotTemplate SlotTemplate::parse(std::string_view name) { return SlotTemplate(text::split(name, '-')); }

std::string SlotTemplate::fill_root(std::string_view root) const {
  std::vector<std::string> out = labels_;
  for (auto& l : out)
    if (l == kRoot) l = std::string(root);
  return text::join(out, "-");
}

std::string_view to_string(Provenance p) { return p == Provenance::Attested ? "Attested" : "Predicted"; }

std::string_view to_string(SkipReason r) {
  switch (r) {
  case SkipReason::NoStem: return "NoStem";
  case SkipReason::SurfaceRecoveryFailed: return "SurfaceRecoveryFailed";
  case SkipReason::Codeswitch: return "Codeswitch";
  }
  return "?";
}

std::size_t ParadigmTable::attested_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& kv) { return kv.second.provenance == Provenance::Attested; }));
}

std::string ParadigmTable::stem_gloss() const {
  if (cells.empty()) return {};
  const auto& [slot, cell] = *cells.begin();
  const auto& labels = slot.labels();
  auto root = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), SlotTemplate::kRoot) - labels.begin());
  std::string prefix, suffix;
  for (std::size_t i = 0; i < root; ++i) prefix += labels[i] + "-";
  for (std::size_t i = root + 1; i < labels.size(); ++i) suffix += "-" + labels[i];
  std::string_view g = cell.gloss;
  if (g.size() > prefix.size() + suffix.size() && text::starts_with(g, prefix) && text::ends_with(g, suffix))
    return std::string(g.substr(prefix.size(), g.size() - prefix.size() - suffix.size()));
  return cell.gloss;
}

bool SlotInventory::contains(const SlotTemplate& s) const { return std::find(slots.begin(), slots.end(), s) != slots.end(); }

namespace {

// Punctuation that the word tier carries but the segmentation tier does not.
// Apostrophes are letters in the orthography and are kept.
bool is_edge_punct(char32_t c) {
  switch (c) {
  case U'.': case U',': case U';': case U':': case U'!': case U'?': case U'"':
  case U'“': case U'”': case U'«': case U'»': case U'(': case U')':
    return true;
  default:
    return false;
  }
}

std::u32string strip_edge_punct(std::u32string s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_edge_punct(s[b])) ++b;
  while (e > b && is_edge_punct(s[e - 1])) --e;
  return s.substr(b, e - b);
}

void fold_initial_case(std::u32string& surface, std::string_view first_form) {
  auto first_letter = [](const std::u32string& s) -> std::size_t {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (u_isalpha(static_cast<UChar32>(s[i]))) return i;
    return s.size();
  };
  std::u32string form = text::to_u32(first_form);
  std::size_t i = first_letter(surface), k = first_letter(form);
  if (i == surface.size() || k == form.size()) return;
  auto sc = static_cast<UChar32>(surface[i]);
  auto fc = static_cast<UChar32>(form[k]);
  if (u_isupper(sc) && u_islower(fc) && u_tolower(sc) == fc) surface[i] = static_cast<char32_t>(fc);
}

struct Piece {
  std::size_t index; // position in the original morpheme list
  std::string text;
};

} // namespace

AnalysisResult analyze_word(const AnalyzedWord& w, const MorphClassLexicon& morph_lex, const VariantRegistry& variants,
                            const BuildOptions& opts, ReviewLog* review) {
  const auto& ms = w.morphemes;
  for (const auto& m : ms)
    if (m.codeswitch()) return Skip{SkipReason::Codeswitch, w.surface};
  auto stem_at = w.stem_index();
  if (!stem_at) return Skip{SkipReason::NoStem, w.surface};
  const std::size_t s = *stem_at;

  std::string stem_form;
  std::vector<std::string> prefix_labels, suffix_labels, covert_labels;
  std::vector<std::string> leading_clitics, trailing_clitics;
  std::vector<Piece> pieces; // kept units for the segmentation column
  std::vector<std::size_t> merged;

  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (i == s) continue;
    if (m.boundary == Boundary::Clitic) {
      if (!m.covert()) (i < s ? leading_clitics : trailing_clitics).push_back(m.form);
      continue;
    }
    MorphClass cls = classify_morph(morph_lex, m, review);
    if (m.covert()) {
      covert_labels.push_back(m.gloss);
      if (!opts.include_covert || cls == MorphClass::Derivational) continue;
    } else if (cls == MorphClass::Derivational) {
      merged.push_back(i);
      continue;
    }
    (i < s ? prefix_labels : suffix_labels).push_back(m.gloss);
    if (!m.covert()) pieces.push_back({i, m.form});
  }

  // Derivational material joins the stem in surface order.
  merged.push_back(s);
  std::sort(merged.begin(), merged.end());
  for (auto i : merged) stem_form += ms[i].form;
  pieces.push_back({s, stem_form});
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.index < b.index; });

  std::string segmentation;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (p > 0) {
      const auto& left = pieces[p - 1];
      const auto& right = pieces[p];
      char j = right.index > s ? ms[right.index].joiner : ms[left.index + 1].joiner;
      if (j == 0) j = '-';
      segmentation += j;
    }
    segmentation += pieces[p].text;
  }

  std::vector<std::string> labels{std::string(SlotTemplate::kRoot)};
  labels.insert(labels.end(), prefix_labels.rbegin(), prefix_labels.rend());
  labels.insert(labels.end(), suffix_labels.begin(), suffix_labels.end());
  SlotTemplate slot(std::move(labels));

  std::u32string surface = strip_edge_punct(text::to_u32(w.surface));
  if (opts.fold_initial_case) {
    for (const auto& m : ms) {
      if (m.seg_mark == TierMark::Plain) {
        fold_initial_case(surface, m.form);
        break;
      }
    }
  }
  std::string surf = text::to_utf8(surface);
  for (auto it = trailing_clitics.rbegin(); it != trailing_clitics.rend(); ++it) {
    if (surf.size() <= it->size() || !text::ends_with(surf, *it))
      return Skip{SkipReason::SurfaceRecoveryFailed, w.surface + ": clitic '" + *it + "' not at right edge"};
    surf.resize(surf.size() - it->size());
  }
  for (const auto& c : leading_clitics) {
    if (surf.size() <= c.size() || !text::starts_with(surf, c))
      return Skip{SkipReason::SurfaceRecoveryFailed, w.surface + ": clitic '" + c + "' not at left edge"};
    surf.erase(0, c.size());
  }

  VariantEntry v = variants.resolve_lexeme(stem_form);
  CellCandidate out{v.lexeme_id, stem_form, v.kind, slot, {}, std::move(covert_labels)};
  out.cell.gloss = slot.fill_root(ms[s].gloss);
  out.cell.segmentation = std::move(segmentation);
  out.cell.surface = std::move(surf);
  out.cell.stem_tag = slot.fill_root(stem_form);
  out.cell.provenance = Provenance::Attested;
  return out;
}

BuildResult build_tables(const std::vector<IgtEntry>& corpus, const MorphClassLexicon& morph_lex,
                         const VariantRegistry& variants, const BuildOptions& opts) {
  BuildResult result;
  BuildReport& rep = result.report;
  ReviewLog review;

  struct Tally {
    VariantKind kind;
    std::map<SlotTemplate, std::vector<Cell>> by_slot;
  };
  std::map<TableKey, Tally> groups;

  for (const auto& entry : corpus) {
    for (const auto& w : entry.analyses) {
      ++rep.words;
      auto r = analyze_word(w, morph_lex, variants, opts, &review);
      if (auto* skip = std::get_if<Skip>(&r)) {
        ++rep.skips[skip->reason];
        rep.skipped.emplace_back(entry.source_id, *skip);
        continue;
      }
      auto& c = std::get<CellCandidate>(r);
      ++rep.candidates;
      auto& g = groups[{c.lexeme_id, c.variant_form}];
      g.kind = c.variant_kind;
      g.by_slot[c.slot].push_back(std::move(c.cell));
    }
  }

  for (auto& [key, g] : groups) {
    ParadigmTable t{key.first, key.second, g.kind, {}};
    for (auto& [slot, cells] : g.by_slot) {
      std::map<std::string, std::size_t> surfaces;
      for (const auto& c : cells) ++surfaces[c.surface];
      // Most frequent surface; map order makes ties lexicographically smallest.
      auto best = std::max_element(surfaces.begin(), surfaces.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
      const std::string kept = best->first;
      if (surfaces.size() > 1) rep.conflicts.push_back({key, slot, surfaces, kept});

      std::map<std::tuple<std::string, std::string, std::string>, std::size_t> variants_of_kept;
      for (const auto& c : cells)
        if (c.surface == kept) ++variants_of_kept[{c.gloss, c.segmentation, c.stem_tag}];
      auto cell_best = std::max_element(variants_of_kept.begin(), variants_of_kept.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
      const auto& [gloss, seg, tag] = cell_best->first;
      t.cells.emplace(slot, Cell{gloss, seg, kept, tag, Provenance::Attested});
      rep.duplicates_collapsed += cells.size() - 1;
      ++rep.attested_cells;
    }
    result.tables.emplace(key, std::move(t));
  }
  rep.defaulted = review.snapshot();
  return result;
}

SlotInventory compute_inventory(const TableSet& tables) {
  std::map<SlotTemplate, std::size_t> counts;
  for (const auto& [key, t] : tables)
    for (const auto& [slot, cell] : t.cells)
      if (cell.provenance == Provenance::Attested) ++counts[slot];
  std::vector<std::pair<SlotTemplate, std::size_t>> v(counts.begin(), counts.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  SlotInventory inv;
  for (auto& [slot, n] : v) {
    inv.slots.push_back(slot);
    inv.counts.push_back(n);
  }
  return inv;
}

std::string BuildReport::summary() const {
  std::ostringstream os;
  os << "words: " << words << "\n";
  os << "candidates: " << candidates << "\n";
  for (auto r : {SkipReason::NoStem, SkipReason::SurfaceRecoveryFailed, SkipReason::Codeswitch}) {
    auto it = skips.find(r);
    os << "skipped_" << to_string(r) << ": " << (it == skips.end() ? 0 : it->second) << "\n";
  }
  os << "duplicates_collapsed: " << duplicates_collapsed << "\n";
  os << "attested_cells: " << attested_cells << "\n";
  os << "slot_conflicts: " << conflicts.size() << "\n";
  os << "defaulted_classes: " << defaulted.size() << "\n";
  return os.str();
}

} // namespace glossfill
