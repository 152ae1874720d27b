#include "glossfill/igt.hpp"

#include "glossfill/text.hpp"

#include <unicode/uchar.h>

#include <array>

namespace glossfill {

IgtError::IgtError(std::string code, const std::string& detail, int entry, int line)
    : Error(std::move(code), (entry >= 0 ? "entry " + std::to_string(entry) + ", line " + std::to_string(line) + ": " : std::string())
                                 + detail),
      detail_(detail), entry_(entry), line_(line) {}

std::string_view to_string(Boundary b) {
  switch (b) {
  case Boundary::Stem: return "Stem";
  case Boundary::Affix: return "Affix";
  case Boundary::Clitic: return "Clitic";
  case Boundary::Reduplicant: return "Reduplicant";
  }
  return "?";
}

std::string_view to_string(GlossKind k) { return k == GlossKind::Lexical ? "Lexical" : "Grammatical"; }

GlossKind classify_gloss_label(std::string_view label) {
  for (char32_t c : text::to_u32(label))
    if (u_islower(static_cast<UChar32>(c))) return GlossKind::Lexical;
  return GlossKind::Grammatical;
}

std::optional<std::size_t> AnalyzedWord::stem_index() const {
  for (std::size_t i = 0; i < morphemes.size(); ++i) {
    const auto& m = morphemes[i];
    if (!m.covert() && m.boundary != Boundary::Reduplicant && m.gloss_kind == GlossKind::Lexical) return i;
  }
  return std::nullopt;
}

namespace {

bool is_joiner(char c) { return c == '-' || c == '=' || c == '~'; }

struct Unit {
  std::string text;
  char joiner = 0;
  bool bracketed = false;
  bool star = false;
};

std::vector<Unit> split_units(std::string_view token) {
  if (token.empty()) throw IgtError("MalformedToken", "empty token");
  std::vector<Unit> units;
  Unit cur;
  bool open = false; // `cur` holds text that has not been pushed yet
  std::size_t i = 0;

  auto take_star = [&](Unit& u, std::string_view body) {
    if (!body.empty() && body.front() == '*') {
      u.star = true;
      body.remove_prefix(1);
    }
    u.text = std::string(body);
  };
  auto flush = [&] {
    if (!open) return;
    std::string body = std::move(cur.text);
    take_star(cur, body);
    if (cur.text.empty()) throw IgtError("MalformedToken", "empty unit in token '" + std::string(token) + "'");
    units.push_back(std::move(cur));
    cur = Unit{};
    open = false;
  };

  while (i < token.size()) {
    char c = token[i];
    if (c == '[') {
      if (open && cur.text.empty() && cur.joiner != 0)
        throw IgtError("MalformedToken", "separator before bracket in '" + std::string(token) + "'");
      flush();
      auto close = token.find(']', i + 1);
      auto nested = token.find('[', i + 1);
      if (close == std::string_view::npos || (nested != std::string_view::npos && nested < close))
        throw IgtError("UnbalancedBrackets", "unclosed '[' in '" + std::string(token) + "'");
      std::string_view inner = token.substr(i + 1, close - i - 1);
      Unit u;
      u.bracketed = true;
      if (!inner.empty() && is_joiner(inner.front())) {
        u.joiner = inner.front();
        inner.remove_prefix(1);
      }
      take_star(u, inner);
      if (u.text.empty()) throw IgtError("MalformedToken", "empty bracketed unit in '" + std::string(token) + "'");
      if (u.joiner == 0 && !units.empty())
        throw IgtError("MalformedToken", "bracketed unit without separator in '" + std::string(token) + "'");
      units.push_back(std::move(u));
      i = close + 1;
      if (i < token.size() && !is_joiner(token[i]) && token[i] != '[')
        throw IgtError("MalformedToken", "text directly after ']' in '" + std::string(token) + "'");
      continue;
    }
    if (c == ']') throw IgtError("UnbalancedBrackets", "stray ']' in '" + std::string(token) + "'");
    if (is_joiner(c)) {
      if (!open && units.empty()) throw IgtError("MalformedToken", "token starts with a separator: '" + std::string(token) + "'");
      flush();
      cur.joiner = c;
      open = true;
      ++i;
      // A separator directly followed by a bracket belongs to neither; the
      // bracket carries its own separator.
      if (i < token.size() && token[i] == '[')
        throw IgtError("MalformedToken", "separator before bracket in '" + std::string(token) + "'");
      continue;
    }
    open = true;
    cur.text += c;
    ++i;
  }
  if (open) flush();
  return units;
}

Boundary boundary_of_joiner(char j) {
  switch (j) {
  case '=': return Boundary::Clitic;
  case '~': return Boundary::Reduplicant;
  default: return Boundary::Affix;
  }
}

void assign_boundaries(std::vector<Morpheme>& ms) {
  const std::size_t n = ms.size();
  // Reduplicants: of the two units joined by `~`, the grammatical one; the
  // left one when both or neither are grammatical.
  std::vector<bool> redup(n, false);
  for (std::size_t i = 1; i < n; ++i) {
    if (ms[i].joiner != '~') continue;
    bool left_gram = ms[i - 1].gloss_kind == GlossKind::Grammatical;
    bool right_gram = ms[i].gloss_kind == GlossKind::Grammatical;
    if (right_gram && !left_gram)
      redup[i] = true;
    else
      redup[i - 1] = true;
  }

  std::optional<std::size_t> stem;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ms[i].covert() && !redup[i] && ms[i].gloss_kind == GlossKind::Lexical) {
      stem = i;
      break;
    }
  }
  const std::size_t anchor = stem.value_or(0);

  for (std::size_t i = 0; i < n; ++i) {
    if (redup[i]) {
      ms[i].boundary = Boundary::Reduplicant;
      continue;
    }
    if (stem && i == *stem) {
      ms[i].boundary = Boundary::Stem;
      continue;
    }
    char j = 0;
    if (i < anchor || (i == anchor && !stem))
      j = i + 1 < n ? ms[i + 1].joiner : 0;
    else
      j = ms[i].joiner;
    if (j == 0) {
      ms[i].boundary = Boundary::Stem; // lone function word
    } else {
      Boundary b = boundary_of_joiner(j);
      ms[i].boundary = b == Boundary::Reduplicant ? Boundary::Affix : b;
    }
  }
}

} // namespace

AnalyzedWord parse_word(std::string_view surface, std::string_view seg_token, std::string_view gloss_token) {
  std::vector<Unit> seg = split_units(seg_token);
  std::vector<Unit> gl = split_units(gloss_token);

  AnalyzedWord w;
  w.surface = std::string(surface);
  std::size_t i = 0, j = 0;
  const std::size_t ns = seg.size(), ng = gl.size();
  auto mismatch = [&] {
    return IgtError("MorphemeCountMismatch", "'" + std::string(seg_token) + "' has " + std::to_string(ns) + " units but '"
                                                 + std::string(gloss_token) + "' has " + std::to_string(ng));
  };

  while (i < ns || j < ng) {
    const std::size_t rem_s = ns - i, rem_g = ng - j;
    Morpheme m;
    if (rem_g > rem_s && gl[j].bracketed && !(i < ns && seg[i].bracketed)) {
      // Covert unit glossed but not segmented, e.g. arrive.PL[-3.II]=CN.
      m.gloss = gl[j].text;
      m.joiner = gl[j].joiner;
      m.gloss_star = gl[j].star;
      m.seg_mark = TierMark::Absent;
      m.gloss_mark = TierMark::Bracketed;
      ++j;
    } else if (rem_s > rem_g && seg[i].bracketed && !(j < ng && gl[j].bracketed)) {
      m.form = seg[i].text;
      m.joiner = seg[i].joiner;
      m.seg_star = seg[i].star;
      m.seg_mark = TierMark::Bracketed;
      m.gloss_mark = TierMark::Absent;
      ++i;
    } else if (i < ns && j < ng) {
      if (seg[i].joiner != gl[j].joiner)
        throw IgtError("BoundaryMismatch", "separators differ between '" + std::string(seg_token) + "' and '"
                                               + std::string(gloss_token) + "' at unit " + std::to_string(w.morphemes.size()));
      m.form = seg[i].text;
      m.gloss = gl[j].text;
      m.joiner = seg[i].joiner;
      m.seg_star = seg[i].star;
      m.gloss_star = gl[j].star;
      m.seg_mark = seg[i].bracketed ? TierMark::Bracketed : TierMark::Plain;
      m.gloss_mark = gl[j].bracketed ? TierMark::Bracketed : TierMark::Plain;
      ++i;
      ++j;
    } else {
      throw mismatch();
    }
    m.gloss_kind = classify_gloss_label(m.gloss);
    w.morphemes.push_back(std::move(m));
  }
  if (!w.morphemes.empty() && w.morphemes.front().joiner != 0) throw mismatch();
  assign_boundaries(w.morphemes);
  return w;
}

namespace {

std::string render_tier(const AnalyzedWord& w, bool seg) {
  std::string out;
  for (const auto& m : w.morphemes) {
    TierMark mark = seg ? m.seg_mark : m.gloss_mark;
    if (mark == TierMark::Absent) continue;
    std::string body = (seg ? m.seg_star : m.gloss_star) ? "*" : "";
    body += seg ? m.form : m.gloss;
    std::string j = m.joiner ? std::string(1, m.joiner) : std::string();
    if (mark == TierMark::Bracketed)
      out += "[" + j + body + "]";
    else
      out += j + body;
  }
  return out;
}

struct Block {
  std::vector<std::string> lines;
  int first_line = 0;
};

std::vector<Block> split_blocks(std::string_view doc) {
  std::vector<Block> blocks;
  Block cur;
  int lineno = 0;
  for (auto& line : text::lines(doc)) {
    ++lineno;
    if (text::trim_ascii(line).empty()) {
      if (!cur.lines.empty()) blocks.push_back(std::move(cur));
      cur = Block{};
      continue;
    }
    if (cur.lines.empty()) cur.first_line = lineno;
    cur.lines.push_back(std::move(line));
  }
  if (!cur.lines.empty()) blocks.push_back(std::move(cur));
  return blocks;
}

constexpr std::array<std::string_view, 4> kMarkers{"\\w", "\\m", "\\g", "\\f"};

IgtEntry parse_entry(const Block& b, int index, std::string_view source_name) {
  std::array<std::optional<std::string>, 4> content;
  std::array<int, 4> line_of{};
  int next = 0;
  for (std::size_t k = 0; k < b.lines.size(); ++k) {
    const std::string& line = b.lines[k];
    const int lineno = b.first_line + static_cast<int>(k);
    std::string_view marker = std::string_view(line).substr(0, line.find(' '));
    int slot = -1;
    for (int m = 0; m < 4; ++m)
      if (marker == kMarkers[m]) slot = m;
    if (slot < 0) throw IgtError("UnexpectedLine", "unknown tier marker '" + std::string(marker) + "'", index, lineno);
    if (slot < next) throw IgtError("UnexpectedLine", "tier " + std::string(marker) + " repeated or out of order", index, lineno);
    if (slot > next)
      throw IgtError("TierMissing", "missing tier " + std::string(kMarkers[next]) + " before " + std::string(marker), index, lineno);
    content[slot] = line.size() > marker.size() ? line.substr(marker.size() + 1) : std::string();
    line_of[slot] = lineno;
    next = slot + 1;
  }
  if (next < 4) {
    const int lineno = b.first_line + static_cast<int>(b.lines.size()) - 1;
    throw IgtError("TierMissing", "missing tier " + std::string(kMarkers[next]), index, lineno);
  }

  IgtEntry e;
  e.words = text::split_words(*content[0]);
  auto seg = text::split_words(*content[1]);
  auto gloss = text::split_words(*content[2]);
  e.translation = *content[3];
  e.source_id = std::string(source_name) + "#" + std::to_string(index);

  if (seg.size() != e.words.size())
    throw IgtError("TokenCountMismatch",
                   std::to_string(e.words.size()) + " words but " + std::to_string(seg.size()) + " segmentation tokens", index,
                   line_of[1]);
  if (gloss.size() != e.words.size())
    throw IgtError("TokenCountMismatch",
                   std::to_string(e.words.size()) + " words but " + std::to_string(gloss.size()) + " gloss tokens", index,
                   line_of[2]);

  for (std::size_t t = 0; t < e.words.size(); ++t) {
    try {
      e.analyses.push_back(parse_word(e.words[t], seg[t], gloss[t]));
    } catch (const IgtError& err) {
      throw IgtError(err.code(), std::string(err.what()) + " (word " + std::to_string(t) + ")", index, line_of[1]);
    }
  }
  return e;
}

} // namespace

std::string render_segmentation(const AnalyzedWord& w) { return render_tier(w, true); }
std::string render_gloss(const AnalyzedWord& w) { return render_tier(w, false); }

std::vector<IgtEntry> parse_document(std::string_view doc, std::string_view source_name) {
  std::vector<IgtEntry> out;
  auto blocks = split_blocks(doc);
  out.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) out.push_back(parse_entry(blocks[i], static_cast<int>(i), source_name));
  return out;
}

std::vector<ValidationIssue> validate_document(std::string_view doc) {
  std::vector<ValidationIssue> issues;
  auto blocks = split_blocks(doc);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    try {
      parse_entry(blocks[i], static_cast<int>(i), "");
    } catch (const IgtError& err) {
      issues.push_back({err.entry(), err.line(), err.code(), err.detail()});
    }
  }
  return issues;
}

std::string serialize_document(const std::vector<IgtEntry>& entries) {
  std::string out;
  auto tier = [&out](std::string_view marker, const std::string& body) {
    out += marker;
    if (!body.empty()) {
      out += ' ';
      out += body;
    }
    out += '\n';
  };
  for (const auto& e : entries) {
    std::vector<std::string> seg, gloss;
    for (const auto& w : e.analyses) {
      seg.push_back(render_segmentation(w));
      gloss.push_back(render_gloss(w));
    }
    tier("\\w", text::join(e.words, " "));
    tier("\\m", text::join(seg, " "));
    tier("\\g", text::join(gloss, " "));
    tier("\\f", e.translation);
    out += '\n';
  }
  return out;
}

} // namespace glossfill
