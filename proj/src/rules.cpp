#include "glossfill/reinflection.hpp"

#include "glossfill/text.hpp"

#include <algorithm>
#include <future>
#include <tuple>

namespace glossfill {

std::array<std::size_t, 3> longest_common_substring(std::u32string_view a, std::u32string_view b) {
  // run[j + 1] = length of the common suffix of a[..i] and b[..j].
  std::vector<std::size_t> prev(b.size() + 1, 0), run(b.size() + 1, 0);
  std::size_t best = 0, best_a = 0, best_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      run[j + 1] = a[i] == b[j] ? prev[j] + 1 : 0;
      // Strictly longer only: the first maximum in (end in a, end in b) order
      // is also leftmost by start.
      if (run[j + 1] > best) {
        best = run[j + 1];
        best_a = i + 1 - best;
        best_b = j + 1 - best;
      }
    }
    std::swap(prev, run);
  }
  return {best_a, best_b, best};
}

void RuleModel::add(RuleSide side, const SlotPair& key, std::u32string src, std::u32string tgt, std::size_t count) {
  auto& table = side == RuleSide::Prefix ? prefix_ : side == RuleSide::Suffix ? suffix_ : whole_;
  table[key][std::move(src)][std::move(tgt)] += count;
}

void RuleModel::learn(const ReinflectionPair& p) {
  const SlotPair key{p.src_slot, p.tgt_slot};
  const std::u32string src = text::to_u32(p.src_form);
  const std::u32string tgt = text::to_u32(p.tgt_form);
  add(RuleSide::Whole, key, src, tgt);

  auto [sa, sb, len] = longest_common_substring(src, tgt);
  if (len == 0) return;
  const std::u32string_view stem = std::u32string_view(src).substr(sa, len);
  const std::u32string ps = src.substr(0, sa), ss = src.substr(sa + len);
  const std::u32string pt = tgt.substr(0, sb), st = tgt.substr(sb + len);
  for (std::size_t k = 0; k <= len; ++k) {
    std::u32string tail(stem.substr(len - k));
    std::u32string head(stem.substr(0, k));
    add(RuleSide::Suffix, key, tail + ss, tail + st);
    add(RuleSide::Prefix, key, ps + head, pt + head);
  }
}

void RuleModel::merge(const RuleModel& other) {
  for (auto side : {RuleSide::Prefix, RuleSide::Suffix, RuleSide::Whole})
    for (const auto& [key, rewrites] : other.rules(side))
      for (const auto& [src, tgts] : rewrites)
        for (const auto& [tgt, n] : tgts) add(side, key, src, tgt, n);
}

const std::map<RuleModel::SlotPair, RuleModel::Rewrites>& RuleModel::rules(RuleSide side) const {
  return side == RuleSide::Prefix ? prefix_ : side == RuleSide::Suffix ? suffix_ : whole_;
}

std::size_t RuleModel::rule_count() const {
  std::size_t n = 0;
  for (auto side : {RuleSide::Prefix, RuleSide::Suffix, RuleSide::Whole})
    for (const auto& [key, rewrites] : rules(side))
      for (const auto& [src, tgts] : rewrites) n += tgts.size();
  return n;
}

namespace {

// Highest count, then smallest target.
const std::pair<const std::u32string, std::size_t>& best_target(const std::map<std::u32string, std::size_t>& tgts) {
  auto best = tgts.begin();
  for (auto it = tgts.begin(); it != tgts.end(); ++it)
    if (it->second > best->second) best = it;
  return *best;
}

} // namespace

Prediction RuleModel::reinflect(std::string_view form, const SlotTemplate& src, const SlotTemplate& tgt) const {
  const SlotPair key{src, tgt};
  std::u32string word = text::to_u32(form);

  if (auto w = whole_.find(key); w != whole_.end()) {
    if (auto r = w->second.find(word); r != w->second.end()) {
      const auto& [out, n] = best_target(r->second);
      return {text::to_utf8(out), n};
    }
  }

  std::size_t support = 0;
  if (auto s = suffix_.find(key); s != suffix_.end()) {
    for (std::size_t k = word.size() + 1; k-- > 0;) {
      auto r = s->second.find(word.substr(word.size() - k));
      if (r == s->second.end()) continue;
      const auto& [out, n] = best_target(r->second);
      word = word.substr(0, word.size() - k) + out;
      support += n;
      break;
    }
  }
  if (auto p = prefix_.find(key); p != prefix_.end()) {
    for (std::size_t k = word.size() + 1; k-- > 0;) {
      auto r = p->second.find(word.substr(0, k));
      if (r == p->second.end()) continue;
      const auto& [out, n] = best_target(r->second);
      word = out + word.substr(k);
      support += n;
      break;
    }
  }
  if (support == 0) return {std::string(form), 0};
  return {text::to_utf8(word), support};
}

Prediction apply_rules(const RuleModel& model, std::string_view form, const SlotTemplate& src, const SlotTemplate& tgt) {
  return model.reinflect(form, src, tgt);
}

RuleModel train_rules(const std::vector<ReinflectionPair>& pairs, unsigned threads) {
  if (pairs.empty()) throw ReinflectionError("EmptyTrainingSet", "no training pairs");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
  if (threads == 1) {
    RuleModel m;
    for (const auto& p : pairs) m.learn(p);
    return m;
  }
  std::vector<std::future<RuleModel>> parts;
  const std::size_t chunk = (pairs.size() + threads - 1) / threads;
  for (std::size_t begin = 0; begin < pairs.size(); begin += chunk) {
    const std::size_t end = std::min(pairs.size(), begin + chunk);
    parts.push_back(std::async(std::launch::async, [&pairs, begin, end] {
      RuleModel m;
      for (std::size_t i = begin; i < end; ++i) m.learn(pairs[i]);
      return m;
    }));
  }
  RuleModel merged;
  for (auto& f : parts) merged.merge(f.get());
  return merged;
}

std::string RuleModel::to_tsv() const {
  using Row = std::tuple<char, std::string, std::string, std::string, std::string, std::size_t>;
  std::vector<Row> rows;
  auto collect = [&rows](char side, const std::map<SlotPair, Rewrites>& table) {
    for (const auto& [key, rewrites] : table)
      for (const auto& [src, tgts] : rewrites)
        for (const auto& [tgt, n] : tgts)
          rows.emplace_back(side, key.first.name(), key.second.name(), text::to_utf8(src), text::to_utf8(tgt), n);
  };
  collect('P', prefix_);
  collect('S', suffix_);
  collect('W', whole_);
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [side, s, t, a, b, n] : rows)
    out += std::string(1, side) + '\t' + s + '\t' + t + '\t' + a + '\t' + b + '\t' + std::to_string(n) + '\n';
  return out;
}

RuleModel RuleModel::from_tsv(std::string_view tsv) {
  RuleModel m;
  int lineno = 0;
  for (const auto& line : text::lines(tsv)) {
    ++lineno;
    auto f = text::split(line, '\t');
    auto bad = [&](const std::string& why) {
      return ReinflectionError("MalformedModel", "line " + std::to_string(lineno) + ": " + why);
    };
    if (f.size() != 6) throw bad("expected 6 columns");
    RuleSide side;
    if (f[0] == "P")
      side = RuleSide::Prefix;
    else if (f[0] == "S")
      side = RuleSide::Suffix;
    else if (f[0] == "W")
      side = RuleSide::Whole;
    else
      throw bad("unknown side '" + f[0] + "'");
    std::size_t n = 0;
    try {
      n = std::stoul(f[5]);
    } catch (const std::exception&) {
      throw bad("bad count '" + f[5] + "'");
    }
    if (n == 0) throw bad("count must be positive");
    SlotPair key{SlotTemplate::parse(f[1]), SlotTemplate::parse(f[2])};
    auto& table = side == RuleSide::Prefix ? m.prefix_ : side == RuleSide::Suffix ? m.suffix_ : m.whole_;
    auto& slot = table[key][text::to_u32(f[3])][text::to_u32(f[4])];
    if (slot != 0) throw bad("duplicate rule");
    slot = n;
  }
  return m;
}

} // namespace glossfill
