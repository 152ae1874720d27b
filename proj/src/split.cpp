#include "glossfill/reinflection.hpp"

#include "glossfill/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace glossfill {

namespace {

// Unbiased index in [0, n) from raw mt19937_64 output, so splits do not
// depend on the standard library's distribution implementation.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t reject_below = (0 - n) % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x >= reject_below) return x % n;
  }
}

std::string format_double(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, end);
}

std::string header_line(const SplitSpec& spec) {
  return "# seed=" + std::to_string(spec.seed) + "\tratios=" + format_double(spec.ratios[0]) + "," +
         format_double(spec.ratios[1]) + "," + format_double(spec.ratios[2]) + "\n";
}

SplitSpec parse_header_line(std::string_view line) {
  SplitSpec spec;
  if (!text::starts_with(line, "# ")) throw ReinflectionError("MalformedSplit", "missing '# seed=... ratios=...' header");
  bool seen_seed = false, seen_ratios = false;
  for (const auto& field : text::split(line.substr(2), '\t')) {
    if (text::starts_with(field, "seed=")) {
      spec.seed = std::stoull(field.substr(5));
      seen_seed = true;
    } else if (text::starts_with(field, "ratios=")) {
      auto parts = text::split(std::string_view(field).substr(7), ',');
      if (parts.size() != 3) throw ReinflectionError("MalformedSplit", "ratios need three values");
      for (int i = 0; i < 3; ++i) {
        auto [p, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), spec.ratios[i]);
        if (ec != std::errc()) throw ReinflectionError("MalformedSplit", "bad ratio '" + parts[i] + "'");
      }
      seen_ratios = true;
    }
  }
  if (!seen_seed || !seen_ratios) throw ReinflectionError("MalformedSplit", "header must name seed and ratios");
  return spec;
}

} // namespace

void SplitSpec::validate() const {
  for (double r : ratios)
    if (!(r > 0.0)) throw ReinflectionError("InvalidSplitSpec", "split ratios must be positive");
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9)
    throw ReinflectionError("InvalidSplitSpec", "split ratios must sum to 1");
}

std::array<std::size_t, 3> split_sizes(std::size_t total, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = ratios[i] * static_cast<double>(total);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    rem[i] = exact - std::floor(exact);
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

SplitResult split_cells(const TableSet& tables, const SplitSpec& spec) {
  spec.validate();
  std::vector<CellRef> cells;
  for (const auto& [key, t] : tables)
    for (const auto& [slot, cell] : t.cells)
      if (cell.provenance == Provenance::Attested) cells.push_back({key, slot});

  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[uniform_index(rng, i)]);

  SplitResult out;
  std::vector<CellRef> free;
  std::set<TableKey> anchored;
  for (auto& c : cells) {
    if (anchored.insert(c.table).second)
      out.train.push_back(std::move(c));
    else
      free.push_back(std::move(c));
  }

  auto sizes = split_sizes(cells.size(), spec.ratios);
  std::size_t n_test = std::min(sizes[2], free.size());
  std::size_t n_dev = std::min(sizes[1], free.size() - n_test);
  for (std::size_t i = 0; i < free.size(); ++i) {
    auto& dst = i < n_test ? out.test : i < n_test + n_dev ? out.dev : out.train;
    dst.push_back(std::move(free[i]));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.dev.begin(), out.dev.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

TableSet restrict_to(const TableSet& tables, const std::vector<CellRef>& cells) {
  TableSet out;
  for (const auto& ref : cells) {
    auto it = tables.find(ref.table);
    if (it == tables.end()) throw ReinflectionError("UnknownCell", "no table " + ref.table.first + "/" + ref.table.second);
    auto cell = it->second.cells.find(ref.slot);
    if (cell == it->second.cells.end())
      throw ReinflectionError("UnknownCell", "no cell " + ref.slot.name() + " in " + ref.table.first + "/" + ref.table.second);
    auto [dst, inserted] = out.try_emplace(ref.table);
    if (inserted) {
      dst->second = it->second;
      dst->second.cells.clear();
    }
    dst->second.cells.emplace(ref.slot, cell->second);
  }
  return out;
}

std::string write_split_tsv(const SplitResult& split, const SplitSpec& spec, const TableSet& tables) {
  std::string out = header_line(spec);
  out += "split\tlexeme_id\tvariant_form\tslot\tsurface\n";
  auto rows = [&](std::string_view name, const std::vector<CellRef>& refs) {
    for (const auto& r : refs) {
      const auto& cell = tables.at(r.table).cells.at(r.slot);
      out += std::string(name) + '\t' + r.table.first + '\t' + r.table.second + '\t' + r.slot.name() + '\t' + cell.surface + '\n';
    }
  };
  rows("train", split.train);
  rows("dev", split.dev);
  rows("test", split.test);
  return out;
}

std::pair<SplitSpec, SplitResult> read_split_tsv(std::string_view tsv) {
  auto lines = text::lines(tsv);
  if (lines.size() < 2) throw ReinflectionError("MalformedSplit", "split file needs a header");
  SplitSpec spec = parse_header_line(lines[0]);
  SplitResult out;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto f = text::split(lines[i], '\t');
    if (f.size() != 5) throw ReinflectionError("MalformedSplit", "line " + std::to_string(i + 1) + ": expected 5 columns");
    CellRef ref{{f[1], f[2]}, SlotTemplate::parse(f[3])};
    if (f[0] == "train")
      out.train.push_back(std::move(ref));
    else if (f[0] == "dev")
      out.dev.push_back(std::move(ref));
    else if (f[0] == "test")
      out.test.push_back(std::move(ref));
    else
      throw ReinflectionError("MalformedSplit", "line " + std::to_string(i + 1) + ": unknown split '" + f[0] + "'");
  }
  return {spec, std::move(out)};
}

std::vector<ReinflectionPair> generate_pairs(const TableSet& train_tables) {
  std::vector<ReinflectionPair> pairs;
  for (const auto& [key, t] : train_tables) {
    for (const auto& [src_slot, src] : t.cells) {
      if (src.provenance != Provenance::Attested) continue;
      for (const auto& [tgt_slot, tgt] : t.cells) {
        if (tgt.provenance != Provenance::Attested || src_slot == tgt_slot) continue;
        pairs.push_back({key, src_slot, tgt_slot, src.surface, tgt.surface});
      }
    }
  }
  return pairs;
}

std::string write_pairs_tsv(const std::vector<ReinflectionPair>& pairs, const SplitSpec& spec) {
  std::string out = header_line(spec);
  out += "lexeme_id\tvariant_form\tsrc_slot\ttgt_slot\tsrc_form\ttgt_form\n";
  for (const auto& p : pairs)
    out += p.table.first + '\t' + p.table.second + '\t' + p.src_slot.name() + '\t' + p.tgt_slot.name() + '\t' + p.src_form +
           '\t' + p.tgt_form + '\n';
  return out;
}

} // namespace glossfill
