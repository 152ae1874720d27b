#include "glossfill/paradigm.hpp"

#include "glossfill/text.hpp"

#include <filesystem>
#include <set>

namespace glossfill {

namespace {
constexpr std::string_view kEmpty = "_";
constexpr std::string_view kNoSegmentation = "?";
} // namespace

std::string write_table_tsv(const ParadigmTable& t, const SlotInventory& inv) {
  for (const auto& [slot, cell] : t.cells)
    if (!inv.contains(slot)) throw TableError("UnknownSlot", "slot " + slot.name() + " not in inventory");
  std::string out;
  for (const auto& slot : inv.slots) {
    out += slot.name();
    auto it = t.cells.find(slot);
    if (it == t.cells.end()) {
      for (int i = 0; i < 4; ++i) {
        out += '\t';
        out += kEmpty;
      }
    } else {
      const Cell& c = it->second;
      out += '\t' + c.gloss + '\t';
      out += c.provenance == Provenance::Predicted ? std::string(kNoSegmentation) : c.segmentation;
      out += '\t' + c.surface + '\t' + c.stem_tag;
    }
    out += '\n';
  }
  return out;
}

ParadigmTable read_table_tsv(std::string_view tsv, std::string lexeme_id, std::string variant_form, VariantKind kind,
                             const SlotInventory* inv) {
  ParadigmTable t{std::move(lexeme_id), std::move(variant_form), std::move(kind), {}};
  int lineno = 0;
  for (const auto& line : text::lines(tsv)) {
    ++lineno;
    auto f = text::split(line, '\t');
    if (f.size() != 5) throw TableError("ColumnCountError", "expected 5 columns, got " + std::to_string(f.size()), lineno);
    SlotTemplate slot = [&] {
      try {
        return SlotTemplate::parse(f[0]);
      } catch (const TableError& e) {
        throw TableError("UnknownSlot", e.what(), lineno);
      }
    }();
    if (inv && !inv->contains(slot)) throw TableError("UnknownSlot", "slot " + slot.name() + " not in inventory", lineno);
    if (t.cells.contains(slot)) throw TableError("DuplicateSlot", "slot " + slot.name() + " listed twice", lineno);

    int empties = 0;
    for (int i = 1; i < 5; ++i) empties += f[i] == kEmpty;
    if (empties == 4) continue;
    if (empties > 0 || f[1].empty() || f[2].empty() || f[3].empty() || f[4].empty())
      throw TableError("MalformedCell", "cell for " + slot.name() + " is partially empty", lineno);
    Cell c{f[1], f[2], f[3], f[4], Provenance::Attested};
    if (f[2] == kNoSegmentation) {
      c.segmentation.clear();
      c.provenance = Provenance::Predicted;
    }
    t.cells.emplace(std::move(slot), std::move(c));
  }
  return t;
}

std::string table_filename(const TableKey& key) {
  std::string name = key.first + "__" + key.second + ".tsv";
  for (auto& c : name)
    if (c == '/') c = '_';
  return name;
}

void write_table_dir(const std::string& dir, const TableSet& tables, const SlotInventory& inv) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string index = "lexeme_id\tvariant_form\tkind\tdialect\tfile\n";
  std::set<std::string> used;
  for (const auto& [key, t] : tables) {
    std::string file = table_filename(key);
    if (!used.insert(file).second) throw TableError("FilenameCollision", "two tables map to " + file);
    index += t.lexeme_id + '\t' + t.variant_form + '\t' + std::string(t.variant_kind.tag_name()) + '\t' +
             t.variant_kind.dialect + '\t' + file + '\n';
    text::write_file((fs::path(dir) / file).string(), write_table_tsv(t, inv));
  }
  text::write_file((fs::path(dir) / "index.tsv").string(), index);

  std::string slots = "slot\ttables\n";
  for (std::size_t i = 0; i < inv.slots.size(); ++i)
    slots += inv.slots[i].name() + '\t' + std::to_string(inv.counts[i]) + '\n';
  text::write_file((fs::path(dir) / "inventory.tsv").string(), slots);
}

std::pair<TableSet, SlotInventory> read_table_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  SlotInventory inv;
  auto inv_lines = text::lines(text::read_file((fs::path(dir) / "inventory.tsv").string()));
  for (std::size_t i = 1; i < inv_lines.size(); ++i) {
    auto f = text::split(inv_lines[i], '\t');
    if (f.size() != 2) throw TableError("ColumnCountError", "inventory.tsv: expected 2 columns", static_cast<int>(i + 1));
    inv.slots.push_back(SlotTemplate::parse(f[0]));
    inv.counts.push_back(std::stoul(f[1]));
  }

  TableSet tables;
  auto idx_lines = text::lines(text::read_file((fs::path(dir) / "index.tsv").string()));
  for (std::size_t i = 1; i < idx_lines.size(); ++i) {
    auto f = text::split(idx_lines[i], '\t');
    if (f.size() != 5) throw TableError("ColumnCountError", "index.tsv: expected 5 columns", static_cast<int>(i + 1));
    VariantKind kind;
    if (f[2] == "Dialect")
      kind = VariantKind::of_dialect(f[3]);
    else if (f[2] == "Orthographic")
      kind = VariantKind::orthographic();
    auto t = read_table_tsv(text::read_file((fs::path(dir) / f[4]).string()), f[0], f[1], kind, &inv);
    tables.emplace(t.key(), std::move(t));
  }
  return {std::move(tables), std::move(inv)};
}

} // namespace glossfill
