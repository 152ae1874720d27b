#include "glossfill/reinflection.hpp"

#include <map>

namespace glossfill {

FillResult fill_cell(const Reinflector& model, const ParadigmTable& table, const SlotTemplate& tgt_slot) {
  if (table.cells.contains(tgt_slot))
    throw ReinflectionError("SlotNotEmpty", tgt_slot.name() + " is already filled in " + table.variant_form);

  FillResult out;
  struct Tally {
    std::size_t votes = 0;
    std::size_t support = 0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& [slot, cell] : table.cells) {
    if (cell.provenance != Provenance::Attested) continue;
    Prediction p = model.reinflect(cell.surface, slot, tgt_slot);
    auto& t = tally[p.form];
    ++t.votes;
    t.support += p.support;
    out.votes.push_back({slot, std::move(p.form), p.support});
  }
  if (out.votes.empty())
    throw ReinflectionError("NoSourceCells", "table " + table.lexeme_id + "/" + table.variant_form + " has no attested cells");

  auto best = tally.begin();
  for (auto it = std::next(tally.begin()); it != tally.end(); ++it) {
    const auto& [v, s] = it->second;
    if (v > best->second.votes || (v == best->second.votes && s > best->second.support)) best = it;
  }
  out.prediction = best->first;
  return out;
}

TableSet fill_tables(const Reinflector& model, const TableSet& tables, const SlotInventory& inv) {
  TableSet out;
  for (const auto& [key, t] : tables) {
    ParadigmTable filled = t;
    const std::string stem_gloss = t.stem_gloss();
    for (const auto& slot : inv.slots) {
      if (t.cells.contains(slot)) continue;
      FillResult r = fill_cell(model, t, slot);
      filled.cells.emplace(slot, Cell{slot.fill_root(stem_gloss), {}, std::move(r.prediction), slot.fill_root(t.variant_form),
                                      Provenance::Predicted});
    }
    out.emplace(key, std::move(filled));
  }
  return out;
}

} // namespace glossfill
