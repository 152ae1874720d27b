#include "glossfill/exercise.hpp"

#include "glossfill/text.hpp"

#include <cstdio>

namespace glossfill {

LabelDescriptions LabelDescriptions::defaults() {
  LabelDescriptions d;
  d.map_ = {
      {"TR", "transitive"},
      {"PL", "plural"},
      {"ATTR", "attributive"},
      {"1SG.II", "1st person singular (II)"},
      {"2SG.II", "2nd person singular (II)"},
      {"3.II", "3rd person (II)"},
      {"1PL.II", "1st person plural (II)"},
      {"2PL.II", "2nd person plural (II)"},
      {"3PL.II", "3rd person plural (II)"},
      {"3PL", "3rd person plural"},
  };
  return d;
}

LabelDescriptions LabelDescriptions::parse(std::string_view tsv, LabelDescriptions base) {
  int lineno = 0;
  for (const auto& line : text::lines(tsv)) {
    ++lineno;
    if (text::trim_ascii(line).empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    if (f.size() != 2 || f[0].empty())
      throw ExerciseError("MalformedRow", "label descriptions line " + std::to_string(lineno) + ": expected label, description");
    base.set(std::move(f[0]), std::move(f[1]));
  }
  return base;
}

void LabelDescriptions::set(std::string label, std::string description) { map_[std::move(label)] = std::move(description); }

std::string LabelDescriptions::describe(const std::string& label) const {
  auto it = map_.find(label);
  return it == map_.end() ? label : it->second;
}

std::string LabelDescriptions::describe(const SlotTemplate& slot) const {
  std::vector<std::string> parts;
  for (const auto& l : slot.labels())
    if (l != SlotTemplate::kRoot) parts.push_back(describe(l));
  return parts.empty() ? "bare stem" : text::join(parts, ", ");
}

namespace {

std::string exercise_id(const TableKey& key, const SlotTemplate& slot) {
  // FNV-1a over the cell identity.
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
  };
  feed(key.first);
  feed(key.second);
  feed(slot.name());
  char buf[24];
  std::snprintf(buf, sizeof buf, "ex-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace

std::vector<Exercise> generate_exercises(const TableSet& tables, const ExerciseFilter& filter, const LabelDescriptions& labels) {
  std::vector<Exercise> out;
  std::set<std::string> ids;
  for (const auto& [key, t] : tables) {
    const std::string group = t.variant_kind.group();
    if (!filter.dialects.empty() && !filter.dialects.contains(group)) continue;
    const std::string gloss = t.stem_gloss();
    for (const auto& [slot, cell] : t.cells) {
      if (!filter.slots.empty() && !filter.slots.contains(slot.name())) continue;
      if (!filter.provenance.contains(cell.provenance)) continue;
      Exercise e;
      e.id = exercise_id(key, slot);
      e.lexeme_id = t.lexeme_id;
      e.variant_form = t.variant_form;
      if (t.variant_kind.tag == VariantKind::Tag::Dialect) e.dialect = t.variant_kind.dialect;
      e.slot = slot;
      e.prompt = "Inflect '" + t.variant_form + "' (" + gloss + ") for: " + labels.describe(slot);
      e.answer = cell.surface;
      e.provenance = cell.provenance;
      if (e.prompt.find(e.answer) != std::string::npos) continue;
      if (!ids.insert(e.id).second) throw ExerciseError("IdCollision", "exercise id collision for " + e.id);
      out.push_back(std::move(e));
    }
  }
  if (out.empty()) throw ExerciseError("EmptyAfterFilter", "no exercises match the filter");
  return out;
}

nlohmann::json to_json(const Exercise& e, bool include_answer) {
  nlohmann::json j = {
      {"id", e.id},
      {"lexeme_id", e.lexeme_id},
      {"variant_form", e.variant_form},
      {"dialect", e.dialect ? nlohmann::json(*e.dialect) : nlohmann::json(nullptr)},
      {"slot", e.slot.name()},
      {"prompt", e.prompt},
      {"provenance", std::string(to_string(e.provenance))},
  };
  if (include_answer) j["answer"] = e.answer;
  return j;
}

Exercise exercise_from_json(const nlohmann::json& j) {
  try {
    Exercise e;
    e.id = j.at("id").get<std::string>();
    e.lexeme_id = j.at("lexeme_id").get<std::string>();
    e.variant_form = j.at("variant_form").get<std::string>();
    if (j.contains("dialect") && !j.at("dialect").is_null()) e.dialect = j.at("dialect").get<std::string>();
    e.slot = SlotTemplate::parse(j.at("slot").get<std::string>());
    e.prompt = j.at("prompt").get<std::string>();
    e.answer = j.at("answer").get<std::string>();
    const auto prov = j.at("provenance").get<std::string>();
    if (prov == "Attested")
      e.provenance = Provenance::Attested;
    else if (prov == "Predicted")
      e.provenance = Provenance::Predicted;
    else
      throw ExerciseError("MalformedExercise", "unknown provenance '" + prov + "'");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ExerciseError("MalformedExercise", ex.what());
  }
}

std::string write_exercises_json(const std::vector<Exercise>& exercises) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : exercises) arr.push_back(to_json(e, true));
  return arr.dump(2) + "\n";
}

std::vector<Exercise> read_exercises_json(std::string_view text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ExerciseError("MalformedExercise", ex.what());
  }
  if (!arr.is_array()) throw ExerciseError("MalformedExercise", "expected a JSON array");
  std::vector<Exercise> out;
  for (const auto& j : arr) out.push_back(exercise_from_json(j));
  return out;
}

bool answer_matches(std::string_view attempt, std::string_view answer) {
  return text::nfc_trim(attempt) == text::nfc_trim(answer);
}

} // namespace glossfill
