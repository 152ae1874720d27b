#include "glossfill/paradigm.hpp"
#include "glossfill/text.hpp"

#include <doctest.h>

#include <filesystem>

using namespace glossfill;

namespace {

std::string fixture(const std::string& name) { return text::read_file(std::string(GLOSSFILL_FIXTURES) + "/" + name); }

const MorphClassLexicon& lexicon() {
  static const auto lex = parse_morph_classes(fixture("morph_classes.tsv"));
  return lex;
}

const VariantRegistry& variants() {
  static const auto reg = parse_variants(fixture("variants.tsv"));
  return reg;
}

CellCandidate candidate(std::string_view surface, std::string_view seg, std::string_view gloss, BuildOptions opts = {}) {
  auto r = analyze_word(parse_word(surface, seg, gloss), lexicon(), variants(), opts);
  REQUIRE(std::holds_alternative<CellCandidate>(r));
  return std::get<CellCandidate>(r);
}

SkipReason skip_reason(std::string_view surface, std::string_view seg, std::string_view gloss) {
  auto r = analyze_word(parse_word(surface, seg, gloss), lexicon(), variants());
  REQUIRE(std::holds_alternative<Skip>(r));
  return std::get<Skip>(r).reason;
}

std::string entry(std::string_view w, std::string_view m, std::string_view g) {
  return "\\w " + std::string(w) + "\n\\m " + std::string(m) + "\n\\g " + std::string(g) + "\n\\f -\n\n";
}

template <typename Fn> std::string error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

} // namespace

TEST_CASE("derivational affix merges into the stem") {
  auto c = candidate("maaxwsxwa", "maaxws-xw-a", "fallen.snow-VAL-ATTR");
  CHECK(c.slot.name() == "ROOT-ATTR");
  CHECK(c.lexeme_id == "maaxwsxw");
  CHECK(c.variant_form == "maaxwsxw");
  CHECK(c.cell.segmentation == "maaxwsxw-a");
  CHECK(c.cell.surface == "maaxwsxwa");
  CHECK(c.cell.stem_tag == "maaxwsxw-ATTR");
}

TEST_CASE("inflected verb cell") {
  auto c = candidate("'wayit", "'wa-i-t", "find-TR-3.II");
  CHECK(c.slot.name() == "ROOT-TR-3.II");
  CHECK(c.cell == Cell{"find-TR-3.II", "'wa-i-t", "'wayit", "'wa-TR-3.II", Provenance::Attested});
}

TEST_CASE("clitics leave the slot and the surface") {
  auto c = candidate("Maryhl", "Mary=hl", "Mary=CN");
  CHECK(c.slot.name() == "ROOT");
  CHECK(c.cell.surface == "Mary");

  auto g = candidate("Giigwis", "giikw-i[-t]=s", "buy-TR-3.II=PN");
  CHECK(g.slot.name() == "ROOT-TR");
  CHECK(g.covert_labels == std::vector<std::string>{"3.II"});
  CHECK(g.cell.surface == "giigwi");

  BuildOptions covert;
  covert.include_covert = true;
  CHECK(candidate("Giigwis", "giikw-i[-t]=s", "buy-TR-3.II=PN", covert).slot.name() == "ROOT-TR-3.II");
}

TEST_CASE("prefixes and reduplicants are named stem-outward after ROOT") {
  CHECK(candidate("siwatdiit", "si-wa-T-diit", "CAUS1-name-T[-TR]-3PL.II").slot.name() == "ROOT-CAUS1-T-3PL.II");
  auto c = candidate("mismaaxwsxum", "CVC~maaxws-xw-m", "PL~fallen.snow-VAL-ATTR");
  CHECK(c.slot.name() == "ROOT-PL-ATTR");
  CHECK(c.cell.segmentation == "CVC~maaxwsxw-m");
}

TEST_CASE("variant identity comes from the registry") {
  auto c = candidate("get", "get", "people");
  CHECK(c.lexeme_id == "LEX:person");
  CHECK(c.variant_kind == VariantKind::of_dialect("West"));
}

TEST_CASE("words that cannot become cells are skipped") {
  CHECK(skip_reason("\"government\"", "*government", "*government") == SkipReason::Codeswitch);
  CHECK(skip_reason("hlidaa", "hli=da", "PART=SPT") == SkipReason::NoStem);
  CHECK(skip_reason("galts'ephil", "gal-ts'ep=hl", "container-community[-3.II]=CN") == SkipReason::SurfaceRecoveryFailed);
}

TEST_CASE("tables from the 'wa corpus") {
  auto built = build_tables(parse_document(fixture("wa_corpus.igt"), "wa"), lexicon(), variants());
  REQUIRE(built.tables.size() == 1);
  const auto& t = built.tables.begin()->second;
  CHECK(t.lexeme_id == "'wa");
  CHECK(t.attested_count() == 5);
  CHECK(t.stem_gloss() == "find");
  CHECK(built.report.duplicates_collapsed == 1);
  CHECK(built.report.attested_cells == 5);

  auto inv = compute_inventory(built.tables);
  auto tsv = write_table_tsv(t, inv);
  CHECK(tsv.find("ROOT-TR-3.II\tfind-TR-3.II\t'wa-i-t\t'wayit\t'wa-TR-3.II\n") != std::string::npos);
  CHECK(tsv.find("ROOT-3.II\tfind-3.II\t'wa-t\t'wat\t'wa-3.II\n") != std::string::npos);
  CHECK(tsv.find("ROOT-TR-1PL.II\tfind-TR-1PL.II\t'wa-i-'m\t'wayi'm\t'wa-TR-1PL.II\n") != std::string::npos);
}

TEST_CASE("repeated tokens collapse into one cell") {
  auto doc = parse_document(entry("'wayit 'wat 'wayit", "'wa-i-t 'wa-t 'wa-i-t", "find-TR-3.II find-3.II find-TR-3.II"));
  auto built = build_tables(doc, lexicon(), variants());
  REQUIRE(built.tables.size() == 1);
  CHECK(built.tables.begin()->second.cells.size() == 2);
  CHECK(built.report.duplicates_collapsed == 1);
  CHECK(built.report.conflicts.empty());
}

TEST_CASE("conflicting surfaces keep the most frequent") {
  auto doc = parse_document(entry("'wayit 'weyit 'wayit", "'wa-i-t 'wa-i-t 'wa-i-t", "find-TR-3.II find-TR-3.II find-TR-3.II"));
  auto built = build_tables(doc, lexicon(), variants());
  const auto& t = built.tables.begin()->second;
  CHECK(t.cells.at(SlotTemplate::parse("ROOT-TR-3.II")).surface == "'wayit");
  REQUIRE(built.report.conflicts.size() == 1);
  CHECK(built.report.conflicts[0].kept == "'wayit");
  CHECK(built.report.conflicts[0].surfaces.at("'weyit") == 1);
}

TEST_CASE("inventory orders slots by table count then name") {
  auto doc = parse_document(entry("'wat 'wadiit limt", "'wa-t 'wa-diit lim-t", "find-3.II find-3PL.II sing-3.II"));
  auto built = build_tables(doc, lexicon(), variants());
  auto inv = compute_inventory(built.tables);
  REQUIRE(inv.slots.size() == 2);
  CHECK(inv.slots[0].name() == "ROOT-3.II");
  CHECK(inv.counts == std::vector<std::size_t>{2, 1});
}

TEST_CASE("table TSV round trip and empty cells") {
  auto built = build_tables(parse_document(fixture("gitksan_sample.igt"), "s"), lexicon(), variants());
  auto inv = compute_inventory(built.tables);
  for (const auto& [key, t] : built.tables) {
    auto tsv = write_table_tsv(t, inv);
    CHECK(text::lines(tsv).size() == inv.slots.size());
    CHECK(tsv.find("\t\n") == std::string::npos);
    CHECK(read_table_tsv(tsv, t.lexeme_id, t.variant_form, t.variant_kind, &inv) == t);
  }
  const auto& wa = built.tables.at({"maaxwsxw", "maaxwsxw"});
  auto tsv = write_table_tsv(wa, inv);
  CHECK(tsv.find("ROOT\t_\t_\t_\t_\n") != std::string::npos);
}

TEST_CASE("predicted cells render their segmentation as ?") {
  ParadigmTable t{"x", "x", {}, {}};
  t.cells[SlotTemplate()] = {"x", "x", "x", "x", Provenance::Attested};
  t.cells[SlotTemplate::parse("ROOT-PL")] = {"x-PL", "", "xs", "x-PL", Provenance::Predicted};
  SlotInventory inv{{SlotTemplate(), SlotTemplate::parse("ROOT-PL")}, {1, 1}};
  auto tsv = write_table_tsv(t, inv);
  CHECK(tsv == "ROOT\tx\tx\tx\tx\nROOT-PL\tx-PL\t?\txs\tx-PL\n");
  CHECK(read_table_tsv(tsv, "x", "x") == t);
}

TEST_CASE("table TSV errors") {
  SlotInventory inv{{SlotTemplate()}, {1}};
  CHECK(error_code([] { read_table_tsv("ROOT\tx\tx\tx\n", "x", "x"); }) == "ColumnCountError");
  CHECK(error_code([&] { read_table_tsv("ROOT-PL\tx\tx\tx\tx\n", "x", "x", {}, &inv); }) == "UnknownSlot");
  CHECK(error_code([] { read_table_tsv("ROOT\tx\tx\tx\tx\nROOT\tx\tx\tx\tx\n", "x", "x"); }) == "DuplicateSlot");
  CHECK(error_code([] { read_table_tsv("ROOT\t_\tx\tx\tx\n", "x", "x"); }) == "MalformedCell");
  CHECK(error_code([] { SlotTemplate::parse("PL-3.II"); }) == "UnknownSlot");
  CHECK(error_code([] { SlotTemplate::parse("ROOT--PL"); }) == "UnknownSlot");

  ParadigmTable t{"x", "x", {}, {}};
  t.cells[SlotTemplate::parse("ROOT-PL")] = {"x-PL", "x-s", "xs", "x-PL", Provenance::Attested};
  CHECK(error_code([&] { write_table_tsv(t, inv); }) == "UnknownSlot");
}

TEST_CASE("table files") {
  CHECK(table_filename({"LEX:person", "get"}) == "LEX:person__get.tsv");
  CHECK(table_filename({"a/b", "c"}) == "a_b__c.tsv");

  auto built = build_tables(parse_document(fixture("gitksan_sample.igt"), "s"), lexicon(), variants());
  auto inv = compute_inventory(built.tables);
  auto dir = std::filesystem::temp_directory_path() / "glossfill_test_tables";
  std::filesystem::remove_all(dir);
  write_table_dir(dir.string(), built.tables, inv);
  auto [tables, inv2] = read_table_dir(dir.string());
  CHECK(tables == built.tables);
  CHECK(inv2 == inv);
  std::filesystem::remove_all(dir);
}
