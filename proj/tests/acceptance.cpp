// Acceptance gate: one PASS/FAIL line per primary criterion.

#include "glossfill/cli.hpp"
#include "glossfill/evaluation.hpp"
#include "glossfill/exercise.hpp"
#include "glossfill/igt.hpp"
#include "glossfill/reinflection.hpp"
#include "glossfill/text.hpp"
#include "synthetic.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace glossfill;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = GLOSSFILL_FIXTURES;

std::string fixture(const std::string& name) { return text::read_file(kFixtures + "/" + name); }

// A failed check: a message naming what went wrong.
struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

struct Criterion {
  std::string name;
  std::function<std::string()> body; ///< returns a detail line
  double budget_s = 0;               ///< 0 = no runtime limit
};

bool report(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = c.body();
  } catch (const Failure& f) {
    ok = false;
    detail = f.what;
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && c.budget_s > 0 && secs >= c.budget_s) {
    ok = false;
    detail += "; over the " + std::to_string(c.budget_s) + " s budget";
  }
  std::ostringstream line;
  line.precision(3);
  line << (ok ? "PASS" : "FAIL") << "  " << c.name << "  [" << std::fixed << secs << " s]  " << detail;
  std::cout << line.str() << std::endl;
  return ok;
}

// --- parser ----------------------------------------------------------------

std::string parser_fixtures() {
  const auto src = fixture("gitksan_sample.igt");
  auto doc = parse_document(src, "sample");
  expect(serialize_document(doc) == src, "round trip is not byte-exact");
  expect(serialize_document(parse_document(fixture("appendix_a.igt"))) == fixture("appendix_a.igt"),
         "appendix round trip is not byte-exact");
  expect(validate_document(fixture("appendix_a.igt")).empty(), "appendix sample has alignment errors");

  const AnalyzedWord* giigwis = nullptr;
  for (const auto& e : doc)
    for (const auto& w : e.analyses)
      if (w.surface == "Giigwis") giigwis = &w;
  expect(giigwis != nullptr, "Giigwis token not found");
  const auto& m = giigwis->morphemes;
  expect(m.size() == 4, "expected 4 morphemes");
  struct Want {
    const char *form, *gloss;
    Boundary b;
    bool covert;
  } want[] = {{"giikw", "buy", Boundary::Stem, false},
              {"i", "TR", Boundary::Affix, false},
              {"t", "3.II", Boundary::Affix, true},
              {"s", "PN", Boundary::Clitic, false}};
  for (std::size_t i = 0; i < 4; ++i)
    expect(m[i].form == want[i].form && m[i].gloss == want[i].gloss && m[i].boundary == want[i].b && m[i].covert() == want[i].covert,
           "morpheme " + std::to_string(i) + " differs");
  return std::to_string(doc.size()) + " entries, Giigwis = giikw/buy Stem, i/TR Affix, t/3.II Affix covert, s/PN Clitic";
}

// --- paradigm --------------------------------------------------------------

std::string paradigm_fixtures() {
  const auto lex = parse_morph_classes(fixture("morph_classes.tsv"));
  expect(lex.lookup("VAL", "xw") == MorphClass::Derivational, "fixture lexicon does not mark VAL Derivational");
  auto r = analyze_word(parse_word("maaxwsxwa", "maaxws-xw-a", "fallen.snow-VAL-ATTR"), lex, {});
  expect(std::holds_alternative<CellCandidate>(r), "maaxwsxwa was skipped");
  const auto& c = std::get<CellCandidate>(r);
  expect(c.slot.name() == "ROOT-ATTR", "slot is " + c.slot.name());
  expect(c.variant_form == "maaxwsxw", "stem is " + c.variant_form);

  auto built = build_tables(parse_document(fixture("wa_corpus.igt"), "wa"), lex, {});
  const auto inv = compute_inventory(built.tables);
  const auto tsv = write_table_tsv(built.tables.at({"'wa", "'wa"}), inv);
  const std::string row = "ROOT-TR-3.II\tfind-TR-3.II\t'wa-i-t\t'wayit\t'wa-TR-3.II";
  bool found = false;
  for (const auto& line : text::lines(tsv)) found |= line == row;
  expect(found, "row not emitted; table was:\n" + tsv);
  return "ROOT-ATTR/maaxwsxw; emitted '" + row + "'";
}

// --- combinatorics ---------------------------------------------------------

std::string combinatorics() {
  std::mt19937_64 rng(2024);
  const int cases = 200;
  std::size_t max_k_seen = 0;
  for (int n = 0; n < cases; ++n) {
    std::uniform_int_distribution<int> tables(1, 8), k(1, 12);
    TableSet ts;
    std::size_t expected = 0;
    for (int t = tables(rng); t > 0; --t) {
      const std::size_t cells = static_cast<std::size_t>(k(rng));
      max_k_seen = std::max(max_k_seen, cells);
      ParadigmTable table{"L" + std::to_string(t), "L" + std::to_string(t), {}, {}};
      for (std::size_t j = 0; j < cells; ++j) {
        auto s = j == 0 ? SlotTemplate() : SlotTemplate::parse("ROOT-S" + std::to_string(j));
        table.cells[s] = {"g", "f", synthetic::random_string(rng, 'a', 1, 5), "t", Provenance::Attested};
      }
      expected += cells * (cells - 1);
      ts.emplace(table.key(), std::move(table));
    }
    const auto got = generate_pairs(ts).size();
    expect(got == expected, "case " + std::to_string(n) + ": " + std::to_string(got) + " pairs, expected " + std::to_string(expected));
  }
  return std::to_string(cases) + " random table sets, k in 1.." + std::to_string(max_k_seen) + ", count == sum k(k-1)";
}

// --- oracle equivalence ----------------------------------------------------

bool all_slot_pairs_attested(const synthetic::Family& f, const std::vector<CellRef>& train) {
  std::map<TableKey, std::set<SlotTemplate>> by_table;
  for (const auto& c : train) by_table[c.table].insert(c.slot);
  std::set<std::pair<SlotTemplate, SlotTemplate>> seen;
  for (const auto& [k, slots] : by_table)
    for (const auto& a : slots)
      for (const auto& b : slots)
        if (!(a == b)) seen.insert({a, b});
  return seen.size() == f.affixes.size() * (f.affixes.size() - 1);
}

std::string oracle_equivalence() {
  std::size_t families = 0, cells = 0, correct = 0;
  std::string seeds;
  for (std::uint64_t family_seed = 1; family_seed <= 5; ++family_seed) {
    std::mt19937_64 rng(family_seed);
    const auto fam = synthetic::make_family(10, 8, rng);
    const auto tables = synthetic::full_tables(fam);
    const auto inv = compute_inventory(tables);

    // Deterministic retry until every ordered slot pair co-occurs in train.
    SplitSpec spec;
    SplitResult split;
    for (spec.seed = 13;; ++spec.seed) {
      split = split_cells(tables, spec);
      if (all_slot_pairs_attested(fam, split.train)) break;
      expect(spec.seed < 13 + 1000, "no seed attests every slot pair");
    }
    seeds += (seeds.empty() ? "" : ",") + std::to_string(spec.seed);
    const auto train = restrict_to(tables, split.train);
    const auto model = train_rules(generate_pairs(train));
    const auto filled = fill_tables(model, train, inv);

    // Oracle: strip the known source affix, append the known target affix.
    std::map<SlotTemplate, std::string> affix;
    for (std::size_t j = 0; j < fam.affixes.size(); ++j) affix[synthetic::slot_of(fam, j)] = fam.affixes[j];
    auto oracle = [&](const ParadigmTable& t, const SlotTemplate& tgt) {
      const auto& [src_slot, src_cell] = *t.cells.begin();
      const auto& a = affix.at(src_slot);
      return src_cell.surface.substr(0, src_cell.surface.size() - a.size()) + affix.at(tgt);
    };
    for (const auto* part : {&split.dev, &split.test})
      for (const auto& c : *part) {
        ++cells;
        const auto want = oracle(train.at(c.table), c.slot);
        const auto got = filled.at(c.table).cells.at(c.slot).surface;
        expect(got == want, "family " + std::to_string(family_seed) + " " + c.table.first + " " + c.slot.name() + ": predicted '" + got +
                                "', oracle '" + want + "'");
        ++correct;
      }
    ++families;
  }
  return std::to_string(families) + " families of 10x8, " + std::to_string(correct) + "/" + std::to_string(cells) +
         " held-out cells equal the oracle (100%); split seeds " + seeds;
}

// --- memorization ----------------------------------------------------------

std::string memorization() {
  std::size_t corpora = 0, checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nt(2, 12), nk(2, 6), sym(0, 3);
    // Small alphabet so suffixes, prefixes and whole forms collide often.
    auto word = [&] {
      std::string s;
      for (int n = 1 + sym(rng) + sym(rng); n > 0; --n) s += static_cast<char>('a' + sym(rng));
      return s;
    };
    TableSet ts;
    for (int t = nt(rng); t > 0; --t) {
      ParadigmTable table{"L" + std::to_string(t), "L" + std::to_string(t), {}, {}};
      for (int j = nk(rng); j > 0; --j) {
        auto s = SlotTemplate::parse("ROOT-S" + std::to_string(sym(rng) + sym(rng)));
        table.cells[s] = {"g", "f", word(), "t", Provenance::Attested};
      }
      ts.emplace(table.key(), std::move(table));
    }
    const auto pairs = generate_pairs(ts);
    if (pairs.empty()) continue;
    const auto model = train_rules(pairs);
    std::map<std::tuple<std::string, SlotTemplate, SlotTemplate>, std::set<std::string>> targets;
    for (const auto& p : pairs) targets[{p.src_form, p.src_slot, p.tgt_slot}].insert(p.tgt_form);
    for (const auto& p : pairs) {
      if (targets.at({p.src_form, p.src_slot, p.tgt_slot}).size() != 1) continue;
      const auto got = apply_rules(model, p.src_form, p.src_slot, p.tgt_slot).form;
      expect(got == p.tgt_form, "corpus " + std::to_string(seed) + ": " + p.src_form + " " + p.src_slot.name() + "->" + p.tgt_slot.name() +
                                    " gave '" + got + "', trained on '" + p.tgt_form + "'");
      ++checked;
    }
    ++corpora;
  }
  return std::to_string(checked) + " unambiguous training pairs over " + std::to_string(corpora) + " random corpora reproduced exactly";
}

// --- determinism -----------------------------------------------------------

std::map<std::string, std::string> pipeline_artifacts(const fs::path& dir, const std::string& corpus) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto d = [&](const std::string& n) { return (dir / n).string(); };
  std::ostringstream out, err;
  auto step = [&](std::vector<std::string> args) {
    const int code = cli::run(args, out, err);
    expect(code == 0, args[0] + " exited " + std::to_string(code) + ": " + err.str());
  };
  step({"build-tables", corpus, "--out", d("tables")});
  step({"split", d("tables"), "--seed", "13", "--out", d("split.tsv")});
  step({"train", d("tables"), "--split", d("split.tsv"), "--out", d("model.tsv"), "--pairs", d("pairs.tsv"), "--threads", "3"});
  step({"fill", d("tables"), "--model", d("model.tsv"), "--split", d("split.tsv"), "--out", d("filled")});
  step({"eval", d("filled/predictions.tsv"), d("filled/gold.tsv"), "--out", d("eval.txt")});
  step({"gen-exercises", d("filled"), "--out", d("exercises.json")});
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = text::read_file(e.path().string());
  files["<stdout>"] = out.str();
  return files;
}

std::string determinism() {
  const auto root = fs::temp_directory_path() / "glossfill_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::mt19937_64 rng(77);
  auto fam = synthetic::make_family(30, 8, rng);
  const auto corpus = (root / "corpus.igt").string();
  text::write_file(corpus, synthetic::igt(fam, 0.6, rng) + fixture("gitksan_sample.igt"));
  const auto a = pipeline_artifacts(root / "a", corpus);
  const auto b = pipeline_artifacts(root / "b", corpus);
  expect(a.size() == b.size(), "runs wrote different file sets");
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    expect(it != b.end(), "second run lacks " + name);
    expect(it->second == content, name + " differs between runs");
  }
  fs::remove_all(root);
  return std::to_string(a.size()) + " artifacts byte-identical across two seed-13 runs";
}

// --- split ratios ----------------------------------------------------------

std::string split_ratios() {
  const SplitSpec spec; // seed 13, (0.668, 0.235, 0.097)
  auto check_invariants = [&](const TableSet& ts, const SplitResult& s) {
    std::set<CellRef> seen;
    std::size_t total = 0;
    for (const auto& [k, t] : ts) total += t.cells.size();
    for (const auto* part : {&s.train, &s.dev, &s.test})
      for (const auto& c : *part) {
        expect(seen.insert(c).second, "cell in two splits");
        expect(ts.contains(c.table) && ts.at(c.table).cells.contains(c.slot), "split cell not attested");
      }
    expect(seen.size() == total, "partition is not exhaustive");
    std::set<TableKey> trained;
    for (const auto& c : s.train) trained.insert(c.table);
    expect(trained.size() == ts.size(), "a table has no train cell");
  };

  // Unconstrained: 107 tables of 12 cells; the per-table minimum never binds.
  TableSet ts;
  for (int t = 0; t < 107; ++t) {
    ParadigmTable table{"L" + std::to_string(t), "L" + std::to_string(t), {}, {}};
    for (int j = 0; j < 12; ++j)
      table.cells[j == 0 ? SlotTemplate() : SlotTemplate::parse("ROOT-S" + std::to_string(j))] = {"g", "f", "w", "t", Provenance::Attested};
    ts.emplace(table.key(), std::move(table));
  }
  const auto s = split_cells(ts, spec);
  check_invariants(ts, s);
  const std::array<double, 3> want{858, 302, 124};
  const std::array<std::size_t, 3> got{s.train.size(), s.dev.size(), s.test.size()};
  expect(got[0] + got[1] + got[2] == 1284, "cell total changed");
  for (int i = 0; i < 3; ++i)
    expect(std::abs(static_cast<double>(got[i]) - want[i]) <= 0.01 * want[i], "split " + std::to_string(i) + " size " + std::to_string(got[i]));

  // Constrained: many single-cell tables; invariants must still hold.
  std::mt19937_64 rng(9);
  for (int round = 0; round < 20; ++round) {
    TableSet cs;
    std::uniform_int_distribution<int> k(1, 4);
    for (int t = 0; t < 300; ++t) {
      ParadigmTable table{"C" + std::to_string(t), "C" + std::to_string(t), {}, {}};
      for (int j = k(rng) == 1 ? 1 : k(rng); j > 0; --j)
        table.cells[j == 1 ? SlotTemplate() : SlotTemplate::parse("ROOT-S" + std::to_string(j))] = {"g", "f", "w", "t", Provenance::Attested};
      cs.emplace(table.key(), std::move(table));
    }
    SplitSpec sp;
    sp.seed = static_cast<std::uint64_t>(round);
    check_invariants(cs, split_cells(cs, sp));
  }
  return "1284 cells -> " + std::to_string(got[0]) + "/" + std::to_string(got[1]) + "/" + std::to_string(got[2]) +
         " (target 858/302/124 +-1%); partition and per-table invariants hold on 20 constrained corpora";
}

// --- metrics ---------------------------------------------------------------

std::string metrics() {
  CellForms preds, golds;
  for (int i = 0; i < 124; ++i) {
    CellRef c{{"x", "x"}, SlotTemplate::parse("ROOT-S" + std::to_string(i))};
    golds[c] = "g";
    preds[c] = i < 108 ? "g" : "p";
  }
  const double acc = accuracy(preds, golds).accuracy;
  expect(std::abs(acc - 0.8709) <= 1e-4, "accuracy(108, 124) = " + std::to_string(acc));

  double worst = 0;
  for (int k = 1; k <= 9; ++k) {
    std::vector<double> b(10, 0.0);
    std::fill_n(b.begin(), k, 1.0);
    const double mu = k / 10.0;
    worst = std::max(worst, std::abs(generalized_entropy(b, 2.0) - (1 - mu) / (2 * mu)));
  }
  expect(worst <= 1e-12, "GE_2 deviates by " + std::to_string(worst));

  const std::map<std::string, GroupScore> groups{{"East", {9, 10}}, {"West", {8, 10}}};
  const double sd = dialect_stddev(groups);
  expect(sd == 0.05, "stddev = " + std::to_string(sd));
  std::ostringstream os;
  os.precision(17);
  os << "accuracy " << acc << "; max |GE_2 - (1-mu)/(2mu)| = " << worst << "; stddev{0.9,0.8} = " << sd;
  return os.str();
}

// --- service contract ------------------------------------------------------

std::string service_contract() {
  const auto lex = parse_morph_classes(fixture("morph_classes.tsv"));
  const auto reg = parse_variants(fixture("variants.tsv"));
  std::size_t exercises = 0, wrong_checked = 0;
  for (const char* name : {"wa_corpus.igt", "gitksan_sample.igt"}) {
    const auto tables = build_tables(parse_document(fixture(name), name), lex, reg).tables;
    const auto ex = generate_exercises(tables);
    ExerciseService svc(ex, [] { return std::int64_t{0}; });
    const auto sid = svc.create_session().body.at("session_id").get<std::string>();
    std::set<std::string> strings;
    for (const auto& [k, t] : tables)
      for (const auto& [s, c] : t.cells)
        for (const auto& v : {c.gloss, c.segmentation, c.surface, c.stem_tag}) strings.insert(v);
    for (const auto& e : ex) {
      auto ok = svc.answer(e.id, nlohmann::json{{"session", sid}, {"attempt", e.answer}}.dump());
      expect(ok.status == 200 && ok.body.at("correct") == true, "stored answer rejected for " + e.id);
      for (const auto& other : strings) {
        if (other == e.answer) continue;
        auto bad = svc.answer(e.id, nlohmann::json{{"session", sid}, {"attempt", other}}.dump());
        expect(bad.status == 200 && bad.body.at("correct") == false, "'" + other + "' accepted for " + e.id);
        ++wrong_checked;
      }
      ++exercises;
    }
  }
  return std::to_string(exercises) + " exercises accept their stored answer; " + std::to_string(wrong_checked) +
         " other table strings rejected";
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"parser fixtures", parser_fixtures, 1.0},
      {"paradigm fixtures", paradigm_fixtures},
      {"combinatorics", combinatorics},
      {"oracle equivalence", oracle_equivalence, 5.0},
      {"memorization", memorization},
      {"determinism", determinism},
      {"split ratios", split_ratios},
      {"metrics", metrics},
      {"service contract", service_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) failed += !report(c);
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
