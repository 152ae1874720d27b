#include "glossfill/cli.hpp"

#include "glossfill/evaluation.hpp"
#include "glossfill/exercise.hpp"
#include "glossfill/igt.hpp"
#include "glossfill/lexicon.hpp"
#include "glossfill/paradigm.hpp"
#include "glossfill/reinflection.hpp"
#include "glossfill/text.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace glossfill::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  // validate
  std::string corpus;
  // build-tables
  std::string morph_classes, variants, out;
  bool include_covert = false;
  bool keep_initial_case = false;
  // split / train / fill
  std::string tables, split;
  std::uint64_t seed = 13;
  std::vector<double> ratios{0.668, 0.235, 0.097};
  std::string model, pairs, neural;
  unsigned threads = 1;
  std::string eval_on = "test";
  // eval
  std::string predictions, gold;
  double alpha = 2.0;
  std::string benefits = "per-cell";
  // gen-exercises / serve
  std::vector<std::string> dialects, slots;
  bool include_predicted = true;
  std::string label_descriptions, exercises, snapshot, static_dir, host = "127.0.0.1";
  int port = 8080;
};

void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    text::write_file(path, content);
}

VariantRegistry variants_or_empty(const std::string& path) {
  if (path.empty()) return {};
  auto reg = load_variants(path);
  reg.validate();
  return reg;
}

SplitSpec make_spec(const Options& o) {
  SplitSpec spec;
  spec.seed = o.seed;
  if (o.ratios.size() != 3) throw ReinflectionError("InvalidSplitSpec", "--ratios needs three values");
  std::copy(o.ratios.begin(), o.ratios.end(), spec.ratios.begin());
  spec.validate();
  return spec;
}

std::string location(int entry, int line) {
  std::string s;
  if (entry >= 0) s += "entry " + std::to_string(entry);
  if (line >= 0) s += (s.empty() ? "" : " ") + std::string("line ") + std::to_string(line);
  return s.empty() ? s : s + ": ";
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto doc = text::read_file(o.corpus);
  const auto issues = validate_document(doc);
  for (const auto& i : issues) out << location(i.entry, i.line) << i.code << ": " << i.detail << "\n";
  out << issues.size() << " alignment errors\n";
  return issues.empty() ? kOk : kDataError;
}

int cmd_build_tables(const Options& o, std::ostream& out) {
  const auto corpus = parse_document(text::read_file(o.corpus), fs::path(o.corpus).filename().string());
  const auto morph = o.morph_classes.empty() ? MorphClassLexicon{} : load_morph_classes(o.morph_classes);
  const auto variants = variants_or_empty(o.variants);
  BuildOptions bo;
  bo.include_covert = o.include_covert;
  bo.fold_initial_case = !o.keep_initial_case;
  auto result = build_tables(corpus, morph, variants, bo);
  const auto inv = compute_inventory(result.tables);
  write_table_dir(o.out, result.tables, inv);

  std::ostringstream review;
  review << "kind\tdetail\n";
  for (const auto& [id, skip] : result.report.skipped) review << "skip\t" << id << ": " << to_string(skip.reason) << ": " << skip.detail << "\n";
  for (const auto& c : result.report.conflicts) {
    review << "conflict\t" << c.table.first << "/" << c.table.second << " " << c.slot.name() << ": kept " << c.kept;
    for (const auto& [s, n] : c.surfaces) review << " " << s << "=" << n;
    review << "\n";
  }
  for (const auto& [d, n] : result.report.defaulted)
    review << "defaulted\t" << d.label << " " << d.form << " -> "
           << (d.cls == MorphClass::Inflectional ? "Inflectional" : "Derivational") << " x" << n << "\n";
  text::write_file((fs::path(o.out) / "review.tsv").string(), review.str());

  out << result.report.summary();
  out << "tables: " << result.tables.size() << "\n";
  out << "slots: " << inv.slots.size() << "\n";
  return kOk;
}

int cmd_split(const Options& o, std::ostream& out) {
  const auto spec = make_spec(o);
  const auto [tables, inv] = read_table_dir(o.tables);
  const auto split = split_cells(tables, spec);
  write_or_print(o.out, write_split_tsv(split, spec, tables), out);
  if (!o.out.empty() && o.out != "-")
    out << "train: " << split.train.size() << "\ndev: " << split.dev.size() << "\ntest: " << split.test.size() << "\n";
  return kOk;
}

// Tables reduced to the train cells of a split file, or all tables if none.
std::pair<TableSet, SlotInventory> training_tables(const Options& o, SplitSpec* spec, SplitResult* split) {
  auto [tables, inv] = read_table_dir(o.tables);
  if (o.split.empty()) return {std::move(tables), std::move(inv)};
  auto [s, r] = read_split_tsv(text::read_file(o.split));
  for (const auto* part : {&r.train, &r.dev, &r.test})
    for (const auto& c : *part) {
      auto t = tables.find(c.table);
      if (t == tables.end() || !t->second.cells.contains(c.slot))
        throw ReinflectionError("UnknownCell", "split names a cell not in the tables: " + c.table.first + "/" + c.table.second + " " + c.slot.name());
    }
  auto train = restrict_to(tables, r.train);
  if (spec) *spec = s;
  if (split) *split = std::move(r);
  return {std::move(train), std::move(inv)};
}

int cmd_train(const Options& o, std::ostream& out) {
  SplitSpec spec;
  spec.seed = o.seed;
  const auto [tables, inv] = training_tables(o, &spec, nullptr);
  const auto pairs = generate_pairs(tables);
  const auto model = train_rules(pairs, std::max(1u, o.threads));
  text::write_file(o.model, model.to_tsv());
  if (!o.pairs.empty()) text::write_file(o.pairs, write_pairs_tsv(pairs, spec));
  if (!o.neural.empty()) {
    fs::create_directories(o.neural);
    auto [src, tgt] = write_neural_dataset(pairs);
    text::write_file((fs::path(o.neural) / "train.src").string(), src);
    text::write_file((fs::path(o.neural) / "train.tgt").string(), tgt);
    text::write_file((fs::path(o.neural) / "fairseq_args.txt").string(), text::join(NeuralConfig{}.fairseq_args(), "\n") + "\n");
  }
  out << "pairs: " << pairs.size() << "\n";
  out << "rules: " << model.rule_count() << "\n";
  return kOk;
}

int cmd_fill(const Options& o, std::ostream& out) {
  SplitResult split;
  const auto [tables, inv] = training_tables(o, nullptr, &split);
  const auto model = RuleModel::from_tsv(text::read_file(o.model));
  const auto filled = fill_tables(model, tables, inv);
  write_table_dir(o.out, filled, inv);

  std::size_t predicted = 0;
  for (const auto& [k, t] : filled) predicted += t.cells.size() - t.attested_count();
  out << "tables: " << filled.size() << "\n";
  out << "predicted_cells: " << predicted << "\n";

  if (!o.split.empty()) {
    const auto [all, all_inv] = read_table_dir(o.tables);
    const auto& held = o.eval_on == "dev" ? split.dev : split.test;
    CellForms preds, golds;
    for (const auto& c : held) {
      golds.emplace(c, all.at(c.table).cells.at(c.slot).surface);
      preds.emplace(c, filled.at(c.table).cells.at(c.slot).surface);
    }
    text::write_file((fs::path(o.out) / "predictions.tsv").string(), write_cell_forms(preds));
    text::write_file((fs::path(o.out) / "gold.tsv").string(), write_cell_forms(golds));
    out << "held_out_cells: " << held.size() << "\n";
  }
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto preds = read_cell_forms(text::read_file(o.predictions));
  const auto golds = read_cell_forms(text::read_file(o.gold));
  const auto variants = variants_or_empty(o.variants);
  const auto mode = o.benefits == "per-dialect" ? BenefitMode::PerDialect : BenefitMode::PerCell;
  const auto report = evaluate(preds, golds, variants, o.alpha, mode);
  write_or_print(o.out, report.to_text(), out);
  return kOk;
}

int cmd_gen_exercises(const Options& o, std::ostream& out) {
  const auto [tables, inv] = read_table_dir(o.tables);
  ExerciseFilter filter;
  filter.dialects = {o.dialects.begin(), o.dialects.end()};
  filter.slots = {o.slots.begin(), o.slots.end()};
  if (!o.include_predicted) filter.provenance = {Provenance::Attested};
  const auto labels = o.label_descriptions.empty() ? LabelDescriptions::defaults()
                                                   : LabelDescriptions::parse(text::read_file(o.label_descriptions));
  const auto exercises = generate_exercises(tables, filter, labels);
  write_or_print(o.out, write_exercises_json(exercises), out);
  if (!o.out.empty() && o.out != "-") out << "exercises: " << exercises.size() << "\n";
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ExerciseService service(read_exercises_json(text::read_file(o.exercises)));
  if (!o.snapshot.empty() && fs::exists(o.snapshot)) {
    try {
      service.restore(nlohmann::json::parse(text::read_file(o.snapshot)));
    } catch (const nlohmann::json::exception& e) {
      throw ExerciseError("MalformedSnapshot", e.what());
    }
  }
  ServerOptions so;
  so.host = o.host;
  so.port = o.port;
  so.static_dir = o.static_dir;

  // Route SIGINT/SIGTERM to a waiter thread so shutdown runs outside a
  // signal handler. Blocked before the server spawns its workers.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  HttpServer server(service, so);
  const int port = server.bind();
  out << "listening on http://" << so.host << ":" << port << "\n" << std::flush;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  server.listen();
  kill(getpid(), SIGTERM); // release the waiter if listen returned on its own
  waiter.join();
  if (!o.snapshot.empty()) text::write_file(o.snapshot, service.snapshot().dump(2) + "\n");
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Paradigm tables, cell filling and inflection drills from interlinear glossed text", "glossfill"};
  app.set_config("--config", "", "INI/TOML file with one [subcommand] section per subcommand")->envname("PF_CONFIG");
  app.allow_config_extras(true);
  app.require_subcommand(1, 1);

  auto* validate = app.add_subcommand("validate", "Check IGT alignment and report errors");
  validate->add_option("corpus,--corpus", o.corpus, "IGT corpus file")->required()->check(CLI::ExistingFile);

  auto* build = app.add_subcommand("build-tables", "Build sparse paradigm tables from a corpus");
  build->add_option("corpus,--corpus", o.corpus, "IGT corpus file")->required()->check(CLI::ExistingFile);
  build->add_option("--morph-classes", o.morph_classes, "label/form class TSV")->check(CLI::ExistingFile);
  build->add_option("--variants", o.variants, "variant registry TSV")->check(CLI::ExistingFile);
  build->add_option("--out", o.out, "output table directory")->required();
  build->add_flag("--include-covert", o.include_covert, "keep covert labels in slot names");
  build->add_flag("--keep-initial-case", o.keep_initial_case, "do not lowercase sentence-initial surfaces");

  auto* split = app.add_subcommand("split", "Split attested cells into train/dev/test");
  split->add_option("tables,--tables", o.tables, "table directory")->required()->check(CLI::ExistingDirectory);
  split->add_option("--seed", o.seed, "random seed")->capture_default_str();
  split->add_option("--ratios", o.ratios, "train,dev,test ratios")->delimiter(',')->expected(3)->capture_default_str();
  split->add_option("--out", o.out, "split TSV (default stdout)");

  auto* train = app.add_subcommand("train", "Learn rewrite rules from training pairs");
  train->add_option("tables,--tables", o.tables, "table directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--split", o.split, "split TSV; only train cells are used")->check(CLI::ExistingFile);
  train->add_option("--out", o.model, "model TSV")->required();
  train->add_option("--pairs", o.pairs, "also write the training pairs TSV");
  train->add_option("--neural", o.neural, "also write a character-level dataset for an external transformer");
  train->add_option("--threads", o.threads, "worker threads")->capture_default_str();

  auto* fill = app.add_subcommand("fill", "Predict empty cells with a trained model");
  fill->add_option("tables,--tables", o.tables, "table directory")->required()->check(CLI::ExistingDirectory);
  fill->add_option("--model", o.model, "model TSV")->required()->check(CLI::ExistingFile);
  fill->add_option("--split", o.split, "split TSV; fill from train cells and write held-out predictions")->check(CLI::ExistingFile);
  fill->add_option("--eval-on", o.eval_on, "held-out part written with --split")->check(CLI::IsMember({"dev", "test"}))->capture_default_str();
  fill->add_option("--out", o.out, "output table directory")->required();

  auto* eval = app.add_subcommand("eval", "Score predictions against gold forms");
  eval->add_option("predictions,--predictions", o.predictions, "predicted cell forms")->required()->check(CLI::ExistingFile);
  eval->add_option("gold,--gold", o.gold, "gold cell forms")->required()->check(CLI::ExistingFile);
  eval->add_option("--variants", o.variants, "variant registry TSV for dialect groups")->check(CLI::ExistingFile);
  eval->add_option("--alpha", o.alpha, "generalized entropy alpha")->capture_default_str();
  eval->add_option("--benefits", o.benefits, "per-cell or per-dialect")->check(CLI::IsMember({"per-cell", "per-dialect"}))->capture_default_str();
  eval->add_option("--out", o.out, "report file (default stdout)");

  auto* gen = app.add_subcommand("gen-exercises", "Generate drill exercises from tables");
  gen->add_option("tables,--tables", o.tables, "table directory")->required()->check(CLI::ExistingDirectory);
  gen->add_option("--dialect", o.dialects, "keep only these dialect groups (repeatable; 'unmarked' for non-dialect)");
  gen->add_option("--slot", o.slots, "keep only these slots (repeatable)");
  gen->add_option("--include-predicted", o.include_predicted, "include predicted cells")->capture_default_str();
  gen->add_option("--label-descriptions", o.label_descriptions, "label/description TSV")->check(CLI::ExistingFile);
  gen->add_option("--out", o.out, "exercise JSON (default stdout)");

  auto* serve = app.add_subcommand("serve", "Serve the drill API over HTTP");
  serve->add_option("exercises,--exercises", o.exercises, "exercise JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--host", o.host, "bind address")->capture_default_str();
  serve->add_option("--port", o.port, "port (0 picks a free one)")->capture_default_str();
  serve->add_option("--static", o.static_dir, "directory served at /")->check(CLI::ExistingDirectory);
  serve->add_option("--snapshot", o.snapshot, "session state restored at start and saved at shutdown");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "glossfill: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (build->parsed()) return cmd_build_tables(o, out);
    if (split->parsed()) return cmd_split(o, out);
    if (train->parsed()) return cmd_train(o, out);
    if (fill->parsed()) return cmd_fill(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (gen->parsed()) return cmd_gen_exercises(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
  } catch (const Error& e) {
    err << "glossfill: " << e.code() << ": " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "glossfill: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace glossfill::cli
