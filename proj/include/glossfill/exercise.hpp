#pragma once

// Fill-in-the-blank inflection drills generated from completed tables, with
// per-session three-box Leitner scheduling.

#include "glossfill/error.hpp"
#include "glossfill/paradigm.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace glossfill {

class ExerciseError : public Error {
public:
  using Error::Error;
};

struct Exercise {
  std::string id;
  std::string lexeme_id;
  std::string variant_form;
  std::optional<std::string> dialect;
  SlotTemplate slot;
  std::string prompt;
  std::string answer;
  Provenance provenance = Provenance::Attested;

  bool operator==(const Exercise&) const = default;
};

/// Empty sets mean "no restriction". Dialect names match VariantKind::group(),
/// so "unmarked" selects canonical and orthographic variants.
struct ExerciseFilter {
  std::set<std::string> dialects;
  std::set<std::string> slots;
  std::set<Provenance> provenance{Provenance::Attested, Provenance::Predicted};
};

/// Learner-facing wording for gloss labels (TR -> "transitive").
class LabelDescriptions {
public:
  static LabelDescriptions defaults();
  /// TSV `label \t description`; rows override defaults.
  static LabelDescriptions parse(std::string_view tsv, LabelDescriptions base = defaults());

  void set(std::string label, std::string description);
  /// Unknown labels describe themselves.
  std::string describe(const std::string& label) const;
  /// e.g. "transitive, 3rd person (II)"; the bare ROOT slot is "bare stem".
  std::string describe(const SlotTemplate& slot) const;

private:
  std::map<std::string, std::string> map_;
};

/// One exercise per (table, slot) that passes the filter, in table then
/// slot order. Cells whose answer would appear verbatim in the
/// prompt are left out. Throws ExerciseError(EmptyAfterFilter).
std::vector<Exercise> generate_exercises(const TableSet& tables, const ExerciseFilter& filter = {},
                                         const LabelDescriptions& labels = LabelDescriptions::defaults());

nlohmann::json to_json(const Exercise& e, bool include_answer);
Exercise exercise_from_json(const nlohmann::json& j);

std::string write_exercises_json(const std::vector<Exercise>& exercises);
std::vector<Exercise> read_exercises_json(std::string_view text);

/// Answer comparison: NFC-normalised, surrounding white space ignored.
bool answer_matches(std::string_view attempt, std::string_view answer);

struct Attempt {
  std::string exercise_id;
  std::string attempt;
  bool correct;
  std::int64_t timestamp_ms;
};

/// Leitner state for one learner. Box 1 holds new and missed items, box 2
/// items answered correctly once, box 3 mastered items. Not thread-safe on
/// its own; the service serialises access per session.
class Session {
public:
  static constexpr int kBoxes = 3;

  Session(std::string id, const std::vector<Exercise>& exercises);

  const std::string& id() const noexcept { return id_; }
  const std::vector<Attempt>& history() const noexcept { return history_; }
  const std::array<std::deque<std::string>, kBoxes>& boxes() const noexcept { return boxes_; }

  /// 1-based box of an exercise; throws ExerciseError(UnknownExercise).
  int box_of(const std::string& exercise_id) const;
  bool contains(const std::string& exercise_id) const { return box_.contains(exercise_id); }

  /// Move an item to the back of `box` (1-based).
  void move(const std::string& exercise_id, int box);
  void record(Attempt a) { history_.push_back(std::move(a)); }

  nlohmann::json to_json() const;
  static Session from_json(const nlohmann::json& j);

private:
  Session() = default;

  std::string id_;
  std::array<std::deque<std::string>, kBoxes> boxes_;
  std::map<std::string, int> box_;
  std::vector<Attempt> history_;
};

/// Front of the lowest non-empty learning box (1 or 2) among items accepted
/// by `dialect`. Throws ExerciseError(SessionExhausted) when every matching
/// item is mastered or nothing matches.
const Exercise& next_exercise(const Session& s, const std::map<std::string, Exercise>& exercises,
                              const std::optional<std::string>& dialect = std::nullopt);

struct AnswerResult {
  bool correct;
  std::string expected;
  int box; ///< box after the move
};

/// Correct answers move the item up one box (at most 3), wrong ones back to
/// box 1. Throws ExerciseError(UnknownExercise).
AnswerResult check_answer(Session& s, const std::map<std::string, Exercise>& exercises, const std::string& exercise_id,
                          std::string_view attempt, std::int64_t timestamp_ms = 0);

/// Transport-independent request handling for the drill API. Each method
/// returns an HTTP status and a JSON body; errors are {error, detail} with
/// status 400 or 404.
class ExerciseService {
public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };
  using Clock = std::function<std::int64_t()>;

  explicit ExerciseService(std::vector<Exercise> exercises, Clock clock = {});

  Response create_session();
  Response next(const std::string& session_id, const std::optional<std::string>& dialect);
  /// `body` is the raw request body: {"session": ..., "attempt": ...}.
  Response answer(const std::string& exercise_id, std::string_view body);
  Response progress(const std::string& session_id);

  const std::map<std::string, Exercise>& exercises() const noexcept { return exercises_; }

  nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snapshot);

private:
  struct Slot {
    std::mutex mu;
    Session session;
    explicit Slot(Session s) : session(std::move(s)) {}
  };
  std::shared_ptr<Slot> find(const std::string& session_id) const;

  std::map<std::string, Exercise> exercises_;
  std::vector<Exercise> ordered_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_session_ = 1;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080; ///< 0 picks a free port
  std::string static_dir; ///< served at / when set
};

/// HTTP front end for ExerciseService (cpp-httplib).
class HttpServer {
public:
  HttpServer(ExerciseService& service, ServerOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Bind and return the bound port. Throws ExerciseError(BindFailed).
  int bind();
  /// Serve until stop(); blocks.
  void listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace glossfill
