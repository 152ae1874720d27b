#include "glossfill/exercise.hpp"

#include <algorithm>
#include <chrono>

namespace glossfill {

Session::Session(std::string id, const std::vector<Exercise>& exercises) : id_(std::move(id)) {
  for (const auto& e : exercises) {
    if (box_.emplace(e.id, 1).second) boxes_[0].push_back(e.id);
  }
}

int Session::box_of(const std::string& exercise_id) const {
  auto it = box_.find(exercise_id);
  if (it == box_.end()) throw ExerciseError("UnknownExercise", "exercise '" + exercise_id + "' is not in this session");
  return it->second;
}

void Session::move(const std::string& exercise_id, int box) {
  const int from = box_of(exercise_id);
  box = std::clamp(box, 1, kBoxes);
  auto& q = boxes_[from - 1];
  q.erase(std::find(q.begin(), q.end(), exercise_id));
  boxes_[box - 1].push_back(exercise_id);
  box_[exercise_id] = box;
}

nlohmann::json Session::to_json() const {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& q : boxes_) boxes.push_back(std::vector<std::string>(q.begin(), q.end()));
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& a : history_)
    hist.push_back({{"exercise_id", a.exercise_id}, {"attempt", a.attempt}, {"correct", a.correct}, {"timestamp_ms", a.timestamp_ms}});
  return {{"session_id", id_}, {"boxes", boxes}, {"history", hist}};
}

Session Session::from_json(const nlohmann::json& j) {
  Session s;
  s.id_ = j.at("session_id").get<std::string>();
  const auto& boxes = j.at("boxes");
  if (!boxes.is_array() || boxes.size() != kBoxes) throw ExerciseError("MalformedSnapshot", "session needs three boxes");
  for (int b = 0; b < kBoxes; ++b) {
    for (const auto& id : boxes[b]) {
      auto name = id.get<std::string>();
      if (!s.box_.emplace(name, b + 1).second) throw ExerciseError("MalformedSnapshot", "exercise in two boxes: " + name);
      s.boxes_[b].push_back(std::move(name));
    }
  }
  for (const auto& a : j.at("history"))
    s.history_.push_back({a.at("exercise_id").get<std::string>(), a.at("attempt").get<std::string>(), a.at("correct").get<bool>(),
                          a.at("timestamp_ms").get<std::int64_t>()});
  return s;
}

const Exercise& next_exercise(const Session& s, const std::map<std::string, Exercise>& exercises,
                              const std::optional<std::string>& dialect) {
  // Box 3 holds mastered items and is never drawn from.
  for (int b = 0; b < Session::kBoxes - 1; ++b) {
    for (const auto& id : s.boxes()[b]) {
      auto it = exercises.find(id);
      if (it == exercises.end()) continue;
      if (dialect && it->second.dialect.value_or("unmarked") != *dialect) continue;
      return it->second;
    }
  }
  throw ExerciseError("SessionExhausted", "no exercises left in session " + s.id());
}

AnswerResult check_answer(Session& s, const std::map<std::string, Exercise>& exercises, const std::string& exercise_id,
                          std::string_view attempt, std::int64_t timestamp_ms) {
  auto it = exercises.find(exercise_id);
  if (it == exercises.end() || !s.contains(exercise_id))
    throw ExerciseError("UnknownExercise", "exercise '" + exercise_id + "' is not in this session");
  const Exercise& e = it->second;
  const bool ok = answer_matches(attempt, e.answer);
  const int box = ok ? std::min(s.box_of(exercise_id) + 1, Session::kBoxes) : 1;
  s.move(exercise_id, box);
  s.record({exercise_id, std::string(attempt), ok, timestamp_ms});
  return {ok, e.answer, box};
}

namespace {

ExerciseService::Response error(int status, std::string_view code, std::string_view detail) {
  return {status, {{"error", code}, {"detail", detail}}};
}

std::int64_t wall_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

} // namespace

ExerciseService::ExerciseService(std::vector<Exercise> exercises, Clock clock)
    : ordered_(std::move(exercises)), clock_(clock ? std::move(clock) : Clock(wall_clock_ms)) {
  for (const auto& e : ordered_)
    if (!exercises_.emplace(e.id, e).second) throw ExerciseError("IdCollision", "duplicate exercise id " + e.id);
}

std::shared_ptr<ExerciseService::Slot> ExerciseService::find(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

ExerciseService::Response ExerciseService::create_session() {
  std::lock_guard lock(mu_);
  std::string id = "s" + std::to_string(next_session_++);
  sessions_.emplace(id, std::make_shared<Slot>(Session(id, ordered_)));
  return {200, {{"session_id", id}}};
}

ExerciseService::Response ExerciseService::next(const std::string& session_id, const std::optional<std::string>& dialect) {
  if (session_id.empty()) return error(400, "BadRequest", "missing 'session' parameter");
  auto slot = find(session_id);
  if (!slot) return error(404, "UnknownSession", "no session '" + session_id + "'");
  std::lock_guard lock(slot->mu);
  try {
    const Exercise& e = next_exercise(slot->session, exercises_, dialect);
    nlohmann::json body = to_json(e, false);
    body["box"] = slot->session.box_of(e.id);
    return {200, body};
  } catch (const ExerciseError& ex) {
    return error(404, ex.code(), ex.what());
  }
}

ExerciseService::Response ExerciseService::answer(const std::string& exercise_id, std::string_view raw) {
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    return error(400, "BadRequest", "body is not valid JSON");
  }
  if (!body.is_object() || !body.contains("session") || !body["session"].is_string() || !body.contains("attempt") ||
      !body["attempt"].is_string())
    return error(400, "BadRequest", "body must be {\"session\": string, \"attempt\": string}");
  const auto session_id = body["session"].get<std::string>();
  auto slot = find(session_id);
  if (!slot) return error(404, "UnknownSession", "no session '" + session_id + "'");
  std::lock_guard lock(slot->mu);
  try {
    auto r = check_answer(slot->session, exercises_, exercise_id, body["attempt"].get<std::string>(), clock_());
    return {200, {{"correct", r.correct}, {"expected", r.expected}, {"box", r.box}}};
  } catch (const ExerciseError& ex) {
    return error(404, ex.code(), ex.what());
  }
}

ExerciseService::Response ExerciseService::progress(const std::string& session_id) {
  if (session_id.empty()) return error(400, "BadRequest", "missing 'session' parameter");
  auto slot = find(session_id);
  if (!slot) return error(404, "UnknownSession", "no session '" + session_id + "'");
  std::lock_guard lock(slot->mu);
  const Session& s = slot->session;
  std::size_t correct = 0;
  for (const auto& a : s.history()) correct += a.correct;
  const std::size_t attempts = s.history().size();
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& q : s.boxes()) boxes.push_back(q.size());
  return {200,
          {{"session_id", s.id()},
           {"boxes", boxes},
           {"attempts", attempts},
           {"correct", correct},
           {"accuracy", attempts ? static_cast<double>(correct) / static_cast<double>(attempts) : 0.0}}};
}

nlohmann::json ExerciseService::snapshot() const {
  std::lock_guard lock(mu_);
  nlohmann::json sessions = nlohmann::json::array();
  for (const auto& [id, slot] : sessions_) {
    std::lock_guard inner(slot->mu);
    sessions.push_back(slot->session.to_json());
  }
  return {{"next_session", next_session_}, {"sessions", sessions}};
}

void ExerciseService::restore(const nlohmann::json& snap) {
  std::map<std::string, std::shared_ptr<Slot>> restored;
  std::uint64_t next = 1;
  try {
    next = snap.at("next_session").get<std::uint64_t>();
    for (const auto& j : snap.at("sessions")) {
      Session s = Session::from_json(j);
      for (const auto& q : s.boxes())
        for (const auto& id : q)
          if (!exercises_.contains(id)) throw ExerciseError("MalformedSnapshot", "unknown exercise " + id);
      std::string id = s.id();
      restored.emplace(std::move(id), std::make_shared<Slot>(std::move(s)));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ExerciseError("MalformedSnapshot", ex.what());
  }
  std::lock_guard lock(mu_);
  sessions_ = std::move(restored);
  next_session_ = next;
}

} // namespace glossfill
