#include "glossfill/evaluation.hpp"

#include "glossfill/text.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>

namespace glossfill {

namespace {

__extension__ typedef __int128 i128;

// Exact fraction on 128-bit integers; nullopt on overflow.
struct Fraction {
  i128 num = 0;
  i128 den = 1;
};

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<Fraction> reduce(i128 num, i128 den) {
  i128 g = gcd128(num, den);
  if (g == 0) return Fraction{0, 1};
  return Fraction{num / g, den / g};
}

std::optional<Fraction> add(Fraction a, Fraction b) {
  i128 x, y, d;
  if (__builtin_mul_overflow(a.num, b.den, &x) || __builtin_mul_overflow(b.num, a.den, &y) ||
      __builtin_mul_overflow(a.den, b.den, &d) || __builtin_add_overflow(x, y, &x))
    return std::nullopt;
  return reduce(x, d);
}

std::optional<Fraction> mul(Fraction a, Fraction b) {
  i128 n, d;
  if (__builtin_mul_overflow(a.num, b.num, &n) || __builtin_mul_overflow(a.den, b.den, &d)) return std::nullopt;
  return reduce(n, d);
}

std::optional<double> exact_stddev(const std::map<std::string, GroupScore>& groups) {
  const auto n = static_cast<i128>(groups.size());
  std::optional<Fraction> mean = Fraction{};
  for (const auto& [name, g] : groups) {
    mean = add(*mean, Fraction{static_cast<i128>(g.correct), static_cast<i128>(g.total) * n});
    if (!mean) return std::nullopt;
  }
  std::optional<Fraction> var = Fraction{};
  for (const auto& [name, g] : groups) {
    auto diff = add(Fraction{static_cast<i128>(g.correct), static_cast<i128>(g.total)}, Fraction{-mean->num, mean->den});
    if (!diff) return std::nullopt;
    auto sq = mul(*diff, *diff);
    if (!sq) return std::nullopt;
    var = add(*var, Fraction{sq->num, sq->den * n});
    if (!var) return std::nullopt;
  }
  return static_cast<double>(std::sqrt(static_cast<long double>(var->num) / static_cast<long double>(var->den)));
}

} // namespace

EvalReport accuracy(const CellForms& predictions, const CellForms& golds) {
  if (golds.empty()) throw EvalError("DegenerateEvalSet", "no gold cells to evaluate");
  std::vector<std::string> missing;
  EvalReport r;
  for (const auto& [cell, gold] : golds) {
    auto it = predictions.find(cell);
    if (it == predictions.end()) {
      missing.push_back(cell.table.first + "/" + cell.table.second + "/" + cell.slot.name());
      continue;
    }
    ++r.total;
    r.correct += it->second == gold;
  }
  if (!missing.empty()) throw EvalError("MissingPrediction", "no prediction for: " + text::join(missing, ", "));
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

std::map<std::string, GroupScore> per_dialect_report(const CellForms& predictions, const CellForms& golds,
                                                     const VariantRegistry& registry) {
  std::map<std::string, GroupScore> groups;
  for (const auto& [cell, gold] : golds) {
    auto& g = groups[registry.resolve_lexeme(cell.table.second).kind.group()];
    ++g.total;
    auto it = predictions.find(cell);
    g.correct += it != predictions.end() && it->second == gold;
  }
  return groups;
}

double dialect_stddev(const std::map<std::string, GroupScore>& groups) {
  if (groups.empty()) throw EvalError("DegenerateEvalSet", "no dialect groups");
  for (const auto& [name, g] : groups)
    if (g.total == 0) throw EvalError("DegenerateEvalSet", "dialect group '" + name + "' is empty");
  if (auto exact = exact_stddev(groups)) return *exact;
  std::vector<double> acc;
  for (const auto& [name, g] : groups) acc.push_back(g.accuracy());
  return dialect_stddev(acc);
}

double dialect_stddev(std::span<const double> accuracies) {
  if (accuracies.empty()) throw EvalError("DegenerateEvalSet", "no dialect groups");
  long double mean = 0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<long double>(accuracies.size());
  long double ss = 0;
  for (double a : accuracies) ss += (a - mean) * (a - mean);
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(accuracies.size())));
}

double generalized_entropy(std::span<const double> benefits, double alpha) {
  if (alpha == 0.0 || alpha == 1.0) throw EvalError("InvalidAlpha", "alpha must not be 0 or 1");
  if (benefits.empty()) throw EvalError("DegenerateEvalSet", "no benefits");
  const double n = static_cast<double>(benefits.size());
  const double mu = std::accumulate(benefits.begin(), benefits.end(), 0.0) / n;
  if (!(mu > 0.0)) throw EvalError("ZeroMeanBenefit", "mean benefit is zero");
  double sum = 0.0;
  for (double b : benefits) sum += std::pow(b / mu, alpha) - 1.0;
  return sum / (n * alpha * (alpha - 1.0));
}

EvalReport evaluate(const CellForms& predictions, const CellForms& golds, const VariantRegistry& registry, double alpha,
                    BenefitMode mode) {
  EvalReport r = accuracy(predictions, golds);
  r.alpha = alpha;
  r.benefits = mode;
  r.per_dialect = per_dialect_report(predictions, golds, registry);
  r.dialect_stddev = dialect_stddev(r.per_dialect);
  std::vector<double> b;
  if (mode == BenefitMode::PerCell) {
    for (const auto& [cell, gold] : golds) b.push_back(predictions.at(cell) == gold ? 1.0 : 0.0);
  } else {
    for (const auto& [name, g] : r.per_dialect) b.push_back(g.accuracy());
  }
  r.gei = generalized_entropy(b, alpha);
  return r;
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  os << "correct: " << correct << "\n";
  os << "total: " << total << "\n";
  os << "accuracy: " << accuracy << "\n";
  os << "dialects: " << per_dialect.size() << "\n";
  for (const auto& [name, g] : per_dialect) os << "accuracy[" << name << "]: " << g.accuracy() << "\n";
  os << "dialect_stddev: " << dialect_stddev << "\n";
  os << "gei_alpha: " << alpha << "\n";
  os << "gei_benefits: " << (benefits == BenefitMode::PerCell ? "per-cell" : "per-dialect") << "\n";
  os << "gei: " << gei << "\n";
  return os.str();
}

std::string EvalReport::dialect_tsv() const {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  os << "dialect\tcorrect\ttotal\taccuracy\n";
  for (const auto& [name, g] : per_dialect) os << name << '\t' << g.correct << '\t' << g.total << '\t' << g.accuracy() << '\n';
  return os.str();
}

std::string write_cell_forms(const CellForms& cells) {
  std::string out = "lexeme_id\tvariant_form\tslot\tform\n";
  for (const auto& [c, form] : cells)
    out += c.table.first + '\t' + c.table.second + '\t' + c.slot.name() + '\t' + form + '\n';
  return out;
}

CellForms read_cell_forms(std::string_view tsv) {
  CellForms out;
  auto lines = text::lines(tsv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = text::split(lines[i], '\t');
    if (f.size() != 4) throw EvalError("MalformedRow", "line " + std::to_string(i + 1) + ": expected 4 columns");
    CellRef ref{{f[0], f[1]}, SlotTemplate::parse(f[2])};
    if (!out.emplace(std::move(ref), f[3]).second)
      throw EvalError("MalformedRow", "line " + std::to_string(i + 1) + ": duplicate cell");
  }
  return out;
}

} // namespace glossfill
