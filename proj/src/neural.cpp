#include "glossfill/reinflection.hpp"

#include "glossfill/text.hpp"

#include <algorithm>
#include <sstream>

namespace glossfill {

void NeuralConfig::validate() const {
  if (layers <= 0 || heads <= 0 || embedding <= 0 || hidden <= 0 || !(learning_rate > 0.0) || batch_size <= 0 ||
      max_updates <= 0 || optimizer.empty())
    throw ReinflectionError("InvalidNeuralConfig", "all transformer settings must be positive");
}

std::vector<std::string> NeuralConfig::fairseq_args() const {
  validate();
  std::ostringstream lr;
  lr << learning_rate;
  return {"--arch", "transformer",
          "--encoder-layers", std::to_string(layers),
          "--decoder-layers", std::to_string(layers),
          "--encoder-attention-heads", std::to_string(heads),
          "--decoder-attention-heads", std::to_string(heads),
          "--encoder-embed-dim", std::to_string(embedding),
          "--decoder-embed-dim", std::to_string(embedding),
          "--encoder-ffn-embed-dim", std::to_string(hidden),
          "--decoder-ffn-embed-dim", std::to_string(hidden),
          "--optimizer", optimizer,
          "--lr", lr.str(),
          "--batch-size", std::to_string(batch_size),
          "--max-update", std::to_string(max_updates)};
}

namespace {

std::vector<std::string> characters(std::string_view s) {
  std::vector<std::string> out;
  for (char32_t c : text::to_u32(s)) out.push_back(text::to_utf8(std::u32string(1, c)));
  return out;
}

} // namespace

NeuralExample encode_neural_pair(const ReinflectionPair& p) {
  NeuralExample e;
  e.input = characters(p.src_form);
  e.input.emplace_back(kSeparatorToken);
  for (const auto& l : p.src_slot.labels()) e.input.push_back(l);
  e.input.emplace_back(kSeparatorToken);
  for (const auto& l : p.tgt_slot.labels()) e.input.push_back(l);
  e.output = characters(p.tgt_form);
  return e;
}

DecodedPair decode_neural_pair(const NeuralExample& e) {
  auto first = std::find(e.input.begin(), e.input.end(), kSeparatorToken);
  if (first == e.input.end()) throw ReinflectionError("MalformedExample", "missing first separator");
  auto second = std::find(first + 1, e.input.end(), kSeparatorToken);
  if (second == e.input.end()) throw ReinflectionError("MalformedExample", "missing second separator");

  DecodedPair d;
  for (auto it = e.input.begin(); it != first; ++it) d.src_form += *it;
  d.src_slot = SlotTemplate(std::vector<std::string>(first + 1, second));
  d.tgt_slot = SlotTemplate(std::vector<std::string>(second + 1, e.input.end()));
  for (const auto& c : e.output) d.tgt_form += c;
  return d;
}

std::pair<std::string, std::string> write_neural_dataset(const std::vector<ReinflectionPair>& pairs) {
  std::string src, tgt;
  for (const auto& p : pairs) {
    auto e = encode_neural_pair(p);
    src += text::join(e.input, " ") + '\n';
    tgt += text::join(e.output, " ") + '\n';
  }
  return {std::move(src), std::move(tgt)};
}

} // namespace glossfill
