#include "isaid/corpus.hpp"

#include "isaid/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isaid::corpus {

void validate(const SyntheticIsaSpec& spec) {
  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument("synthetic ISA '" + spec.name + "': " + why);
  };
  if (spec.instruction_width != 2 && spec.instruction_width != 4) fail("instruction_width must be 2 or 4");
  if (spec.opcode_distribution.empty()) fail("empty opcode distribution");
  double total = 0.0;
  std::size_t longest = 0;
  for (const auto& [prefix, p] : spec.opcode_distribution) {
    if (!(p >= 0.0 && p <= 1.0)) fail("opcode probability outside [0, 1]");
    if (prefix.empty() || prefix.size() > spec.instruction_width) fail("opcode prefix length outside [1, width]");
    total += p;
    longest = std::max(longest, prefix.size());
  }
  if (std::abs(total - 1.0) > 1e-9) fail("opcode probabilities sum to " + std::to_string(total));
  for (double p : {spec.noise_zero_prob, spec.immediate_small_value_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probability outside [0, 1]");
  }
  if (spec.immediate_small_value_prob > 0.0 && longest + 2 > spec.instruction_width) {
    fail("immediate field does not fit after the longest opcode prefix");
  }
}

namespace {

const std::vector<std::uint8_t>& sample_prefix(const SyntheticIsaSpec& spec, SplitMix64& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [prefix, p] : spec.opcode_distribution) {
    acc += p;
    if (u < acc) return prefix;
  }
  return std::prev(spec.opcode_distribution.end())->first;
}

std::vector<std::uint8_t> generate_document(const SyntheticIsaSpec& spec, std::size_t len,
                                            SplitMix64& rng) {
  const std::size_t width = spec.instruction_width;
  const std::size_t cap = len + len / 10;
  std::vector<std::uint8_t> out;
  out.reserve(cap + 2 * width);
  while (out.size() < len) {
    if (!out.empty() && rng.bernoulli(spec.noise_zero_prob)) out.insert(out.end(), width, 0x00);
    const auto& prefix = sample_prefix(spec, rng);
    const std::size_t start = out.size();
    out.insert(out.end(), prefix.begin(), prefix.end());
    for (std::size_t i = prefix.size(); i < width; ++i) out.push_back(static_cast<std::uint8_t>(rng.below(256)));
    if (rng.bernoulli(spec.immediate_small_value_prob)) {
      const bool big = spec.endianness == Endianness::big;
      out[start + width - 2] = big ? 0x00 : 0x01;
      out[start + width - 1] = big ? 0x01 : 0x00;
    }
  }
  if (out.size() > cap) out.resize(cap);
  return out;
}

}  // namespace

Corpus generate_synthetic(std::span<const SyntheticIsaSpec> specs, std::size_t docs_per_class,
                          std::size_t doc_len_bytes, std::uint64_t seed) {
  if (specs.empty()) throw std::invalid_argument("generate_synthetic: no ISA specs");
  std::size_t widest = 0;
  for (const auto& spec : specs) {
    validate(spec);
    widest = std::max(widest, spec.instruction_width);
  }
  if (doc_len_bytes < 2 * widest) {
    throw std::invalid_argument("doc_len_bytes must be at least twice the widest instruction");
  }
  std::vector<Document> docs;
  docs.reserve(specs.size() * docs_per_class);
  for (std::size_t c = 0; c < specs.size(); ++c) {
    SplitMix64 rng(mix_seed(seed, c));
    for (std::size_t i = 0; i < docs_per_class; ++i) {
      docs.push_back({generate_document(specs[c], doc_len_bytes, rng), specs[c].name,
                      specs[c].name + "-" + std::to_string(i)});
    }
  }
  return Corpus(std::move(docs));
}

namespace {

using Prefix = std::vector<std::uint8_t>;

SyntheticIsaSpec make(std::string name, std::size_t width, Endianness order,
                      std::map<Prefix, double> opcodes, double noise, double imm) {
  return {std::move(name), width, std::move(opcodes), order, noise, imm};
}

}  // namespace

std::vector<SyntheticIsaSpec> default_isa_specs(std::size_t classes) {
  using enum Endianness;
  // Paired families share opcode bytes: mips/mipsel and sparc/s390 differ
  // only in byte order; alpha/arm and powerpc/m68k use the same opcode bytes
  // in swapped order.
  std::vector<SyntheticIsaSpec> all{
      make("alphaev56", 4, little, {{{0x47, 0xa4}, 0.4}, {{0x23, 0xde}, 0.35}, {{0x6b, 0x5a}, 0.25}}, 0.05, 0.3),
      make("arm", 4, little, {{{0xa4, 0x47}, 0.4}, {{0xde, 0x23}, 0.35}, {{0x5a, 0x6b}, 0.25}}, 0.05, 0.3),
      make("avr", 2, little, {{{0x0e}, 0.3}, {{0x94}, 0.3}, {{0xe0}, 0.2}, {{0x2f}, 0.2}}, 0.1, 0.0),
      make("m68k", 4, big, {{{0x3c, 0x4e}, 0.4}, {{0x75, 0x20}, 0.3}, {{0x61, 0x00}, 0.3}}, 0.05, 0.3),
      make("mips", 4, big, {{{0x27, 0xbd}, 0.35}, {{0x8f, 0xbf}, 0.35}, {{0x24, 0x02}, 0.3}}, 0.05, 0.4),
      make("mipsel", 4, little, {{{0x27, 0xbd}, 0.35}, {{0x8f, 0xbf}, 0.35}, {{0x24, 0x02}, 0.3}}, 0.05, 0.4),
      make("powerpc", 4, big, {{{0x4e, 0x3c}, 0.4}, {{0x20, 0x75}, 0.3}, {{0x00, 0x61}, 0.3}}, 0.05, 0.3),
      make("s390", 4, little, {{{0xa7, 0xf4}, 0.4}, {{0x58, 0x10}, 0.3}, {{0xeb, 0xcf}, 0.3}}, 0.05, 0.35),
      make("sh4", 2, little, {{{0x2f}, 0.3}, {{0xe0}, 0.3}, {{0x94}, 0.2}, {{0x0e}, 0.2}}, 0.1, 0.0),
      make("sparc", 4, big, {{{0xa7, 0xf4}, 0.4}, {{0x58, 0x10}, 0.3}, {{0xeb, 0xcf}, 0.3}}, 0.05, 0.35),
      make("x86_64", 4, little, {{{0x48, 0x89}, 0.4}, {{0x48, 0x8b}, 0.3}, {{0xe8}, 0.15}, {{0xc3}, 0.15}}, 0.05, 0.2),
      make("xtensa", 4, little, {{{0x0c, 0x12}, 0.35}, {{0x36, 0x41}, 0.35}, {{0x1d, 0xf0}, 0.3}}, 0.05, 0.25),
  };
  if (classes == 0 || classes > all.size()) {
    throw std::invalid_argument("default_isa_specs: classes must be in [1, " + std::to_string(all.size()) + "]");
  }
  all.resize(classes);
  return all;
}

}  // namespace isaid::corpus
