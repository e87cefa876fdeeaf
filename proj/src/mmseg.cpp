#include "mmcrf/mmseg.hpp"

#include <charconv>

#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/utf8.hpp"

namespace mmcrf {

FreedomTable FreedomTable::load(const std::string& path) {
  return parse(io::read_file(path));
}

FreedomTable FreedomTable::parse(std::string_view text) {
  FreedomTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line;
    if (eol == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("freedom table line has no tab separator", line_no);
    }
    Sentence cps;
    try {
      cps = utf8::decode(line.substr(0, tab));
    } catch (const DecodeError& e) {
      throw DecodeError(e.what(), line_no);
    }
    if (cps.size() != 1) {
      throw ParseError("freedom table entry must be a single character",
                       line_no);
    }
    const std::string_view num = line.substr(tab + 1);
    double value = 0.0;
    const auto [end, ec] =
        std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || end != num.data() + num.size() || value < 0.0) {
      throw ParseError("freedom table score must be a non-negative number",
                       line_no);
    }
    table.set(cps[0], value);
  }
  return table;
}

void FreedomTable::set(char32_t cp, double score) { scores_[cp] = score; }

double FreedomTable::score(char32_t cp) const {
  const auto it = scores_.find(cp);
  return it == scores_.end() ? 0.0 : it->second;
}

namespace {

// Candidate word lengths at a position: lexicon matches plus the
// single-character fallback, ascending.
std::vector<std::size_t> candidate_lengths(const Lexicon& lex,
                                           const Sentence& sent,
                                           std::size_t pos) {
  std::vector<std::size_t> lengths = lex.prefixes_of(sent, pos);
  if (lengths.empty() || lengths.front() != 1) {
    lengths.insert(lengths.begin(), 1);
  }
  return lengths;
}

void extend_chunks(const Lexicon& lex, const Sentence& sent,
                   const FreedomTable* freedom, std::size_t pos,
                   const Chunk& prefix, std::vector<Chunk>& out) {
  for (const std::size_t len : candidate_lengths(lex, sent, pos)) {
    Chunk chunk = prefix;
    chunk.push(static_cast<std::uint32_t>(len));
    if (len == 1 && freedom != nullptr) {
      chunk.freedom += freedom->score(sent[pos]);
    }
    out.push_back(chunk);
    if (chunk.word_count < 3 && pos + len < sent.size()) {
      extend_chunks(lex, sent, freedom, pos + len, chunk, out);
    }
  }
}

// Exact comparisons for the cascade. total_len/word_count fit easily in
// 64 bits, so cross-multiplication avoids floating-point ties.
int cmp_avg(const Chunk& a, const Chunk& b) {
  const auto lhs = static_cast<std::uint64_t>(a.total_len) * b.word_count;
  const auto rhs = static_cast<std::uint64_t>(b.total_len) * a.word_count;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

int cmp_variance(const Chunk& a, const Chunk& b) {
  // population variance = (n*sum(l^2) - total^2) / n^2
  const auto num_a = static_cast<std::int64_t>(a.word_count * a.len_sum_sq) -
                     static_cast<std::int64_t>(a.total_len) * a.total_len;
  const auto num_b = static_cast<std::int64_t>(b.word_count * b.len_sum_sq) -
                     static_cast<std::int64_t>(b.total_len) * b.total_len;
  const auto lhs = num_a * b.word_count * b.word_count;
  const auto rhs = num_b * a.word_count * a.word_count;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

// True when `cand` beats `best` in the rule cascade.
bool cascade_better(const Chunk& cand, const Chunk& best) {
  if (cand.total_len != best.total_len) return cand.total_len > best.total_len;
  if (const int c = cmp_avg(cand, best); c != 0) return c > 0;
  if (const int c = cmp_variance(cand, best); c != 0) return c < 0;
  if (cand.freedom != best.freedom) return cand.freedom > best.freedom;
  return cand.first_len() > best.first_len();
}

}  // namespace

std::vector<Chunk> gen_chunks(const Lexicon& lex, const Sentence& sent,
                              std::size_t pos, const FreedomTable* freedom) {
  if (pos >= sent.size()) {
    throw InvalidInputError("position " + std::to_string(pos) +
                            " out of range for sentence of length " +
                            std::to_string(sent.size()));
  }
  std::vector<Chunk> chunks;
  extend_chunks(lex, sent, freedom, pos, Chunk{}, chunks);
  return chunks;
}

const Chunk& pick_chunk(const std::vector<Chunk>& chunks) {
  if (chunks.empty()) throw InvalidInputError("pick_chunk on empty chunk list");
  const Chunk* best = &chunks.front();
  for (const Chunk& cand : chunks) {
    if (cascade_better(cand, *best)) best = &cand;
  }
  return *best;
}

Segmentation mmseg_segment(const Lexicon& lex, const Sentence& sent,
                           const FreedomTable* freedom) {
  if (sent.empty()) throw InvalidInputError("cannot segment an empty sentence");
  Segmentation words;
  std::size_t pos = 0;
  while (pos < sent.size()) {
    const std::vector<Chunk> chunks = gen_chunks(lex, sent, pos, freedom);
    const Chunk& best = pick_chunk(chunks);
    const std::size_t len = best.first_len();
    words.push_back(sent.substr(pos, len));
    pos += len;
  }
  return words;
}

TagSeq mmseg_tags(const Lexicon& lex, const Sentence& sent,
                  const FreedomTable* freedom) {
  return words_to_tags(mmseg_segment(lex, sent, freedom));
}

}  // namespace mmcrf
