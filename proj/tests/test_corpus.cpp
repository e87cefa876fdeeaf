#include <doctest.h>

#include <random>

#include "mmcrf/corpus.hpp"
#include "mmcrf/errors.hpp"
#include "mmcrf/io.hpp"
#include "mmcrf/utf8.hpp"
#include "support/random_gen.hpp"
#include "support/tempdir.hpp"

using namespace mmcrf;

namespace {

Segmentation seg(std::initializer_list<const char*> words) {
  Segmentation out;
  for (const char* w : words) out.push_back(utf8::decode(w));
  return out;
}

TagSeq tags(const char* letters) {
  TagSeq out;
  for (const char* p = letters; *p; ++p) out.push_back(*tag_from_letter(*p));
  return out;
}

}  // namespace

TEST_CASE("words_to_tags follows the BMES scheme") {
  CHECK(words_to_tags(seg({"A"})) == tags("S"));
  CHECK(words_to_tags(seg({"AB"})) == tags("BE"));
  CHECK(words_to_tags(seg({"ABC", "D", "EF"})) == tags("BMESBE"));
  CHECK_THROWS_AS(words_to_tags(Segmentation{U""}), InvalidInputError);
}

TEST_CASE("tags_to_words inverts well-formed sequences") {
  CHECK(tags_to_words(U"ABC", tags("BME")) == seg({"ABC"}));
  CHECK(tags_to_words(U"AB", tags("SS")) == seg({"A", "B"}));
  CHECK_THROWS_AS(tags_to_words(U"AB", tags("S")), InvalidInputError);
}

TEST_CASE("tags_to_words repairs ill-formed sequences") {
  // A tag that cannot extend the open word closes it first.
  CHECK(tags_to_words(U"AB", tags("SM")) == seg({"A", "B"}));
  CHECK(tags_to_words(U"AB", tags("BB")) == seg({"A", "B"}));
  CHECK(tags_to_words(U"A", tags("M")) == seg({"A"}));
  CHECK(tags_to_words(U"A", tags("E")) == seg({"A"}));
  CHECK(tags_to_words(U"ABC", tags("BSE")) == seg({"A", "B", "C"}));
  CHECK(tags_to_words(U"ABCD", tags("MMES")) == seg({"ABC", "D"}));
}

TEST_CASE("round trip over random segmentations") {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 500; ++i) {
    const Segmentation s = mmcrf::testing::random_segmentation(rng);
    const TagSeq t = words_to_tags(s);
    CHECK(is_well_formed(t));
    CHECK(tags_to_words(join_words(s), t) == s);
  }
}

TEST_CASE("tags_to_words conserves characters for arbitrary tags") {
  std::mt19937 rng(987654);
  std::uniform_int_distribution<int> tag_dist(0, 3);
  for (int i = 0; i < 500; ++i) {
    const Sentence sent = mmcrf::testing::random_text(rng, 1, 10);
    TagSeq t;
    for (std::size_t k = 0; k < sent.size(); ++k) {
      t.push_back(static_cast<Tag>(tag_dist(rng)));
    }
    const Segmentation words = tags_to_words(sent, t);
    CHECK(join_words(words) == sent);
    for (const auto& w : words) CHECK(!w.empty());
  }
}

TEST_CASE("corpus parsing") {
  CHECK(parse_segmented_lines("AB C\n") == std::vector<Segmentation>{seg({"AB", "C"})});
  CHECK(parse_segmented_lines("AB C\n\nD\n") ==
        std::vector<Segmentation>{seg({"AB", "C"}), seg({"D"})});
  CHECK(parse_segmented_lines("").empty());
  // Any run of unicode whitespace separates words.
  CHECK(parse_segmented_lines("A　\tB\n") ==
        std::vector<Segmentation>{seg({"A", "B"})});
  // No trailing newline on the last line.
  CHECK(parse_segmented_lines("A B") == std::vector<Segmentation>{seg({"A", "B"})});
}

TEST_CASE("corpus reader reports decode errors with line numbers") {
  mmcrf::testing::TempDir dir;
  const std::string path = dir.write("bad.txt", std::string("\xFF\n"));
  CHECK_THROWS_WITH_AS(read_segmented_corpus(path),
                       doctest::Contains("line 1"), DecodeError);
  const std::string path2 = dir.write("bad2.txt", std::string("ok\n\xFF\n"));
  CHECK_THROWS_WITH_AS(read_segmented_corpus(path2),
                       doctest::Contains("line 2"), DecodeError);
}

TEST_CASE("corpus writing") {
  mmcrf::testing::TempDir dir;
  const std::string path = dir.file("out.txt");

  write_segmented_corpus({seg({"AB", "C"})}, path);
  CHECK(mmcrf::io::read_file(path) == "AB C\n");

  write_segmented_corpus({}, path);
  CHECK(mmcrf::io::read_file(path).empty());

  write_segmented_corpus({seg({"A"}), seg({"B"})}, path);
  CHECK(mmcrf::io::read_file(path) == "A\nB\n");
}

TEST_CASE("corpus read/write round trip") {
  std::mt19937 rng(13579);
  std::vector<Segmentation> corpus;
  for (int i = 0; i < 50; ++i) {
    corpus.push_back(mmcrf::testing::random_segmentation(rng));
  }
  mmcrf::testing::TempDir dir;
  const std::string path = dir.file("corpus.txt");
  write_segmented_corpus(corpus, path);
  CHECK(read_segmented_corpus(path) == corpus);
}

TEST_CASE("utf8 round trip and validation") {
  std::mt19937 rng(24680);
  for (int i = 0; i < 200; ++i) {
    const Sentence text = mmcrf::testing::random_text(rng, 0, 12);
    CHECK(utf8::decode(utf8::encode(text)) == text);
  }
  CHECK_THROWS_AS(utf8::decode("\x80"), DecodeError);          // stray continuation
  CHECK_THROWS_AS(utf8::decode("\xC0\xAF"), DecodeError);      // overlong
  CHECK_THROWS_AS(utf8::decode("\xED\xA0\x80"), DecodeError);  // surrogate
  CHECK_THROWS_AS(utf8::decode("\xE4\xB8"), DecodeError);      // truncated
}
