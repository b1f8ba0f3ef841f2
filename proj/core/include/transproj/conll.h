#pragma once

// Token-per-line NER corpora: reading, writing and IOB scheme checks.
//
// A corpus file holds one "token ... tag" line per token with blank lines
// between sentences. Only the first (token) and last (tag) whitespace
// separated fields are read, so CoNLL 2003 style POS/chunk columns are
// ignored. Output is always "token<SP>tag" with LF line endings.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace transproj {

class Tag {
 public:
  enum class Kind { kOutside, kBegin, kInside };

  Tag() = default;  // O

  static Tag outside() { return Tag(); }
  static Tag begin(std::string label);
  static Tag inside(std::string label);

  // Accepts "O", "B-<label>" or "I-<label>" with a non-empty label.
  static bool parse(std::string_view raw, Tag* out);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  bool is_outside() const { return kind_ == Kind::kOutside; }
  std::string str() const;

  friend bool operator==(const Tag&, const Tag&) = default;

 private:
  Tag(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_ = Kind::kOutside;
  std::string label_;
};

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
  std::size_t origin_index = 0;  // 0-based position in the source split

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;
};

struct DatasetSplit {
  std::string name;  // train, dev, test or any other label
  std::vector<TaggedSentence> sentences;

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

class ConllError : public std::runtime_error {
 public:
  enum class Kind { kMalformedLine, kMalformedTag, kInvalidUtf8 };

  ConllError(Kind kind, std::size_t line, const std::string& what);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }  // 1-based

 private:
  Kind kind_;
  std::size_t line_;
};

struct ParseStats {
  std::size_t docstart_lines = 0;
  // Blank-line delimited blocks that held no tokens once -DOCSTART- lines
  // were removed.
  std::size_t dropped_empty = 0;
  // 1-based line number of the first token of each returned sentence.
  std::vector<std::size_t> first_lines;
};

DatasetSplit parse_conll(std::string_view text, std::string name = "other",
                         ParseStats* stats = nullptr);

std::string serialize_conll(const DatasetSplit& split);

struct Violation {
  std::size_t index = 0;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// IOB2 check: every I-X must follow B-X or I-X.
std::vector<Violation> validate_scheme(const TaggedSentence& sentence);
std::vector<Violation> validate_scheme(const std::vector<Tag>& tags);

// Rewrites IOB1 tags so that every entity starts with B-. Applied to tags that
// are already valid IOB2 this is the identity.
TaggedSentence normalize_iob1_to_iob2(TaggedSentence sentence);
std::vector<Tag> normalize_iob1_to_iob2(const std::vector<Tag>& tags);

}  // namespace transproj
