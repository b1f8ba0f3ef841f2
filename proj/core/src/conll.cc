#include "transproj/conll.h"

#include <algorithm>
#include <stdexcept>

#include "transproj/text.h"

namespace transproj {

Tag Tag::begin(std::string label) {
  if (label.empty()) throw std::invalid_argument("empty entity label");
  return Tag(Kind::kBegin, std::move(label));
}

Tag Tag::inside(std::string label) {
  if (label.empty()) throw std::invalid_argument("empty entity label");
  return Tag(Kind::kInside, std::move(label));
}

bool Tag::parse(std::string_view raw, Tag* out) {
  if (raw == "O") {
    *out = Tag();
    return true;
  }
  if (raw.size() < 3 || raw[1] != '-') return false;
  Kind kind;
  if (raw[0] == 'B') {
    kind = Kind::kBegin;
  } else if (raw[0] == 'I') {
    kind = Kind::kInside;
  } else {
    return false;
  }
  std::string_view label = raw.substr(2);
  if (contains_whitespace(label)) return false;
  *out = Tag(kind, std::string(label));
  return true;
}

std::string Tag::str() const {
  switch (kind_) {
    case Kind::kOutside:
      return "O";
    case Kind::kBegin:
      return "B-" + label_;
    case Kind::kInside:
      return "I-" + label_;
  }
  return "O";
}

ConllError::ConllError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      kind_(kind),
      line_(line) {}

DatasetSplit parse_conll(std::string_view text, std::string name,
                         ParseStats* stats) {
  ParseStats local;
  ParseStats& st = stats != nullptr ? *stats : local;
  st = ParseStats();

  DatasetSplit split;
  split.name = std::move(name);

  TaggedSentence current;
  std::size_t current_first_line = 0;
  bool block_open = false;  // a non-blank line has been seen since the last blank

  const auto flush = [&] {
    if (!block_open) return;
    if (current.tokens.empty()) {
      ++st.dropped_empty;
    } else {
      current.origin_index = split.sentences.size();
      split.sentences.push_back(std::move(current));
      st.first_lines.push_back(current_first_line);
    }
    current = TaggedSentence();
    block_open = false;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (!is_valid_utf8(line)) {
      throw ConllError(ConllError::Kind::kInvalidUtf8, line_no,
                       "invalid UTF-8");
    }
    const std::vector<std::string> fields = split_whitespace(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    block_open = true;
    if (fields.front() == "-DOCSTART-") {
      ++st.docstart_lines;
      continue;
    }
    if (fields.size() < 2) {
      throw ConllError(ConllError::Kind::kMalformedLine, line_no,
                       "expected at least 2 fields, got " +
                           std::to_string(fields.size()));
    }
    Tag tag;
    if (!Tag::parse(fields.back(), &tag)) {
      throw ConllError(ConllError::Kind::kMalformedTag, line_no,
                       "malformed tag '" + fields.back() + "'");
    }
    if (current.tokens.empty()) current_first_line = line_no;
    current.tokens.push_back(fields.front());
    current.tags.push_back(std::move(tag));
  }
  flush();
  return split;
}

std::string serialize_conll(const DatasetSplit& split) {
  std::string out;
  for (const TaggedSentence& sentence : split.sentences) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out += sentence.tokens[i];
      out += ' ';
      out += sentence.tags[i].str();
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::vector<Violation> validate_scheme(const std::vector<Tag>& tags) {
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag& tag = tags[i];
    if (tag.kind() != Tag::Kind::kInside) continue;
    if (i == 0) {
      violations.push_back({i, tag.str() + " starts the sentence"});
      continue;
    }
    const Tag& prev = tags[i - 1];
    if (prev.is_outside()) {
      violations.push_back({i, tag.str() + " follows O"});
    } else if (prev.label() != tag.label()) {
      violations.push_back({i, tag.str() + " follows " + prev.str()});
    }
  }
  return violations;
}

std::vector<Violation> validate_scheme(const TaggedSentence& sentence) {
  std::vector<Violation> violations = validate_scheme(sentence.tags);
  if (sentence.tokens.size() != sentence.tags.size()) {
    violations.push_back({std::min(sentence.tokens.size(), sentence.tags.size()),
                          "token/tag count mismatch"});
  }
  return violations;
}

std::vector<Tag> normalize_iob1_to_iob2(const std::vector<Tag>& tags) {
  std::vector<Tag> out;
  out.reserve(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag& tag = tags[i];
    if (tag.kind() != Tag::Kind::kInside) {
      out.push_back(tag);
      continue;
    }
    // Under IOB1 an I- tag continues only an entity of the same label.
    const bool continues = i > 0 && !tags[i - 1].is_outside() &&
                           tags[i - 1].label() == tag.label();
    out.push_back(continues ? tag : Tag::begin(tag.label()));
  }
  return out;
}

TaggedSentence normalize_iob1_to_iob2(TaggedSentence sentence) {
  sentence.tags = normalize_iob1_to_iob2(sentence.tags);
  return sentence;
}

}  // namespace transproj
