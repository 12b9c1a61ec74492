#include "planact/pddl/sexpr.hpp"

#include <cctype>

#include "planact/common/error.hpp"
#include "planact/common/text.hpp"

namespace planact::pddl {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_blank();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_blank();
    if (pos_ >= text_.size()) throw SyntaxError(line_, col_, "'(' or identifier");
    const char c = text_[pos_];
    if (c == ')') throw SyntaxError(line_, col_, "'(' or identifier");
    SExpr node;
    node.line = line_;
    node.col = col_;
    if (c == '(') {
      node.is_list = true;
      node.annotation = std::move(pending_annotation_);
      pending_annotation_.clear();
      advance();
      while (true) {
        skip_blank();
        if (pos_ >= text_.size()) throw SyntaxError(line_, col_, "')'");
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      pending_annotation_.clear();
      return node;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) advance();
    node.atom = to_lower(text_.substr(start, pos_ - start));
    pending_annotation_.clear();
    return node;
  }

 private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        collect_annotation(text_.substr(start, pos_ - start));
      } else {
        break;
      }
    }
  }

  void collect_annotation(std::string_view comment) {
    while (!comment.empty() && comment.front() == ';') comment.remove_prefix(1);
    while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
    static constexpr std::string_view kTag = "@description";
    if (comment.substr(0, kTag.size()) != kTag) return;
    comment.remove_prefix(kTag.size());
    if (!comment.empty() && comment.front() == ':') comment.remove_prefix(1);
    while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
    while (!comment.empty() && (comment.back() == ' ' || comment.back() == '\r')) comment.remove_suffix(1);
    if (!pending_annotation_.empty()) pending_annotation_ += ' ';
    pending_annotation_ += comment;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::string pending_annotation_;
};

}  // namespace

SExpr parse_sexpr(std::string_view text) {
  Reader reader(text);
  SExpr node = reader.read();
  if (!reader.at_end()) {
    // Re-scan to report the position of the trailing token.
    Reader probe(text);
    probe.read();
    SExpr extra = probe.read();
    throw SyntaxError(extra.line, extra.col, "end of input");
  }
  return node;
}

std::vector<SExpr> parse_sexpr_sequence(std::string_view text) {
  Reader reader(text);
  std::vector<SExpr> out;
  while (!reader.at_end()) out.push_back(reader.read());
  return out;
}

}  // namespace planact::pddl
