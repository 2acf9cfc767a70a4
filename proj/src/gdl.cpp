#include "ludemic/gdl.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "ludemic/error.hpp"

namespace ludemic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnterminatedString: return "UnterminatedString";
    case ErrorCode::IllegalCharacter: return "IllegalCharacter";
    case ErrorCode::UnbalancedParens: return "UnbalancedParens";
    case ErrorCode::EmptyCompound: return "EmptyCompound";
    case ErrorCode::UnexpectedToken: return "UnexpectedToken";
    case ErrorCode::TrailingTokens: return "TrailingTokens";
    case ErrorCode::UnsupportedLudeme: return "UnsupportedLudeme";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::InvalidBoard: return "InvalidBoard";
    case ErrorCode::InvalidDescription: return "InvalidDescription";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::DuplicateGameName: return "DuplicateGameName";
    case ErrorCode::MissingResults: return "MissingResults";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::MalformedResults: return "MalformedResults";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::PerplexityTooLarge: return "PerplexityTooLarge";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

namespace gdl {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::Ident: return "IDENT";
    case TokenKind::String: return "STRING";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::Boolean: return "BOOLEAN";
  }
  return "?";
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

std::string where(int line, int col) {
  return "line " + std::to_string(line) + ", col " + std::to_string(col);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int tl = line;
    const int tc = col;
    switch (c) {
      case '(': out.push_back({TokenKind::LParen, "(", tl, tc}); advance(1); continue;
      case ')': out.push_back({TokenKind::RParen, ")", tl, tc}); advance(1); continue;
      case '{': out.push_back({TokenKind::LBrace, "{", tl, tc}); advance(1); continue;
      case '}': out.push_back({TokenKind::RBrace, "}", tl, tc}); advance(1); continue;
      default: break;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') {
        throw Error(ErrorCode::UnterminatedString, "missing closing quote for string at " + where(tl, tc));
      }
      out.push_back({TokenKind::String, std::string(text.substr(i + 1, j - i - 1)), tl, tc});
      advance(j + 1 - i);
      continue;
    }
    if (digit(c) || (c == '-' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i + 1;
      while (j < text.size() && digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '.' && digit(text[j + 1])) {
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
      }
      if (j < text.size() && (ident_char(text[j]) || text[j] == '.')) {
        throw Error(ErrorCode::IllegalCharacter,
                    std::string("unexpected '") + text[j] + "' in number at " + where(tl, tc));
      }
      out.push_back({TokenKind::Number, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      const TokenKind kind =
          (word == "True" || word == "False") ? TokenKind::Boolean : TokenKind::Ident;
      out.push_back({kind, std::move(word), tl, tc});
      advance(j - i);
      continue;
    }
    throw Error(ErrorCode::IllegalCharacter,
                std::string("illegal character '") + c + "' at " + where(tl, tc));
  }
  return out;
}

bool operator==(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number:
      return a.number == b.number;
    case NodeKind::Boolean:
      return a.boolean == b.boolean;
    case NodeKind::String:
    case NodeKind::Keyword:
      return a.text == b.text;
    case NodeKind::Compound:
      if (a.text != b.text) return false;
      [[fallthrough]];
    case NodeKind::List:
      return a.children == b.children;
  }
  return false;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  Node parse_root() {
    if (tokens_.empty()) throw Error(ErrorCode::UnexpectedToken, "empty description");
    Node root = parse_node();
    if (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBrace) {
        throw Error(ErrorCode::UnbalancedParens,
                    "unmatched '" + t.text + "' at " + where(t.line, t.col));
      }
      throw Error(ErrorCode::TrailingTokens, "unexpected '" + t.text + "' after root at " + where(t.line, t.col));
    }
    return root;
  }

 private:
  const Token& peek(const Token& opener) const {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorCode::UnbalancedParens,
                  "'" + opener.text + "' opened at " + where(opener.line, opener.col) + " is never closed");
    }
    return tokens_[pos_];
  }

  Node parse_node() {
    const Token& t = tokens_[pos_++];
    Node node;
    node.line = t.line;
    node.col = t.col;
    switch (t.kind) {
      case TokenKind::String:
        node.kind = NodeKind::String;
        node.text = t.text;
        return node;
      case TokenKind::Number: {
        node.kind = NodeKind::Number;
        node.text = t.text;
        std::istringstream in(t.text);
        in.imbue(std::locale::classic());
        in >> node.number;
        return node;
      }
      case TokenKind::Boolean:
        node.kind = NodeKind::Boolean;
        node.text = t.text;
        node.boolean = t.text == "True";
        return node;
      case TokenKind::Ident:
        node.kind = NodeKind::Keyword;
        node.text = t.text;
        return node;
      case TokenKind::RParen:
      case TokenKind::RBrace:
        throw Error(ErrorCode::UnbalancedParens, "unmatched '" + t.text + "' at " + where(t.line, t.col));
      case TokenKind::LBrace: {
        node.kind = NodeKind::List;
        while (true) {
          const Token& next = peek(t);
          if (next.kind == TokenKind::RBrace) break;
          if (next.kind == TokenKind::RParen) {
            throw Error(ErrorCode::UnbalancedParens,
                        "')' at " + where(next.line, next.col) + " closes '{' from " + where(t.line, t.col));
          }
          node.children.push_back(parse_node());
        }
        ++pos_;
        return node;
      }
      case TokenKind::LParen: {
        node.kind = NodeKind::Compound;
        const Token& head = peek(t);
        if (head.kind == TokenKind::RParen) {
          throw Error(ErrorCode::EmptyCompound, "'()' at " + where(t.line, t.col));
        }
        if (head.kind != TokenKind::Ident) {
          throw Error(ErrorCode::UnexpectedToken,
                      "expected ludeme name after '(' at " + where(head.line, head.col) + ", got '" + head.text + "'");
        }
        node.text = head.text;
        ++pos_;
        while (true) {
          const Token& next = peek(t);
          if (next.kind == TokenKind::RParen) break;
          if (next.kind == TokenKind::RBrace) {
            throw Error(ErrorCode::UnbalancedParens,
                        "'}' at " + where(next.line, next.col) + " closes '(' from " + where(t.line, t.col));
          }
          node.children.push_back(parse_node());
        }
        ++pos_;
        return node;
      }
    }
    throw Error(ErrorCode::UnexpectedToken, "bad token");
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

void collect(const Node& node, LudemeSet& out) {
  if (node.kind == NodeKind::Compound || node.kind == NodeKind::Keyword) out.insert(to_lower(node.text));
  for (const Node& child : node.children) collect(child, out);
}

bool is_atom(const Node& n) { return n.kind != NodeKind::Compound && n.kind != NodeKind::List; }

bool all_atoms(const Node& n) {
  for (const Node& c : n.children)
    if (!is_atom(c)) return false;
  return true;
}

void print_atom(const Node& n, std::string& out) {
  if (n.kind == NodeKind::String) {
    out += '"';
    out += n.text;
    out += '"';
  } else {
    out += n.text;
  }
}

void print(const Node& n, int indent, std::string& out);

void print_inline(const Node& n, std::string& out) {
  if (is_atom(n)) {
    print_atom(n, out);
    return;
  }
  const bool list = n.kind == NodeKind::List;
  out += list ? "{" : "(";
  if (!list) out += n.text;
  bool first = list;
  for (const Node& c : n.children) {
    if (!first) out += ' ';
    first = false;
    print_inline(c, out);
  }
  out += list ? "}" : ")";
}

// Short compounds whose children are all atoms or short atom-only compounds
// stay on one line; everything else breaks one child per line.
bool fits_inline(const Node& n) {
  if (is_atom(n)) return true;
  if (all_atoms(n)) return true;
  if (n.kind == NodeKind::List) return false;
  for (const Node& c : n.children) {
    if (c.kind == NodeKind::List || !all_atoms(c)) return false;
  }
  return n.children.size() <= 3;
}

void print(const Node& n, int indent, std::string& out) {
  if (fits_inline(n)) {
    print_inline(n, out);
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent + 4), ' ');
  const std::string closing_pad(static_cast<std::size_t>(indent), ' ');
  if (n.kind == NodeKind::List) {
    out += "{\n";
    for (const Node& c : n.children) {
      out += pad;
      print(c, indent + 4, out);
      out += '\n';
    }
    out += closing_pad + "}";
    return;
  }
  out += '(';
  out += n.text;
  std::size_t i = 0;
  // leading atoms share the head's line
  for (; i < n.children.size() && is_atom(n.children[i]); ++i) {
    out += ' ';
    print_atom(n.children[i], out);
  }
  // a single trailing list opens on the head line, as in `(equipment {`
  if (i + 1 == n.children.size() && n.children[i].kind == NodeKind::List) {
    out += ' ';
    print(n.children[i], indent, out);
    out += ')';
    return;
  }
  for (; i < n.children.size(); ++i) {
    out += '\n' + pad;
    print(n.children[i], indent + 4, out);
  }
  out += '\n' + closing_pad + ")";
}

}  // namespace

LudemeTree parse(const std::vector<Token>& tokens) { return Parser(tokens).parse_root(); }

LudemeTree parse(std::string_view text) { return parse(tokenize(text)); }

LudemeSet extract_ludemes(const LudemeTree& tree) {
  LudemeSet out;
  collect(tree, out);
  return out;
}

std::string pretty_print(const LudemeTree& tree) {
  std::string out;
  print(tree, 0, out);
  out += '\n';
  return out;
}

}  // namespace gdl
}  // namespace ludemic
