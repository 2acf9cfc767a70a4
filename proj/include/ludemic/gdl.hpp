#pragma once

// Ludemic game description language: a small S-expression dialect in which
// `( head args... )` is a ludeme application and `{ ... }` is a list.
//
//   (game "Tic-Tac-Toe"
//       (players 2)
//       (equipment { (board (square 3)) (piece "Disc" P1) (piece "Cross" P2) })
//       (rules
//           (play (move Add (to (sites Empty))))
//           (end (if (is Line 3) (result Mover Win)))))
//
// Strings, numbers and booleans are values. Every other bare word is a
// keyword ludeme.

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ludemic::gdl {

enum class TokenKind { LParen, RParen, LBrace, RBrace, Ident, String, Number, Boolean };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;  // raw lexeme; strings without their quotes
  int line = 1;
  int col = 1;
};

/// Splits source text into tokens. `//` comments run to end of line and are
/// dropped.
std::vector<Token> tokenize(std::string_view text);

enum class NodeKind { Compound, List, Keyword, String, Number, Boolean };

struct Node {
  NodeKind kind = NodeKind::Keyword;
  /// Compound head, keyword name, string contents, or number lexeme.
  std::string text;
  double number = 0.0;
  bool boolean = false;
  /// Compound arguments or list items.
  std::vector<Node> children;
  int line = 0;
  int col = 0;

  bool is_value() const {
    return kind == NodeKind::String || kind == NodeKind::Number || kind == NodeKind::Boolean;
  }

  /// Structural equality; source positions are ignored.
  friend bool operator==(const Node& a, const Node& b);
};

using LudemeTree = Node;

LudemeTree parse(const std::vector<Token>& tokens);
LudemeTree parse(std::string_view text);

/// Lowercased names of every compound head and keyword in the tree.
using LudemeSet = std::set<std::string>;
LudemeSet extract_ludemes(const LudemeTree& tree);

/// Canonical formatting. parse(pretty_print(t)) == t.
std::string pretty_print(const LudemeTree& tree);

std::string to_lower(std::string_view s);

}  // namespace ludemic::gdl
