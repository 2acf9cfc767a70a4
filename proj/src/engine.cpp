#include "ludemic/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "ludemic/error.hpp"

namespace ludemic {

using gdl::Node;
using gdl::NodeKind;

namespace {

// Compound heads the engine understands. Anything else is parse-only.
const std::set<std::string>& supported_heads() {
  static const std::set<std::string> heads = {
      "game",  "players", "equipment", "board", "square", "rectangle", "piece",  "value",
      "regions", "sites", "map",       "pair",  "rules",  "start",     "place",  "play",
      "move",  "to",      "directions", "capture", "score", "end",      "if",     "is",
      "no",    "result",
  };
  return heads;
}

void check_supported(const Node& node) {
  if (node.kind == NodeKind::Compound && !supported_heads().count(node.text)) {
    throw Error(ErrorCode::UnsupportedLudeme, node.text);
  }
  for (const Node& c : node.children) check_supported(c);
}

[[noreturn]] void invalid(const Node& at, const std::string& what) {
  throw Error(ErrorCode::InvalidDescription,
              what + " (line " + std::to_string(at.line) + ", col " + std::to_string(at.col) + ")");
}

[[noreturn]] void unsupported_keyword(const Node& at) {
  throw Error(ErrorCode::UnsupportedLudeme, at.text);
}

bool is_compound(const Node& n, std::string_view head) {
  return n.kind == NodeKind::Compound && n.text == head;
}

bool is_keyword(const Node& n, std::string_view word) {
  return n.kind == NodeKind::Keyword && n.text == word;
}

int integer(const Node& n, const char* what) {
  if (n.kind != NodeKind::Number || n.number != std::floor(n.number)) invalid(n, std::string(what) + " must be an integer");
  return static_cast<int>(n.number);
}

const Node& arg(const Node& n, std::size_t i) {
  if (i >= n.children.size()) invalid(n, "'" + n.text + "' expects more arguments");
  return n.children[i];
}

std::vector<const Node*> items(const Node& n) {
  std::vector<const Node*> out;
  if (n.kind == NodeKind::List) {
    for (const Node& c : n.children) out.push_back(&c);
  } else {
    out.push_back(&n);
  }
  return out;
}

/// Parses `P<k>`; 0 when `n` is not a player keyword.
Player player_keyword(const Node& n) {
  if (n.kind != NodeKind::Keyword || n.text.size() < 2 || n.text[0] != 'P') return 0;
  int value = 0;
  for (std::size_t i = 1; i < n.text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(n.text[i]))) return 0;
    value = value * 10 + (n.text[i] - '0');
  }
  return value;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

class Compiler {
 public:
  GameSpec run(const Node& root) {
    if (!is_compound(root, "game")) throw Error(ErrorCode::MissingSection, "game");
    check_supported(root);
    if (root.children.empty() || root.children[0].kind != NodeKind::String) invalid(root, "game needs a name string");
    spec_.name = root.children[0].text;

    const Node* players = nullptr;
    const Node* equipment = nullptr;
    const Node* rules = nullptr;
    for (std::size_t i = 1; i < root.children.size(); ++i) {
      const Node& c = root.children[i];
      if (is_compound(c, "players")) {
        players = &c;
      } else if (is_compound(c, "equipment")) {
        equipment = &c;
      } else if (is_compound(c, "rules")) {
        rules = &c;
      } else {
        invalid(c, "unexpected '" + c.text + "' in game");
      }
    }
    if (!players) throw Error(ErrorCode::MissingSection, "players");
    if (!equipment) throw Error(ErrorCode::MissingSection, "equipment");
    if (!rules) throw Error(ErrorCode::MissingSection, "rules");

    spec_.players = integer(arg(*players, 0), "player count");
    if (spec_.players < 2 || spec_.players > 8) invalid(*players, "player count must be in 2..8");
    spec_.site_maps.assign(static_cast<std::size_t>(spec_.players + 1), {});

    compile_equipment(*equipment);
    compile_rules(*rules);
    derive();
    return std::move(spec_);
  }

 private:
  Player player(const Node& n) {
    const Player p = player_keyword(n);
    if (p < 1 || p > spec_.players) invalid(n, "expected a player P1..P" + std::to_string(spec_.players));
    return p;
  }

  int site(const Node& n) {
    const int s = integer(n, "site");
    if (!spec_.board.contains(s)) throw Error(ErrorCode::InvalidBoard, "site " + std::to_string(s) + " is off the board");
    return s;
  }

  std::vector<int> sites(const Node& n) {
    if (n.kind == NodeKind::Number) return {site(n)};
    if (!is_compound(n, "sites")) invalid(n, "expected (sites ...)");
    const Board& b = spec_.board;
    const Node& what = arg(n, 0);
    std::vector<int> out;
    if (what.kind == NodeKind::List) {
      for (const Node& c : what.children) out.push_back(site(c));
    } else if (is_keyword(what, "Bottom") || is_keyword(what, "Top")) {
      const int r = what.text == "Bottom" ? 0 : b.rows() - 1;
      for (int c = 0; c < b.cols(); ++c) out.push_back(b.site(r, c));
    } else if (is_keyword(what, "Left") || is_keyword(what, "Right")) {
      const int c = what.text == "Left" ? 0 : b.cols() - 1;
      for (int r = 0; r < b.rows(); ++r) out.push_back(b.site(r, c));
    } else if (is_keyword(what, "Row") || is_keyword(what, "Column")) {
      const int k = integer(arg(n, 1), "row/column index");
      const bool row = what.text == "Row";
      if (k < 0 || k >= (row ? b.rows() : b.cols())) throw Error(ErrorCode::InvalidBoard, what.text + " index out of range");
      for (int i = 0; i < (row ? b.cols() : b.rows()); ++i) out.push_back(row ? b.site(k, i) : b.site(i, k));
    } else if (is_keyword(what, "Corners")) {
      out = b.corner_sites();
    } else if (is_keyword(what, "Centre")) {
      out = b.centre_sites();
    } else if (is_keyword(what, "Board")) {
      for (int s = 0; s < b.size(); ++s) out.push_back(s);
    } else if (what.kind == NodeKind::Keyword) {
      unsupported_keyword(what);
    } else {
      invalid(what, "bad site selector");
    }
    return sorted_unique(std::move(out));
  }

  void compile_board(const Node& n) {
    const Node& shape = arg(n, 0);
    int rows = 0;
    int cols = 0;
    if (is_compound(shape, "square")) {
      rows = cols = integer(arg(shape, 0), "board size");
    } else if (is_compound(shape, "rectangle")) {
      rows = integer(arg(shape, 0), "board rows");
      cols = integer(arg(shape, 1), "board columns");
    } else {
      throw Error(ErrorCode::InvalidBoard, "unsupported board shape '" + shape.text + "'");
    }
    if (rows < 1 || cols < 1 || rows > 32 || cols > 32) throw Error(ErrorCode::InvalidBoard, "board dimensions must be in 1..32");
    spec_.board = Board(rows, cols);
    have_board_ = true;
  }

  void compile_piece(const Node& n) {
    if (arg(n, 0).kind != NodeKind::String) invalid(n, "piece needs a name string");
    const std::string name = n.children[0].text;
    const Node& who = arg(n, 1);
    int value = 1;
    for (std::size_t i = 2; i < n.children.size(); ++i) {
      const Node& c = n.children[i];
      if (!is_compound(c, "value")) invalid(c, "unexpected piece argument");
      value = integer(arg(c, 0), "piece value");
    }
    if (is_keyword(who, "Each")) {
      for (Player p = 1; p <= spec_.players; ++p) spec_.pieces.push_back({name + std::to_string(p), p, value});
    } else {
      spec_.pieces.push_back({name, player(who), value});
    }
  }

  void compile_regions(const Node& n) {
    if (arg(n, 0).kind != NodeKind::String) invalid(n, "regions needs a name string");
    Region region;
    region.name = n.children[0].text;
    std::size_t i = 1;
    if (player_keyword(arg(n, 1)) != 0) region.owner = player(n.children[i++]);
    region.sites = sites(arg(n, i));
    spec_.regions.push_back(std::move(region));
  }

  void compile_map(const Node& n) {
    if (arg(n, 0).kind != NodeKind::String) invalid(n, "map needs a name string");
    for (const Node* pair : items(arg(n, 1))) {
      if (!is_compound(*pair, "pair")) invalid(*pair, "map entries must be (pair Pk sites)");
      const Player p = player(arg(*pair, 0));
      auto mapped = sites(arg(*pair, 1));
      auto& target = spec_.site_maps[static_cast<std::size_t>(p)];
      target.insert(target.end(), mapped.begin(), mapped.end());
      target = sorted_unique(std::move(target));
    }
  }

  void compile_equipment(const Node& equipment) {
    const Node& body = arg(equipment, 0);
    auto list = items(body);
    // the board comes first so site selectors can be resolved
    for (const Node* item : list)
      if (is_compound(*item, "board")) compile_board(*item);
    if (!have_board_) throw Error(ErrorCode::MissingSection, "board");
    for (const Node* item : list) {
      if (is_compound(*item, "board")) continue;
      if (is_compound(*item, "piece")) {
        compile_piece(*item);
      } else if (is_compound(*item, "regions")) {
        compile_regions(*item);
      } else if (is_compound(*item, "map")) {
        compile_map(*item);
      } else {
        invalid(*item, "unexpected '" + item->text + "' in equipment");
      }
    }
    if (spec_.pieces.empty()) throw Error(ErrorCode::MissingSection, "piece");
  }

  int piece_index(const Node& n) {
    if (n.kind != NodeKind::String) invalid(n, "expected a piece name");
    for (std::size_t i = 0; i < spec_.pieces.size(); ++i)
      if (spec_.pieces[i].name == n.text) return static_cast<int>(i);
    invalid(n, "unknown piece '" + n.text + "'");
  }

  void compile_start(const Node& n) {
    for (const Node* item : items(arg(n, 0))) {
      if (!is_compound(*item, "place")) invalid(*item, "start entries must be (place ...)");
      Placement placement;
      placement.piece = piece_index(arg(*item, 0));
      placement.sites = sites(arg(*item, 1));
      spec_.start.push_back(std::move(placement));
    }
  }

  void add_directions(const Node& d) {
    using R = RelativeDirection;
    auto& out = spec_.directions;
    if (is_keyword(d, "All")) {
      out.insert(out.end(), {R::Forward, R::FR, R::Rightward, R::BR, R::Backward, R::BL, R::Leftward, R::FL});
    } else if (is_keyword(d, "Orthogonal")) {
      out.insert(out.end(), {R::Forward, R::Rightward, R::Backward, R::Leftward});
    } else if (is_keyword(d, "Diagonal")) {
      out.insert(out.end(), {R::FR, R::BR, R::BL, R::FL});
    } else if (is_keyword(d, "Forward")) {
      out.push_back(R::Forward);
    } else if (is_keyword(d, "Backward")) {
      out.push_back(R::Backward);
    } else if (is_keyword(d, "Leftward")) {
      out.push_back(R::Leftward);
    } else if (is_keyword(d, "Rightward")) {
      out.push_back(R::Rightward);
    } else if (is_keyword(d, "FL")) {
      out.push_back(R::FL);
    } else if (is_keyword(d, "FR")) {
      out.push_back(R::FR);
    } else if (is_keyword(d, "BL")) {
      out.push_back(R::BL);
    } else if (is_keyword(d, "BR")) {
      out.push_back(R::BR);
    } else if (d.kind == NodeKind::Keyword) {
      unsupported_keyword(d);
    } else {
      invalid(d, "expected a direction");
    }
  }

  void compile_play(const Node& n) {
    const Node& move = arg(n, 0);
    if (!is_compound(move, "move")) invalid(move, "play expects (move ...)");
    const Node& kind = arg(move, 0);
    if (is_keyword(kind, "Add")) {
      const Node& to = arg(move, 1);
      if (!is_compound(to, "to") || !is_compound(arg(to, 0), "sites") || !is_keyword(arg(to.children[0], 0), "Empty")) {
        invalid(to, "Add moves must target (to (sites Empty))");
      }
      spec_.play = PlayRule::AddToEmpty;
    } else if (is_keyword(kind, "Step")) {
      spec_.play = PlayRule::Step;
      for (std::size_t i = 1; i < move.children.size(); ++i) {
        const Node& c = move.children[i];
        if (is_compound(c, "directions")) {
          for (const Node& d : c.children)
            for (const Node* dd : items(d)) add_directions(*dd);
        } else if (is_compound(c, "capture")) {
          if (!is_keyword(arg(c, 0), "Replace")) unsupported_keyword(c.children[0]);
          spec_.capture_by_replacement = true;
          for (std::size_t k = 1; k < c.children.size(); ++k) {
            if (!is_compound(c.children[k], "score")) invalid(c.children[k], "unexpected capture argument");
            spec_.points_per_capture = integer(arg(c.children[k], 0), "capture score");
          }
        } else {
          invalid(c, "unexpected Step argument");
        }
      }
      if (spec_.directions.empty()) invalid(move, "Step moves need (directions ...)");
    } else if (kind.kind == NodeKind::Keyword) {
      unsupported_keyword(kind);
    } else {
      invalid(kind, "expected a move type");
    }
    have_play_ = true;
  }

  EndRule compile_end_rule(const Node& n) {
    if (!is_compound(n, "if")) invalid(n, "end rules must be (if condition result)");
    const Node& cond = arg(n, 0);
    const Node& result = arg(n, 1);
    EndRule rule;
    if (is_compound(cond, "is") && is_keyword(arg(cond, 0), "Line")) {
      rule.kind = EndRule::Kind::LineOf;
      rule.length = integer(arg(cond, 1), "line length");
      if (rule.length < 1) invalid(cond, "line length must be positive");
    } else if (is_compound(cond, "is") && is_keyword(arg(cond, 0), "Reach")) {
      rule.kind = EndRule::Kind::ReachRegion;
      if (arg(cond, 1).kind != NodeKind::String) invalid(cond, "Reach needs a region name");
      rule.region = cond.children[1].text;
    } else if (is_compound(cond, "is") && is_keyword(arg(cond, 0), "Turn")) {
      rule.kind = EndRule::Kind::TurnLimit;
      rule.turns = integer(arg(cond, 1), "turn limit");
      if (rule.turns < 1) invalid(cond, "turn limit must be positive");
    } else if (is_compound(cond, "no") && is_keyword(arg(cond, 0), "Moves")) {
      rule.kind = EndRule::Kind::NoMoves;
    } else if (is_compound(cond, "is") || is_compound(cond, "no")) {
      if (arg(cond, 0).kind == NodeKind::Keyword) unsupported_keyword(cond.children[0]);
      invalid(cond, "bad condition");
    } else {
      invalid(cond, "unsupported end condition '" + cond.text + "'");
    }

    if (!is_compound(result, "result")) invalid(result, "expected (result ...)");
    const Node& first = arg(result, 0);
    if (rule.kind == EndRule::Kind::TurnLimit) {
      if (is_keyword(first, "Score")) {
        rule.resolution = LimitResolution::Score;
      } else if (is_keyword(first, "Pieces")) {
        rule.resolution = LimitResolution::Pieces;
      } else if (is_keyword(first, "Draw")) {
        rule.resolution = LimitResolution::Draw;
      } else {
        invalid(first, "turn limits resolve by Score, Pieces or Draw");
      }
      return rule;
    }
    if (is_keyword(first, "Draw")) {
      rule.result = ResultKind::Draw;
      return rule;
    }
    if (!is_keyword(first, "Mover")) invalid(first, "results apply to Mover");
    const Node& what = arg(result, 1);
    if (is_keyword(what, "Win")) {
      rule.result = ResultKind::Win;
    } else if (is_keyword(what, "Loss")) {
      rule.result = ResultKind::Loss;
    } else if (is_keyword(what, "Draw")) {
      rule.result = ResultKind::Draw;
    } else {
      invalid(what, "expected Win, Loss or Draw");
    }
    return rule;
  }

  void compile_rules(const Node& rules) {
    for (const Node& c : rules.children) {
      if (is_compound(c, "start")) {
        compile_start(c);
      } else if (is_compound(c, "play")) {
        if (have_play_) invalid(c, "exactly one play rule is allowed");
        compile_play(c);
      } else if (is_compound(c, "end")) {
        for (const Node* r : items(arg(c, 0))) spec_.end_rules.push_back(compile_end_rule(*r));
      } else {
        invalid(c, "unexpected '" + c.text + "' in rules");
      }
    }
    if (!have_play_) throw Error(ErrorCode::MissingSection, "play");
    if (spec_.end_rules.empty()) throw Error(ErrorCode::MissingSection, "end");
    for (const EndRule& r : spec_.end_rules) {
      if (r.kind == EndRule::Kind::ReachRegion) {
        const bool known = std::any_of(spec_.regions.begin(), spec_.regions.end(),
                                       [&](const Region& g) { return g.name == r.region; });
        if (!known) throw Error(ErrorCode::InvalidDescription, "unknown region '" + r.region + "'");
      }
      if (r.kind == EndRule::Kind::LineOf && !spec_.line_target) spec_.line_target = r.length;
    }
    if (!spec_.has_rule(EndRule::Kind::TurnLimit)) {
      EndRule limit;
      limit.kind = EndRule::Kind::TurnLimit;
      limit.turns = kDefaultTurnLimit;
      limit.resolution = LimitResolution::Draw;
      spec_.end_rules.push_back(limit);
    }
  }

  static Direction absolute(RelativeDirection rel, Player p) {
    const int facing = (p % 2 == 1) ? 0 : 4;
    return static_cast<Direction>((static_cast<int>(rel) + facing) % kDirectionCount);
  }

  static std::vector<double> weights(const Board& board, const std::vector<int>& targets) {
    if (targets.empty()) return {};
    const auto dist = board.distances_to(targets);
    const int dmax = *std::max_element(dist.begin(), dist.end());
    std::vector<double> w(dist.size());
    for (std::size_t s = 0; s < dist.size(); ++s)
      w[s] = dmax == 0 ? 1.0 : 1.0 - static_cast<double>(dist[s]) / dmax;
    return w;
  }

  void derive() {
    const Board& b = spec_.board;
    const auto n = static_cast<std::size_t>(spec_.players);
    if (spec_.line_target) {
      spec_.line_windows = b.windows(*spec_.line_target);
      spec_.window_sites.clear();
      for (const auto& w : spec_.line_windows) spec_.window_sites.insert(spec_.window_sites.end(), w.begin(), w.end());
      spec_.line_shifts.clear();
      bool shiftable = *spec_.line_target >= 2 && *spec_.line_target < 128 && b.size() <= 128;
      for (const auto& w : spec_.line_windows) {
        if (!shiftable) break;
        int step = w[1] - w[0];
        for (std::size_t k = 1; k < w.size(); ++k) shiftable = shiftable && w[k] - w[k - 1] == step;
        const int start = step > 0 ? w.front() : w.back();
        step = std::abs(step);
        auto it = std::find_if(spec_.line_shifts.begin(), spec_.line_shifts.end(),
                               [&](const LineShift& l) { return l.step == step; });
        if (it == spec_.line_shifts.end()) it = spec_.line_shifts.insert(it, LineShift{step, {}});
        std::uint64_t& word = it->starts[static_cast<std::size_t>(start / 64)];
        const std::uint64_t bit = std::uint64_t{1} << (start % 64);
        shiftable = shiftable && step != 0 && (word & bit) == 0;  // each window once
        word |= bit;
      }
      if (!shiftable) spec_.line_shifts.clear();
      spec_.windows_through.assign(static_cast<std::size_t>(b.size()), {});
      for (std::size_t w = 0; w < spec_.line_windows.size(); ++w)
        for (int s : spec_.line_windows[w]) spec_.windows_through[static_cast<std::size_t>(s)].push_back(static_cast<int>(w));
    }

    spec_.step_targets.assign(n + 1, {});
    if (spec_.play == PlayRule::Step) {
      for (Player p = 1; p <= spec_.players; ++p) {
        auto& table = spec_.step_targets[static_cast<std::size_t>(p)];
        table.assign(static_cast<std::size_t>(b.size()), {});
        for (int s = 0; s < b.size(); ++s) {
          std::vector<int> targets;
          for (RelativeDirection rel : spec_.directions) {
            const int t = b.step(s, absolute(rel, p));
            if (t != Board::kNone) targets.push_back(t);
          }
          table[static_cast<std::size_t>(s)] = sorted_unique(std::move(targets));
        }
      }
    }

    spec_.first_piece.assign(n + 1, -1);
    for (std::size_t i = spec_.pieces.size(); i-- > 0;) {
      const Player owner = spec_.pieces[i].owner;
      if (owner < 1 || owner > spec_.players) throw Error(ErrorCode::InvalidDescription, "piece owner out of range");
      spec_.first_piece[static_cast<std::size_t>(owner)] = static_cast<int>(i);
    }
    if (spec_.play == PlayRule::AddToEmpty) {
      for (Player p = 1; p <= spec_.players; ++p)
        if (spec_.first_piece[static_cast<std::size_t>(p)] < 0)
          throw Error(ErrorCode::InvalidDescription, "player P" + std::to_string(p) + " has no piece to add");
    }

    ProximityTables& prox = spec_.proximity;
    prox.corner = weights(b, b.corner_sites());
    prox.sides = weights(b, b.perimeter_sites());
    prox.centre = weights(b, b.centre_sites());
    std::vector<int> unowned;
    std::vector<std::vector<int>> owned(n + 1);
    for (const Region& r : spec_.regions) {
      if (r.owner > spec_.players) throw Error(ErrorCode::InvalidDescription, "region owner out of range");
      auto& dst = r.owner == 0 ? unowned : owned[static_cast<std::size_t>(r.owner)];
      dst.insert(dst.end(), r.sites.begin(), r.sites.end());
    }
    prox.region = weights(b, sorted_unique(unowned));
    prox.player_regions.assign(n + 1, {});
    for (Player p = 1; p <= spec_.players; ++p)
      prox.player_regions[static_cast<std::size_t>(p)] = weights(b, sorted_unique(owned[static_cast<std::size_t>(p)]));
  }

  GameSpec spec_;
  bool have_board_ = false;
  bool have_play_ = false;
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Outcome make_outcome(const GameSpec& spec, Player subject, ResultKind result) {
  const auto n = static_cast<std::size_t>(spec.players);
  Outcome out;
  out.utility.assign(n, 0.0);
  switch (result) {
    case ResultKind::Draw:
      break;
    case ResultKind::Win:
      out.utility.assign(n, -1.0);
      out.utility[static_cast<std::size_t>(subject - 1)] = 1.0;
      out.winner = subject;
      break;
    case ResultKind::Loss:
      out.utility[static_cast<std::size_t>(subject - 1)] = -1.0;
      if (spec.players == 2) {
        const Player other = next_player(spec, subject);
        out.utility[static_cast<std::size_t>(other - 1)] = 1.0;
        out.winner = other;
      }
      break;
  }
  return out;
}

/// Picks among players flagged in `mask` (bit p set), preferring the player
/// who moved last, then in turn order after it.
Player pick_subject(const GameSpec& spec, const GameState& state, unsigned mask) {
  if (mask == 0) return 0;
  Player p = state.mover == 1 ? spec.players : state.mover - 1;
  for (int k = 0; k < spec.players; ++k) {
    if (mask & (1u << p)) return p;
    p = next_player(spec, p);
  }
  return 0;
}

unsigned line_owners(const GameSpec& spec, const GameState& state, int length) {
  unsigned mask = 0;
  auto check = [&](const std::vector<int>& window) {
    const int owner = state.cells[static_cast<std::size_t>(window[0])].owner;
    if (owner == 0) return;
    for (std::size_t i = 1; i < window.size(); ++i)
      if (state.cells[static_cast<std::size_t>(window[i])].owner != owner) return;
    mask |= 1u << owner;
  };
  if (spec.line_target && *spec.line_target == length) {
    if (state.last_to >= 0) {
      for (int w : spec.windows_through[static_cast<std::size_t>(state.last_to)])
        check(spec.line_windows[static_cast<std::size_t>(w)]);
    } else {
      for (const auto& w : spec.line_windows) check(w);
    }
  } else {
    for (const auto& w : spec.board.windows(length)) check(w);
  }
  return mask;
}

unsigned region_reachers(const GameSpec& spec, const GameState& state, const std::string& name) {
  unsigned mask = 0;
  for (const Region& r : spec.regions) {
    if (r.name != name) continue;
    for (int s : r.sites) {
      const int owner = state.cells[static_cast<std::size_t>(s)].owner;
      if (owner != 0 && (r.owner == 0 || r.owner == owner)) mask |= 1u << owner;
    }
  }
  return mask;
}

Outcome resolve_limit(const GameSpec& spec, const GameState& state, LimitResolution how) {
  const auto n = static_cast<std::size_t>(spec.players);
  std::vector<long> tally(n, 0);
  if (how == LimitResolution::Score) {
    for (std::size_t i = 0; i < n; ++i) tally[i] = state.scores[i];
  } else if (how == LimitResolution::Pieces) {
    for (const Cell& c : state.cells)
      if (!c.empty()) tally[static_cast<std::size_t>(c.owner - 1)] += c.count;
  } else {
    return make_outcome(spec, 1, ResultKind::Draw);
  }
  const long best = *std::max_element(tally.begin(), tally.end());
  if (std::count(tally.begin(), tally.end(), best) > 1) return make_outcome(spec, 1, ResultKind::Draw);
  const auto top = static_cast<Player>(std::find(tally.begin(), tally.end(), best) - tally.begin()) + 1;
  return make_outcome(spec, top, ResultKind::Win);
}

}  // namespace

bool GameSpec::has_rule(EndRule::Kind kind) const {
  return std::any_of(end_rules.begin(), end_rules.end(), [&](const EndRule& r) { return r.kind == kind; });
}

bool GameSpec::has_site_maps() const {
  return std::any_of(site_maps.begin(), site_maps.end(), [](const auto& s) { return !s.empty(); });
}

std::string to_string(const Move& move) {
  switch (move.kind) {
    case Move::Kind::Add: return "Add(" + std::to_string(move.to) + ")";
    case Move::Kind::Step:
      return "Step(" + std::to_string(move.from) + "->" + std::to_string(move.to) + (move.capture ? "x" : "") + ")";
    case Move::Kind::Pass: return "Pass";
  }
  return "?";
}

Player next_player(const GameSpec& spec, Player p) { return p % spec.players + 1; }

GameSpec compile(const gdl::LudemeTree& tree) { return Compiler().run(tree); }

GameState initial_state(const GameSpec& spec) {
  GameState s;
  s.cells.assign(static_cast<std::size_t>(spec.board.size()), Cell{});
  s.scores.assign(static_cast<std::size_t>(spec.players), 0);
  for (const Placement& p : spec.start) {
    const PieceType& type = spec.pieces[static_cast<std::size_t>(p.piece)];
    for (int site : p.sites) {
      Cell& c = s.cells[static_cast<std::size_t>(site)];
      c.owner = static_cast<std::int8_t>(type.owner);
      c.piece = static_cast<std::int8_t>(p.piece);
      c.count = 1;
    }
  }
  return s;
}

std::vector<Move> rule_moves(const GameSpec& spec, const GameState& state, Player player) {
  std::vector<Move> out;
  const int n = static_cast<int>(state.cells.size());
  if (spec.play == PlayRule::AddToEmpty) {
    out.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
      if (state.cells[static_cast<std::size_t>(s)].empty()) out.push_back({Move::Kind::Add, -1, s, false});
    return out;
  }
  const auto& table = spec.step_targets[static_cast<std::size_t>(player)];
  for (int s = 0; s < n; ++s) {
    if (state.cells[static_cast<std::size_t>(s)].owner != player) continue;
    for (int t : table[static_cast<std::size_t>(s)]) {
      const Cell& target = state.cells[static_cast<std::size_t>(t)];
      if (target.empty()) {
        out.push_back({Move::Kind::Step, s, t, false});
      } else if (target.owner != player && spec.capture_by_replacement) {
        out.push_back({Move::Kind::Step, s, t, true});
      }
    }
  }
  return out;
}

bool has_rule_move(const GameSpec& spec, const GameState& state, Player player) {
  const int n = static_cast<int>(state.cells.size());
  if (spec.play == PlayRule::AddToEmpty) {
    return std::any_of(state.cells.begin(), state.cells.end(), [](const Cell& c) { return c.empty(); });
  }
  const auto& table = spec.step_targets[static_cast<std::size_t>(player)];
  for (int s = 0; s < n; ++s) {
    if (state.cells[static_cast<std::size_t>(s)].owner != player) continue;
    for (int t : table[static_cast<std::size_t>(s)]) {
      const Cell& target = state.cells[static_cast<std::size_t>(t)];
      if (target.empty() || (target.owner != player && spec.capture_by_replacement)) return true;
    }
  }
  return false;
}

std::vector<Move> legal_moves(const GameSpec& spec, const GameState& state) {
  auto moves = rule_moves(spec, state, state.mover);
  if (moves.empty()) moves.push_back(Move{});
  return moves;
}

GameState apply(const GameSpec& spec, const GameState& state, const Move& move) {
  const auto illegal = [&](const std::string& why) {
    throw Error(ErrorCode::IllegalMove, to_string(move) + ": " + why);
  };
  const Board& board = spec.board;
  GameState next = state;
  switch (move.kind) {
    case Move::Kind::Add: {
      if (spec.play != PlayRule::AddToEmpty) illegal("game does not add pieces");
      if (move.from != -1 || move.capture) illegal("malformed add");
      if (!board.contains(move.to)) illegal("site off the board");
      Cell& c = next.cells[static_cast<std::size_t>(move.to)];
      if (!c.empty()) illegal("site occupied");
      const int piece = spec.first_piece[static_cast<std::size_t>(state.mover)];
      c = Cell{static_cast<std::int8_t>(state.mover), static_cast<std::int8_t>(piece), 1};
      break;
    }
    case Move::Kind::Step: {
      if (spec.play != PlayRule::Step) illegal("game does not step pieces");
      if (!board.contains(move.from) || !board.contains(move.to)) illegal("site off the board");
      Cell& from = next.cells[static_cast<std::size_t>(move.from)];
      if (from.owner != state.mover) illegal("origin does not hold a mover piece");
      const auto& targets = spec.step_targets[static_cast<std::size_t>(state.mover)][static_cast<std::size_t>(move.from)];
      if (!std::binary_search(targets.begin(), targets.end(), move.to)) illegal("not a step direction");
      Cell& to = next.cells[static_cast<std::size_t>(move.to)];
      const bool enemy = !to.empty() && to.owner != state.mover;
      if (!to.empty() && !enemy) illegal("destination holds own piece");
      if (enemy && !spec.capture_by_replacement) illegal("captures not allowed");
      if (move.capture != enemy) illegal("capture flag mismatch");
      if (enemy && spec.points_per_capture) next.scores[static_cast<std::size_t>(state.mover - 1)] += *spec.points_per_capture;
      to = from;
      from = Cell{};
      break;
    }
    case Move::Kind::Pass:
      if (move.from != -1 || move.to != -1 || move.capture) illegal("malformed pass");
      if (has_rule_move(spec, state, state.mover)) illegal("pass with moves available");
      break;
  }
  next.mover = next_player(spec, state.mover);
  next.turn = state.turn + 1;
  next.last_to = move.kind == Move::Kind::Pass ? -1 : move.to;
  const std::uint64_t code = (static_cast<std::uint64_t>(move.kind) << 40) ^
                             (static_cast<std::uint64_t>(move.from + 1) << 20) ^
                             static_cast<std::uint64_t>(move.to + 1);
  next.history_hash = mix(state.history_hash, code);
  return next;
}

std::optional<Outcome> outcome(const GameSpec& spec, const GameState& state) {
  for (const EndRule& rule : spec.end_rules) {
    switch (rule.kind) {
      case EndRule::Kind::LineOf: {
        if (const Player p = pick_subject(spec, state, line_owners(spec, state, rule.length)))
          return make_outcome(spec, p, rule.result);
        break;
      }
      case EndRule::Kind::NoMoves:
        if (!has_rule_move(spec, state, state.mover)) return make_outcome(spec, state.mover, rule.result);
        break;
      case EndRule::Kind::ReachRegion:
        if (const Player p = pick_subject(spec, state, region_reachers(spec, state, rule.region)))
          return make_outcome(spec, p, rule.result);
        break;
      case EndRule::Kind::TurnLimit:
        if (state.turn >= rule.turns) return resolve_limit(spec, state, rule.resolution);
        break;
    }
  }
  if (!has_rule_move(spec, state, state.mover)) {
    bool anyone = false;
    for (Player p = 1; p <= spec.players && !anyone; ++p) anyone = has_rule_move(spec, state, p);
    if (!anyone) return make_outcome(spec, 1, ResultKind::Draw);
  }
  return std::nullopt;
}

}  // namespace ludemic
