#include "ludemic/board.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace ludemic {

namespace {

constexpr std::array<int, kDirectionCount> kRowDelta = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, kDirectionCount> kColDelta = {0, 1, 1, 1, 0, -1, -1, -1};

std::vector<int> middle(int extent) {
  if (extent % 2 == 1) return {extent / 2};
  return {extent / 2 - 1, extent / 2};
}

}  // namespace

Board::Board(int rows, int cols) : rows_(rows), cols_(cols) {
  const int n = size();
  steps_.resize(static_cast<std::size_t>(n));
  orthogonal_.resize(static_cast<std::size_t>(n));
  diagonal_.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const int r = row(s);
    const int c = col(s);
    for (int d = 0; d < kDirectionCount; ++d) {
      const int nr = r + kRowDelta[static_cast<std::size_t>(d)];
      const int nc = c + kColDelta[static_cast<std::size_t>(d)];
      const bool inside = nr >= 0 && nr < rows_ && nc >= 0 && nc < cols_;
      const int target = inside ? site(nr, nc) : kNone;
      steps_[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)] = target;
      if (!inside) continue;
      if (d % 2 == 0) {
        orthogonal_[static_cast<std::size_t>(s)].push_back(target);
      } else {
        diagonal_[static_cast<std::size_t>(s)].push_back(target);
      }
    }
    std::sort(orthogonal_[static_cast<std::size_t>(s)].begin(), orthogonal_[static_cast<std::size_t>(s)].end());
    std::sort(diagonal_[static_cast<std::size_t>(s)].begin(), diagonal_[static_cast<std::size_t>(s)].end());

    const bool top_or_bottom = r == 0 || r == rows_ - 1;
    const bool left_or_right = c == 0 || c == cols_ - 1;
    if (top_or_bottom && left_or_right) {
      corners_.push_back(s);
    } else if (top_or_bottom || left_or_right) {
      edges_.push_back(s);
    }
    if (top_or_bottom || left_or_right) perimeter_.push_back(s);
  }
  for (int r : middle(rows_))
    for (int c : middle(cols_)) centre_.push_back(site(r, c));
  std::sort(centre_.begin(), centre_.end());
}

std::vector<int> Board::distances_to(const std::vector<int>& targets) const {
  std::vector<int> dist(static_cast<std::size_t>(size()), std::numeric_limits<int>::max());
  std::deque<int> queue;
  for (int t : targets) {
    if (dist[static_cast<std::size_t>(t)] != 0) {
      dist[static_cast<std::size_t>(t)] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int d = 0; d < kDirectionCount; ++d) {
      const int t = steps_[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)];
      if (t == kNone || dist[static_cast<std::size_t>(t)] <= dist[static_cast<std::size_t>(s)] + 1) continue;
      dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(s)] + 1;
      queue.push_back(t);
    }
  }
  return dist;
}

std::vector<std::vector<int>> Board::windows(int length) const {
  std::vector<std::vector<int>> out;
  if (length <= 0) return out;
  if (length == 1) {
    for (int s = 0; s < size(); ++s) out.push_back({s});
    return out;
  }
  // N, NE, E, SE cover every line once.
  for (Direction dir : {Direction::E, Direction::N, Direction::NE, Direction::SE}) {
    for (int s = 0; s < size(); ++s) {
      std::vector<int> window{s};
      int cur = s;
      while (static_cast<int>(window.size()) < length) {
        cur = step(cur, dir);
        if (cur == kNone) break;
        window.push_back(cur);
      }
      if (static_cast<int>(window.size()) == length) out.push_back(std::move(window));
    }
  }
  return out;
}

}  // namespace ludemic
