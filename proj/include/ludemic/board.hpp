#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ludemic {

/// Compass directions. Row 0 is the bottom edge, so N increases the row.
enum class Direction : std::uint8_t { N, NE, E, SE, S, SW, W, NW };
inline constexpr int kDirectionCount = 8;

/// A rectangular grid with 8-neighbour adjacency. Sites are numbered
/// row-major from the bottom-left corner.
class Board {
 public:
  static constexpr int kNone = -1;

  Board() = default;
  Board(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }
  int site(int row, int col) const { return row * cols_ + col; }
  int row(int site) const { return site / cols_; }
  int col(int site) const { return site % cols_; }
  bool contains(int site) const { return site >= 0 && site < size(); }

  /// Neighbour of `site` one step in `dir`, or kNone off the board.
  int step(int site, Direction dir) const { return steps_[static_cast<std::size_t>(site)][static_cast<std::size_t>(dir)]; }

  const std::vector<int>& orthogonal_neighbours(int site) const { return orthogonal_[static_cast<std::size_t>(site)]; }
  const std::vector<int>& diagonal_neighbours(int site) const { return diagonal_[static_cast<std::size_t>(site)]; }

  const std::vector<int>& corner_sites() const { return corners_; }
  /// Perimeter sites that are not corners.
  const std::vector<int>& edge_sites() const { return edges_; }
  const std::vector<int>& perimeter_sites() const { return perimeter_; }
  const std::vector<int>& centre_sites() const { return centre_; }

  /// Shortest-path distance from every site to the nearest site in
  /// `targets`, over orthogonal and diagonal adjacency.
  std::vector<int> distances_to(const std::vector<int>& targets) const;

  /// All straight runs of `length` consecutive sites along rows, columns and
  /// both diagonals.
  std::vector<std::vector<int>> windows(int length) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::array<int, kDirectionCount>> steps_;
  std::vector<std::vector<int>> orthogonal_;
  std::vector<std::vector<int>> diagonal_;
  std::vector<int> corners_;
  std::vector<int> edges_;
  std::vector<int> perimeter_;
  std::vector<int> centre_;
};

}  // namespace ludemic
