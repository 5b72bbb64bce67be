#pragma once

// Hilbert addressing: maps a curve parameter t to a sequence of binary child
// choices and tracks the orientation (axis permutation plus per-axis
// reversal) that keeps the induced cell ordering continuous.
//
// Orientation transitions follow the Gray-code formulation of the Hilbert
// curve (Butz; Hamilton's entry/direction recurrences), relabelled so that
// the root state is the identity. In two dimensions this reproduces the
// textbook numbering: digit 0 = lower-left, 1 = upper-left, 2 = upper-right,
// 3 = lower-right, with the lower-left quadrant reflected across its main
// diagonal and the lower-right quadrant across its anti-diagonal.

#include <cstdint>
#include <utility>
#include <vector>

namespace himap {

inline constexpr int kMaxAddressDepth = 62;
inline constexpr int kMaxHilbertDim = 32;

/// A node of the binary cell hierarchy: `depth` binary choices, most
/// significant first. Choice l (0-based) selects the first (0) or second (1)
/// half of the parent's t-interval.
class CellAddress {
 public:
  CellAddress() = default;
  CellAddress(int depth, std::uint64_t bits);

  int depth() const noexcept { return depth_; }
  std::uint64_t bits() const noexcept { return bits_; }

  /// Choice taken at level `level` (0-based, from the root).
  int bit(int level) const noexcept {
    return static_cast<int>((bits_ >> (depth_ - 1 - level)) & 1U);
  }

  CellAddress prefix(int depth) const;
  CellAddress child(int bit) const;

  /// Half-open interval [lo, hi) of curve parameters owned by this cell.
  std::pair<double, double> interval() const;

  /// Base-2^dim digits of the complete blocks of this address (the
  /// remainder of depth % dim bits is not included).
  std::vector<std::uint64_t> digits(int dim) const;

  friend bool operator==(const CellAddress&, const CellAddress&) = default;

 private:
  int depth_ = 0;
  std::uint64_t bits_ = 0;
};

/// Binary address of the depth-`depth` cell containing t. Dyadic points
/// resolve to the half-open convention [a, b); t = 1 maps to the last cell.
/// Throws DomainError when t is outside [0, 1] or depth is out of range.
CellAddress address_of(double t, int depth);

/// Orientation of a Hilbert macro-cell (a block of `dim` binary splits).
class HilbertState {
 public:
  static HilbertState root(int dim);

  int dim() const noexcept { return dim_; }

  /// Geometric axis that carries logical coordinate `logical`.
  int geometric(int logical) const noexcept;
  /// Whether the ordering along geometric `axis` is reversed.
  bool flipped(int axis) const noexcept;

  std::vector<int> axis_perm() const;
  std::vector<bool> flip() const;

  /// State governing the interior of child `digit` (curve order, 0..2^dim-1).
  HilbertState child(std::uint64_t digit) const;

  /// Geometric side (0 lower / 1 upper) of child `digit` along each axis.
  std::vector<int> child_corner(std::uint64_t digit) const;

  friend bool operator==(const HilbertState&, const HilbertState&) = default;

 private:
  HilbertState(int dim, int direction, std::uint64_t entry)
      : dim_(dim), direction_(direction), entry_(entry) {}

  int dim_ = 1;
  int direction_ = 0;
  std::uint64_t entry_ = 0;
};

struct SplitAxis {
  int axis = 0;
  bool reversed = false;

  friend bool operator==(const SplitAxis&, const SplitAxis&) = default;
};

HilbertState child_state(const HilbertState& state, std::uint64_t child_digit);

/// Axis split at schedule position `schedule_pos` (1-based) when the split
/// opens a macro-cell with orientation `state`: logical coordinate
/// (schedule_pos - 1) mod d mapped through the state.
SplitAxis geometric_axis(const HilbertState& state, int schedule_pos);

/// Binary-level orientation: a macro-cell state plus the digit bits chosen
/// so far inside that macro-cell. This is what each tree node carries.
class HilbertCursor {
 public:
  HilbertCursor() : HilbertCursor(1) {}
  explicit HilbertCursor(int dim);

  const HilbertState& state() const noexcept { return state_; }
  int block_position() const noexcept { return position_; }
  std::uint64_t partial_digit() const noexcept { return partial_; }

  /// Axis and child ordering of the next binary split. `reversed` means the
  /// first child in curve order is the geometric upper half.
  SplitAxis split() const;

  HilbertCursor descend(int bit) const;

  friend bool operator==(const HilbertCursor&, const HilbertCursor&) = default;

 private:
  HilbertState state_ = HilbertState::root(1);
  int position_ = 0;
  std::uint64_t partial_ = 0;
};

/// Geometric lattice cell (one coordinate per axis, each in [0, 2^levels))
/// reached by following `address` with uniform midpoint splits. Requires
/// address.depth() == levels * dim.
std::vector<std::uint64_t> lattice_cell(const CellAddress& address, int dim);

}  // namespace himap
