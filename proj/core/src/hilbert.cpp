#include "himap/hilbert.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "himap/error.hpp"

namespace himap {
namespace {

// Hamilton's recurrences are written in "gray-code bit position" coordinates
// c; geometric axis g corresponds to c = (d - g) mod d. The relabelling makes
// logical coordinate j map to geometric axis j in the root state.

std::uint64_t low_mask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::uint64_t rotl(std::uint64_t x, int r, int d) {
  r %= d;
  if (r == 0) return x & low_mask(d);
  return ((x << r) | (x >> (d - r))) & low_mask(d);
}

std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

int trailing_ones(std::uint64_t i) { return std::countr_one(i); }

std::uint64_t entry_point(std::uint64_t i) {
  if (i == 0) return 0;
  return gray(2 * ((i - 1) / 2));
}

int intra_direction(std::uint64_t i, int d) {
  if (i == 0) return 0;
  if (i % 2 == 0) return trailing_ones(i - 1) % d;
  return trailing_ones(i) % d;
}

int gray_to_axis(int c, int d) { return (d - c) % d; }
int axis_to_gray(int g, int d) { return (d - g) % d; }

}  // namespace

CellAddress::CellAddress(int depth, std::uint64_t bits) : depth_(depth), bits_(bits) {
  if (depth < 0 || depth > kMaxAddressDepth) {
    throw DomainError("address depth " + std::to_string(depth) + " outside [0, " +
                      std::to_string(kMaxAddressDepth) + "]");
  }
  if (depth < 64 && (bits >> depth) != 0) {
    throw DomainError("address bits exceed depth " + std::to_string(depth));
  }
}

CellAddress CellAddress::prefix(int depth) const {
  if (depth < 0 || depth > depth_) throw DomainError("prefix depth out of range");
  return CellAddress(depth, bits_ >> (depth_ - depth));
}

CellAddress CellAddress::child(int bit) const {
  return CellAddress(depth_ + 1, (bits_ << 1) | static_cast<std::uint64_t>(bit & 1));
}

std::pair<double, double> CellAddress::interval() const {
  const double lo = std::ldexp(static_cast<double>(bits_), -depth_);
  const double hi = std::ldexp(static_cast<double>(bits_ + 1), -depth_);
  return {lo, hi};
}

std::vector<std::uint64_t> CellAddress::digits(int dim) const {
  if (dim < 1 || dim > kMaxHilbertDim) throw DomainError("dimension out of range");
  const int blocks = depth_ / dim;
  std::vector<std::uint64_t> out(blocks);
  for (int r = 0; r < blocks; ++r) {
    const int shift = depth_ - (r + 1) * dim;
    out[r] = (bits_ >> shift) & low_mask(dim);
  }
  return out;
}

CellAddress address_of(double t, int depth) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("curve parameter " + std::to_string(t) + " outside [0, 1]");
  }
  if (depth < 0 || depth > kMaxAddressDepth) {
    throw DomainError("address depth " + std::to_string(depth) + " out of range");
  }
  const std::uint64_t cells = std::uint64_t{1} << depth;
  if (t == 1.0) return CellAddress(depth, cells - 1);
  // ldexp and floor are exact here, so h = floor(t * 2^depth) exactly.
  auto h = static_cast<std::uint64_t>(std::floor(std::ldexp(t, depth)));
  if (h >= cells) h = cells - 1;
  return CellAddress(depth, h);
}

HilbertState HilbertState::root(int dim) {
  if (dim < 1 || dim > kMaxHilbertDim) {
    throw DomainError("Hilbert dimension " + std::to_string(dim) + " outside [1, " +
                      std::to_string(kMaxHilbertDim) + "]");
  }
  return HilbertState(dim, 0, 0);
}

int HilbertState::geometric(int logical) const noexcept {
  return ((logical - direction_) % dim_ + dim_) % dim_;
}

bool HilbertState::flipped(int axis) const noexcept {
  return ((entry_ >> axis_to_gray(axis, dim_)) & 1U) != 0;
}

std::vector<int> HilbertState::axis_perm() const {
  std::vector<int> perm(dim_);
  for (int j = 0; j < dim_; ++j) perm[j] = geometric(j);
  return perm;
}

std::vector<bool> HilbertState::flip() const {
  std::vector<bool> f(dim_);
  for (int g = 0; g < dim_; ++g) f[g] = flipped(g);
  return f;
}

HilbertState HilbertState::child(std::uint64_t digit) const {
  if (digit > low_mask(dim_)) {
    throw DomainError("child digit " + std::to_string(digit) + " outside [0, 2^" +
                      std::to_string(dim_) + ")");
  }
  const std::uint64_t entry = entry_ ^ rotl(entry_point(digit), direction_ + 1, dim_);
  const int direction = (direction_ + intra_direction(digit, dim_) + 1) % dim_;
  return HilbertState(dim_, direction, entry);
}

std::vector<int> HilbertState::child_corner(std::uint64_t digit) const {
  if (digit > low_mask(dim_)) throw DomainError("child digit out of range");
  const std::uint64_t corner = rotl(gray(digit), direction_ + 1, dim_) ^ entry_;
  std::vector<int> side(dim_);
  for (int c = 0; c < dim_; ++c) {
    side[gray_to_axis(c, dim_)] = static_cast<int>((corner >> c) & 1U);
  }
  return side;
}

HilbertState child_state(const HilbertState& state, std::uint64_t child_digit) {
  return state.child(child_digit);
}

SplitAxis geometric_axis(const HilbertState& state, int schedule_pos) {
  if (schedule_pos < 1) throw DomainError("schedule position must be >= 1");
  const int logical = (schedule_pos - 1) % state.dim();
  const int axis = state.geometric(logical);
  return {axis, state.flipped(axis)};
}

HilbertCursor::HilbertCursor(int dim) : state_(HilbertState::root(dim)) {}

SplitAxis HilbertCursor::split() const {
  SplitAxis s = geometric_axis(state_, position_ + 1);
  // Gray code: the side along this axis is bit_p ^ bit_{p+1}, so the previous
  // choice inside the block toggles the ordering.
  if (position_ > 0 && (partial_ & 1U)) s.reversed = !s.reversed;
  return s;
}

HilbertCursor HilbertCursor::descend(int bit) const {
  HilbertCursor next = *this;
  next.partial_ = (partial_ << 1) | static_cast<std::uint64_t>(bit & 1);
  next.position_ = position_ + 1;
  if (next.position_ == state_.dim()) {
    next.state_ = state_.child(next.partial_);
    next.partial_ = 0;
    next.position_ = 0;
  }
  return next;
}

std::vector<std::uint64_t> lattice_cell(const CellAddress& address, int dim) {
  HilbertCursor cursor(dim);
  std::vector<std::uint64_t> cell(dim, 0);
  for (int l = 0; l < address.depth(); ++l) {
    const int bit = address.bit(l);
    const SplitAxis s = cursor.split();
    const int side = bit ^ static_cast<int>(s.reversed);
    cell[s.axis] = (cell[s.axis] << 1) | static_cast<std::uint64_t>(side);
    cursor = cursor.descend(bit);
  }
  return cell;
}

}  // namespace himap
