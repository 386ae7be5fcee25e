#pragma once

// Periodic honeycomb lattice in brick-wall unit-cell coordinates.
//
// Cell (i, j) with 0 <= i < n_u, 0 <= j < n_v has index c = j * n_u + i and
// holds two sites: A = 2c and B = 2c + 1. Each A site at cell r is bonded to
// B(r), B(r - e_u) and B(r - e_v); bond 3c + k is the k-th of these.

#include <array>
#include <cstdint>
#include <vector>

namespace aklt {

enum class Sublattice : std::uint8_t { A, B };

/// Integer displacement in unit cells (unwrapped).
struct CellVector {
  int u = 0;
  int v = 0;

  CellVector& operator+=(CellVector o) {
    u += o.u;
    v += o.v;
    return *this;
  }
  CellVector& operator-=(CellVector o) {
    u -= o.u;
    v -= o.v;
    return *this;
  }
  friend CellVector operator+(CellVector a, CellVector b) { return a += b; }
  friend CellVector operator-(CellVector a, CellVector b) { return a -= b; }
  friend CellVector operator-(CellVector a) { return {-a.u, -a.v}; }
  bool operator==(const CellVector&) const = default;
  bool is_zero() const { return u == 0 && v == 0; }
};

struct Bond {
  int a_site;          // endpoint on sublattice A
  int b_site;          // endpoint on sublattice B
  CellVector shift;    // cell(B) - cell(A), one of (0,0), (-1,0), (0,-1)
};

/// One hexagonal face as a closed walk v0 -> v1 -> ... -> v5 -> v0, where
/// bonds[k] joins vertices[k] and vertices[k+1]. v0 is always an A site.
struct Face {
  std::array<int, 6> vertices;
  std::array<int, 6> bonds;
};

/// The three sites met when walking around a face from one neighbour of a
/// site to another while avoiding the site itself.
struct DetourPath {
  std::array<int, 3> sites{};
  bool valid = false;
};

class HoneycombLattice {
 public:
  /// Throws ArgumentError for non-positive dimensions.
  HoneycombLattice(int n_cells_u, int n_cells_v);

  int n_cells_u() const noexcept { return n_u_; }
  int n_cells_v() const noexcept { return n_v_; }
  int site_count() const noexcept { return static_cast<int>(sublattice_.size()); }
  int bond_count() const noexcept { return static_cast<int>(bonds_.size()); }

  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  const Bond& bond(int b) const { return bonds_[b]; }
  const std::vector<Face>& faces() const noexcept { return faces_; }

  Sublattice sublattice(int site) const { return sublattice_[site]; }
  /// Unit cell (i, j) of a site.
  CellVector cell_of(int site) const;

  /// Bond indices incident to a site, in slot order 0..2.
  const std::array<int, 3>& incident_bonds(int site) const { return incident_[site]; }
  /// Neighbours in slot order; entries repeat on lattices with 1-cell extents.
  /// Throws ArgumentError for an out-of-range index.
  std::array<int, 3> neighbors(int site) const;

  /// Site across a bond from `site`.
  int other_end(int bond, int site) const;
  /// Displacement from `site` to the other end of `bond`, in cells.
  CellVector step(int bond, int site) const;

  /// Detour between neighbour slots (0,1), (0,2), (1,2) -> index 0, 1, 2.
  const std::array<DetourPath, 3>& detours(int site) const { return detours_[site]; }

 private:
  int cell_index(int i, int j) const;

  int n_u_;
  int n_v_;
  std::vector<Sublattice> sublattice_;
  std::vector<Bond> bonds_;
  std::vector<std::array<int, 3>> incident_;
  std::vector<Face> faces_;
  std::vector<std::array<DetourPath, 3>> detours_;
};

/// Index into DetourPath arrays for an unordered pair of distinct slots.
constexpr int slot_pair_index(int s1, int s2) {
  const int lo = s1 < s2 ? s1 : s2;
  const int hi = s1 < s2 ? s2 : s1;
  return lo == 0 ? hi - 1 : 2;
}

}  // namespace aklt
