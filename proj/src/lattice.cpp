#include "aklt/lattice.hpp"

#include <string>

#include "aklt/errors.hpp"

namespace aklt {

HoneycombLattice::HoneycombLattice(int n_cells_u, int n_cells_v) : n_u_(n_cells_u), n_v_(n_cells_v) {
  if (n_cells_u < 1 || n_cells_v < 1) {
    throw ArgumentError("lattice dimensions must be >= 1, got " + std::to_string(n_cells_u) + "x" +
                        std::to_string(n_cells_v));
  }
  const int cells = n_u_ * n_v_;
  sublattice_.resize(2 * cells);
  incident_.resize(2 * cells);
  bonds_.reserve(3 * cells);
  for (int c = 0; c < cells; ++c) {
    sublattice_[2 * c] = Sublattice::A;
    sublattice_[2 * c + 1] = Sublattice::B;
  }

  for (int j = 0; j < n_v_; ++j) {
    for (int i = 0; i < n_u_; ++i) {
      const int a = 2 * cell_index(i, j);
      const std::array<std::pair<int, CellVector>, 3> targets{{
          {2 * cell_index(i, j) + 1, {0, 0}},
          {2 * cell_index(i - 1, j) + 1, {-1, 0}},
          {2 * cell_index(i, j - 1) + 1, {0, -1}},
      }};
      for (int k = 0; k < 3; ++k) {
        const int b = static_cast<int>(bonds_.size());
        bonds_.push_back({a, targets[k].first, targets[k].second});
        incident_[a][k] = b;
        // B(r) meets A(r), A(r + e_u), A(r + e_v) through slots 0, 1, 2.
        incident_[targets[k].first][k] = b;
      }
    }
  }

  auto bond_at = [&](int i, int j, int k) { return 3 * cell_index(i, j) + k; };
  auto a_at = [&](int i, int j) { return 2 * cell_index(i, j); };
  auto b_at = [&](int i, int j) { return 2 * cell_index(i, j) + 1; };
  faces_.reserve(cells);
  for (int j = 0; j < n_v_; ++j) {
    for (int i = 0; i < n_u_; ++i) {
      Face f;
      f.vertices = {a_at(i, j), b_at(i, j), a_at(i + 1, j), b_at(i + 1, j - 1), a_at(i + 1, j - 1), b_at(i, j - 1)};
      f.bonds = {bond_at(i, j, 0),     bond_at(i + 1, j, 1),     bond_at(i + 1, j, 2),
                 bond_at(i + 1, j - 1, 0), bond_at(i + 1, j - 1, 1), bond_at(i, j, 2)};
      faces_.push_back(f);
    }
  }

  detours_.resize(2 * cells);
  for (const Face& f : faces_) {
    for (int k = 0; k < 6; ++k) {
      const int s = f.vertices[k];
      const int in_bond = f.bonds[(k + 5) % 6];
      const int out_bond = f.bonds[k];
      int in_slot = -1;
      int out_slot = -1;
      for (int slot = 0; slot < 3; ++slot) {
        if (incident_[s][slot] == in_bond) in_slot = slot;
        if (incident_[s][slot] == out_bond) out_slot = slot;
      }
      if (in_slot < 0 || out_slot < 0 || in_slot == out_slot) continue;
      DetourPath& path = detours_[s][slot_pair_index(in_slot, out_slot)];
      if (path.valid) continue;
      const std::array<int, 3> mid{f.vertices[(k + 2) % 6], f.vertices[(k + 3) % 6], f.vertices[(k + 4) % 6]};
      if (mid[0] == s || mid[1] == s || mid[2] == s) continue;
      path.sites = mid;
      path.valid = true;
    }
  }
}

int HoneycombLattice::cell_index(int i, int j) const {
  i = ((i % n_u_) + n_u_) % n_u_;
  j = ((j % n_v_) + n_v_) % n_v_;
  return j * n_u_ + i;
}

CellVector HoneycombLattice::cell_of(int site) const {
  const int c = site / 2;
  return {c % n_u_, c / n_u_};
}

std::array<int, 3> HoneycombLattice::neighbors(int site) const {
  if (site < 0 || site >= site_count()) {
    throw ArgumentError("site index " + std::to_string(site) + " out of range");
  }
  std::array<int, 3> out{};
  for (int k = 0; k < 3; ++k) out[k] = other_end(incident_[site][k], site);
  return out;
}

int HoneycombLattice::other_end(int bond, int site) const {
  const Bond& b = bonds_[bond];
  return b.a_site == site ? b.b_site : b.a_site;
}

CellVector HoneycombLattice::step(int bond, int site) const {
  const Bond& b = bonds_[bond];
  return sublattice_[site] == Sublattice::A ? b.shift : -b.shift;
}

}  // namespace aklt
