#include "aklt/domain_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "aklt/errors.hpp"

namespace aklt {

AcceptanceTable::AcceptanceTable(DeformationParam a) : a_(a) {
  const double zf = log2_z_factor(a);
  for (int dz = -1; dz <= 1; ++dz) {
    for (int di = -kMaxInt; di <= kMaxInt; ++di) {
      const double exponent = (dz == 0 ? 0.0 : dz * zf) + di;
      table_[dz + 1][di + kMaxInt] = exponent >= 0 ? 1.0 : std::exp2(exponent);
    }
  }
}

TrackedConfiguration::TrackedConfiguration(FilterConfiguration config) : config_(std::move(config)) {
  const HoneycombLattice& lat = config_.lattice();
  const int n = lat.site_count();
  nbr_.resize(n);
  for (int s = 0; s < n; ++s) nbr_[s] = lat.neighbors(s);
  stamp_.assign(n, 0);
  owner_.assign(n, 0);
  rebuild_domains();
}

void TrackedConfiguration::rebuild_domains() {
  const HoneycombLattice& lat = config_.lattice();
  const int n = lat.site_count();
  domain_id_.assign(n, -1);
  domain_size_.assign(n, 0);
  free_ids_.clear();
  n_z_ = config_.count(Label::Z);
  n_inter_ = 0;
  for (const Bond& b : lat.bonds()) n_inter_ += (config_[b.a_site] != config_[b.b_site]);

  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (domain_id_[s] >= 0) continue;
    const int id = next++;
    domain_id_[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      ++domain_size_[id];
      for (int nb : nbr_[cur]) {
        if (domain_id_[nb] < 0 && config_[nb] == config_[cur]) {
          domain_id_[nb] = id;
          stack.push_back(nb);
        }
      }
    }
  }
  n_domains_ = next;
  for (int id = n - 1; id >= next; --id) free_ids_.push_back(id);
}

int TrackedConfiguration::take_id() {
  const int id = free_ids_.back();
  free_ids_.pop_back();
  return id;
}

ConfigStatistics TrackedConfiguration::statistics(DeformationParam a) const {
  return {n_z_, n_domains_, n_inter_, log2_weight(n_z_, n_domains_, n_inter_, a)};
}

TrackedConfiguration::LocalView TrackedConfiguration::inspect(int site, Label new_label) const {
  const Label old = config_[site];
  const auto& nb = nbr_[site];
  LocalView v{};
  v.old_label = old;
  v.d_n_z = (new_label == Label::Z) - (old == Label::Z);
  v.merge_count = 0;

  std::array<int, 3> parent{0, 1, 2};
  std::array<bool, 3> is_old{};
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (int k = 0; k < 3; ++k) {
    const Label l = config_[nb[k]];
    v.d_inter += (l != new_label) - (l != old);
    if (l == new_label) {
      const int id = domain_id_[nb[k]];
      bool seen = false;
      for (int q = 0; q < v.merge_count; ++q) seen |= (v.merge_ids[q] == id);
      if (!seen) v.merge_ids[v.merge_count++] = id;
    }
    is_old[k] = (l == old);
  }

  const auto& detours = config_.lattice().detours(site);
  for (int i = 0; i < 3; ++i) {
    if (!is_old[i]) continue;
    for (int j = i + 1; j < 3; ++j) {
      if (!is_old[j]) continue;
      bool joined = nb[i] == nb[j];
      if (!joined) {
        const DetourPath& p = detours[slot_pair_index(i, j)];
        joined = p.valid && config_[p.sites[0]] == old && config_[p.sites[1]] == old && config_[p.sites[2]] == old;
      }
      if (joined) {
        const int ri = find(i);
        const int rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  v.group_count = 0;
  for (int k = 0; k < 3; ++k) {
    if (is_old[k] && find(k) == k) v.group_seed[v.group_count++] = nb[k];
  }
  return v;
}

int TrackedConfiguration::resolve_split(int site, const LocalView& view) {
  finished_.clear();
  const int groups = view.group_count;
  if (groups <= 1) return groups;

  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }
  std::array<std::size_t, 3> head{};
  std::array<int, 3> parent{0, 1, 2};
  std::array<bool, 3> done{};
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (int g = 0; g < groups; ++g) {
    queue_[g].clear();
    queue_[g].push_back(view.group_seed[g]);
    stamp_[view.group_seed[g]] = epoch_;
    owner_[view.group_seed[g]] = static_cast<std::uint8_t>(g);
  }

  const Label old = view.old_label;
  int alive = groups;
  while (alive > 1) {
    for (int g = 0; g < groups && alive > 1; ++g) {
      int root = find(g);
      if (done[root] || head[g] == queue_[g].size()) continue;
      const int cur = queue_[g][head[g]++];
      for (int nb : nbr_[cur]) {
        if (nb == site || config_[nb] != old) continue;
        if (stamp_[nb] != epoch_) {
          stamp_[nb] = epoch_;
          owner_[nb] = static_cast<std::uint8_t>(g);
          queue_[g].push_back(nb);
        } else {
          const int other = find(owner_[nb]);
          root = find(g);
          if (other != root) {
            parent[std::max(other, root)] = std::min(other, root);
            --alive;
            if (alive == 1) break;
          }
        }
      }
      if (alive == 1) break;
      root = find(g);
      bool exhausted = true;
      for (int h = 0; h < groups; ++h) {
        if (find(h) == root && head[h] != queue_[h].size()) exhausted = false;
      }
      if (exhausted) {
        done[root] = true;
        --alive;
        std::vector<int>& piece = finished_.emplace_back();
        for (int h = 0; h < groups; ++h) {
          if (find(h) == root) piece.insert(piece.end(), queue_[h].begin(), queue_[h].end());
        }
      }
    }
  }
  return static_cast<int>(finished_.size()) + 1;
}

void TrackedConfiguration::commit(int site, Label new_label, const LocalView& view, int pieces) {
  const int m = view.merge_count;
  config_.set(site, new_label);
  n_z_ += view.d_n_z;
  n_inter_ += view.d_inter;
  n_domains_ += pieces - m;

  const int old_id = domain_id_[site];
  if (pieces == 0) {
    domain_size_[old_id] = 0;
    free_ids_.push_back(old_id);
  } else {
    domain_size_[old_id] -= 1;
    for (const auto& piece : finished_) {
      const int nid = take_id();
      for (int s : piece) domain_id_[s] = nid;
      domain_size_[nid] = static_cast<int>(piece.size());
      domain_size_[old_id] -= static_cast<int>(piece.size());
    }
  }
  finished_.clear();

  if (m == 0) {
    const int nid = take_id();
    domain_id_[site] = nid;
    domain_size_[nid] = 1;
    return;
  }
  int target = view.merge_ids[0];
  for (int q = 1; q < m; ++q) {
    if (domain_size_[view.merge_ids[q]] > domain_size_[target]) target = view.merge_ids[q];
  }
  for (int q = 0; q < m; ++q) {
    const int other = view.merge_ids[q];
    if (other == target) continue;
    int seed = -1;
    for (int nb : nbr_[site]) {
      if (domain_id_[nb] == other) seed = nb;
    }
    relabel_stack_.clear();
    domain_id_[seed] = target;
    relabel_stack_.push_back(seed);
    while (!relabel_stack_.empty()) {
      const int cur = relabel_stack_.back();
      relabel_stack_.pop_back();
      for (int nb : nbr_[cur]) {
        if (domain_id_[nb] == other) {
          domain_id_[nb] = target;
          relabel_stack_.push_back(nb);
        }
      }
    }
    domain_size_[target] += domain_size_[other];
    domain_size_[other] = 0;
    free_ids_.push_back(other);
  }
  domain_id_[site] = target;
  domain_size_[target] += 1;
}

FlipDelta TrackedConfiguration::evaluate(int site, Label new_label) {
  if (config_[site] == new_label) throw ArgumentError("proposed label equals the current label");
  const LocalView view = inspect(site, new_label);
  const int pieces = resolve_split(site, view);
  finished_.clear();
  return {view.d_n_z, pieces - view.merge_count, view.d_inter};
}

void TrackedConfiguration::apply(int site, Label new_label) {
  if (config_[site] == new_label) throw ArgumentError("proposed label equals the current label");
  const LocalView view = inspect(site, new_label);
  const int pieces = resolve_split(site, view);
  commit(site, new_label, view, pieces);
}

bool TrackedConfiguration::attempt(int site, Label new_label, double u, const AcceptanceTable& table) {
  const LocalView view = inspect(site, new_label);
  const int base = -view.merge_count - view.d_inter;
  if (view.group_count <= 1) {
    if (!(u < table.probability(view.d_n_z, view.group_count + base))) return false;
    finished_.clear();
    commit(site, new_label, view, view.group_count);
    return true;
  }
  const double p_low = table.probability(view.d_n_z, 1 + base);
  const double p_high = table.probability(view.d_n_z, view.group_count + base);
  if (u >= p_high) return false;
  const int pieces = resolve_split(site, view);
  if (u >= p_low && !(u < table.probability(view.d_n_z, pieces + base))) {
    finished_.clear();
    return false;
  }
  commit(site, new_label, view, pieces);
  return true;
}

void TrackedConfiguration::verify() const {
  const HoneycombLattice& lat = config_.lattice();
  const int n = lat.site_count();
  auto fail = [](const std::string& msg) { throw std::logic_error("domain tracker inconsistent: " + msg); };

  for (const Bond& b : lat.bonds()) {
    const bool same_label = config_[b.a_site] == config_[b.b_site];
    const bool same_id = domain_id_[b.a_site] == domain_id_[b.b_site];
    if (same_label != same_id) fail("bond label/id mismatch");
  }
  std::vector<int> counts(n, 0);
  for (int s = 0; s < n; ++s) {
    if (domain_id_[s] < 0 || domain_id_[s] >= n) fail("id out of range");
    ++counts[domain_id_[s]];
  }
  int used = 0;
  for (int id = 0; id < n; ++id) {
    if (counts[id] != domain_size_[id]) fail("size of id " + std::to_string(id));
    used += counts[id] > 0;
  }
  std::vector<char> is_free(n, 0);
  for (int id : free_ids_) {
    if (counts[id] != 0 || is_free[id]) fail("free list");
    is_free[id] = 1;
  }
  if (static_cast<int>(free_ids_.size()) + used != n) fail("id accounting");

  const ConfigStatistics fresh = compute_statistics(config_, DeformationParam(3.0));
  if (fresh.n_domains != used) fail("ids span several components");
  if (fresh.n_domains != n_domains_) fail("domain count");
  if (fresh.n_interdomain_bonds != n_inter_) fail("inter-domain bond count");
  if (fresh.n_z != n_z_) fail("Z count");
}

}  // namespace aklt
