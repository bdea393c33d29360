#pragma once

#include <qknow/errors.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>

#include <algorithm>
#include <map>
#include <iterator>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qknow {

/// Subset of the finite state space {0, ..., n-1}.
using StateSet = std::set<std::size_t>;

namespace detail {
inline void require_subset(const StateSet& e, std::size_t omega_size) {
  if (!e.empty() && *e.rbegin() >= omega_size)
    throw std::out_of_range("state " + std::to_string(*e.rbegin()) + " outside Omega of size " +
                            std::to_string(omega_size));
}
}  // namespace detail

/// Partition of Omega into nonempty, pairwise disjoint blocks. Blocks are
/// stored sorted by their smallest element.
class ClassicalPartition {
 public:
  ClassicalPartition(std::size_t omega_size, std::vector<StateSet> blocks)
      : omega_size_(omega_size), blocks_(std::move(blocks)), owner_(omega_size, omega_size) {
    if (omega_size_ == 0) throw InvalidModel("Omega must be nonempty");
    std::sort(blocks_.begin(), blocks_.end(), [](const StateSet& a, const StateSet& b) {
      return a.empty() ? !b.empty() : (!b.empty() && *a.begin() < *b.begin());
    });
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      if (blocks_[j].empty()) throw InvalidModel("partition block is empty");
      detail::require_subset(blocks_[j], omega_size_);
      for (auto w : blocks_[j]) {
        if (owner_[w] != omega_size_) throw InvalidModel("state " + std::to_string(w) + " lies in two blocks");
        owner_[w] = j;
      }
    }
    for (std::size_t w = 0; w < omega_size_; ++w)
      if (owner_[w] == omega_size_) throw InvalidModel("state " + std::to_string(w) + " lies in no block");
  }

  std::size_t omega_size() const { return omega_size_; }
  const std::vector<StateSet>& blocks() const { return blocks_; }

  /// P(omega), the block containing omega.
  const StateSet& block_of(std::size_t omega) const {
    if (omega >= omega_size_) throw std::out_of_range("state " + std::to_string(omega) + " outside Omega");
    return blocks_[owner_[omega]];
  }

  friend bool operator==(const ClassicalPartition& a, const ClassicalPartition& b) {
    return a.omega_size_ == b.omega_size_ && a.blocks_ == b.blocks_;
  }

 private:
  std::size_t omega_size_;
  std::vector<StateSet> blocks_;
  std::vector<std::size_t> owner_;
};

class ClassicalModel {
 public:
  ClassicalModel(std::size_t omega_size, std::vector<ClassicalPartition> partitions,
                 std::map<std::string, StateSet> events = {})
      : omega_size_(omega_size), partitions_(std::move(partitions)), events_(std::move(events)) {
    if (omega_size_ == 0) throw InvalidModel("Omega must be nonempty");
    for (const auto& p : partitions_)
      if (p.omega_size() != omega_size_) throw DimensionMismatch(omega_size_, p.omega_size());
    for (const auto& [name, e] : events_) detail::require_subset(e, omega_size_);
  }

  std::size_t omega_size() const { return omega_size_; }
  const std::vector<ClassicalPartition>& partitions() const { return partitions_; }
  const std::map<std::string, StateSet>& events() const { return events_; }

 private:
  std::size_t omega_size_;
  std::vector<ClassicalPartition> partitions_;
  std::map<std::string, StateSet> events_;
};

inline StateSet whole_space(std::size_t omega_size) {
  StateSet all;
  for (std::size_t w = 0; w < omega_size; ++w) all.insert(all.end(), w);
  return all;
}

inline bool classical_knows(const ClassicalPartition& p, std::size_t omega, const StateSet& event) {
  detail::require_subset(event, p.omega_size());
  const StateSet& block = p.block_of(omega);
  return std::includes(event.begin(), event.end(), block.begin(), block.end());
}

/// K E = { omega : P(omega) ⊆ E }, the union of blocks inside E.
inline StateSet classical_K(const ClassicalPartition& p, const StateSet& event) {
  detail::require_subset(event, p.omega_size());
  StateSet out;
  for (const auto& block : p.blocks())
    if (std::includes(event.begin(), event.end(), block.begin(), block.end())) out.insert(block.begin(), block.end());
  return out;
}

/// Finest common coarsening: connected components of the relation "shares a
/// block in some input partition".
inline ClassicalPartition meet_partition(std::span<const ClassicalPartition> partitions) {
  if (partitions.empty()) throw std::invalid_argument("meet of an empty partition list");
  const std::size_t n = partitions.front().omega_size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : partitions) {
    if (p.omega_size() != n) throw DimensionMismatch(n, p.omega_size());
    for (const auto& block : p.blocks()) {
      const std::size_t root = find(*block.begin());
      for (auto w : block) parent[find(w)] = root;
    }
  }
  std::map<std::size_t, StateSet> components;
  for (std::size_t w = 0; w < n; ++w) components[find(w)].insert(w);
  std::vector<StateSet> blocks;
  for (auto& [root, members] : components) blocks.push_back(std::move(members));
  return ClassicalPartition(n, std::move(blocks));
}

inline ClassicalPartition meet_partition(const std::vector<ClassicalPartition>& partitions) {
  return meet_partition(std::span<const ClassicalPartition>(partitions));
}

/// Iterates M_{n+1} = ∩_i K_i M_n from M_0 = E until it stabilizes.
inline StateSet classical_common_knowledge(const ClassicalModel& m, const StateSet& event) {
  detail::require_subset(event, m.omega_size());
  StateSet current = event;
  // Each non-final step removes at least one state.
  for (std::size_t step = 0; step <= m.omega_size(); ++step) {
    StateSet next = whole_space(m.omega_size());
    for (const auto& p : m.partitions()) {
      const StateSet known = classical_K(p, current);
      StateSet both;
      std::set_intersection(next.begin(), next.end(), known.begin(), known.end(), std::inserter(both, both.end()));
      next = std::move(both);
    }
    if (next == current) return current;
    current = std::move(next);
  }
  throw std::logic_error("classical common knowledge did not stabilize within |Omega| steps");
}

/// span{ e_w : w ∈ E } in C^|Omega|.
inline Subspace subspace_of(std::size_t omega_size, const StateSet& event) {
  detail::require_subset(event, omega_size);
  std::vector<Vector> basis;
  for (auto w : event) basis.push_back(Vector::unit(omega_size, w));
  return canonicalize(basis, omega_size);
}

/// { w : e_w ∈ S }, the preimage of a subspace under the diagonal embedding.
inline StateSet subset_of(const Subspace& s) {
  StateSet out;
  for (std::size_t w = 0; w < s.ambient_dim(); ++w)
    if (contains(s, Vector::unit(s.ambient_dim(), w))) out.insert(w);
  return out;
}

inline std::string state_name(std::size_t omega) { return "w" + std::to_string(omega); }

/// Diagonal embedding: block B -> span{e_w : w ∈ B}, event E -> span{e_w : w ∈ E},
/// state w -> e_w (named "w<index>"). Agents get ids "1", "2", ... and blocks
/// are labeled "B0", "B1", ... in partition order.
inline Model embed(const ClassicalModel& m) {
  const std::size_t n = m.omega_size();
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < m.partitions().size(); ++i) {
    std::vector<LabeledBlock> blocks;
    const auto& parts = m.partitions()[i].blocks();
    for (std::size_t j = 0; j < parts.size(); ++j) blocks.push_back({"B" + std::to_string(j), subspace_of(n, parts[j])});
    agents.push_back({std::to_string(i + 1), {SpectralFamily(std::move(blocks))}});
  }
  std::map<std::string, Subspace> events;
  for (const auto& [name, e] : m.events()) events.emplace(name, subspace_of(n, e));
  std::map<std::string, Vector> states;
  for (std::size_t w = 0; w < n; ++w) states.emplace(state_name(w), Vector::unit(n, w));
  return Model(n, std::move(agents), std::move(events), std::move(states));
}

}  // namespace qknow
