#pragma once

#include <qknow/classical.hpp>
#include <qknow/formula.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace qknow::testing {

/// Seeded random generators for small exact models. Entries stay in a small
/// integer range so that rational growth stays bounded at dimension <= 6.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  GaussianRational scalar(int range = 2) {
    std::uniform_int_distribution<int> pick(-range, range);
    const int re = pick(rng_);
    const int im = coin(0.4) ? pick(rng_) : 0;
    return {Rational(re), Rational(im)};
  }

  Vector vector(std::size_t d) {
    Vector v(d);
    // Sparse vectors hit coordinate subspaces often, which keeps knowledge non-trivial.
    for (std::size_t k = 0; k < d; ++k)
      if (coin(0.7)) v[k] = scalar();
    return v;
  }

  Vector nonzero_vector(std::size_t d) {
    for (;;) {
      Vector v = vector(d);
      if (!v.is_zero()) return v;
    }
  }

  Subspace subspace(std::size_t d) {
    std::vector<Vector> vs;
    const std::size_t count = uniform(0, d);
    for (std::size_t k = 0; k < count; ++k) vs.push_back(vector(d));
    return canonicalize(vs, d);
  }

  /// Exactly orthogonal (unnormalized) basis of C^d: the standard basis, or
  /// Gram-Schmidt applied to random vectors.
  std::vector<Vector> orthogonal_basis(std::size_t d) {
    if (coin(0.3)) {
      std::vector<Vector> out;
      for (std::size_t k = 0; k < d; ++k) out.push_back(Vector::unit(d, k));
      return out;
    }
    std::vector<Vector> out;
    while (out.size() < d) {
      Vector u = nonzero_vector(d);
      for (const auto& b : out) u -= (inner(b, u) / inner(b, b)) * b;
      if (!u.is_zero()) out.push_back(std::move(u));
    }
    std::shuffle(out.begin(), out.end(), rng_);
    return out;
  }

  /// Random grouping of an orthogonal basis into blocks.
  SpectralFamily family_over(const std::vector<Vector>& basis, std::size_t max_blocks = 12) {
    const std::size_t d = basis.size();
    std::vector<std::size_t> order(d);
    for (std::size_t k = 0; k < d; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng_);
    const std::size_t blocks = uniform(1, std::min(d, max_blocks));
    std::vector<std::vector<Vector>> groups(blocks);
    for (std::size_t k = 0; k < d; ++k) groups[k < blocks ? k : uniform(0, blocks - 1)].push_back(basis[order[k]]);
    std::vector<Subspace> out;
    for (const auto& g : groups) out.push_back(canonicalize(g, d));
    return SpectralFamily::from_subspaces(out);
  }

  SpectralFamily family(std::size_t d, std::size_t max_blocks = 12) { return family_over(orthogonal_basis(d), max_blocks); }

  /// Joins of random blocks, random block-sums of other families, and random
  /// vectors; a plain random subspace would almost never contain a block.
  Subspace event_for(const std::vector<SpectralFamily>& families, std::size_t d) {
    switch (uniform(0, 3)) {
      case 0: return subspace(d);
      case 1: return block_sum(families.at(uniform(0, families.size() - 1)));
      case 2: {
        Subspace e = block_sum(families.at(uniform(0, families.size() - 1)));
        if (!e.is_full()) e = join(e, canonicalize(std::vector<Vector>{vector(d)}, d));
        return e;
      }
      default:
        return meet(block_sum(families.at(uniform(0, families.size() - 1))),
                    join(block_sum(families.at(uniform(0, families.size() - 1))), subspace(d)));
    }
  }

  Subspace block_sum(const SpectralFamily& f) {
    Subspace s = Subspace::zero(f.ambient_dim());
    for (const auto& b : f.blocks())
      if (coin(0.5)) s = join(s, b.subspace);
    return s;
  }

  /// Single-question agents; families drawn over a small pool of shared
  /// orthogonal bases so that some agents commute and some do not.
  Model model(std::size_t d, std::size_t agents) {
    std::vector<std::vector<Vector>> pool;
    const std::size_t bases = uniform(1, 2);
    for (std::size_t k = 0; k < bases; ++k) pool.push_back(orthogonal_basis(d));
    std::vector<Agent> list;
    for (std::size_t i = 0; i < agents; ++i)
      list.push_back({std::to_string(i + 1), {family_over(pool[uniform(0, pool.size() - 1)])}});
    std::vector<SpectralFamily> families;
    for (const auto& a : list) families.push_back(a.questions.front());
    std::map<std::string, Subspace> events;
    events.emplace("E", event_for(families, d));
    events.emplace("F", event_for(families, d));
    events.emplace("G", event_for(families, d));
    std::map<std::string, Vector> states;
    states.emplace("psi", nonzero_vector(d));
    return Model(d, std::move(list), std::move(events), std::move(states));
  }

  StateSet subset(std::size_t n) {
    StateSet out;
    for (std::size_t w = 0; w < n; ++w)
      if (coin()) out.insert(w);
    return out;
  }

  ClassicalPartition partition(std::size_t n) {
    const std::size_t blocks = uniform(1, n);
    std::vector<StateSet> groups(blocks);
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t k = 0; k < n; ++k) groups[k < blocks ? k : uniform(0, blocks - 1)].insert(order[k]);
    return ClassicalPartition(n, std::move(groups));
  }

  ClassicalModel classical(std::size_t n, std::size_t agents) {
    std::vector<ClassicalPartition> ps;
    for (std::size_t i = 0; i < agents; ++i) ps.push_back(partition(n));
    std::map<std::string, StateSet> events{{"E", subset(n)}, {"F", subset(n)}};
    return ClassicalModel(n, std::move(ps), std::move(events));
  }

  Formula formula(int depth, const std::vector<std::string>& atoms, std::size_t agents) {
    if (depth <= 0 || coin(0.2)) {
      switch (uniform(0, 5)) {
        case 0: return Formula::top();
        case 1: return Formula::bot();
        default: return Formula::atom(atoms.at(uniform(0, atoms.size() - 1)));
      }
    }
    switch (uniform(0, 7)) {
      case 0: return Formula::negation(formula(depth - 1, atoms, agents));
      case 1: return Formula::conjunction(formula(depth - 1, atoms, agents), formula(depth - 1, atoms, agents));
      case 2: return Formula::disjunction(formula(depth - 1, atoms, agents), formula(depth - 1, atoms, agents));
      case 3: return Formula::knows(uniform(1, agents), formula(depth - 1, atoms, agents));
      case 4: return Formula::everyone(formula(depth - 1, atoms, agents));
      case 5: return Formula::mutual(uniform(0, 3), formula(depth - 1, atoms, agents));
      case 6: return Formula::common(formula(depth - 1, atoms, agents));
      default: return Formula::conjunction(formula(depth - 1, atoms, agents), formula(depth - 1, atoms, agents));
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qknow::testing
