#pragma once

#include <qknow/errors.hpp>
#include <qknow/knowledge.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>

#include <span>
#include <string>
#include <vector>

namespace qknow {

namespace detail {
/// Every block of f splits as the direct sum of its meets with the blocks of g.
inline bool decomposes_over(const SpectralFamily& f, const SpectralFamily& g) {
  for (const auto& p : f.blocks()) {
    std::size_t total = 0;
    for (const auto& q : g.blocks()) total += meet(p.subspace, q.subspace).rank();
    if (total != p.subspace.rank()) return false;
  }
  return true;
}
}  // namespace detail

/// Lattice-theoretic projector commutation: [P, Q] = 0 for all block pairs.
inline bool families_commute(const SpectralFamily& f, const SpectralFamily& g) {
  if (f.ambient_dim() != g.ambient_dim()) throw DimensionMismatch(f.ambient_dim(), g.ambient_dim());
  return detail::decomposes_over(f, g) && detail::decomposes_over(g, f);
}

/// Common refinement of pairwise commuting families: all nonzero meets of one
/// block per family, in lexicographic order of block indices (first family
/// varies slowest). Labels are "(a,b,...)" tuples. A single family is
/// returned unchanged.
inline SpectralFamily joint_refinement(std::span<const SpectralFamily> families) {
  if (families.empty()) throw std::invalid_argument("joint refinement of an empty family list");
  for (std::size_t a = 0; a < families.size(); ++a)
    for (std::size_t b = a + 1; b < families.size(); ++b)
      if (!families_commute(families[a], families[b]))
        throw NonCommutingFamilies("question families " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                   " do not commute");
  if (families.size() == 1) return families.front();

  struct Partial {
    std::vector<std::string> labels;
    Subspace subspace;
  };
  std::vector<Partial> partials;
  for (const auto& b : families.front().blocks()) partials.push_back({{b.label}, b.subspace});

  for (const auto& family : families.subspan(1)) {
    std::vector<Partial> next;
    for (const auto& p : partials) {
      for (const auto& b : family.blocks()) {
        Subspace m = meet(p.subspace, b.subspace);
        if (m.is_zero()) continue;
        auto labels = p.labels;
        labels.push_back(b.label);
        next.push_back({std::move(labels), std::move(m)});
      }
    }
    partials = std::move(next);
  }

  std::vector<LabeledBlock> blocks;
  for (auto& p : partials) {
    std::string label = "(";
    for (std::size_t k = 0; k < p.labels.size(); ++k) label += (k ? "," : "") + p.labels[k];
    blocks.push_back({label + ")", std::move(p.subspace)});
  }
  return SpectralFamily(std::move(blocks));
}

inline SpectralFamily joint_refinement(const std::vector<SpectralFamily>& families) {
  return joint_refinement(std::span<const SpectralFamily>(families));
}

/// Knowing through the joint measurement of commuting questions.
inline bool knows_von_neumann(std::span<const SpectralFamily> families, const Vector& psi, const Subspace& event) {
  return knows(joint_refinement(families), psi, event);
}

inline bool knows_von_neumann(const std::vector<SpectralFamily>& families, const Vector& psi,
                              const Subspace& event) {
  return knows_von_neumann(std::span<const SpectralFamily>(families), psi, event);
}

/// Knowing through at least one question asked separately; no commutation needed.
inline bool knows_either_or(std::span<const SpectralFamily> families, const Vector& psi, const Subspace& event) {
  if (psi.is_zero()) throw ZeroVector();
  for (const auto& f : families)
    if (knows(f, psi, event)) return true;
  return false;
}

inline bool knows_either_or(const std::vector<SpectralFamily>& families, const Vector& psi, const Subspace& event) {
  return knows_either_or(std::span<const SpectralFamily>(families), psi, event);
}

}  // namespace qknow
