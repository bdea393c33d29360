#pragma once

#include <qknow/errors.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>

#include <set>
#include <stdexcept>
#include <vector>

namespace qknow {

namespace detail {
inline void require_state(const SpectralFamily& f, const Vector& psi) {
  if (psi.dim() != f.ambient_dim()) throw DimensionMismatch(f.ambient_dim(), psi.dim());
  if (psi.is_zero()) throw ZeroVector();
}
}  // namespace detail

/// Indices j with P_j psi != 0. A block annihilates psi exactly when psi is
/// orthogonal to each of its basis vectors.
inline std::set<std::size_t> support_indices(const SpectralFamily& f, const Vector& psi) {
  detail::require_state(f, psi);
  std::set<std::size_t> out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (const auto& b : f.block(j).basis()) {
      if (!inner(b, psi).is_zero()) {
        out.insert(j);
        break;
      }
    }
  }
  return out;
}

/// Smallest sum of blocks whose subspace contains psi.
inline Subspace possibility_projector(const SpectralFamily& f, const Vector& psi) {
  Subspace q = Subspace::zero(f.ambient_dim());
  for (auto j : support_indices(f, psi)) q = join(q, f.block(j));
  return q;
}

inline bool knows(const SpectralFamily& f, const Vector& psi, const Subspace& event) {
  if (event.ambient_dim() != f.ambient_dim()) throw DimensionMismatch(f.ambient_dim(), event.ambient_dim());
  return leq(possibility_projector(f, psi), event);
}

/// K E = join of the blocks lying inside E.
inline Subspace knowledge_operator(const SpectralFamily& f, const Subspace& event) {
  if (event.ambient_dim() != f.ambient_dim()) throw DimensionMismatch(f.ambient_dim(), event.ambient_dim());
  Subspace k = Subspace::zero(f.ambient_dim());
  for (const auto& b : f.blocks())
    if (leq(b.subspace, event)) k = join(k, b.subspace);
  return k;
}

inline constexpr std::size_t max_oracle_blocks = 12;

/// Brute-force K E: enumerate every block-sum of the family and join those
/// that lie inside E. Exponential in the number of blocks.
inline Subspace knowledge_operator_oracle(const SpectralFamily& f, const Subspace& event) {
  if (event.ambient_dim() != f.ambient_dim()) throw DimensionMismatch(f.ambient_dim(), event.ambient_dim());
  const std::size_t m = f.size();
  if (m > max_oracle_blocks)
    throw TooManyBlocks("oracle enumeration limited to " + std::to_string(max_oracle_blocks) + " blocks, family has " +
                        std::to_string(m));
  Subspace k = Subspace::zero(f.ambient_dim());
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    std::vector<Vector> spanning;
    for (std::size_t j = 0; j < m; ++j)
      if (mask & (std::size_t{1} << j))
        spanning.insert(spanning.end(), f.block(j).basis().begin(), f.block(j).basis().end());
    const Subspace sum = canonicalize(spanning, f.ambient_dim());
    if (leq(sum, event)) k = join(k, sum);
  }
  return k;
}

namespace detail {
inline void require_single_question(const Model& m) {
  for (std::size_t i = 0; i < m.agents().size(); ++i)
    if (!m.agents()[i].single_question())
      throw MultiQuestionAgent("agent " + std::to_string(i + 1) + " ('" + m.agents()[i].id +
                               "') has several question families; use a multi-question scheme");
}

inline Subspace everyone_knows(const Model& m, const Subspace& event) {
  Subspace out = Subspace::full(m.dimension());
  for (const auto& agent : m.agents()) out = meet(out, knowledge_operator(agent.questions.front(), event));
  return out;
}
}  // namespace detail

/// M_0 E = E, M_{n+1} E = meet over agents of K_i M_n E.
inline Subspace mutual_knowledge(const Model& m, const Subspace& event, std::size_t n) {
  detail::require_single_question(m);
  if (event.ambient_dim() != m.dimension()) throw DimensionMismatch(m.dimension(), event.ambient_dim());
  Subspace current = event;
  for (std::size_t step = 0; step < n; ++step) {
    Subspace next = detail::everyone_knows(m, current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

struct CommonKnowledge {
  Subspace fixed_point;
  /// M_0, M_1, ..., ending with the first repeated element.
  std::vector<Subspace> trace;

  /// Smallest n with M_{n+1} = M_n.
  std::size_t stabilization_index() const { return trace.size() - 2; }
};

/// Iterates the mutual-knowledge hierarchy to its fixed point. Ranks strictly
/// decrease until stabilization, so at most dimension+1 steps are needed.
inline CommonKnowledge common_knowledge(const Model& m, const Subspace& event) {
  detail::require_single_question(m);
  if (event.ambient_dim() != m.dimension()) throw DimensionMismatch(m.dimension(), event.ambient_dim());
  std::vector<Subspace> trace{event};
  for (std::size_t step = 0; step <= m.dimension(); ++step) {
    Subspace next = detail::everyone_knows(m, trace.back());
    const bool stable = next == trace.back();
    trace.push_back(std::move(next));
    if (stable) return {trace.back(), std::move(trace)};
  }
  throw std::logic_error("common knowledge did not stabilize within dimension+1 steps");
}

/// |P_E psi|^2 / |psi|^2 as an exact rational.
inline Rational probability(const Vector& psi, const Subspace& event) {
  if (psi.is_zero()) throw ZeroVector();
  const Vector w = project(event, psi);
  return Rational(inner(w, w).real() / inner(psi, psi).real());
}

}  // namespace qknow
