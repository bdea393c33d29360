#pragma once

#include <qknow/errors.hpp>
#include <qknow/linalg.hpp>

#include <map>
#include <string>
#include <vector>

namespace qknow {

struct LabeledBlock {
  std::string label;
  Subspace subspace;

  friend bool operator==(const LabeledBlock&, const LabeledBlock&) = default;
};

/// An agent's information representation: nonzero, pairwise orthogonal
/// subspaces whose ranks sum to the ambient dimension. Labels stand in for
/// the eigenvalues of the question operator.
class SpectralFamily {
 public:
  explicit SpectralFamily(std::vector<LabeledBlock> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw InvalidFamily("spectral family needs at least one block");
    const std::size_t d = blocks_.front().subspace.ambient_dim();
    std::size_t total = 0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      const Subspace& b = blocks_[j].subspace;
      if (b.ambient_dim() != d) throw DimensionMismatch(d, b.ambient_dim());
      if (b.is_zero()) throw InvalidFamily("block '" + blocks_[j].label + "' is the zero subspace");
      for (std::size_t k = 0; k < j; ++k)
        if (!orthogonal(blocks_[k].subspace, b))
          throw InvalidFamily("blocks '" + blocks_[k].label + "' and '" + blocks_[j].label + "' are not orthogonal");
      total += b.rank();
    }
    if (total != d)
      throw InvalidFamily("block ranks sum to " + std::to_string(total) + ", expected " + std::to_string(d));
  }

  /// Unlabeled convenience form; blocks are labeled "0", "1", ...
  static SpectralFamily from_subspaces(const std::vector<Subspace>& blocks) {
    std::vector<LabeledBlock> labeled;
    for (std::size_t j = 0; j < blocks.size(); ++j) labeled.push_back({std::to_string(j), blocks[j]});
    return SpectralFamily(std::move(labeled));
  }

  std::size_t ambient_dim() const { return blocks_.front().subspace.ambient_dim(); }
  std::size_t size() const { return blocks_.size(); }
  const std::vector<LabeledBlock>& blocks() const { return blocks_; }
  const Subspace& block(std::size_t j) const { return blocks_.at(j).subspace; }

  friend bool operator==(const SpectralFamily&, const SpectralFamily&) = default;

 private:
  std::vector<LabeledBlock> blocks_;
};

struct Agent {
  std::string id;
  std::vector<SpectralFamily> questions;

  bool single_question() const { return questions.size() == 1; }

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Finite-dimensional model: agents, named events and named (unnormalized) states.
class Model {
 public:
  Model(std::size_t dimension, std::vector<Agent> agents, std::map<std::string, Subspace> events = {},
        std::map<std::string, Vector> states = {})
      : dimension_(dimension), agents_(std::move(agents)), events_(std::move(events)), states_(std::move(states)) {
    if (dimension_ == 0) throw InvalidModel("dimension must be positive");
    for (const auto& agent : agents_) {
      if (agent.questions.empty()) throw InvalidModel("agent '" + agent.id + "' has no question families");
      for (const auto& family : agent.questions)
        if (family.ambient_dim() != dimension_) throw DimensionMismatch(dimension_, family.ambient_dim());
    }
    for (const auto& [name, event] : events_)
      if (event.ambient_dim() != dimension_) throw DimensionMismatch(dimension_, event.ambient_dim());
    for (const auto& [name, state] : states_) {
      if (state.dim() != dimension_) throw DimensionMismatch(dimension_, state.dim());
      if (state.is_zero()) throw InvalidModel("state '" + name + "' is the zero vector");
    }
  }

  std::size_t dimension() const { return dimension_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const std::map<std::string, Subspace>& events() const { return events_; }
  const std::map<std::string, Vector>& states() const { return states_; }

  /// Agents are addressed by 1-based position.
  const Agent& agent(std::size_t index) const {
    if (index == 0 || index > agents_.size())
      throw UnknownName("unknown agent " + std::to_string(index) + " (model has " + std::to_string(agents_.size()) +
                        " agents)");
    return agents_[index - 1];
  }
  const Subspace& event(const std::string& name) const {
    auto it = events_.find(name);
    if (it == events_.end()) throw UnknownName("unknown event '" + name + "'");
    return it->second;
  }
  const Vector& state(const std::string& name) const {
    auto it = states_.find(name);
    if (it == states_.end()) throw UnknownName("unknown state '" + name + "'");
    return it->second;
  }

  bool all_single_question() const {
    for (const auto& a : agents_)
      if (!a.single_question()) return false;
    return true;
  }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::size_t dimension_;
  std::vector<Agent> agents_;
  std::map<std::string, Subspace> events_;
  std::map<std::string, Vector> states_;
};

}  // namespace qknow
