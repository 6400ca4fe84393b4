#pragma once

// Finitely-atomic Borel spaces, their events, and scalar measures.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/error.hpp"

namespace fpovm {

/// Finite set of distinct labels, stored in lexicographic order. Copies share
/// the label storage.
class DiscreteBorelSpace {
 public:
  explicit DiscreteBorelSpace(std::vector<std::string> labels) {
    if (labels.empty()) throw Error(ErrorKind::validation, "atoms: space needs at least one atom");
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      throw Error(ErrorKind::validation, "atoms: labels must be distinct");
    }
    atoms_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  }

  /// Labels "0".."count-1" (sorted lexicographically, so "10" precedes "2").
  static DiscreteBorelSpace with_default_labels(std::size_t count) {
    return DiscreteBorelSpace(default_labels(count));
  }

  static std::vector<std::string> default_labels(std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t k = 0; k < count; ++k) labels.push_back(std::to_string(k));
    return labels;
  }

  std::size_t size() const { return atoms_->size(); }
  const std::vector<std::string>& atoms() const { return *atoms_; }
  const std::string& label(std::size_t i) const { return (*atoms_)[i]; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::lower_bound(atoms_->begin(), atoms_->end(), label);
    if (it == atoms_->end() || *it != label) {
      throw Error(ErrorKind::validation, "atoms: unknown atom label '" + label + "'");
    }
    return static_cast<std::size_t>(it - atoms_->begin());
  }

  friend bool operator==(const DiscreteBorelSpace& a, const DiscreteBorelSpace& b) {
    return a.atoms_ == b.atoms_ || *a.atoms_ == *b.atoms_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> atoms_;
};

/// Permutation that sorts `labels` lexicographically: sorted[i] = labels[perm[i]].
inline std::vector<std::size_t> canonical_order(const std::vector<std::string>& labels) {
  std::vector<std::size_t> perm(labels.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  return perm;
}

inline void require_same_space(const DiscreteBorelSpace& a, const DiscreteBorelSpace& b) {
  if (!(a == b)) throw Error(ErrorKind::space_mismatch, "objects live on different atom spaces");
}

/// Subset of the atoms of a space.
class Event {
 public:
  Event(DiscreteBorelSpace space, std::vector<bool> members)
      : space_(std::move(space)), members_(std::move(members)) {
    if (members_.size() != space_.size()) {
      throw Error(ErrorKind::dimension_mismatch, "event membership size differs from atom count");
    }
  }

  static Event empty(const DiscreteBorelSpace& space) {
    return Event(space, std::vector<bool>(space.size(), false));
  }
  static Event whole(const DiscreteBorelSpace& space) {
    return Event(space, std::vector<bool>(space.size(), true));
  }
  static Event atom(const DiscreteBorelSpace& space, std::size_t index) {
    std::vector<bool> m(space.size(), false);
    m.at(index) = true;
    return Event(space, std::move(m));
  }
  static Event from_labels(const DiscreteBorelSpace& space, const std::vector<std::string>& labels) {
    std::vector<bool> m(space.size(), false);
    for (const auto& l : labels) m[space.index_of(l)] = true;
    return Event(space, std::move(m));
  }
  /// Bit i of `mask` selects atom i; requires space.size() <= 63.
  static Event from_mask(const DiscreteBorelSpace& space, unsigned long long mask) {
    std::vector<bool> m(space.size(), false);
    for (std::size_t i = 0; i < space.size(); ++i) m[i] = ((mask >> i) & 1ULL) != 0;
    return Event(space, std::move(m));
  }

  const DiscreteBorelSpace& space() const { return space_; }
  bool contains(std::size_t index) const { return members_[index]; }
  const std::vector<bool>& members() const { return members_; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i]) out.push_back(i);
    }
    return out;
  }
  bool is_empty() const { return std::none_of(members_.begin(), members_.end(), [](bool b) { return b; }); }

  friend bool operator==(const Event& a, const Event& b) {
    return a.space_ == b.space_ && a.members_ == b.members_;
  }

 private:
  DiscreteBorelSpace space_;
  std::vector<bool> members_;
};

inline Event intersection(const Event& a, const Event& b) {
  require_same_space(a.space(), b.space());
  std::vector<bool> m(a.members().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.contains(i) && b.contains(i);
  return Event(a.space(), std::move(m));
}

inline Event set_union(const Event& a, const Event& b) {
  require_same_space(a.space(), b.space());
  std::vector<bool> m(a.members().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.contains(i) || b.contains(i);
  return Event(a.space(), std::move(m));
}

inline Event complement(const Event& a) {
  std::vector<bool> m(a.members().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = !a.contains(i);
  return Event(a.space(), std::move(m));
}

/// Nonnegative finite weight per atom.
class ScalarMeasure {
 public:
  ScalarMeasure(DiscreteBorelSpace space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size()) {
      throw Error(ErrorKind::dimension_mismatch, "measure needs one weight per atom");
    }
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorKind::validation, "nonnegative weight: measure weights must be finite and >= 0");
      }
    }
  }

  static ScalarMeasure counting(const DiscreteBorelSpace& space) {
    return ScalarMeasure(space, std::vector<double>(space.size(), 1.0));
  }

  const DiscreteBorelSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  DiscreteBorelSpace space_;
  std::vector<double> weights_;
};

/// Sum of weights over the event's atoms, in canonical atom order.
inline double measure_of(const ScalarMeasure& m, const Event& e) {
  require_same_space(m.space(), e.space());
  double total = 0.0;
  for (std::size_t i = 0; i < m.weights().size(); ++i) {
    if (e.contains(i)) total += m.weight(i);
  }
  return total;
}

}  // namespace fpovm
