#include "graphomic/eval/splits.hpp"

#include <cmath>
#include <map>

#include "graphomic/errors.hpp"
#include "graphomic/numcore/rng.hpp"

namespace graphomic {

std::vector<int> FoldPlan::evaluation_folds() const {
  if (holdout) return {1};
  std::vector<int> out(static_cast<std::size_t>(n_folds));
  for (int f = 0; f < n_folds; ++f) out[static_cast<std::size_t>(f)] = f;
  return out;
}

std::vector<Index> FoldPlan::test_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<Index> FoldPlan::train_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(static_cast<Index>(i));
  }
  return out;
}

namespace {

/// class id -> member indices, each list shuffled.
std::map<int, std::vector<Index>> shuffled_classes(std::span<const int> labels, Rng& rng) {
  std::map<int, std::vector<Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(static_cast<Index>(i));
  for (auto& [cls, idx] : members) {
    const std::vector<Index> perm = rng.permutation(static_cast<Index>(idx.size()));
    std::vector<Index> shuffled(idx.size());
    for (std::size_t p = 0; p < idx.size(); ++p) shuffled[p] = idx[static_cast<std::size_t>(perm[p])];
    idx = std::move(shuffled);
  }
  return members;
}

}  // namespace

FoldPlan split_75_25(std::span<const int> labels, std::uint64_t seed, std::string stratified_by) {
  if (labels.empty()) throw DataError("cannot split an empty label vector");
  Rng rng(seed);
  const auto members = shuffled_classes(labels, rng);
  FoldPlan plan{std::vector<int>(labels.size(), 0), 2, true, std::move(stratified_by), seed};
  for (const auto& [cls, idx] : members) {
    if (idx.size() < 4) {
      throw DataError("class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                      " members; a 75/25 split needs at least 4");
    }
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) / 4.0));
    for (std::size_t p = 0; p < n_test; ++p) plan.assignment[static_cast<std::size_t>(idx[p])] = 1;
  }
  return plan;
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed,
                          std::string stratified_by) {
  if (k < 2) throw ContractError("k-fold needs k >= 2, got " + std::to_string(k));
  Rng rng(seed);
  const auto members = shuffled_classes(labels, rng);
  FoldPlan plan{std::vector<int>(labels.size(), 0), k, false, std::move(stratified_by), seed};
  std::size_t position = 0;
  for (const auto& [cls, idx] : members) {
    if (idx.size() < static_cast<std::size_t>(k)) {
      throw DataError("class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                      " members; " + std::to_string(k) + "-fold needs at least " +
                      std::to_string(k));
    }
    for (Index i : idx) {
      plan.assignment[static_cast<std::size_t>(i)] = static_cast<int>(position % static_cast<std::size_t>(k));
      ++position;
    }
  }
  return plan;
}

}  // namespace graphomic
