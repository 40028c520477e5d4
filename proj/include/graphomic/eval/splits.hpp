#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic {

/// Fold assignment per sample. For a k-fold plan, assignment[i] is the fold in
/// which sample i is tested. For a holdout plan, 0 = train and 1 = test.
struct FoldPlan {
  std::vector<int> assignment;
  int n_folds = 0;
  bool holdout = false;
  std::string stratified_by;
  std::uint64_t seed = 0;

  /// Folds to evaluate: {1} for a holdout plan, 0..k-1 otherwise.
  std::vector<int> evaluation_folds() const;
  std::vector<Index> test_indices(int fold) const;
  std::vector<Index> train_indices(int fold) const;
};

/// Stratified 75/25 split: per class, round(n_c / 4) samples go to test.
/// Throws DataError when a class has fewer than 4 members.
FoldPlan split_75_25(std::span<const int> labels, std::uint64_t seed,
                     std::string stratified_by = {});

/// Per-class shuffled index lists are concatenated and position p goes to
/// fold p mod k. Throws DataError when a class has fewer than k members.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed,
                          std::string stratified_by = {});

}  // namespace graphomic
