#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace driftbench {

/// N datasets (rows) by K methods (columns) of mean accuracies (or any
/// metric); no missing cells.
struct ResultMatrix {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<double> cells;  // row-major

  int rows() const { return int(row_names.size()); }
  int cols() const { return int(col_names.size()); }
  double at(int r, int c) const { return cells[size_t(r) * col_names.size() + c]; }
  double& at(int r, int c) { return cells[size_t(r) * col_names.size() + c]; }
};

void validate_matrix(const ResultMatrix& m);  // throws std::invalid_argument

/// Column means of the per-row dense ranking: best value gets rank 1 (the
/// smallest when higher_better is false), ties share the mean of their ranks.
std::vector<double> average_ranks(const ResultMatrix& m, bool higher_better = true);

struct FriedmanResult {
  double chi2 = 0.0;
  double ff = 0.0;
  double critical = 0.0;  // F(K-1, (K-1)(N-1)) at the requested alpha
  bool reject = false;
  bool saturated = false;  // chi2 == N(K-1): identical rankings in every row
};

/// chi2_F = 12N/(K(K+1)) (sum R_j^2 - K(K+1)^2/4) and
/// F_F = (N-1) chi2_F / (N(K-1) - chi2_F), rejected against the F critical
/// value at alpha.
FriedmanResult friedman_ff(const ResultMatrix& m, bool higher_better = true, double alpha = 0.05);

/// Nemenyi critical difference q_alpha(k) sqrt(k(k+1)/(6n)); k in 2..20,
/// alpha in {0.05, 0.10}.
double nemenyi_cd(int k, long long n, double alpha = 0.05);

/// Maximal groups of methods whose pairwise average-rank gaps stay below cd.
/// Returns [begin, end] index pairs into the rank-sorted order; singleton
/// groups are omitted.
std::vector<std::pair<int, int>> cd_groups(std::span<const double> ranks, double cd);

struct RankSummary {
  std::vector<std::string> methods;   // sorted by average rank, best first
  std::vector<double> avg_ranks;      // same order
  double cd = 0.0;
  std::vector<std::pair<int, int>> groups;  // indices into the sorted order
};

RankSummary rank_summary(const ResultMatrix& m, double alpha = 0.05, bool higher_better = true);

/// Critical-difference diagram: rank axis, method labels at their average
/// ranks, a CD scale bar and one horizontal bar per group. Throws
/// std::runtime_error when the path cannot be written.
void cd_diagram(const RankSummary& summary, const std::string& svg_path);

}  // namespace driftbench
