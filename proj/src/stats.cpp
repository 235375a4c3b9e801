#include "driftbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "driftbench/dist.hpp"

namespace driftbench {

void validate_matrix(const ResultMatrix& m) {
  if (m.rows() < 2 || m.cols() < 2)
    throw std::invalid_argument("result matrix needs N >= 2 datasets and K >= 2 methods");
  if (m.cells.size() != size_t(m.rows()) * m.cols())
    throw std::invalid_argument("result matrix cell count mismatch");
  for (const double v : m.cells) {
    if (!std::isfinite(v)) throw std::invalid_argument("result matrix has a missing cell");
  }
}

std::vector<double> average_ranks(const ResultMatrix& m, bool higher_better) {
  validate_matrix(m);
  const int n = m.rows(), k = m.cols();
  std::vector<double> sums(k, 0.0);
  std::vector<int> order(k);
  for (int r = 0; r < n; ++r) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return higher_better ? m.at(r, a) > m.at(r, b) : m.at(r, a) < m.at(r, b);
    });
    int i = 0;
    while (i < k) {
      int j = i;
      while (j + 1 < k && m.at(r, order[j + 1]) == m.at(r, order[i])) ++j;
      const double shared = 0.5 * double(i + j) + 1.0;  // mean of ranks i+1 .. j+1
      for (int t = i; t <= j; ++t) sums[order[t]] += shared;
      i = j + 1;
    }
  }
  for (double& s : sums) s /= double(n);
  return sums;
}

FriedmanResult friedman_ff(const ResultMatrix& m, bool higher_better, double alpha) {
  const auto ranks = average_ranks(m, higher_better);
  const double n = m.rows(), k = m.cols();
  double sum_sq = 0.0;
  for (const double r : ranks) sum_sq += r * r;

  FriedmanResult result;
  result.chi2 = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
  result.critical = f_quantile(1.0 - alpha, k - 1.0, (k - 1.0) * (n - 1.0));
  const double denom = n * (k - 1.0) - result.chi2;
  if (denom <= 1e-9) {
    // Identical rankings in every row: the statistic degenerates.
    result.saturated = true;
    result.ff = std::numeric_limits<double>::infinity();
    result.reject = true;
    return result;
  }
  result.ff = (n - 1.0) * result.chi2 / denom;
  result.reject = result.ff > result.critical;
  return result;
}

namespace {

// q_alpha(k) for the Nemenyi test, k = 2..20: the Studentized range quantile
// at infinite degrees of freedom divided by sqrt(2).
constexpr double kQ05[] = {1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878,
                           3.101730, 3.163684, 3.218654, 3.268004, 3.312739, 3.353618, 3.391230,
                           3.426041, 3.458425, 3.488685, 3.517073, 3.543799};
constexpr double kQ10[] = {1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884,
                           2.854606, 2.919889, 2.977768, 3.029694, 3.076733, 3.119693, 3.159199,
                           3.195743, 3.229723, 3.261461, 3.291224, 3.319233};

}  // namespace

double nemenyi_cd(int k, long long n, double alpha) {
  if (k < 2 || k > 20) throw std::invalid_argument("nemenyi_cd: k outside table range 2..20");
  if (n < 1) throw std::invalid_argument("nemenyi_cd: n must be >= 1");
  const double* table;
  if (alpha == 0.05)
    table = kQ05;
  else if (alpha == 0.10)
    table = kQ10;
  else
    throw std::invalid_argument("nemenyi_cd: alpha must be 0.05 or 0.10");
  return table[k - 2] * std::sqrt(double(k) * (k + 1.0) / (6.0 * double(n)));
}

std::vector<std::pair<int, int>> cd_groups(std::span<const double> ranks, double cd) {
  // ranks must be sorted ascending; groups are maximal intervals because the
  // "within cd" relation over points on a line has interval cliques.
  std::vector<std::pair<int, int>> groups;
  const int k = int(ranks.size());
  int last_end = -1;
  for (int i = 0; i < k; ++i) {
    int j = i;
    while (j + 1 < k && ranks[j + 1] - ranks[i] < cd) ++j;
    if (j > i && j > last_end) {
      groups.emplace_back(i, j);
      last_end = j;
    }
  }
  return groups;
}

RankSummary rank_summary(const ResultMatrix& m, double alpha, bool higher_better) {
  const auto ranks = average_ranks(m, higher_better);
  const int k = m.cols();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ranks[a] < ranks[b]; });

  RankSummary summary;
  for (const int c : order) {
    summary.methods.push_back(m.col_names[c]);
    summary.avg_ranks.push_back(ranks[c]);
  }
  summary.cd = nemenyi_cd(k, m.rows(), alpha);
  summary.groups = cd_groups(summary.avg_ranks, summary.cd);
  return summary;
}

void cd_diagram(const RankSummary& summary, const std::string& svg_path) {
  const int k = int(summary.methods.size());
  const double rank_lo = 1.0, rank_hi = double(k);
  const double width = 760.0, margin = 110.0;
  const double axis_y = 70.0;
  const double scale = (width - 2.0 * margin) / std::max(rank_hi - rank_lo, 1e-12);
  auto x_of = [&](double rank) { return margin + (rank - rank_lo) * scale; };

  const int rows_per_side = (k + 1) / 2;
  const double label_row_h = 22.0;
  const double group_area = 14.0 * double(summary.groups.size() + 1);
  const double height = axis_y + group_area + rows_per_side * label_row_h + 40.0;

  std::ofstream out(svg_path);
  if (!out) throw std::runtime_error("cannot write " + svg_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";

  // CD scale bar.
  out << "<line x1=\"" << x_of(rank_lo) << "\" y1=\"28\" x2=\"" << x_of(rank_lo + summary.cd)
      << "\" y2=\"28\" stroke=\"black\" stroke-width=\"2\"/>\n";
  out << "<text x=\"" << x_of(rank_lo) << "\" y=\"20\">CD = ";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", summary.cd);
  out << buf << "</text>\n";

  // Rank axis with integer ticks.
  out << "<line x1=\"" << x_of(rank_lo) << "\" y1=\"" << axis_y << "\" x2=\"" << x_of(rank_hi)
      << "\" y2=\"" << axis_y << "\" stroke=\"black\"/>\n";
  for (int r = 1; r <= k; ++r) {
    out << "<line x1=\"" << x_of(r) << "\" y1=\"" << axis_y - 4 << "\" x2=\"" << x_of(r)
        << "\" y2=\"" << axis_y + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x_of(r) - 4 << "\" y=\"" << axis_y - 8 << "\">" << r << "</text>\n";
  }

  // Group bars just below the axis.
  double group_y = axis_y + 10.0;
  for (const auto& [b, e] : summary.groups) {
    out << "<line class=\"group\" x1=\"" << x_of(summary.avg_ranks[b]) - 2 << "\" y1=\"" << group_y
        << "\" x2=\"" << x_of(summary.avg_ranks[e]) + 2 << "\" y2=\"" << group_y
        << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
    group_y += 14.0;
  }

  // Method labels: best half on the left margin, rest on the right.
  const double label_top = axis_y + group_area + 16.0;
  for (int i = 0; i < k; ++i) {
    const bool left = i < rows_per_side;
    const int row = left ? i : k - 1 - i;
    const double label_y = label_top + row * label_row_h;
    const double stem_x = x_of(summary.avg_ranks[i]);
    const double label_x = left ? margin - 100.0 : width - margin + 10.0;
    const double elbow_x = left ? margin - 8.0 : width - margin + 8.0;
    out << "<line x1=\"" << stem_x << "\" y1=\"" << axis_y << "\" x2=\"" << stem_x << "\" y2=\""
        << label_y - 4 << "\" stroke=\"gray\"/>\n";
    out << "<line x1=\"" << stem_x << "\" y1=\"" << label_y - 4 << "\" x2=\"" << elbow_x
        << "\" y2=\"" << label_y - 4 << "\" stroke=\"gray\"/>\n";
    std::snprintf(buf, sizeof buf, " (%.3f)", summary.avg_ranks[i]);
    out << "<text x=\"" << label_x << "\" y=\"" << label_y << "\">" << summary.methods[i] << buf
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out.good()) throw std::runtime_error("failed while writing " + svg_path);
}

}  // namespace driftbench
