#pragma once

#include <cstdint>
#include <vector>

#include "wdens/errors.hpp"

namespace wdens {

/// Orthonormal (probabilists', 1/sqrt(k!)-scaled) Hermite polynomial via the
/// stable recurrence H0 = 1, H1 = x, H_{k+1} = (x H_k - sqrt(k) H_{k-1}) / sqrt(k+1).
double hermite_eval(int k, double x);

/// Length-m tuple of non-negative integers.
struct MultiIndex {
  std::vector<int> entries;
  int degree() const {
    int d = 0;
    for (int e : entries) d += e;
    return d;
  }
};

/// C(K+m, K); throws capacity_error if the count overflows 64 bits.
std::uint64_t simplex_count(int m, int K);

/// (K+1)^K, the index count of the single-parameter box estimator.
std::uint64_t dn_index_count(int K);

/// An ordered family of multi-indices in graded lexicographic order
/// (ascending degree, then lexicographic), stored packed: per index only the
/// nonzero (coordinate, degree) pairs are kept.
class IndexSet {
public:
  /// All m-tuples with entry sum <= K.
  static IndexSet simplex(int m, int K);
  /// All K-tuples with entries in {0..K} (m is tied to K); K = 0 gives the
  /// single empty index.
  static IndexSet dn_box(int K);

  int m() const { return m_; }
  int max_degree() const { return max_degree_; }
  /// Largest single entry over the whole set; Hermite tables need only this.
  int max_entry_bound() const { return max_entry_bound_; }
  std::size_t size() const { return offsets_.size() - 1; }

  int degree(std::size_t i) const { return degrees_[i]; }
  /// 1-based position of the last nonzero entry; 0 for the zero index.
  int last_active_coord(std::size_t i) const { return last_coord_[i]; }
  /// Largest entry value; 0 for the zero index.
  int max_entry(std::size_t i) const { return max_entry_[i]; }

  /// Packed nonzero entries of index i: pairs (coordinate 0-based, degree).
  const int* pairs_begin(std::size_t i) const { return pairs_.data() + 2 * offsets_[i]; }
  const int* pairs_end(std::size_t i) const { return pairs_.data() + 2 * offsets_[i + 1]; }

  MultiIndex at(std::size_t i) const;

private:
  IndexSet(int m, int max_degree) : m_(m), max_degree_(max_degree) { offsets_.push_back(0); }
  void push(const std::vector<int>& entries);

  int m_;
  int max_degree_;
  int max_entry_bound_ = 0;
  std::vector<int> pairs_;              // interleaved (coord, degree)
  std::vector<std::size_t> offsets_;    // size() + 1
  std::vector<int> degrees_;
  std::vector<int> last_coord_;
  std::vector<int> max_entry_;
};

std::vector<MultiIndex> enumerate_simplex(int m, int K);

/// Hermite values H_k(x[p][c]) for a batch of m-vectors, all degrees 0..K,
/// computed once and shared across every multi-index.
class HermiteTable {
public:
  /// points: flat row-major P x m array of (already scaled) coordinates.
  HermiteTable(const std::vector<double>& points, std::size_t n_points, int m, int K);

  std::size_t n_points() const { return n_points_; }
  int m() const { return m_; }
  int max_degree() const { return max_degree_; }

  double value(std::size_t p, int coord, int deg) const {
    return values_[(p * m_ + coord) * (max_degree_ + 1) + deg];
  }

  /// Product of H over the nonzero entries of set's index i at point p.
  double tensor(std::size_t p, const IndexSet& set, std::size_t i) const {
    double v = 1.0;
    const std::size_t base = p * m_ * (max_degree_ + 1);
    for (const int* q = set.pairs_begin(i); q != set.pairs_end(i); q += 2)
      v *= values_[base + q[0] * (max_degree_ + 1) + q[1]];
    return v;
  }

private:
  std::size_t n_points_;
  int m_;
  int max_degree_;
  std::vector<double> values_;
};

/// Product of H_{idx[j]}(x[j]); idx and x must have equal length.
double tensor_eval(const MultiIndex& idx, const std::vector<double>& x);

}  // namespace wdens
