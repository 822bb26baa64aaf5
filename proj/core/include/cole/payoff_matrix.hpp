#ifndef COLE_PAYOFF_MATRIX_HPP_
#define COLE_PAYOFF_MATRIX_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace cole {

/// Empirical payoff table of a population: w(i, j) is the mean episodic
/// return of strategy i partnered with strategy j. Row index = head strategy.
/// Immutable in spirit; every mutation goes through the named helpers so the
/// finiteness invariant is re-checked.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(int n, std::vector<double> row_major);
  static PayoffMatrix zeros(int n);

  int size() const { return n_; }
  double at(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, double value);
  const std::vector<double>& data() const { return w_; }

  /// Leading k-by-k submatrix (generation-ordered prefix).
  PayoffMatrix prefix(int k) const;

  /// Grown by one row and column, initialized to 0; returns the new index.
  int grow();

  /// Removes row and column `idx`, shifting later indices down.
  void remove(int idx);

  bool is_symmetric(double tol = 1e-9) const;

  /// FNV-1a over dimension and raw entry bytes; stable content reference
  /// for generation records.
  std::string content_hash() const;

  /// CSV: header line "n=<count>", then n rows of n comma-separated
  /// shortest-round-trip decimals.
  std::string to_csv() const;
  static PayoffMatrix from_csv(const std::string& text);

  /// JSON object {"n": ..., "w": [row-major]}.
  std::string to_json_string() const;
  static PayoffMatrix from_json_string(const std::string& text);

  bool operator==(const PayoffMatrix& other) const = default;

 private:
  int n_ = 0;
  std::vector<double> w_;
};

}  // namespace cole

#endif  // COLE_PAYOFF_MATRIX_HPP_
