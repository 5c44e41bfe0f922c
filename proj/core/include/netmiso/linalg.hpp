#ifndef NETMISO_LINALG_HPP
#define NETMISO_LINALG_HPP

// Minimal complex dense linear algebra for small precoding problems
// (matrices here are at most a few rows/columns ~ 8x8). Products, Hermitian
// transpose, LU solves, Moore-Penrose pseudo-inverse via normal equations,
// orthogonal-complement projectors, and seeded complex Gaussian sampling.

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace netmiso {

using cx = std::complex<double>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient or ill-conditioned input (condition estimate above cap).
// Inputs beyond the cap are rejected rather than silently regularized.
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Condition-number cap for pseudo-inverses and projectors.
inline constexpr double kConditionCap = 1e10;

// Dense complex matrix, row-major.
class CMat {
public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cx{0.0, 0.0}) {}

  static CMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  cx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  const std::vector<cx>& data() const { return data_; }
  std::vector<cx>& data() { return data_; }

  bool same_shape(const CMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cx> data_;
};

bool operator==(const CMat& a, const CMat& b);

CMat matmul(const CMat& a, const CMat& b);
CMat hermitian(const CMat& a);
CMat add(const CMat& a, const CMat& b);
CMat sub(const CMat& a, const CMat& b);
CMat scale(const CMat& a, cx s);

double frobenius_norm(const CMat& a);
double max_abs(const CMat& a);
bool all_finite(const CMat& a);

// Row/column slicing used to build the per-receiver subproblems.
CMat remove_row(const CMat& a, std::size_t r);
CMat take_row(const CMat& a, std::size_t r);
CMat take_cols(const CMat& a, std::size_t first, std::size_t count);
CMat take_rows(const CMat& a, std::size_t first, std::size_t count);
CMat column(const CMat& a, std::size_t c);
void set_column(CMat& a, std::size_t c, const CMat& col);
CMat vstack(const CMat& top, const CMat& bottom);

// Solves a x = b for square a via partially pivoted LU. Throws
// SingularMatrixError when a pivot collapses.
CMat lu_solve(const CMat& a, const CMat& b);

// Moore-Penrose pseudo-inverse of a full-rank matrix via normal equations.
// The four Penrose identities hold to ~1e-10 for well-conditioned input;
// inputs whose condition estimate exceeds kConditionCap are rejected.
CMat pinv(const CMat& a);

// P = I - a^H (a a^H)^-1 a for full row-rank a (rows <= cols). Satisfies
// P^2 = P, P^H = P and a P = 0. An empty a (0 x n) yields the identity.
CMat orth_complement_projector(const CMat& a, std::size_t ambient_cols);

// Condition estimate (1-norm based) of the Gram matrix route used by pinv;
// cheap because the matrices are tiny and the Gram inverse is formed anyway.
double condition_estimate(const CMat& a);

// Deterministic per-trial random stream. Identical (seed, stream, substream)
// yields identical sequences regardless of execution order or parallelism;
// a stream is owned by exactly one trial at a time.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Derived stream for resampling a rejected trial.
  RngStream substream(std::uint64_t k) const { return {seed_, stream_, k}; }

  // Uniform in [0, 1).
  double uniform01();

  // One Box-Muller pair of independent standard normals.
  void normal_pair(double& z0, double& z1);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// Matrix of i.i.d. circularly-symmetric complex Gaussian entries with the
// given per-entry variance (real and imaginary parts each carry half).
// Entries are drawn in row-major order, one Box-Muller pair per entry.
CMat sample_cgauss(RngStream& rng, std::size_t rows, std::size_t cols,
                   double variance_per_entry);

}  // namespace netmiso

#endif  // NETMISO_LINALG_HPP
