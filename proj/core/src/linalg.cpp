#include "netmiso/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace netmiso {

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
  return m;
}

bool operator==(const CMat& a, const CMat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions disagree (" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + ")");
  CMat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cx aik = a(i, k);
      if (aik == cx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

CMat hermitian(const CMat& a) {
  CMat out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

CMat add(const CMat& a, const CMat& b) {
  if (!a.same_shape(b)) throw DimensionError("add: shape mismatch");
  CMat out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

CMat sub(const CMat& a, const CMat& b) {
  if (!a.same_shape(b)) throw DimensionError("sub: shape mismatch");
  CMat out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

CMat scale(const CMat& a, cx s) {
  CMat out = a;
  for (auto& v : out.data()) v *= s;
  return out;
}

double frobenius_norm(const CMat& a) {
  double acc = 0.0;
  for (const auto& v : a.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

double max_abs(const CMat& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const CMat& a) {
  for (const auto& v : a.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

CMat remove_row(const CMat& a, std::size_t r) {
  if (r >= a.rows()) throw DimensionError("remove_row: index out of range");
  CMat out(a.rows() - 1, a.cols());
  std::size_t oi = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i == r) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out(oi, j) = a(i, j);
    ++oi;
  }
  return out;
}

CMat take_row(const CMat& a, std::size_t r) {
  if (r >= a.rows()) throw DimensionError("take_row: index out of range");
  CMat out(1, a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out(0, j) = a(r, j);
  return out;
}

CMat take_cols(const CMat& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols())
    throw DimensionError("take_cols: range out of bounds");
  CMat out(a.rows(), count);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = a(i, first + j);
  return out;
}

CMat take_rows(const CMat& a, std::size_t first, std::size_t count) {
  if (first + count > a.rows())
    throw DimensionError("take_rows: range out of bounds");
  CMat out(count, a.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(first + i, j);
  return out;
}

CMat column(const CMat& a, std::size_t c) {
  if (c >= a.cols()) throw DimensionError("column: index out of range");
  CMat out(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) out(i, 0) = a(i, c);
  return out;
}

void set_column(CMat& a, std::size_t c, const CMat& col) {
  if (c >= a.cols() || col.rows() != a.rows() || col.cols() != 1)
    throw DimensionError("set_column: shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, c) = col(i, 0);
}

CMat vstack(const CMat& top, const CMat& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) throw DimensionError("vstack: column mismatch");
  CMat out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < bottom.cols(); ++j)
      out(top.rows() + i, j) = bottom(i, j);
  return out;
}

CMat lu_solve(const CMat& a, const CMat& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("lu_solve: matrix not square");
  if (b.rows() != n) throw DimensionError("lu_solve: rhs row mismatch");

  CMat lu = a;
  CMat x = b;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  const double pivot_floor =
      std::max(max_abs(a), 1.0) * std::numeric_limits<double>::epsilon() * 16.0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double cand = std::abs(lu(i, k));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (best <= pivot_floor)
      throw SingularMatrixError("lu_solve: pivot collapse, matrix is singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
    }
    const cx inv_piv = cx{1.0, 0.0} / lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cx m = lu(i, k) * inv_piv;
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= m * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      cx acc = x(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) acc -= lu(kk, c) * x(c, j);
      x(kk, j) = acc / lu(kk, kk);
    }
  }
  return x;
}

namespace {

double norm1(const CMat& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Gram-matrix inverse with conditioning check. `a` enters as r x c with
// r <= c; the Gram matrix is a a^H.
CMat gram_inverse_checked(const CMat& a) {
  const CMat g = matmul(a, hermitian(a));
  CMat ginv;
  try {
    ginv = lu_solve(g, CMat::identity(g.rows()));
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("pinv: rank-deficient input");
  }
  const double cond_g = norm1(g) * norm1(ginv);
  // cond(a)^2 ~ cond(a a^H)
  if (!(cond_g < kConditionCap * kConditionCap))
    throw SingularMatrixError("pinv: condition estimate above cap");
  if (!all_finite(ginv))
    throw SingularMatrixError("pinv: non-finite Gram inverse");
  return ginv;
}

}  // namespace

double condition_estimate(const CMat& a) {
  const CMat wide = a.rows() <= a.cols() ? a : hermitian(a);
  const CMat g = matmul(wide, hermitian(wide));
  CMat ginv;
  try {
    ginv = lu_solve(g, CMat::identity(g.rows()));
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(norm1(g) * norm1(ginv));
}

CMat pinv(const CMat& a) {
  if (a.rows() == 0 || a.cols() == 0) return CMat(a.cols(), a.rows());
  if (a.rows() <= a.cols()) {
    // Full row rank: a^H (a a^H)^-1.
    const CMat ginv = gram_inverse_checked(a);
    return matmul(hermitian(a), ginv);
  }
  // Full column rank: (a^H a)^-1 a^H.
  const CMat ah = hermitian(a);
  const CMat ginv = gram_inverse_checked(ah);
  return matmul(ginv, ah);
}

CMat orth_complement_projector(const CMat& a, std::size_t ambient_cols) {
  if (a.rows() == 0) return CMat::identity(ambient_cols);
  if (a.cols() != ambient_cols)
    throw DimensionError("orth_complement_projector: ambient dimension mismatch");
  if (a.rows() > a.cols())
    throw DimensionError("orth_complement_projector: more rows than columns");
  const CMat ginv = gram_inverse_checked(a);
  const CMat p = matmul(hermitian(a), matmul(ginv, a));
  CMat out = CMat::identity(ambient_cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= p.data()[i];
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_stream_key(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t substream) {
  std::uint64_t s = seed;
  std::uint64_t k = splitmix64(s);
  s ^= stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
  k ^= splitmix64(s);
  s ^= substream * 0xA24BAED4963EE407ULL + 0x9FB21C651E98DF25ULL;
  k ^= splitmix64(s);
  return k;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t substream)
    : seed_(seed), stream_(stream),
      engine_(mix_stream_key(seed, stream, substream)) {}

double RngStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

void RngStream::normal_pair(double& z0, double& z1) {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  z0 = r * std::cos(theta);
  z1 = r * std::sin(theta);
}

CMat sample_cgauss(RngStream& rng, std::size_t rows, std::size_t cols,
                   double variance_per_entry) {
  if (!(variance_per_entry > 0.0))
    throw DimensionError("sample_cgauss: variance must be positive");
  const double sigma = std::sqrt(variance_per_entry * 0.5);
  CMat out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double re, im;
      rng.normal_pair(re, im);
      out(i, j) = cx{re * sigma, im * sigma};
    }
  }
  return out;
}

}  // namespace netmiso
