#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library code it is checking.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Minimum total cost over every injective row->column (or column->row)
/// mapping, summed in row order.
inline double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int m = static_cast<int>(cost.rows());
  const int n = static_cast<int>(cost.cols());
  if (m == 0 || n == 0) return 0.0;
  const bool by_row = m <= n;
  const int small = std::min(m, n);
  std::vector<int> perm(std::max(m, n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    if (by_row) {
      for (int r = 0; r < small; ++r) total += cost(r, perm[r]);
    } else {
      // sum in row order: collect (row, col) for col = 0..n-1
      std::vector<std::pair<int, int>> pairs;
      for (int c = 0; c < small; ++c) pairs.emplace_back(perm[c], c);
      std::sort(pairs.begin(), pairs.end());
      for (auto [r, c] : pairs) total += cost(r, c);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Fraction of (positive, negative) pairs ordered correctly, ties count 1/2.
inline double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double q : neg) {
      if (p > q) wins += 1.0;
      else if (p == q) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

struct SignedRankOracle {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;
};

/// Two-sided exact signed-rank p-value by enumerating all 2^n sign patterns
/// of the mid-ranked absolute differences (zeros dropped).
inline SignedRankOracle signed_rank_enumeration(const std::vector<double>& a,
                                                const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] - b[i] != 0.0) d.push_back(a[i] - b[i]);
  }
  SignedRankOracle out;
  const std::size_t n = d.size();
  if (n == 0) return out;

  // doubled mid-ranks keep everything integral
  std::vector<long> rank2(n);
  for (std::size_t i = 0; i < n; ++i) {
    long less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      else if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank2[i] = 2 * less + equal + 1;
  }
  long wp2 = 0, total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (d[i] > 0) wp2 += rank2[i];
  }
  const long t2 = std::min(wp2, total2 - wp2);
  std::uint64_t at_or_below = 0;
  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    long s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) s += rank2[i];
    }
    if (s <= t2) ++at_or_below;
  }
  out.w_plus = wp2 / 2.0;
  out.w_minus = (total2 - wp2) / 2.0;
  out.p_value = std::min(1.0, 2.0 * static_cast<double>(at_or_below) / static_cast<double>(patterns));
  return out;
}

/// Central-difference gradient of f at x.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        Eigen::VectorXd x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 double floor = 1e-8) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, relative_error(a.data()[i], b.data()[i], floor));
  }
  return worst;
}

/// Uniformly random rotation (via a normalized Gaussian quaternion) and a
/// translation in [-10, 10]^3.
inline Eigen::Isometry3d random_rigid(std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  Eigen::Quaterniond q(n01(gen), n01(gen), n01(gen), n01(gen));
  q.normalize();
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = q.toRotationMatrix();
  t.translation() = Eigen::Vector3d(shift(gen), shift(gen), shift(gen));
  return t;
}

/// Constant-velocity box filter written out in textbook (non-Joseph) form.
/// State (u, v, s, r, du, dv, ds).
struct ReferenceBoxFilter {
  Eigen::Matrix<double, 7, 1> x;
  Eigen::Matrix<double, 7, 7> P;
  Eigen::Matrix<double, 7, 7> F = Eigen::Matrix<double, 7, 7>::Identity();
  Eigen::Matrix<double, 4, 7> H = Eigen::Matrix<double, 4, 7>::Zero();
  Eigen::Matrix<double, 7, 7> Q;
  Eigen::Matrix4d R;

  ReferenceBoxFilter(const Eigen::Vector4d& z, const Eigen::Matrix<double, 7, 1>& q_diag,
                     const Eigen::Vector4d& r_diag, const Eigen::Matrix<double, 7, 1>& p_diag) {
    x.setZero();
    x.head<4>() = z;
    P = p_diag.asDiagonal();
    Q = q_diag.asDiagonal();
    R = r_diag.asDiagonal();
    F(0, 4) = F(1, 5) = F(2, 6) = 1.0;
    for (int i = 0; i < 4; ++i) H(i, i) = 1.0;
  }
  void predict() {
    x = F * x;
    P = F * P * F.transpose() + Q;
  }
  void update(const Eigen::Vector4d& z) {
    const Eigen::Matrix4d S = H * P * H.transpose() + R;
    const Eigen::Matrix<double, 7, 4> K = P * H.transpose() * S.inverse();
    x = x + K * (z - H * x);
    P = (Eigen::Matrix<double, 7, 7>::Identity() - K * H) * P;
  }
};

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("gaitscore_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace oracle
