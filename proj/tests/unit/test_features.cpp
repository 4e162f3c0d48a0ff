#include <doctest.h>

#include <random>

#include "gaitscore/error.hpp"
#include "gaitscore/features.hpp"
#include "oracles.hpp"

using namespace gaitscore;

namespace {

std::vector<PoseFrame> random_frames(std::mt19937_64& gen, int k, int n) {
  std::normal_distribution<double> d;
  std::vector<PoseFrame> frames(k, PoseFrame(n));
  for (auto& f : frames) {
    for (auto& j : f) j = Joint3D(d(gen), d(gen), d(gen));
  }
  return frames;
}

}  // namespace

TEST_CASE("jcd sizes and simple values") {
  static_assert(jcd_size(24) == 276);
  CHECK(jcd_size(2) == 1);
  std::vector<PoseFrame> frames(3, PoseFrame(24, Joint3D(1, 2, 3)));
  const Eigen::MatrixXd j = jcd(frames);
  CHECK(j.rows() == 276);
  CHECK(j.cols() == 3);
  CHECK(j.isZero(0.0));

  std::vector<PoseFrame> pair{{Joint3D(0, 0, 0), Joint3D(3, 4, 0)}};
  CHECK(jcd(pair)(0, 0) == 5.0);
}

TEST_CASE("jcd pair index enumerates the upper triangle row by row") {
  const int n = 9;
  int expected = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) CHECK(jcd_pair_index(i, j, n) == expected++);
  }
  CHECK(expected == jcd_size(n));
}

TEST_CASE("jcd entries are the pairwise distances") {
  std::mt19937_64 gen(11);
  const int n = 7;
  const auto frames = random_frames(gen, 4, n);
  const Eigen::MatrixXd j = jcd(frames);
  for (int t = 0; t < 4; ++t) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        CHECK(j(jcd_pair_index(a, b, n), t) == doctest::Approx((frames[t][a] - frames[t][b]).norm()));
      }
    }
  }
}

TEST_CASE("jcd is invariant to rigid transforms") {
  std::mt19937_64 gen(99);
  const auto frames = random_frames(gen, 5, 24);
  const Eigen::MatrixXd base = jcd(frames);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Isometry3d tf = oracle::random_rigid(gen);
    auto moved = frames;
    for (auto& f : moved) {
      for (auto& p : f) p = tf * p;
    }
    worst = std::max(worst, (jcd(moved) - base).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("jcd satisfies the triangle inequality") {
  std::mt19937_64 gen(3);
  const int n = 8;
  for (int trial = 0; trial < 50; ++trial) {
    const auto frames = random_frames(gen, 1, n);
    const Eigen::MatrixXd j = jcd(frames);
    auto d = [&](int a, int b) {
      if (a == b) return 0.0;
      return j(jcd_pair_index(std::min(a, b), std::max(a, b), n), 0);
    };
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) REQUIRE(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("motion features") {
  SUBCASE("shapes for K = 200") {
    std::mt19937_64 gen(1);
    const auto m = motion(random_frames(gen, 200, 24));
    CHECK(m.slow.rows() == 72);
    CHECK(m.slow.cols() == 199);
    CHECK(m.fast.cols() == 99);
  }
  SUBCASE("static clip") {
    std::mt19937_64 gen(2);
    const auto one = random_frames(gen, 1, 5);
    const std::vector<PoseFrame> frames(20, one[0]);
    const auto m = motion(frames);
    CHECK(m.slow.isZero(0.0));
    CHECK(m.fast.isZero(0.0));
  }
  SUBCASE("uniform translation") {
    std::vector<PoseFrame> frames;
    for (int t = 0; t < 200; ++t) {
      PoseFrame f(24);
      for (int j = 0; j < 24; ++j) f[j] = Joint3D(t + 0.25 * j, -0.5 * j, 0.125 * j);
      frames.push_back(f);
    }
    const auto m = motion(frames);
    for (Eigen::Index t = 0; t < m.slow.cols(); ++t) {
      for (int j = 0; j < 24; ++j) {
        REQUIRE(m.slow(3 * j, t) == 1.0);
        REQUIRE(m.slow(3 * j + 1, t) == 0.0);
        REQUIRE(m.slow(3 * j + 2, t) == 0.0);
      }
    }
    for (Eigen::Index t = 0; t < m.fast.cols(); ++t) {
      for (int j = 0; j < 24; ++j) {
        REQUIRE(m.fast(3 * j, t) == 2.0);
        REQUIRE(m.fast(3 * j + 1, t) == 0.0);
        REQUIRE(m.fast(3 * j + 2, t) == 0.0);
      }
    }
  }
  SUBCASE("fast is the sum of consecutive slow steps") {
    std::mt19937_64 gen(8);
    const auto frames = random_frames(gen, 31, 6);
    const auto m = motion(frames);
    for (Eigen::Index i = 0; i < m.fast.cols(); ++i) {
      const Eigen::VectorXd expect = m.slow.col(2 * i) + m.slow.col(2 * i + 1);
      CHECK((m.fast.col(i) - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("time reversal negates and reverses the slow stream") {
    std::mt19937_64 gen(4);
    auto frames = random_frames(gen, 17, 4);
    const auto fwd = motion(frames);
    std::reverse(frames.begin(), frames.end());
    const auto back = motion(frames);
    CHECK((back.slow + fwd.slow.rowwise().reverse()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("too short") {
    std::mt19937_64 gen(5);
    CHECK_THROWS_AS(motion(random_frames(gen, 2, 3)), TooShortError);
  }
}

TEST_CASE("compute_features bundles all three streams") {
  std::mt19937_64 gen(6);
  const auto frames = random_frames(gen, 16, 6);
  const FeatureTensor f = compute_features(frames);
  CHECK(f.jcd.rows() == 15);
  CHECK(f.jcd.cols() == 16);
  CHECK(f.slow.rows() == 18);
  CHECK(f.slow.cols() == 15);
  CHECK(f.fast.cols() == 7);
  CHECK(f.frames() == 16);
}

TEST_CASE("features reject ragged input") {
  std::vector<PoseFrame> frames(5, PoseFrame(4, Joint3D::Zero()));
  frames[3].pop_back();
  CHECK_THROWS_AS(jcd(frames), InputError);
  CHECK_THROWS_AS(motion(frames), InputError);
}
