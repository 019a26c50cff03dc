#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "magnonet/entanglement.hpp"
#include "magnonet/steady_state.hpp"
#include "oracles.hpp"

#include <random>

using namespace magnonet;
using Eigen::MatrixXd;
using fixtures::reference_params;

namespace {

CovarianceMatrix two_mode(const Eigen::Matrix4d& v) { return {v, {magnon(1), magnon(2)}}; }

CovarianceMatrix three_mode(const MatrixXd& v) { return {v, {magnon(1), magnon(2), magnon(3)}}; }

MatrixXd tmsv_plus_vacuum(double r) {
  MatrixXd v = 0.5 * MatrixXd::Identity(6, 6);
  v.topLeftCorner(4, 4) = oracle::two_mode_squeezed(r);
  return v;
}

std::vector<double> random_nu(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> excess(0.0, 3.0);
  std::vector<double> nu(n);
  for (auto& x : nu) x = 0.5 + excess(rng);
  return nu;
}

}  // namespace

TEST_CASE("symplectic form") {
  const MatrixXd omega = symplectic_form(3);
  CHECK((omega * omega + MatrixXd::Identity(6, 6)).norm() == 0);
  CHECK((omega + omega.transpose()).norm() == 0);
  CHECK(omega(0, 1) == 1);
  CHECK(omega(1, 0) == -1);
}

TEST_CASE("steady covariance of decoupled modes") {
  SystemParams p = reference_params();
  p.g.fill(0);
  p.J12 = p.J23 = 0;
  p.G.fill(0);
  p.Omega.fill(0);
  p.T = 0;
  for (auto method : {LyapunovMethod::kSchur, LyapunovMethod::kKronecker}) {
    const CovarianceMatrix v = steady_covariance(build_model(p), {method, {}});
    CHECK((v.matrix() - 0.5 * MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(v.mode_count() == 6);
    CHECK(v.modes()[3] == magnon(1));
  }

  p.T = 0.3;  // every mode sits at 10 GHz, so N is uniform
  const double n = thermal_occupation(p.omega_a[0], p.T);
  const CovarianceMatrix hot = steady_covariance(build_model(p));
  CHECK((hot.matrix() - (n + 0.5) * MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("steady covariance at the single-OPA operating point is physical") {
  const LinearModel model = build_model(reference_params());
  const CovarianceMatrix v = steady_covariance(model);
  const MatrixXd& m = v.matrix();
  const double residual = inf_norm(model.A * m + m * model.A.transpose() + model.D);
  CHECK(residual <= 1e-10 * std::max(inf_norm(model.A) * inf_norm(m), inf_norm(model.D)));
  CHECK(physicality_margin(v) >= -1e-9);

  SystemParams hot = reference_params();
  hot.G[0] = from_mhz(20);
  CHECK_THROWS_AS(steady_covariance(build_model(hot)), UnstableSystemError);
}

TEST_CASE("extract_submatrix") {
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(12, 1, 12);
  const auto modes = all_modes();
  const CovarianceMatrix v(d.asDiagonal(), {modes.begin(), modes.end()});

  CHECK(extract_submatrix(v, modes).matrix() == v.matrix());

  const ModeIndex pair[] = {magnon(1), magnon(2)};
  const CovarianceMatrix sub = extract_submatrix(v, pair);
  CHECK(sub.matrix() == Eigen::Vector4d(7, 8, 9, 10).asDiagonal().toDenseMatrix());

  // Composition: extracting twice equals extracting the intersection.
  std::mt19937_64 rng(1);
  MatrixXd r = MatrixXd::Random(12, 12);
  const CovarianceMatrix full(r + r.transpose(), {modes.begin(), modes.end()});
  const ModeIndex outer[] = {cavity(2), magnon(3), magnon(1), cavity(1)};
  const ModeIndex inner[] = {magnon(1), cavity(2)};
  CHECK(extract_submatrix(extract_submatrix(full, outer), inner).matrix() ==
        extract_submatrix(full, inner).matrix());

  const ModeIndex missing[] = {cavity(3)};
  CHECK_THROWS_AS(extract_submatrix(sub, missing), std::invalid_argument);
}

TEST_CASE("partial_transpose") {
  std::mt19937_64 rng(2);
  const MatrixXd s = oracle::random_symplectic(2, rng);
  const CovarianceMatrix v = two_mode(oracle::williamson_state(s, {0.7, 1.1}));

  CHECK(partial_transpose(v, {}).matrix() == v.matrix());

  const ModeIndex first[] = {magnon(1)};
  const Eigen::Matrix4d p = Eigen::Vector4d(1, -1, 1, 1).asDiagonal();
  const CovarianceMatrix pt = partial_transpose(v, first);
  CHECK((pt.matrix() - p * v.matrix() * p).norm() == 0);
  CHECK(partial_transpose(pt, first).matrix() == v.matrix());

  const ModeIndex unknown[] = {cavity(1)};
  CHECK_THROWS_AS(partial_transpose(v, unknown), std::invalid_argument);
}

TEST_CASE("symplectic eigenvalues of known states") {
  const auto vac = symplectic_eigenvalues(three_mode(0.5 * MatrixXd::Identity(6, 6)));
  REQUIRE(vac.size() == 3);
  for (double nu : vac) CHECK(nu == doctest::Approx(0.5).epsilon(1e-14));

  const double r = 0.8;
  const CovarianceMatrix tmsv = two_mode(oracle::two_mode_squeezed(r));
  const auto pure = symplectic_eigenvalues(tmsv);
  CHECK(pure[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pure[1] == doctest::Approx(0.5).epsilon(1e-12));

  const ModeIndex first[] = {magnon(1)};
  const auto flipped = symplectic_eigenvalues(partial_transpose(tmsv, first));
  CHECK(flipped[0] == doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-12));
  CHECK(flipped[1] == doctest::Approx(std::exp(2 * r) / 2).epsilon(1e-12));
}

TEST_CASE("symplectic eigenvalues recover the Williamson spectrum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<double> nu = random_nu(n, rng);
    const MatrixXd v = oracle::williamson_state(oracle::random_symplectic(n, rng), nu);
    const auto every = all_modes();
    std::vector<ModeIndex> modes(every.begin(), every.begin() + n);
    const CovarianceMatrix cm(v, modes);
    const auto got = symplectic_eigenvalues(cm);
    std::sort(nu.begin(), nu.end());
    for (int k = 0; k < n; ++k) CHECK(got[k] == doctest::Approx(nu[k]).epsilon(1e-9));

    double prod = 1;
    for (double x : got) prod *= 4 * x * x;
    CHECK(prod == doctest::Approx(std::pow(4.0, n) * v.determinant()).epsilon(1e-8));
    CHECK(physicality_margin(cm) >= -1e-9);
  }
}

TEST_CASE("two-mode closed form agrees on 1000 random physical states") {
  std::mt19937_64 rng(4);
  const ModeIndex first[] = {magnon(1)};
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Matrix4d v = oracle::williamson_state(oracle::random_symplectic(2, rng), random_nu(2, rng));
    const CovarianceMatrix cm = two_mode(v);
    const auto [lo, hi] = oracle::two_mode_symplectic(v, false);
    const auto plain = symplectic_eigenvalues(cm);
    CHECK(std::abs(plain[0] - lo) <= 1e-10 * std::max(1.0, lo));
    CHECK(std::abs(plain[1] - hi) <= 1e-10 * std::max(1.0, hi));

    const auto [tlo, thi] = oracle::two_mode_symplectic(v, true);
    const auto flipped = symplectic_eigenvalues(partial_transpose(cm, first));
    CHECK(std::abs(flipped[0] - tlo) <= 1e-10 * std::max(1.0, tlo));
    CHECK(std::abs(flipped[1] - thi) <= 1e-10 * std::max(1.0, thi));
  }
}

TEST_CASE("log negativity") {
  CHECK(log_negativity(two_mode(0.5 * Eigen::Matrix4d::Identity())) == 0);
  CHECK(log_negativity(two_mode(oracle::two_mode_squeezed(1.0))) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_negativity(three_mode(0.5 * MatrixXd::Identity(6, 6))), std::invalid_argument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  std::uniform_real_distribution<double> squeeze(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Matrix4d v = oracle::williamson_state(oracle::random_symplectic(2, rng), random_nu(2, rng));
    const double e = log_negativity(two_mode(v));
    CHECK(e >= 0);

    // Transposing the other mode gives the same value.
    const ModeIndex second[] = {magnon(2)};
    const double nu = symplectic_eigenvalues(partial_transpose(two_mode(v), second)).front();
    CHECK(std::abs(std::max(0.0, -std::log(2 * nu)) - e) <= 1e-10);

    // Local symplectic operations leave it unchanged.
    const MatrixXd local = oracle::squeezer(2, 1, squeeze(rng)) * oracle::rotation(2, 0, angle(rng));
    const Eigen::Matrix4d moved = local * v * local.transpose();
    CHECK(std::abs(log_negativity(two_mode(moved)) - e) < 1e-9);
  }
}

TEST_CASE("one-versus-two log negativity") {
  const CovarianceMatrix vac = three_mode(0.5 * MatrixXd::Identity(6, 6));
  for (int k = 1; k <= 3; ++k) CHECK(one_vs_two_log_negativity(vac, magnon(k)) == 0);

  const double r = 0.6;
  const CovarianceMatrix v = three_mode(tmsv_plus_vacuum(r));
  CHECK(one_vs_two_log_negativity(v, magnon(3)) == 0);
  CHECK(one_vs_two_log_negativity(v, magnon(1)) == doctest::Approx(2 * r).epsilon(1e-12));
  CHECK(one_vs_two_log_negativity(v, magnon(2)) == doctest::Approx(2 * r).epsilon(1e-12));
  CHECK_THROWS_AS(one_vs_two_log_negativity(v, cavity(1)), std::invalid_argument);
}

TEST_CASE("residual contangle") {
  MatrixXd thermal = MatrixXd::Identity(6, 6);
  thermal.diagonal() << 0.5, 0.5, 1.3, 1.3, 2.0, 2.0;
  const ContangleResult product = residual_contangle(three_mode(thermal));
  CHECK(product.minimum == 0);
  for (double x : product.residuals) CHECK(x == 0);

  // All entanglement of TMSV(1,2) + vacuum(3) is bipartite.
  const ContangleResult bip = residual_contangle(three_mode(tmsv_plus_vacuum(0.6)));
  for (double x : bip.residuals) CHECK(std::abs(x) < 1e-10);
  CHECK(bip.pivots[0] == magnon(1));
  CHECK(bip.pivots[2] == magnon(3));
}

TEST_CASE("no entanglement without the OPA") {
  SystemParams p = reference_params();
  p.G.fill(0);
  const ModeIndex triple[] = {magnon(1), magnon(2), magnon(3)};
  for (double da : {-30.0, -12.0, 0.0, 9.0, 30.0}) {
    for (double dm : {-30.0, -22.0, 0.0, 10.0, 30.0}) {
      const Detunings d = apply_detuning_constraints(from_mhz(da), from_mhz(dm));
      p.delta_a = d.delta_a;
      p.delta_m = d.delta_m;
      const CovarianceMatrix v = steady_covariance(build_model(p));
      const auto modes = all_modes();
      for (int i = 0; i < kModes; ++i) {
        for (int j = i + 1; j < kModes; ++j) CHECK(log_negativity(v, modes[i], modes[j]) == 0);
      }
      CHECK(residual_contangle(extract_submatrix(v, triple)).minimum == 0);
    }
  }
}

TEST_CASE("entanglement at the single-OPA operating point") {
  const CovarianceMatrix v = steady_covariance(build_model(reference_params()));
  CHECK(log_negativity(v, magnon(1), magnon(3)) > 0);
  CHECK(log_negativity(v, magnon(3), magnon(1)) ==
        doctest::Approx(log_negativity(v, magnon(1), magnon(3))).epsilon(1e-10));
}

TEST_CASE("covariance matrix validation") {
  CHECK_THROWS_AS(CovarianceMatrix(MatrixXd::Identity(3, 3), {magnon(1)}), std::invalid_argument);
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(CovarianceMatrix(asym, {magnon(1)}), std::invalid_argument);
  CHECK_THROWS_AS(CovarianceMatrix(MatrixXd::Identity(4, 4), {magnon(1), magnon(1)}), std::invalid_argument);
}
