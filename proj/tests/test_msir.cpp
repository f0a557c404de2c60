#include "msir/baselines.hpp"
#include "msir/linalg.hpp"
#include "msir/msir.hpp"
#include "msir/simbench.hpp"
#include "support.hpp"

#include <algorithm>

using namespace msir;
using msir::test::check_fit_invariants;
using msir::test::gaussian_matrix;

namespace {

SliceMixture single(const Vector& mean) {
    SliceMixture m;
    m.components.push_back({1.0, mean, Matrix::Identity(mean.size(), mean.size())});
    return m;
}

MsirOptions sir_like(std::optional<int> H = std::nullopt) {
    MsirOptions o;
    o.slices = H;
    o.gmm.components = {1};
    return o;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_SUITE("msir") {

TEST_CASE("kernel of equal means is zero") {
    const Vector mu = Eigen::Vector3d(1, 2, 3);
    std::vector<SliceMixture> mix{single(mu), single(mu), single(mu)};
    const auto k = kernel_matrix(mix, Eigen::Vector3d(0.2, 0.3, 0.5));
    CHECK(k.M.cwiseAbs().maxCoeff() < 1e-15);
    CHECK((k.mean - mu).norm() < 1e-15);
}

TEST_CASE("kernel of two opposite means") {
    const Vector m = Eigen::Vector3d(1.0, -2.0, 0.5);
    std::vector<SliceMixture> mix{single(m), single(-m)};
    const auto k = kernel_matrix(mix, Eigen::Vector2d(0.5, 0.5));
    CHECK((k.M - m * m.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(k.omega.sum() == doctest::Approx(1.0));
}

TEST_CASE("kernel weights are slice proportions times mixing weights") {
    SliceMixture a = single(Eigen::Vector2d(0, 0));
    a.components[0].weight = 0.25;
    a.components.push_back({0.75, Eigen::Vector2d(1, 1), Matrix::Identity(2, 2)});
    const SliceMixture b = single(Eigen::Vector2d(-1, 2));
    std::vector<SliceMixture> mix{a, b};
    const auto k = kernel_matrix(mix, Eigen::Vector2d(0.4, 0.6));
    REQUIRE(k.omega.size() == 3);
    CHECK(k.omega[0] == doctest::Approx(0.1));
    CHECK(k.omega[1] == doctest::Approx(0.3));
    CHECK(k.omega[2] == doctest::Approx(0.6));
    Matrix expected = Matrix::Zero(2, 2);
    for (int r = 0; r < 3; ++r) {
        const Vector d = k.component_means.row(r).transpose() - k.mean;
        expected += k.omega[r] * d * d.transpose();
    }
    CHECK((k.M - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("single-component slices reproduce the slice-mean kernel") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix X = gaussian_matrix(150, 4, 1000 + seed);
        const Vector y = X.col(0) + 0.5 * X.col(1).array().square().matrix() + 0.2 * msir::test::gaussian_vector(150, seed);
        const auto m = fit_msir(X, y, sir_like());
        const auto s = fit_sir(X, y, sir_like());
        CHECK((m.kernel - s.kernel).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(m.d_max == s.d_max);
        CHECK((m.eigenvalues - s.eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((m.basis - s.basis).cwiseAbs().maxCoeff() < 1e-9);
        check_fit_invariants(m);
        check_fit_invariants(s);
    }
}

TEST_CASE("motivating example recovers both directions") {
    SimulationSpec spec;
    spec.model = SimModel::Motivating;
    spec.n = 400;
    spec.p = 4;
    std::vector<double> msir_angles, sir_first;
    for (int rep = 0; rep < 9; ++rep) {
        const auto data = generate(spec, rep_seed(spec, rep));
        MsirOptions opts;
        opts.seed = rep;
        const auto fit = fit_msir(data.X, data.y, opts);
        check_fit_invariants(fit);
        msir_angles.push_back(subspace_distance(fit.leading_basis(2), data.B_true).angle_deg);
        const auto sir = fit_sir(data.X, data.y);
        sir_first.push_back(subspace_distance(sir.leading_basis(1), Matrix(Matrix::Identity(4, 1))).angle_deg);
    }
    CHECK(median(msir_angles) < 15.0);
    CHECK(median(sir_first) < 15.0);
}

TEST_CASE("noise gives a smaller leading eigenvalue than a structured response") {
    SimulationSpec spec;
    spec.model = SimModel::Model1;
    spec.n = 200;
    spec.p = 5;
    int wins = 0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        const auto data = generate(spec, rep_seed(spec, rep));
        const Vector noise = msir::test::gaussian_vector(spec.n, 7000 + rep);
        MsirOptions opts;
        opts.seed = rep;
        const auto structured = fit_msir(data.X, data.y, opts);
        const auto null = fit_msir(data.X, noise, opts);
        check_fit_invariants(null);
        if (null.eigenvalues[0] < structured.eigenvalues[0]) ++wins;
    }
    CHECK(wins >= 0.95 * reps);
}

TEST_CASE("projection") {
    const Matrix X = gaussian_matrix(120, 3, 31);
    const Vector y = X.col(0) + X.col(1).array().square().matrix();
    const auto fit = fit_msir(X, y);
    check_fit_invariants(fit);
    const Matrix Z = project(fit, X, fit.d_max);
    CHECK(Z.rows() == 120);
    CHECK(subspace_distance(fit.basis, fit.raw_dirs).delta < 1e-10);
    CHECK(project(fit, fit.grand_mean.transpose(), 1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS(project(fit, X, 0));
    CHECK_THROWS(project(fit, X, fit.d_max + 1));
    CHECK_THROWS_AS(project(fit, gaussian_matrix(4, 2, 1), 1), DataError);

    MsirFit axis = fit;
    axis.basis = Matrix::Identity(3, fit.d_max);
    const Matrix Ze1 = project(axis, X, 1);
    CHECK((Ze1.col(0) - (X.col(0).array() - fit.grand_mean[0]).matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("grand mean of the components is close to the sample mean") {
    const Matrix X = gaussian_matrix(300, 3, 32);
    const Vector y = X.col(0).array().square() + X.col(1).array();
    const auto fit = fit_msir(X, y);
    CHECK((fit.grand_mean - column_means(X)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rescaling a predictor leaves the projections unchanged") {
    const Matrix X = gaussian_matrix(200, 4, 33);
    const Vector y = X.col(0) + X.col(1).array().square().matrix();
    Matrix Xs = X;
    Xs.col(2) *= 7.5;
    Xs.col(0) *= 0.2;
    for (const auto& opts : {sir_like(), sir_like(6)}) {
        const auto a = fit_msir(X, y, opts);
        const auto b = fit_msir(Xs, y, opts);
        const Matrix Za = (X.rowwise() - a.grand_mean.transpose()) * a.raw_dirs;
        const Matrix Zb = (Xs.rowwise() - b.grand_mean.transpose()) * b.raw_dirs;
        CHECK((Za - Zb).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("discrete response fits one slice per class") {
    Matrix X = gaussian_matrix(150, 3, 34);
    Vector y(150);
    for (int i = 0; i < 150; ++i) y[i] = i % 3;
    for (int i = 0; i < 150; ++i) X(i, 0) += 3.0 * y[i];
    const auto fit = fit_msir(X, y);
    CHECK(fit.sliced.H == 3);
    CHECK(fit.sliced.kind == ResponseKind::Discrete);
    check_fit_invariants(fit);
    CHECK(std::abs(fit.basis(0, 0)) > 0.95);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(fit_msir(gaussian_matrix(4, 4, 1), Vector::Zero(4)), DataError);
    CHECK_THROWS_AS(fit_msir(gaussian_matrix(10, 2, 1), Vector::Zero(9)), DataError);
}

}  // TEST_SUITE
