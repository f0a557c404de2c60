#include "msir/baselines.hpp"
#include "msir/linalg.hpp"
#include "msir/simbench.hpp"
#include "support.hpp"

#include <algorithm>

using namespace msir;
using msir::test::check_fit_invariants;
using msir::test::gaussian_matrix;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double angle_to(const Matrix& B, const Matrix& truth) { return subspace_distance(B, truth).angle_deg; }

template <typename Fit>
std::vector<double> angles(SimulationSpec spec, int reps, int d, Fit fit) {
    std::vector<double> out;
    for (int rep = 0; rep < reps; ++rep) {
        const auto data = generate(spec, rep_seed(spec, rep));
        const MsirFit f = fit(data);
        check_fit_invariants(f);
        out.push_back(angle_to(f.leading_basis(d), data.B_true));
    }
    return out;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("SIR recovers a linear index") {
    std::vector<double> a;
    const Vector beta = Vector(Eigen::Matrix<double, 5, 1>(1, 2, 0, -1, 0.5));
    for (int rep = 0; rep < 15; ++rep) {
        const Matrix X = gaussian_matrix(500, 5, 40 + rep);
        const Vector y = X * beta + 0.1 * msir::test::gaussian_vector(500, 90 + rep);
        a.push_back(angle_to(fit_sir(X, y).leading_basis(1), beta));
    }
    CHECK(median(a) < 10.0);
}

TEST_CASE("SIR misses the symmetric direction of the motivating model") {
    SimulationSpec spec;
    spec.model = SimModel::Motivating;
    spec.n = 400;
    spec.p = 4;
    const auto a = angles(spec, 9, 2, [](const SimData& d) { return fit_sir(d.X, d.y); });
    CHECK(median(a) > 45.0);
}

TEST_CASE("SAVE recovers the symmetric model") {
    SimulationSpec spec;
    spec.model = SimModel::Model1;
    spec.n = 500;
    spec.p = 5;
    spec.sigma = 0.1;
    const auto a = angles(spec, 15, 1, [](const SimData& d) { return fit_save(d.X, d.y); });
    CHECK(median(a) < 20.0);
}

TEST_CASE("SAVE kernel vanishes when every within-slice covariance is the identity") {
    std::vector<Matrix> within(4, Matrix::Identity(3, 3));
    const Matrix K = save_kernel(within, Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
    CHECK(K.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("SAVE has no stable direction under independence") {
    std::vector<double> a;
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix X1 = gaussian_matrix(300, 5, 200 + rep);
        const Matrix X2 = gaussian_matrix(300, 5, 300 + rep);
        const auto f1 = fit_save(X1, msir::test::gaussian_vector(300, 400 + rep));
        const auto f2 = fit_save(X2, msir::test::gaussian_vector(300, 500 + rep));
        a.push_back(angle_to(f1.leading_basis(1), f2.leading_basis(1)));
        CHECK((f1.kernel - f1.kernel.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> es(f1.kernel);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
    CHECK(median(a) > 30.0);
}

TEST_CASE("SAVE needs two observations per slice") {
    const Matrix X = gaussian_matrix(12, 2, 1);
    Vector y(12);
    for (int i = 0; i < 12; ++i) y[i] = i;
    MsirOptions opts;
    opts.slices = 12;
    opts.discrete = DiscreteMode::Continuous;
    CHECK_THROWS_AS(fit_save(X, y, opts), DataError);
}

TEST_CASE("PHD recovers the symmetric model") {
    SimulationSpec spec;
    spec.model = SimModel::Model1;
    spec.n = 500;
    spec.p = 5;
    spec.sigma = 0.1;
    const auto a = angles(spec, 15, 1, [](const SimData& d) { return fit_phd(d.X, d.y); });
    CHECK(median(a) < 20.0);
}

TEST_CASE("PHD kernel vanishes under variance-only dependence") {
    SimulationSpec spec;
    spec.model = SimModel::Model5;
    spec.p = 10;
    auto mean_norm = [&](long n) {
        spec.n = n;
        double total = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const auto data = generate(spec, rep_seed(spec, rep));
            total += fit_phd(data.X, data.y).kernel.norm();
        }
        return total / 10.0;
    };
    // Zero population kernel: the sample kernel shrinks like n^-1/2.
    CHECK(mean_norm(4000) < 0.5 * mean_norm(250));

    spec.n = 500;
    const auto phd = angles(spec, 15, 1, [](const SimData& d) { return fit_phd(d.X, d.y); });
    const auto save = angles(spec, 15, 1, [](const SimData& d) { return fit_save(d.X, d.y); });
    CHECK(median(phd) > 30.0);
    CHECK(median(phd) > median(save) + 20.0);
}

TEST_CASE("PHD kernel") {
    const Matrix X = gaussian_matrix(60, 4, 41);
    const auto constant = fit_phd(X, Vector::Constant(60, 2.5));
    CHECK(constant.kernel.cwiseAbs().maxCoeff() == 0.0);

    const Vector y = X.col(0).array().square() - X.col(1).array().square();
    for (auto variant : {PhdVariant::Response, PhdVariant::Residual}) {
        const auto f = fit_phd(X, y, variant);
        check_fit_invariants(f);
        CHECK((f.kernel - f.kernel.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        for (Eigen::Index j = 1; j < f.eigenvalues.size(); ++j)
            CHECK(std::abs(f.eigenvalues[j]) <= std::abs(f.eigenvalues[j - 1]));
    }
    CHECK_THROWS_AS(fit_phd(gaussian_matrix(5, 4, 1), Vector::Zero(5)), DataError);
}

TEST_CASE("residual PHD removes the linear trend") {
    const Matrix X = gaussian_matrix(400, 3, 42);
    const Vector y = 5.0 * X.col(2) + X.col(0).array().square().matrix();
    const auto f = fit_phd(X, y, PhdVariant::Residual);
    CHECK(angle_to(f.leading_basis(1), Matrix(Matrix::Identity(3, 1))) < 15.0);
}

TEST_CASE("SIR eigenvalue ordering and weights") {
    const Matrix X = gaussian_matrix(200, 3, 43);
    const Vector y = X.col(0) + 0.3 * msir::test::gaussian_vector(200, 44);
    const auto f = fit_sir(X, y);
    check_fit_invariants(f);
    CHECK(f.d_max == std::min<int>(3, f.sliced.H - 1));
    CHECK((f.omega - f.sliced.proportions).norm() == 0.0);
}

}  // TEST_SUITE
