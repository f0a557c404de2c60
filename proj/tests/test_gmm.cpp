#include "msir/gmm.hpp"
#include "msir/linalg.hpp"
#include "support.hpp"

#include <algorithm>
#include <numeric>

using namespace msir;
using msir::test::gaussian_matrix;

namespace {

Matrix clusters(const std::vector<Eigen::RowVectorXd>& centers, int per, double sd, std::uint64_t seed) {
    const Eigen::Index p = centers.front().size();
    Matrix X(static_cast<Eigen::Index>(centers.size()) * per, p);
    const Matrix noise = gaussian_matrix(X.rows(), p, seed);
    for (std::size_t c = 0; c < centers.size(); ++c)
        for (int i = 0; i < per; ++i) {
            const Eigen::Index r = static_cast<Eigen::Index>(c) * per + i;
            X.row(r) = centers[c] + sd * noise.row(r);
        }
    return X;
}

double gaussian_pdf(const Vector& x, const Vector& mu, const Matrix& S) {
    const Vector d = x - mu;
    const double q = d.dot(S.inverse() * d);
    return std::exp(-0.5 * q) / std::sqrt(std::pow(2.0 * M_PI, double(x.size())) * S.determinant());
}

void check_mixture_normalization(const SliceMixture& m) {
    double wsum = 0.0;
    for (const auto& c : m.components) {
        CHECK(c.weight >= 0.0);
        wsum += c.weight;
        CHECK((c.covariance - c.covariance.transpose()).norm() == 0.0);
    }
    CHECK(std::abs(wsum - 1.0) < 1e-12);
    CHECK((m.responsibilities.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
}

}  // namespace

TEST_SUITE("gmm") {

TEST_CASE("BIC arithmetic") {
    CHECK(bic_score(0.0, 0, 10) == 0.0);
    CHECK(bic_score(-50.0, 4, 100) == doctest::Approx(-100.0 - 4.0 * std::log(100.0)));
    CHECK(bic_score(-50.0, 4, 100) == doctest::Approx(-118.4207).epsilon(1e-6));
    CHECK(bic_score(-50.0, 5, 100) < bic_score(-50.0, 4, 100));
}

TEST_CASE("parameter counts") {
    const long p = 3, K = 2;
    CHECK(covariance_param_count(CovParam::EII, p, K) == 1);
    CHECK(covariance_param_count(CovParam::VII, p, K) == 2);
    CHECK(covariance_param_count(CovParam::EEI, p, K) == 3);
    CHECK(covariance_param_count(CovParam::VEI, p, K) == 4);
    CHECK(covariance_param_count(CovParam::VVI, p, K) == 6);
    CHECK(covariance_param_count(CovParam::EEE, p, K) == 6);
    CHECK(covariance_param_count(CovParam::VVV, p, K) == 12);
    CHECK(covariance_param_count(CovParam::FULL1, p, 1) == 6);
    CHECK(mixture_param_count(CovParam::VVV, p, K) == 1 + 6 + 12);
    CHECK(is_feasible(CovParam::VVV, p, K, 20));
    CHECK_FALSE(is_feasible(CovParam::VVV, p, K, 19));
    CHECK_FALSE(is_feasible(CovParam::FULL1, p, 2, 1000));
    CHECK(canonical_single(CovParam::VVV) == CovParam::FULL1);
    CHECK(canonical_single(CovParam::VII) == CovParam::EII);
    CHECK(canonical_single(CovParam::VEI) == CovParam::EEI);
    CHECK(parse_cov_param("XXX") == CovParam::FULL1);
    CHECK_THROWS(parse_cov_param("VEV"));
}

TEST_CASE("single component is the constrained ML estimate") {
    const Matrix X = gaussian_matrix(60, 3, 21) * Matrix(Eigen::Vector3d(1.0, 2.0, 0.5).asDiagonal()) +
                     Matrix::Ones(60, 3);
    const Vector mean = column_means(X);
    const Matrix S = sample_covariance(X);
    for (auto param : all_cov_params()) {
        const auto m = em_fit(X, 1, param, 1e-5, 500, 0);
        REQUIRE(m.K() == 1);
        const auto& c = m.components[0];
        CHECK((c.mean - mean).cwiseAbs().maxCoeff() < 1e-12);
        Matrix expected;
        if (m.param == CovParam::EII)
            expected = (S.trace() / 3.0) * Matrix::Identity(3, 3);
        else if (m.param == CovParam::EEI)
            expected = Matrix(S.diagonal().asDiagonal());
        else
            expected = S;
        CHECK((c.covariance - expected).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(m.param == canonical_single(param));
    }
}

TEST_CASE("two spherical clusters are recovered") {
    const Matrix X = clusters({Eigen::RowVector2d(0, 0), Eigen::RowVector2d(10, 10)}, 100, 1.0, 22);
    const auto m = em_fit(X, 2, CovParam::VII, 1e-5, 500, 3);
    REQUIRE(m.K() == 2);
    std::vector<Vector> means{m.components[0].mean, m.components[1].mean};
    std::sort(means.begin(), means.end(), [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    CHECK(means[0].norm() < 0.5);
    CHECK((means[1] - Eigen::Vector2d(10, 10)).norm() < 0.5);
    check_mixture_normalization(m);
}

TEST_CASE("EM log-likelihood never decreases") {
    const Matrix X = clusters({Eigen::RowVector3d(0, 0, 0), Eigen::RowVector3d(3, 1, 0), Eigen::RowVector3d(0, 4, 2)},
                              40, 1.2, 23);
    for (auto param : {CovParam::EII, CovParam::VII, CovParam::EEI, CovParam::VEI, CovParam::VVI, CovParam::EEE,
                       CovParam::VVV}) {
        for (int K = 2; K <= 4; ++K) {
            SliceMixture m;
            try {
                m = em_fit(X, K, param, 1e-10, 500, 7);
            } catch (const NumericalError&) {
                continue;
            }
            for (std::size_t i = 1; i < m.loglik_trace.size(); ++i)
                CHECK(m.loglik_trace[i] >= m.loglik_trace[i - 1] - 1e-9);
            check_mixture_normalization(m);
        }
    }
}

TEST_CASE("reported log-likelihood matches the fitted densities") {
    const Matrix X = clusters({Eigen::RowVector3d(0, 0, 0), Eigen::RowVector3d(4, 1, 0), Eigen::RowVector3d(0, 5, 2)},
                              30, 1.0, 29) +
                     Matrix::Constant(90, 3, 50.0);
    for (auto param : {CovParam::EII, CovParam::VII, CovParam::EEI, CovParam::VEI, CovParam::VVI, CovParam::EEE,
                       CovParam::VVV}) {
        CAPTURE(to_string(param));
        const auto m = em_fit(X, 3, param, 1e-5, 500, 4);
        double ll = 0.0;
        for (Eigen::Index i = 0; i < X.rows(); ++i) ll += log_mixture_density(X.row(i).transpose(), m.components);
        CHECK(ll == doctest::Approx(m.loglik).epsilon(1e-9));
        // Responsibilities are the normalized component densities.
        const Matrix logd = component_log_densities(X, m.components);
        const Matrix resp = (logd.colwise() - log_sum_exp_rows(logd)).array().exp();
        CHECK((resp - m.responsibilities).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("covariance constraints hold exactly") {
    const Matrix X = clusters({Eigen::RowVector3d(0, 0, 0), Eigen::RowVector3d(5, 0, 1), Eigen::RowVector3d(0, 5, 3)},
                              50, 1.0, 24);
    for (auto param : {CovParam::EII, CovParam::VII, CovParam::EEI, CovParam::VEI, CovParam::VVI, CovParam::EEE,
                       CovParam::VVV}) {
        CAPTURE(to_string(param));
        const auto m = em_fit(X, 3, param, 1e-5, 500, 1);
        REQUIRE(m.K() == 3);
        const auto& C = m.components;
        for (const auto& c : C) {
            if (is_diagonal(param)) {
                Matrix off = c.covariance;
                off.diagonal().setZero();
                CHECK(off.cwiseAbs().maxCoeff() == 0.0);
            }
            if (param == CovParam::EII || param == CovParam::VII) {
                const double v = c.covariance(0, 0);
                CHECK((c.covariance.diagonal().array() == v).all());
            }
            Eigen::SelfAdjointEigenSolver<Matrix> es(c.covariance);
            CHECK(es.eigenvalues().minCoeff() > 0.0);
        }
        if (param == CovParam::EII || param == CovParam::EEI || param == CovParam::EEE) {
            CHECK((C[0].covariance - C[1].covariance).cwiseAbs().maxCoeff() == 0.0);
            CHECK((C[0].covariance - C[2].covariance).cwiseAbs().maxCoeff() == 0.0);
        }
        if (param == CovParam::VEI) {
            // Common shape: diagonals proportional across components.
            const Vector s0 = C[0].covariance.diagonal() / std::pow(C[0].covariance.diagonal().prod(), 1.0 / 3.0);
            for (int k = 1; k < 3; ++k) {
                const Vector sk = C[k].covariance.diagonal() / std::pow(C[k].covariance.diagonal().prod(), 1.0 / 3.0);
                CHECK((s0 - sk).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
        check_mixture_normalization(m);
    }
}

TEST_CASE("selection picks one component for unimodal data") {
    const Matrix X = gaussian_matrix(52, 4, 25);
    const auto m = select_model(X, GmmOptions{}, 1);
    CHECK(m.K() == 1);
    CHECK(m.n == 52);
    check_mixture_normalization(m);
}

TEST_CASE("selection finds three well separated clusters") {
    const Matrix X = clusters({Eigen::RowVector2d(0, 0), Eigen::RowVector2d(8, 0), Eigen::RowVector2d(0, 8)}, 30, 1.0,
                              26);
    const auto m = select_model(X, GmmOptions{}, 2);
    CHECK(m.K() == 3);
}

TEST_CASE("restricting K to one gives the single Gaussian MLE") {
    const Matrix X = clusters({Eigen::RowVector2d(0, 0), Eigen::RowVector2d(8, 0)}, 30, 1.0, 27);
    GmmOptions opts;
    opts.components = {1};
    const auto m = select_model(X, opts, 0);
    REQUIRE(m.K() == 1);
    CHECK((m.components[0].mean - column_means(X)).norm() < 1e-12);
    const double ll = std::log(mixture_density(X.row(0).transpose(), m));
    CHECK(std::isfinite(ll));
}

TEST_CASE("selection is invariant to observation order") {
    const Matrix X = clusters({Eigen::RowVector2d(0, 0), Eigen::RowVector2d(4, 1), Eigen::RowVector2d(1, 5)}, 25, 1.1,
                              28);
    std::vector<Eigen::Index> perm(X.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
    Matrix Xp(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) Xp.row(i) = X.row(perm[i]);
    const auto a = select_model(X, GmmOptions{}, 9);
    const auto b = select_model(Xp, GmmOptions{}, 9);
    CHECK(a.K() == b.K());
    CHECK(a.param == b.param);
    CHECK(a.loglik == doctest::Approx(b.loglik).epsilon(1e-12));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        CHECK((b.responsibilities.row(i) - a.responsibilities.row(perm[i])).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("identical rows give a regularized point mass") {
    const Matrix X = Matrix::Constant(10, 2, 3.0);
    const auto m = select_model(X, GmmOptions{}, 0);
    REQUIRE(m.K() == 1);
    CHECK_FALSE(m.warnings.empty());
    CHECK((m.components[0].mean - Eigen::Vector2d(3, 3)).norm() == 0.0);
}

TEST_CASE("too many components") {
    CHECK_THROWS_AS(em_fit(gaussian_matrix(3, 2, 1), 4, CovParam::EII, 1e-5, 100, 0), DataError);
}

TEST_CASE("mixture densities") {
    GaussianComponent std1{1.0, Vector::Zero(1), Matrix::Identity(1, 1)};
    std::vector<GaussianComponent> one{std1};
    CHECK(mixture_density(Vector::Zero(1), one) == doctest::Approx(0.3989423).epsilon(1e-7));

    const Vector x = Eigen::Vector2d(0.3, -1.2);
    Matrix S(2, 2);
    S << 2.0, 0.6, 0.6, 1.0;
    const Vector mu = Eigen::Vector2d(0.5, -0.5);
    GaussianComponent c{0.5, mu, S};
    std::vector<GaussianComponent> twice{c, c};
    std::vector<GaussianComponent> single{GaussianComponent{1.0, mu, S}};
    CHECK(mixture_density(x, twice) == doctest::Approx(mixture_density(x, single)).epsilon(1e-14));
    CHECK(mixture_density(x, single) == doctest::Approx(gaussian_pdf(x, mu, S)).epsilon(1e-12));

    // Far in the tail the density underflows, the log density does not.
    const Vector far = Vector::Constant(1, 60.0);
    CHECK(log_mixture_density(far, one) == doctest::Approx(-0.5 * std::log(2 * M_PI) - 1800.0));
    CHECK_THROWS(mixture_density(Vector::Zero(3), one));
}

}  // TEST_SUITE
