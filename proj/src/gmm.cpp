#include "msir/gmm.hpp"

#include "msir/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace msir {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

struct ComponentState {
    double log_weight = 0.0;
    Vector mean;
    Vector var;   // diagonal structures
    Matrix chol;  // full structures, lower factor
    double logdet = 0.0;
};

struct Model {
    CovParam param = CovParam::EII;
    std::vector<ComponentState> comps;
    bool floored = false;
};

struct EmRun {
    Model model;
    Matrix resp;
    double loglik = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
};

bool is_full(CovParam param) { return !is_diagonal(param); }

// Floors the eigenvalues of a full covariance, then factors it.
void set_full(ComponentState& c, Matrix cov, double floor, bool& floored) {
    cov = (cov + cov.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.eigenvalues().minCoeff() < floor) {
        floored = true;
        const Vector clamped = es.eigenvalues().cwiseMax(floor);
        cov = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
        cov = (cov + cov.transpose()) / 2.0;
    }
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericalError("gmm: covariance factorization failed");
    c.chol = llt.matrixL();
    c.logdet = 2.0 * c.chol.diagonal().array().log().sum();
}

void set_diag(ComponentState& c, Vector var, double floor, bool& floored) {
    if (var.minCoeff() < floor) {
        floored = true;
        var = var.cwiseMax(floor);
    }
    c.logdet = var.array().log().sum();
    c.var = std::move(var);
}

// M-step from responsibilities. Empty or starved components make the fit unusable.
// X2 holds the squared entries of X (used by the diagonal structures).
std::optional<Model> m_step(const Matrix& X, const Matrix& X2, const Matrix& R, CovParam param, double floor) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    const Eigen::Index K = R.cols();
    const Vector nk = R.colwise().sum().transpose();
    const double min_nk = K == 1 ? 0.0 : (param == CovParam::VVV ? double(p + 1) : 1.0);
    for (Eigen::Index k = 0; k < K; ++k)
        if (!(nk[k] > 0.0) || nk[k] < min_nk) return std::nullopt;

    Model model;
    model.param = param;
    model.comps.resize(K);
    const Matrix means = (X.transpose() * R).array().rowwise() / nk.transpose().array();
    std::vector<Vector> wdiag(K);
    std::vector<Matrix> wfull(K);
    Matrix second;
    if (!is_full(param)) second = X2.transpose() * R;
    for (Eigen::Index k = 0; k < K; ++k) {
        auto& c = model.comps[k];
        c.log_weight = std::log(nk[k] / double(n));
        c.mean = means.col(k);
        if (is_full(param)) {
            const Matrix A = (X.rowwise() - c.mean.transpose()).array().colwise() * R.col(k).array().sqrt();
            wfull[k] = A.transpose() * A;
        } else {
            wdiag[k] = (second.col(k).array() - nk[k] * c.mean.array().square()).cwiseMax(0.0);
        }
    }

    bool& fl = model.floored;
    switch (param) {
        case CovParam::EII: {
            double tr = 0.0;
            for (const auto& w : wdiag) tr += w.sum();
            const Vector v = Vector::Constant(p, tr / double(n * p));
            for (auto& c : model.comps) set_diag(c, v, floor, fl);
            break;
        }
        case CovParam::VII:
            for (Eigen::Index k = 0; k < K; ++k)
                set_diag(model.comps[k], Vector::Constant(p, wdiag[k].sum() / (nk[k] * double(p))), floor, fl);
            break;
        case CovParam::EEI: {
            Vector b = Vector::Zero(p);
            for (const auto& w : wdiag) b += w;
            b /= double(n);
            for (auto& c : model.comps) set_diag(c, b, floor, fl);
            break;
        }
        case CovParam::VEI: {
            // Sigma_k = lambda_k A with det(A) = 1; alternate the two closed-form updates.
            Vector lambda(K);
            for (Eigen::Index k = 0; k < K; ++k) lambda[k] = wdiag[k].sum() / (double(p) * nk[k]);
            Vector shape = Vector::Ones(p);
            for (int it = 0; it < 200; ++it) {
                Vector a = Vector::Zero(p);
                for (Eigen::Index k = 0; k < K; ++k) a += wdiag[k] / lambda[k];
                a = a.cwiseMax(std::numeric_limits<double>::min());
                shape = a / std::exp(a.array().log().mean());
                double change = 0.0;
                for (Eigen::Index k = 0; k < K; ++k) {
                    const double next = (wdiag[k].array() / shape.array()).sum() / (double(p) * nk[k]);
                    change = std::max(change, std::abs(next - lambda[k]) / std::max(next, 1e-300));
                    lambda[k] = next;
                }
                if (change < 1e-12) break;
            }
            for (Eigen::Index k = 0; k < K; ++k) set_diag(model.comps[k], lambda[k] * shape, floor, fl);
            break;
        }
        case CovParam::VVI:
            for (Eigen::Index k = 0; k < K; ++k) set_diag(model.comps[k], wdiag[k] / nk[k], floor, fl);
            break;
        case CovParam::EEE: {
            Matrix w = Matrix::Zero(p, p);
            for (const auto& m : wfull) w += m;
            w /= double(n);
            for (auto& c : model.comps) set_full(c, w, floor, fl);
            break;
        }
        case CovParam::VVV:
        case CovParam::FULL1:
            for (Eigen::Index k = 0; k < K; ++k) set_full(model.comps[k], wfull[k] / nk[k], floor, fl);
            break;
    }
    return model;
}

Matrix log_densities(const Matrix& X, const Matrix& X2, const Model& model) {
    const Eigen::Index p = X.cols();
    const auto K = static_cast<Eigen::Index>(model.comps.size());
    Matrix out(X.rows(), K);
    if (!is_full(model.param)) {
        // sum_j (x_j - m_j)^2 / v_j expanded into three matrix products.
        Matrix inv_var(p, K), scaled_mean(p, K);
        Vector mean_term(K), offset(K);
        for (Eigen::Index k = 0; k < K; ++k) {
            const auto& c = model.comps[k];
            inv_var.col(k) = c.var.cwiseInverse();
            scaled_mean.col(k) = c.mean.cwiseProduct(inv_var.col(k));
            mean_term[k] = c.mean.dot(scaled_mean.col(k));
            offset[k] = c.log_weight - 0.5 * (double(p) * kLog2Pi + c.logdet);
        }
        out.noalias() = X2 * inv_var;
        out.noalias() -= 2.0 * X * scaled_mean;
        out.rowwise() += mean_term.transpose();
        out = (-0.5 * out.array().cwiseMax(0.0)).rowwise() + offset.transpose().array();
        return out;
    }
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto& c = model.comps[k];
        const Matrix D = X.rowwise() - c.mean.transpose();
        const Matrix Y = c.chol.triangularView<Eigen::Lower>().solve(D.transpose());
        const Vector mahal = Y.colwise().squaredNorm().transpose();
        out.col(k) = (c.log_weight - 0.5 * (double(p) * kLog2Pi + c.logdet + mahal.array())).matrix();
    }
    return out;
}

double e_step(const Matrix& X, const Matrix& X2, const Model& model, Matrix& resp) {
    const Matrix logd = log_densities(X, X2, model);
    const Vector lse = log_sum_exp_rows(logd);
    resp = (logd.colwise() - lse).array().exp();
    return lse.sum();
}

std::optional<EmRun> run_em(const Matrix& X, const Matrix& X2, Matrix resp, CovParam param, double floor, double tol,
                            int max_iter) {
    EmRun run;
    const int K = static_cast<int>(resp.cols());
    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(1, max_iter); ++it) {
        auto model = m_step(X, X2, resp, param, floor);
        if (!model) return std::nullopt;
        const double ll = e_step(X, X2, *model, resp);
        if (!std::isfinite(ll)) return std::nullopt;
        run.model = std::move(*model);
        run.trace.push_back(ll);
        run.loglik = ll;
        run.iterations = it + 1;
        if (K == 1 || std::abs(ll - prev) <= tol * std::abs(ll)) {
            run.converged = true;
            break;
        }
        prev = ll;
    }
    // Covariances that needed the floor mark a singular solution; only a
    // single-component fit is allowed to keep one.
    if (K > 1 && run.model.floored) return std::nullopt;
    run.resp = std::move(resp);
    return run;
}

std::vector<int> kmeans_labels(const Matrix& X, int K, std::uint64_t seed, int iters) {
    const Eigen::Index n = X.rows();
    std::mt19937_64 rng(seed);
    Matrix centers(K, X.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centers.row(0) = X.row(pick(rng));
    Vector d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int k = 1; k < K; ++k) {
        const double total = d2.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng);
            for (chosen = 0; chosen < n - 1; ++chosen) {
                target -= d2[chosen];
                if (target <= 0.0) break;
            }
        } else {
            chosen = pick(rng);
        }
        centers.row(k) = X.row(chosen);
        d2 = d2.cwiseMin((X.rowwise() - centers.row(k)).rowwise().squaredNorm());
    }

    std::vector<int> labels(n, -1);
    for (int it = 0; it < std::max(1, iters); ++it) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best;
            (centers.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
            if (labels[i] != int(best)) {
                labels[i] = int(best);
                changed = true;
            }
        }
        if (!changed) break;
        Matrix sums = Matrix::Zero(K, X.cols());
        Vector counts = Vector::Zero(K);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[i]) += X.row(i);
            counts[labels[i]] += 1.0;
        }
        for (int k = 0; k < K; ++k)
            if (counts[k] > 0) centers.row(k) = sums.row(k) / counts[k];
    }
    // Relabel by first appearance so equal partitions compare equal.
    std::vector<int> remap(K, -1);
    int next = 0;
    for (auto& l : labels) {
        if (remap[l] < 0) remap[l] = next++;
        l = remap[l];
    }
    return labels;
}

Matrix one_hot(const std::vector<int>& labels, int K) {
    Matrix R = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), K);
    for (std::size_t i = 0; i < labels.size(); ++i) R(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    return R;
}

// Rows sorted lexicographically, so fits do not depend on input order.
// Rows are also centered; `shift` is added back to the fitted means.
struct SortedRows {
    Matrix X;
    Matrix X2;  // X squared entrywise
    Vector shift;
    std::vector<Eigen::Index> order;  // X.row(r) + shift == input.row(order[r])
};

SortedRows sort_rows(const Matrix& in) {
    SortedRows s;
    s.order.resize(in.rows());
    std::iota(s.order.begin(), s.order.end(), 0);
    std::stable_sort(s.order.begin(), s.order.end(), [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index j = 0; j < in.cols(); ++j) {
            if (in(a, j) < in(b, j)) return true;
            if (in(b, j) < in(a, j)) return false;
        }
        return false;
    });
    s.X.resize(in.rows(), in.cols());
    for (Eigen::Index r = 0; r < in.rows(); ++r) s.X.row(r) = in.row(s.order[r]);
    s.shift = s.X.colwise().mean().transpose();
    s.X.rowwise() -= s.shift.transpose();
    s.X2 = s.X.array().square();
    return s;
}

// X is already centered.
double variance_floor(const Matrix& X, double rel) {
    const double mean_diag = X.array().square().sum() / double(X.rows() * X.cols());
    return mean_diag > 0.0 ? rel * mean_diag : rel;
}

bool all_rows_identical(const Matrix& X) {
    for (Eigen::Index i = 1; i < X.rows(); ++i)
        if (X.row(i) != X.row(0)) return false;
    return true;
}

SliceMixture to_mixture(const EmRun& run, const SortedRows& rows, long n) {
    SliceMixture m;
    m.param = run.model.param;
    m.loglik = run.loglik;
    m.n = n;
    const long p = rows.X.cols();
    const long K = static_cast<long>(run.model.comps.size());
    m.n_params = mixture_param_count(m.param, p, K);
    m.bic = bic_score(m.loglik, m.n_params, n);
    m.iterations = run.iterations;
    m.converged = run.converged;
    m.loglik_trace = run.trace;
    for (const auto& c : run.model.comps) {
        GaussianComponent g;
        g.weight = std::exp(c.log_weight);
        g.mean = c.mean + rows.shift;
        g.covariance = is_full(m.param) ? Matrix(c.chol * c.chol.transpose()) : Matrix(c.var.asDiagonal());
        m.components.push_back(std::move(g));
    }
    double wsum = 0.0;
    for (const auto& c : m.components) wsum += c.weight;
    for (auto& c : m.components) c.weight /= wsum;
    m.responsibilities.resize(rows.X.rows(), K);
    for (Eigen::Index r = 0; r < rows.X.rows(); ++r) m.responsibilities.row(rows.order[r]) = run.resp.row(r);
    if (run.model.floored) m.warnings.push_back("gmm: covariance eigenvalues raised to the variance floor");
    return m;
}

SliceMixture degenerate_fit(const SortedRows& rows, double floor) {
    EmRun run;
    run.model.param = CovParam::EII;
    ComponentState c;
    c.mean = rows.X.row(0).transpose();  // zero after centering
    c.var = Vector::Constant(rows.X.cols(), floor);
    c.logdet = c.var.array().log().sum();
    run.model.comps.push_back(c);
    run.model.floored = true;
    run.resp = Matrix::Ones(rows.X.rows(), 1);
    run.loglik = -0.5 * double(rows.X.rows()) * (double(rows.X.cols()) * kLog2Pi + c.logdet);
    run.trace = {run.loglik};
    run.iterations = 0;
    run.converged = true;
    SliceMixture m = to_mixture(run, rows, static_cast<long>(rows.X.rows()));
    m.warnings = {"gmm: all observations identical; returning a point-mass regularized single component"};
    return m;
}

struct Init {
    std::vector<int> labels;
};

std::vector<Init> make_inits(const Matrix& X, int K, const GmmOptions& opts, std::uint64_t seed) {
    std::vector<Init> inits;
    if (K == 1) {
        inits.push_back({std::vector<int>(static_cast<std::size_t>(X.rows()), 0)});
        return inits;
    }
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        auto labels = kmeans_labels(X, K, mix_seed(seed, std::uint64_t(K) * 1000 + r), opts.kmeans_iter);
        const bool dup = std::any_of(inits.begin(), inits.end(), [&](const Init& in) { return in.labels == labels; });
        if (!dup) inits.push_back({std::move(labels)});
    }
    return inits;
}

std::optional<EmRun> best_of(const SortedRows& rows, const std::vector<Init>& inits, int K, CovParam param, double floor,
                             const GmmOptions& opts) {
    std::optional<EmRun> best;
    for (const auto& init : inits) {
        auto run = run_em(rows.X, rows.X2, one_hot(init.labels, K), param, floor, opts.tol, opts.max_iter);
        if (run && (!best || run->loglik > best->loglik)) best = std::move(run);
    }
    return best;
}

void validate_slice(const Matrix& Xh) {
    if (Xh.rows() == 0 || Xh.cols() == 0) throw DataError("gmm: empty data");
    if (!Xh.allFinite()) throw DataError("gmm: non-finite data");
}

}  // namespace

std::string to_string(CovParam param) {
    switch (param) {
        case CovParam::EII: return "EII";
        case CovParam::VII: return "VII";
        case CovParam::EEI: return "EEI";
        case CovParam::VEI: return "VEI";
        case CovParam::VVI: return "VVI";
        case CovParam::EEE: return "EEE";
        case CovParam::VVV: return "VVV";
        case CovParam::FULL1: return "FULL1";
    }
    return "?";
}

CovParam parse_cov_param(const std::string& code) {
    for (auto p : all_cov_params())
        if (to_string(p) == code) return p;
    if (code == "FULL1" || code == "XXX") return CovParam::FULL1;
    throw std::invalid_argument("unknown covariance structure '" + code + "'");
}

std::vector<CovParam> all_cov_params() {
    return {CovParam::EII, CovParam::VII, CovParam::EEI, CovParam::VEI,
            CovParam::VVI, CovParam::EEE, CovParam::VVV, CovParam::FULL1};
}

bool is_diagonal(CovParam param) {
    return param != CovParam::EEE && param != CovParam::VVV && param != CovParam::FULL1;
}

CovParam canonical_single(CovParam param) {
    switch (param) {
        case CovParam::EII:
        case CovParam::VII: return CovParam::EII;
        case CovParam::EEI:
        case CovParam::VEI:
        case CovParam::VVI: return CovParam::EEI;
        default: return CovParam::FULL1;
    }
}

long covariance_param_count(CovParam param, long p, long K) {
    const long full = p * (p + 1) / 2;
    switch (param) {
        case CovParam::EII: return 1;
        case CovParam::VII: return K;
        case CovParam::EEI: return p;
        case CovParam::VEI: return K + p - 1;
        case CovParam::VVI: return K * p;
        case CovParam::EEE: return full;
        case CovParam::VVV: return K * full;
        case CovParam::FULL1: return full;
    }
    return 0;
}

long mixture_param_count(CovParam param, long p, long K) { return (K - 1) + K * p + covariance_param_count(param, p, K); }

bool is_feasible(CovParam param, long p, long K, long n) {
    if (K < 1 || K > n) return false;
    if (param == CovParam::FULL1 && K != 1) return false;
    return mixture_param_count(param, p, K) < n;
}

double bic_score(double loglik, long n_params, long n) {
    if (n < 1) throw std::invalid_argument("bic_score: n must be positive");
    return 2.0 * loglik - double(n_params) * std::log(double(n));
}

IndexVector SliceMixture::map_labels() const {
    IndexVector out(responsibilities.rows());
    for (Eigen::Index i = 0; i < responsibilities.rows(); ++i) {
        Eigen::Index k;
        responsibilities.row(i).maxCoeff(&k);
        out[i] = static_cast<int>(k);
    }
    return out;
}

SliceMixture em_fit(const Matrix& Xh, int K, CovParam param, const GmmOptions& opts, std::uint64_t seed) {
    validate_slice(Xh);
    if (K < 1) throw std::invalid_argument("em_fit: K must be at least 1");
    if (K > Xh.rows()) throw DataError("em_fit: K exceeds the number of observations");
    if (param == CovParam::FULL1 && K != 1) throw std::invalid_argument("em_fit: FULL1 requires K = 1");
    if (K == 1) param = canonical_single(param);

    const SortedRows rows = sort_rows(Xh);
    const double floor = variance_floor(rows.X, opts.var_floor);
    if (all_rows_identical(rows.X)) return degenerate_fit(rows, floor);

    const auto inits = make_inits(rows.X, K, opts, seed);
    auto best = best_of(rows, inits, K, param, floor, opts);
    if (!best) throw NumericalError("em_fit: no start produced a non-degenerate " + to_string(param) + " fit with K = " +
                                    std::to_string(K));
    return to_mixture(*best, rows, static_cast<long>(Xh.rows()));
}

SliceMixture em_fit(const Matrix& Xh, int K, CovParam param, double tol, int max_iter, std::uint64_t seed) {
    GmmOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return em_fit(Xh, K, param, opts, seed);
}

SliceMixture select_model(const Matrix& Xh, const GmmOptions& opts, std::uint64_t seed) {
    validate_slice(Xh);
    if (opts.components.empty()) throw std::invalid_argument("select_model: empty component range");
    const long n = static_cast<long>(Xh.rows());
    const long p = static_cast<long>(Xh.cols());

    const SortedRows rows = sort_rows(Xh);
    const double floor = variance_floor(rows.X, opts.var_floor);
    if (all_rows_identical(rows.X)) return degenerate_fit(rows, floor);

    std::vector<int> ks = opts.components;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<CovParam> params = opts.params;
    std::sort(params.begin(), params.end());

    struct Candidate {
        int K;
        CovParam param;
        std::size_t init_set;
    };
    std::vector<Candidate> cands;
    std::vector<std::vector<Init>> init_sets;
    for (int K : ks) {
        std::vector<CovParam> ps;
        for (auto pr : params) {
            if (K == 1) pr = canonical_single(pr);
            if (!is_feasible(pr, p, K, n)) continue;
            if (std::find(ps.begin(), ps.end(), pr) == ps.end()) ps.push_back(pr);
        }
        std::sort(ps.begin(), ps.end());
        if (ps.empty()) continue;
        init_sets.push_back(make_inits(rows.X, K, opts, seed));
        for (auto pr : ps) cands.push_back({K, pr, init_sets.size() - 1});
    }
    if (cands.empty()) throw DataError("select_model: no feasible (K, covariance) pair for " + std::to_string(n) +
                                       " observations in " + std::to_string(p) + " dimensions");

    std::vector<std::optional<EmRun>> runs(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) {
        runs[i] = best_of(rows, init_sets[cands[i].init_set], cands[i].K, cands[i].param, floor, opts);
    });

    // Candidates are ordered by (K, structure), so a strict improvement keeps the tie-break.
    std::optional<std::size_t> best;
    double best_bic = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!runs[i]) continue;
        const double b = bic_score(runs[i]->loglik, mixture_param_count(cands[i].param, p, cands[i].K), n);
        if (!best || b > best_bic) {
            best = i;
            best_bic = b;
        }
    }
    if (!best) throw NumericalError("select_model: every candidate mixture degenerated");
    return to_mixture(*runs[*best], rows, n);
}

Vector log_sum_exp_rows(const Matrix& A) {
    const Vector mx = A.rowwise().maxCoeff();
    Vector out(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (!std::isfinite(mx[i])) {
            out[i] = mx[i];
            continue;
        }
        out[i] = mx[i] + std::log((A.row(i).array() - mx[i]).exp().sum());
    }
    return out;
}

Matrix component_log_densities(const Matrix& X, std::span<const GaussianComponent> components) {
    const Eigen::Index p = X.cols();
    Matrix out(X.rows(), static_cast<Eigen::Index>(components.size()));
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        if (c.mean.size() != p || c.covariance.rows() != p || c.covariance.cols() != p)
            throw std::invalid_argument("mixture density: dimension mismatch");
        Eigen::LLT<Matrix> llt(c.covariance);
        if (llt.info() != Eigen::Success) throw NumericalError("mixture density: covariance not positive definite");
        const Matrix L = llt.matrixL();
        const double logdet = 2.0 * L.diagonal().array().log().sum();
        const Matrix D = X.rowwise() - c.mean.transpose();
        const Vector mahal = L.triangularView<Eigen::Lower>().solve(D.transpose()).colwise().squaredNorm().transpose();
        const double lw = c.weight > 0.0 ? std::log(c.weight) : -std::numeric_limits<double>::infinity();
        out.col(static_cast<Eigen::Index>(k)) = (lw - 0.5 * (double(p) * kLog2Pi + logdet + mahal.array())).matrix();
    }
    return out;
}

double log_mixture_density(const Vector& x, std::span<const GaussianComponent> components) {
    if (components.empty()) throw std::invalid_argument("mixture density: no components");
    const Matrix row = x.transpose();
    return log_sum_exp_rows(component_log_densities(row, components))[0];
}

double mixture_density(const Vector& x, std::span<const GaussianComponent> components) {
    return std::exp(log_mixture_density(x, components));
}

double mixture_density(const Vector& x, const SliceMixture& mixture) {
    return mixture_density(x, std::span<const GaussianComponent>(mixture.components));
}

}  // namespace msir
