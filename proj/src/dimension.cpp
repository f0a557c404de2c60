#include "msir/dimension.hpp"

#include "msir/parallel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace msir {

std::string to_string(BicPenalty penalty) { return penalty == BicPenalty::ZhuZhu ? "zhuzhu" : "zmp"; }

BicPenalty parse_penalty(const std::string& name) {
    if (name == "zhuzhu") return BicPenalty::ZhuZhu;
    if (name == "zmp") return BicPenalty::ZhuMiaoPeng;
    throw std::invalid_argument("unknown penalty '" + name + "' (expected zhuzhu or zmp)");
}

Vector padded_eigenvalues(const MsirFit& fit) {
    Vector out = Vector::Zero(fit.p());
    out.head(fit.d_max) = fit.eigenvalues.head(fit.d_max);
    return out;
}

double lambda_stat(const MsirFit& fit, int d) {
    const long p = fit.p();
    if (d < 0 || d > p - 1) throw std::invalid_argument("lambda_stat: d must lie in 0..p-1");
    const Vector ev = padded_eigenvalues(fit);
    return double(fit.n) * ev.tail(p - d).sum();
}

Vector bic_criterion(const Vector& eigenvalues, long n, int H, BicPenalty penalty) {
    const Eigen::Index p = eigenvalues.size();
    const Vector theta = eigenvalues.array() + 1.0;
    const int tau = static_cast<int>((theta.array() > 1.0).count());
    const Vector terms = theta.array().log() + 1.0 - theta.array();
    const double logn = std::log(double(n));
    const double cn = (0.5 * logn + 0.1 * std::cbrt(double(n))) / (2.0 * double(n) / double(H));
    Vector G(p);
    for (Eigen::Index d = 0; d < p; ++d) {
        const Eigen::Index first = std::min<Eigen::Index>(tau, d);  // 0-based start of the sum
        const double loglik = 0.5 * double(n) * terms.tail(p - first).sum();
        const double penalty_term = penalty == BicPenalty::ZhuZhu
                                        ? -double(p - d) * logn
                                        : cn * double(d) * double(2 * p - d + 1) / 2.0;
        G[d] = loglik - penalty_term;
    }
    return G;
}

namespace {

DimensionReport base_report(const MsirFit& fit) {
    DimensionReport r;
    r.n = fit.n;
    r.p = static_cast<int>(fit.p());
    r.H = fit.sliced.H;
    r.eigenvalues = padded_eigenvalues(fit);
    r.theta = r.eigenvalues.array() + 1.0;
    r.tau_count = static_cast<int>((r.theta.array() > 1.0).count());
    r.lambda_stats.resize(r.p);
    for (int d = 0; d < r.p; ++d) r.lambda_stats[d] = lambda_stat(fit, d);
    r.p_values = Vector::Constant(r.p, std::numeric_limits<double>::quiet_NaN());
    r.G = Vector::Constant(r.p, std::numeric_limits<double>::quiet_NaN());
    return r;
}

int argmax_first(const Vector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return static_cast<int>(best);
}

}  // namespace

DimensionReport bic_dimension(const MsirFit& fit, BicPenalty penalty) {
    DimensionReport r = base_report(fit);
    r.penalty = penalty;
    r.G = bic_criterion(r.eigenvalues, r.n, r.H, penalty);
    r.d_hat_bic = argmax_first(r.G);
    return r;
}

DimensionReport permutation_test(const Matrix& X, const Vector& y, const Estimator& estimator,
                                 const DimensionOptions& opts) {
    if (opts.permutations < 19) throw std::invalid_argument("permutation_test: need at least 19 permutations");
    const MsirFit fit = estimator(X, y);
    DimensionReport r = base_report(fit);
    r.alpha = opts.alpha;
    r.n_perms = opts.permutations;
    r.warnings = fit.warnings;

    const int p = r.p;
    const Eigen::Index n = X.rows();
    const Matrix B = fit.leading_basis(p);
    const Matrix Z = (X.rowwise() - fit.grand_mean.transpose()) * B;
    const int last = std::min(p - 1, opts.max_d.value_or(p - 1));

    for (int d = 0; d <= last; ++d) {
        const double observed = r.lambda_stats[d];
        std::vector<double> stats(static_cast<std::size_t>(opts.permutations));
        std::vector<std::string> failures(stats.size());
        parallel_for(stats.size(), [&](std::size_t rep) {
            std::mt19937_64 rng(mix_seed(opts.seed, std::uint64_t(d) * 1000003ULL + rep));
            std::vector<Eigen::Index> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            Matrix Xs(n, p);
            Xs.leftCols(d) = Z.leftCols(d);
            for (Eigen::Index i = 0; i < n; ++i) Xs.row(i).tail(p - d) = Z.row(perm[i]).tail(p - d);
            try {
                stats[rep] = lambda_stat(estimator(Xs, y), d);
            } catch (const std::exception& e) {
                // Conservative: a failed re-fit counts as exceeding the observed value.
                stats[rep] = std::numeric_limits<double>::infinity();
                failures[rep] = e.what();
            }
        });
        for (std::size_t rep = 0; rep < failures.size(); ++rep)
            if (!failures[rep].empty())
                r.warnings.push_back("permutation d=" + std::to_string(d) + " rep " + std::to_string(rep) +
                                     " failed: " + failures[rep]);
        const auto exceed = std::count_if(stats.begin(), stats.end(), [&](double s) { return s >= observed; });
        r.p_values[d] = double(1 + exceed) / double(opts.permutations + 1);
        if (r.p_values[d] > opts.alpha) {
            r.d_hat_perm = d;
            break;
        }
    }
    if (!r.d_hat_perm) {
        r.d_hat_perm = last + 1;
        if (last < p - 1)
            r.warnings.push_back("permutation test stopped at d=" + std::to_string(last) +
                                 " with every hypothesis rejected");
    }
    return r;
}

DimensionReport permutation_test(const Matrix& X, const Vector& y, const MsirOptions& fit_opts,
                                 const DimensionOptions& opts) {
    return permutation_test(
        X, y, [&fit_opts](const Matrix& Xs, const Vector& ys) { return fit_msir(Xs, ys, fit_opts); }, opts);
}

Vector sir_chi_square_pvalues(const MsirFit& sir_fit) {
    const int p = static_cast<int>(sir_fit.p());
    const int H = sir_fit.sliced.H;
    Vector out = Vector::Constant(p, std::numeric_limits<double>::quiet_NaN());
    for (int d = 0; d < p; ++d) {
        const int df = (p - d) * (H - d - 1);
        if (df <= 0) continue;
        out[d] = boost::math::gamma_q(0.5 * df, 0.5 * lambda_stat(sir_fit, d));
    }
    return out;
}

std::string format_report(const DimensionReport& report) {
    std::ostringstream os;
    auto row = [&](const std::string& label, auto&& cell) {
        os << std::left << std::setw(22) << label << std::right;
        for (int d = 0; d < report.p; ++d) os << std::setw(11) << cell(d);
        os << '\n';
    };
    auto num = [](double v, int prec) {
        if (std::isnan(v)) return std::string("-");
        std::ostringstream s;
        s << std::setprecision(prec) << v;
        return s.str();
    };
    row("Eigenvalues", [&](int d) { return num(report.eigenvalues[d], 4); });
    row("Structural dimension", [&](int d) { return std::to_string(d); });
    row("BIC-type criterion", [&](int d) { return num(report.G[d], 4); });
    row("Test statistic", [&](int d) { return num(report.lambda_stats[d], 4); });
    row("Permutation p-value", [&](int d) { return num(report.p_values[d], 3); });
    if (report.d_hat_bic) os << "Selected d (BIC, " << to_string(report.penalty) << "): " << *report.d_hat_bic << '\n';
    if (report.d_hat_perm)
        os << "Selected d (permutation, alpha=" << report.alpha << ", R=" << report.n_perms
           << "): " << *report.d_hat_perm << '\n';
    return os.str();
}

}  // namespace msir
