#include "msir/simbench.hpp"

#include "msir/baselines.hpp"
#include "msir/linalg.hpp"
#include "msir/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <tuple>

namespace msir {

std::string to_string(SimModel model) {
    switch (model) {
        case SimModel::Motivating: return "motivating";
        case SimModel::Model1: return "1";
        case SimModel::Model2: return "2";
        case SimModel::Model3: return "3";
        case SimModel::Model4: return "4";
        case SimModel::Model5: return "5";
    }
    return "?";
}

SimModel parse_model(const std::string& name) {
    if (name == "motivating") return SimModel::Motivating;
    if (name == "1") return SimModel::Model1;
    if (name == "2") return SimModel::Model2;
    if (name == "3") return SimModel::Model3;
    if (name == "4") return SimModel::Model4;
    if (name == "5") return SimModel::Model5;
    throw std::invalid_argument("unknown model '" + name + "' (expected 1..5 or motivating)");
}

int true_dimension(SimModel model) {
    switch (model) {
        case SimModel::Motivating:
        case SimModel::Model2:
        case SimModel::Model3: return 2;
        default: return 1;
    }
}

void validate(const SimulationSpec& spec) {
    const long min_p = spec.model == SimModel::Model4 ? 3 : 2;
    if (spec.p < min_p) throw std::invalid_argument("simulation: p too small for model " + to_string(spec.model));
    if (spec.n <= spec.p) throw std::invalid_argument("simulation: need n > p");
    if (spec.sigma < 0.0) throw std::invalid_argument("simulation: sigma must be non-negative");
    if (spec.rho < 0.0 || spec.rho >= 1.0) throw std::invalid_argument("simulation: rho must lie in [0, 1)");
    if (spec.reps < 1) throw std::invalid_argument("simulation: reps must be at least 1");
    if (spec.H && *spec.H < 1) throw std::invalid_argument("simulation: H must be positive");
    for (const auto& m : spec.methods)
        if (m != "msir" && m != "sir" && m != "save" && m != "phd")
            throw std::invalid_argument("simulation: unknown method '" + m + "'");
}

std::uint64_t rep_seed(const SimulationSpec& spec, int rep) { return mix_seed(spec.seed, static_cast<std::uint64_t>(rep)); }

Matrix true_basis(const SimulationSpec& spec) {
    Matrix B = Matrix::Zero(spec.p, true_dimension(spec.model));
    switch (spec.model) {
        case SimModel::Model1:
            B(0, 0) = 1.0;
            B(1, 0) = -1.0;
            break;
        case SimModel::Model4:
            B.col(0).head(3).setOnes();
            break;
        case SimModel::Model5:
            B(0, 0) = 1.0;
            break;
        default:
            B(0, 0) = 1.0;
            B(1, 1) = 1.0;
    }
    return B;
}

Vector model_response(const SimulationSpec& spec, const Matrix& X, const Vector& eps) {
    if (X.cols() != spec.p || eps.size() != X.rows()) throw std::invalid_argument("model_response: dimension mismatch");
    const Matrix B = true_basis(spec);
    const Matrix U = X * B;
    const auto e = eps.array();
    switch (spec.model) {
        case SimModel::Motivating: return U.col(0).array() + U.col(1).array().square();
        case SimModel::Model1: return (0.5 * U.col(0).array()).square() + spec.sigma * e;
        case SimModel::Model2: return U.col(0).array() + U.col(1).array().square() + spec.sigma * e;
        case SimModel::Model3: {
            const auto u1 = U.col(0).array();
            const auto u2 = U.col(1).array();
            return u1 / (0.5 + (1.5 + u2).square()) + (1.0 + u2).square() + spec.sigma * e;
        }
        case SimModel::Model4: {
            const auto u = U.col(0).array();
            return 2.0 * u + u.square() + e;
        }
        case SimModel::Model5: return 0.5 * (U.col(0).array() - spec.a).square() * e;
    }
    return Vector();
}

SimData generate(const SimulationSpec& spec, std::uint64_t seed) {
    validate(spec);
    const Eigen::Index n = spec.n;
    const Eigen::Index p = spec.p;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;

    SimData out;
    out.X.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j) out.X(i, j) = normal(rng);
    Vector eps(n);
    for (Eigen::Index i = 0; i < n; ++i) eps[i] = normal(rng);

    if (spec.model == SimModel::Model4) {
        // AR(1)-type correlation rho^|i-j| through its Cholesky factor.
        Matrix R(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j) R(i, j) = std::pow(spec.rho, double(std::abs(i - j)));
        const Matrix L = R.llt().matrixL();
        out.X = out.X * L.transpose();
    }
    out.y = model_response(spec, out.X, eps);
    out.B_true = orthonormal_basis(true_basis(spec));
    return out;
}

Matrix estimate_basis(const std::string& method, const Matrix& X, const Vector& y, int d, std::optional<int> H,
                      const GmmOptions& gmm, std::uint64_t seed) {
    MsirOptions opts;
    opts.slices = H;
    opts.discrete = DiscreteMode::Continuous;
    opts.gmm = gmm;
    opts.seed = seed;
    if (method == "msir") return fit_msir(X, y, opts).leading_basis(d);
    if (method == "sir") return fit_sir(X, y, opts).leading_basis(d);
    if (method == "save") return fit_save(X, y, opts).leading_basis(d);
    if (method == "phd") return fit_phd(X, y).leading_basis(d);
    throw std::invalid_argument("unknown method '" + method + "'");
}

std::vector<SimRow> run_grid(const std::vector<SimulationSpec>& specs, const GridOptions& opts) {
    struct Task {
        std::size_t spec;
        int rep;
        std::size_t first_row;
    };
    std::vector<Task> tasks;
    std::size_t total = 0;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        validate(specs[s]);
        for (int r = 0; r < specs[s].reps; ++r) {
            tasks.push_back({s, r, total});
            total += specs[s].methods.size();
        }
    }

    std::vector<SimRow> rows(total);
    parallel_for(tasks.size(), [&](std::size_t t) {
        const auto& spec = specs[tasks[t].spec];
        const int rep = tasks[t].rep;
        const std::uint64_t seed = rep_seed(spec, rep);
        const SimData data = generate(spec, seed);
        const int d = true_dimension(spec.model);
        const int H = spec.H.value_or(default_num_slices(spec.n, spec.p));
        for (std::size_t m = 0; m < spec.methods.size(); ++m) {
            SimRow& row = rows[tasks[t].first_row + m];
            row.model = to_string(spec.model);
            row.n = spec.n;
            row.p = spec.p;
            row.sigma = spec.sigma;
            row.rho = spec.rho;
            row.a = spec.a;
            row.H = H;
            row.method = spec.methods[m];
            row.rep = rep;
            const auto start = std::chrono::steady_clock::now();
            try {
                const Matrix B = estimate_basis(row.method, data.X, data.y, d, H, opts.gmm, seed);
                const auto dist = subspace_distance(B, data.B_true);
                row.delta = dist.delta;
                row.angle_deg = dist.angle_deg;
            } catch (const std::exception& e) {
                row.delta = std::numeric_limits<double>::quiet_NaN();
                row.angle_deg = std::numeric_limits<double>::quiet_NaN();
                row.error = e.what();
            }
            if (opts.timing)
                row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<SimRow>& rows) {
    using Key = std::tuple<std::string, long, long, double, double, double, int, std::string>;
    std::vector<Key> order;
    std::map<Key, std::vector<const SimRow*>> groups;
    for (const auto& r : rows) {
        Key k{r.model, r.n, r.p, r.sigma, r.rho, r.a, r.H, r.method};
        if (!groups.count(k)) order.push_back(k);
        groups[k].push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& k : order) {
        const auto& g = groups[k];
        SummaryRow s;
        std::tie(s.model, s.n, s.p, s.sigma, s.rho, s.a, s.H, s.method) = k;
        s.reps = static_cast<int>(g.size());
        std::vector<double> angles;
        double dsum = 0.0;
        for (const auto* r : g) {
            if (std::isnan(r->angle_deg)) {
                ++s.failures;
                continue;
            }
            angles.push_back(r->angle_deg);
            dsum += r->delta;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (angles.empty()) {
            s.mean_angle = s.median_angle = s.sd_angle = s.mean_delta = nan;
        } else {
            const double m = double(angles.size());
            double sum = 0.0;
            for (double a : angles) sum += a;
            s.mean_angle = sum / m;
            double ss = 0.0;
            for (double a : angles) ss += (a - s.mean_angle) * (a - s.mean_angle);
            s.sd_angle = angles.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
            std::sort(angles.begin(), angles.end());
            const std::size_t mid = angles.size() / 2;
            s.median_angle = angles.size() % 2 ? angles[mid] : 0.5 * (angles[mid - 1] + angles[mid]);
            s.mean_delta = dsum / m;
        }
        out.push_back(s);
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_rows_csv(std::ostream& os, const std::vector<SimRow>& rows) {
    os << "model,n,p,sigma,rho,a,H,method,rep,delta,angle_deg,seconds\n";
    for (const auto& r : rows)
        os << r.model << ',' << r.n << ',' << r.p << ',' << fmt(r.sigma) << ',' << fmt(r.rho) << ',' << fmt(r.a) << ','
           << r.H << ',' << r.method << ',' << r.rep << ',' << fmt(r.delta) << ',' << fmt(r.angle_deg) << ','
           << fmt(r.seconds) << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "model,n,p,sigma,rho,a,H,method,reps,failures,mean_angle,median_angle,sd_angle,mean_delta\n";
    for (const auto& r : rows)
        os << r.model << ',' << r.n << ',' << r.p << ',' << fmt(r.sigma) << ',' << fmt(r.rho) << ',' << fmt(r.a) << ','
           << r.H << ',' << r.method << ',' << r.reps << ',' << r.failures << ',' << fmt(r.mean_angle) << ','
           << fmt(r.median_angle) << ',' << fmt(r.sd_angle) << ',' << fmt(r.mean_delta) << '\n';
}

}  // namespace msir
