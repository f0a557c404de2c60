#include "msir/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace msir {

using nlohmann::json;

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    std::string out = s.substr(b, e - b + 1);
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    out.push_back(trim(cell));
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    t.header = split_line(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != t.header.size())
            throw DataError(path + ": line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

double cell_number(const CsvTable& t, std::size_t r, std::size_t c) {
    const auto v = to_number(t.rows[r][c]);
    if (!v)
        throw DataError("non-numeric value '" + t.rows[r][c] + "' at data row " + std::to_string(r + 1) +
                        ", column '" + t.header[c] + "'");
    return *v;
}

std::size_t find_column(const CsvTable& t, const std::string& key) {
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (t.header[c] == key) return c;
    if (!key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        const std::size_t idx = std::stoul(key);
        if (idx >= 1 && idx <= t.header.size()) return idx - 1;
    }
    throw DataError("column '" + key + "' not found");
}

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(std::isfinite(v[i]) ? json(v[i]) : json(nullptr));
    return a;
}

Vector vec_from_json(const json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = j[i].is_null() ? std::numeric_limits<double>::quiet_NaN() : j[i].get<double>();
    return v;
}

json ivec_to_json(const IndexVector& v) { return std::vector<int>(v.data(), v.data() + v.size()); }

IndexVector ivec_from_json(const json& j) {
    const auto v = j.get<std::vector<int>>();
    return Eigen::Map<const IndexVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mixture_to_json(const SliceMixture& m) {
    json comps = json::array();
    for (const auto& c : m.components)
        comps.push_back({{"weight", c.weight}, {"mean", vec_to_json(c.mean)}, {"covariance", matrix_to_json(c.covariance)}});
    return {{"param", to_string(m.param)}, {"K", m.K()},           {"loglik", m.loglik},
            {"bic", m.bic},                {"n", m.n},             {"n_params", m.n_params},
            {"iterations", m.iterations},  {"converged", m.converged}, {"components", comps}};
}

SliceMixture mixture_from_json(const json& j) {
    SliceMixture m;
    m.param = parse_cov_param(j.at("param").get<std::string>());
    m.loglik = j.at("loglik").get<double>();
    m.bic = j.at("bic").get<double>();
    m.n = j.at("n").get<long>();
    m.n_params = j.at("n_params").get<long>();
    m.iterations = j.value("iterations", 0);
    m.converged = j.value("converged", true);
    for (const auto& c : j.at("components")) {
        GaussianComponent g;
        g.weight = c.at("weight").get<double>();
        g.mean = vec_from_json(c.at("mean"));
        g.covariance = matrix_from_json(c.at("covariance"));
        m.components.push_back(std::move(g));
    }
    return m;
}

json options_to_json(const MsirOptions& o) {
    json params = json::array();
    for (auto p : o.gmm.params) params.push_back(to_string(p));
    const char* discrete = o.discrete == DiscreteMode::Auto ? "auto" : (o.discrete == DiscreteMode::Discrete ? "yes" : "no");
    return {{"slices", o.slices ? json(*o.slices) : json("auto")},
            {"discrete", discrete},
            {"components", o.gmm.components},
            {"models", params},
            {"tol", o.gmm.tol},
            {"max_iter", o.gmm.max_iter},
            {"restarts", o.gmm.restarts},
            {"kmeans_iter", o.gmm.kmeans_iter},
            {"var_floor", o.gmm.var_floor},
            {"eig_floor", o.eig_floor},
            {"seed", o.seed}};
}

MsirOptions options_from_json(const json& j) {
    MsirOptions o;
    if (j.at("slices").is_number()) o.slices = j.at("slices").get<int>();
    const auto discrete = j.value("discrete", std::string("auto"));
    o.discrete = discrete == "yes" ? DiscreteMode::Discrete : (discrete == "no" ? DiscreteMode::Continuous : DiscreteMode::Auto);
    o.gmm.components = j.at("components").get<std::vector<int>>();
    o.gmm.params.clear();
    for (const auto& p : j.at("models")) o.gmm.params.push_back(parse_cov_param(p.get<std::string>()));
    o.gmm.tol = j.at("tol").get<double>();
    o.gmm.max_iter = j.at("max_iter").get<int>();
    o.gmm.restarts = j.at("restarts").get<int>();
    o.gmm.kmeans_iter = j.value("kmeans_iter", o.gmm.kmeans_iter);
    o.gmm.var_floor = j.at("var_floor").get<double>();
    o.eig_floor = j.value("eig_floor", o.eig_floor);
    o.seed = j.at("seed").get<std::uint64_t>();
    return o;
}

}  // namespace

Dataset parse_csv(const std::string& path, const std::string& response, bool require_n_gt_p) {
    const CsvTable t = read_csv(path);
    const std::size_t rc = find_column(t, response);
    const std::size_t n = t.rows.size();
    if (n == 0) throw DataError("'" + path + "' has no data rows");

    Dataset ds;
    ds.response_name = t.header[rc];
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (c != rc) {
            cols.push_back(c);
            ds.predictor_names.push_back(t.header[c]);
        }
    if (cols.empty()) throw DataError("'" + path + "' has no predictor columns");

    ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < cols.size(); ++k)
            ds.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = cell_number(t, r, cols[k]);

    ds.y.resize(static_cast<Eigen::Index>(n));
    bool numeric = true;
    for (std::size_t r = 0; r < n && numeric; ++r) numeric = to_number(t.rows[r][rc]).has_value();
    if (numeric) {
        for (std::size_t r = 0; r < n; ++r) ds.y[static_cast<Eigen::Index>(r)] = *to_number(t.rows[r][rc]);
    } else {
        std::set<std::string> levels;
        for (const auto& row : t.rows) levels.insert(row[rc]);
        ds.levels.assign(levels.begin(), levels.end());
        for (std::size_t r = 0; r < n; ++r)
            ds.y[static_cast<Eigen::Index>(r)] =
                double(std::lower_bound(ds.levels.begin(), ds.levels.end(), t.rows[r][rc]) - ds.levels.begin());
    }
    if (require_n_gt_p && ds.n() <= ds.p())
        throw DataError("'" + path + "': " + std::to_string(ds.n()) + " rows but " + std::to_string(ds.p()) +
                        " predictors; need n > p");
    return ds;
}

Matrix read_columns(const std::string& path, const std::vector<std::string>& names) {
    const CsvTable t = read_csv(path);
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) throw DataError("'" + path + "': column '" + name + "' not found");
        cols.push_back(static_cast<std::size_t>(it - t.header.begin()));
    }
    Matrix X(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (std::size_t k = 0; k < cols.size(); ++k)
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = cell_number(t, r, cols[k]);
    return X;
}

json matrix_to_json(const Matrix& M) {
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        data.push_back(std::move(row));
    }
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    Matrix M(rows, cols);
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows) throw DataError("fit document: matrix row count mismatch");
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(data[i].size()) != cols) throw DataError("fit document: matrix column count mismatch");
        for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = data[i][k].get<double>();
    }
    return M;
}

json to_json(const MsirFit& fit) {
    json mixtures = json::array();
    for (const auto& m : fit.slice_mixtures) mixtures.push_back(mixture_to_json(m));
    const auto& s = fit.sliced;
    json sliced = {{"H", s.H},
                   {"kind", s.kind == ResponseKind::Discrete ? "discrete" : "continuous"},
                   {"labels", ivec_to_json(s.labels)},
                   {"counts", ivec_to_json(s.counts)},
                   {"proportions", vec_to_json(s.proportions)},
                   {"cutpoints", vec_to_json(s.cutpoints)},
                   {"values", vec_to_json(s.values)}};
    return {{"method", fit.method},
            {"n", fit.n},
            {"p", fit.p()},
            {"d_max", fit.d_max},
            {"kernel", matrix_to_json(fit.kernel)},
            {"sigma", matrix_to_json(fit.sigma)},
            {"grand_mean", vec_to_json(fit.grand_mean)},
            {"omega", vec_to_json(fit.omega)},
            {"component_means", matrix_to_json(fit.component_means)},
            {"component_slice", ivec_to_json(fit.component_slice)},
            {"eigenvalues", vec_to_json(fit.eigenvalues)},
            {"raw_dirs", matrix_to_json(fit.raw_dirs)},
            {"basis", matrix_to_json(fit.basis)},
            {"all_eigenvalues", vec_to_json(fit.all_eigenvalues)},
            {"all_dirs", matrix_to_json(fit.all_dirs)},
            {"component_labels", ivec_to_json(fit.component_labels)},
            {"sliced", sliced},
            {"slice_mixtures", mixtures},
            {"warnings", fit.warnings}};
}

MsirFit fit_from_json(const json& j) {
    MsirFit fit;
    fit.method = j.at("method").get<std::string>();
    fit.n = j.at("n").get<long>();
    fit.d_max = j.at("d_max").get<int>();
    fit.kernel = matrix_from_json(j.at("kernel"));
    fit.sigma = matrix_from_json(j.at("sigma"));
    fit.grand_mean = vec_from_json(j.at("grand_mean"));
    fit.omega = vec_from_json(j.at("omega"));
    fit.component_means = matrix_from_json(j.at("component_means"));
    fit.component_slice = ivec_from_json(j.at("component_slice"));
    fit.eigenvalues = vec_from_json(j.at("eigenvalues"));
    fit.raw_dirs = matrix_from_json(j.at("raw_dirs"));
    fit.basis = matrix_from_json(j.at("basis"));
    fit.all_eigenvalues = vec_from_json(j.at("all_eigenvalues"));
    fit.all_dirs = matrix_from_json(j.at("all_dirs"));
    fit.component_labels = ivec_from_json(j.at("component_labels"));
    const auto& s = j.at("sliced");
    fit.sliced.H = s.at("H").get<int>();
    fit.sliced.kind = s.at("kind").get<std::string>() == "discrete" ? ResponseKind::Discrete : ResponseKind::Continuous;
    fit.sliced.labels = ivec_from_json(s.at("labels"));
    fit.sliced.counts = ivec_from_json(s.at("counts"));
    fit.sliced.proportions = vec_from_json(s.at("proportions"));
    fit.sliced.cutpoints = vec_from_json(s.at("cutpoints"));
    fit.sliced.values = vec_from_json(s.at("values"));
    for (const auto& m : j.at("slice_mixtures")) fit.slice_mixtures.push_back(mixture_from_json(m));
    fit.warnings = j.value("warnings", std::vector<std::string>{});
    if (fit.basis.rows() != fit.sigma.rows() || fit.grand_mean.size() != fit.sigma.rows())
        throw DataError("fit document: inconsistent dimensions");
    return fit;
}

json to_json(const DimensionReport& r) {
    json j = {{"n", r.n},
              {"p", r.p},
              {"H", r.H},
              {"eigenvalues", vec_to_json(r.eigenvalues)},
              {"lambda_stats", vec_to_json(r.lambda_stats)},
              {"p_values", vec_to_json(r.p_values)},
              {"G", vec_to_json(r.G)},
              {"theta", vec_to_json(r.theta)},
              {"tau_count", r.tau_count},
              {"penalty", to_string(r.penalty)},
              {"alpha", r.alpha},
              {"n_perms", r.n_perms},
              {"d_hat_perm", r.d_hat_perm ? json(*r.d_hat_perm) : json(nullptr)},
              {"d_hat_bic", r.d_hat_bic ? json(*r.d_hat_bic) : json(nullptr)},
              {"warnings", r.warnings}};
    return j;
}

DimensionReport report_from_json(const json& j) {
    DimensionReport r;
    r.n = j.at("n").get<long>();
    r.p = j.at("p").get<int>();
    r.H = j.at("H").get<int>();
    r.eigenvalues = vec_from_json(j.at("eigenvalues"));
    r.lambda_stats = vec_from_json(j.at("lambda_stats"));
    r.p_values = vec_from_json(j.at("p_values"));
    r.G = vec_from_json(j.at("G"));
    r.theta = vec_from_json(j.at("theta"));
    r.tau_count = j.at("tau_count").get<int>();
    r.penalty = parse_penalty(j.at("penalty").get<std::string>());
    r.alpha = j.at("alpha").get<double>();
    r.n_perms = j.at("n_perms").get<int>();
    if (!j.at("d_hat_perm").is_null()) r.d_hat_perm = j.at("d_hat_perm").get<int>();
    if (!j.at("d_hat_bic").is_null()) r.d_hat_bic = j.at("d_hat_bic").get<int>();
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

json to_json(const FitDocument& doc) {
    json j = {{"schema_version", doc.schema_version},
              {"dataset",
               {{"n", doc.fit.n}, {"p", doc.fit.p()}, {"columns", doc.columns}, {"response", doc.response}, {"levels", doc.levels}}},
              {"options", options_to_json(doc.options)},
              {"fit", to_json(doc.fit)}};
    if (doc.dimension) j["dimension"] = to_json(*doc.dimension);
    return j;
}

FitDocument document_from_json(const json& j) {
    FitDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != kFitSchemaVersion)
        throw DataError("fit document: unsupported schema_version " + std::to_string(doc.schema_version));
    const auto& ds = j.at("dataset");
    doc.columns = ds.at("columns").get<std::vector<std::string>>();
    doc.response = ds.at("response").get<std::string>();
    doc.levels = ds.value("levels", std::vector<std::string>{});
    doc.options = options_from_json(j.at("options"));
    doc.fit = fit_from_json(j.at("fit"));
    if (static_cast<long>(doc.columns.size()) != doc.fit.p()) throw DataError("fit document: column list does not match p");
    if (j.contains("dimension")) doc.dimension = report_from_json(j.at("dimension"));
    return doc;
}

void save_fit_document(const std::string& path, const FitDocument& doc) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << to_json(doc).dump(1) << '\n';
}

FitDocument load_fit_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("'" + path + "' is not valid JSON: " + e.what());
    }
    try {
        return document_from_json(j);
    } catch (const json::exception& e) {
        throw DataError("'" + path + "' is not a fit document: " + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& os, const std::vector<std::string>& header, const Matrix& M) {
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? "," : "") << format_double(M(i, j));
        os << '\n';
    }
}

}  // namespace msir
