// msir: command-line front end for fitting, dimension inference, projection,
// simulation and reduced-subspace classification.

#include "msir/baselines.hpp"
#include "msir/classify.hpp"
#include "msir/dimension.hpp"
#include "msir/io.hpp"
#include "msir/parallel.hpp"
#include "msir/simbench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace msir;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Writes to `path`, or to stdout when it is empty or "-".
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write(out);
}

struct FitFlags {
    std::string slices = "auto";
    std::string discrete = "auto";
    int max_components = 5;
    std::string models;
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--slices", slices, "Number of slices H, or auto")->capture_default_str();
        cmd->add_option("--discrete", discrete, "Treat the response as discrete: auto|yes|no")
            ->check(CLI::IsMember({"auto", "yes", "no"}))
            ->capture_default_str();
        cmd->add_option("--max-components", max_components, "Largest mixture size per slice")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--models", models, "Comma-separated covariance structures (default: all)");
        cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    }

    MsirOptions options() const {
        MsirOptions o;
        if (slices != "auto") {
            try {
                std::size_t used = 0;
                o.slices = std::stoi(slices, &used);
                if (used != slices.size() || *o.slices < 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw UsageError("--slices expects a positive integer or 'auto', got '" + slices + "'");
            }
        }
        o.discrete = discrete == "yes" ? DiscreteMode::Discrete
                                       : (discrete == "no" ? DiscreteMode::Continuous : DiscreteMode::Auto);
        o.gmm.components.clear();
        for (int k = 1; k <= max_components; ++k) o.gmm.components.push_back(k);
        if (!models.empty()) {
            o.gmm.params.clear();
            for (const auto& code : split_list(models)) {
                try {
                    o.gmm.params.push_back(parse_cov_param(code));
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            }
        }
        o.seed = seed;
        return o;
    }
};

MsirFit fit_by_method(const std::string& method, const Matrix& X, const Vector& y, const MsirOptions& opts) {
    if (method == "msir") return fit_msir(X, y, opts);
    if (method == "sir") return fit_sir(X, y, opts);
    if (method == "save") return fit_save(X, y, opts);
    return fit_phd(X, y, PhdVariant::Response, opts.eig_floor);
}

void print_fit_summary(std::ostream& os, const MsirFit& fit) {
    os << "method " << fit.method << ", n = " << fit.n << ", p = " << fit.p() << ", H = " << fit.sliced.H
       << ", components = " << fit.total_components() << ", d_max = " << fit.d_max << '\n';
    for (std::size_t h = 0; h < fit.slice_mixtures.size(); ++h) {
        const auto& m = fit.slice_mixtures[h];
        os << "  slice " << h + 1 << ": n = " << m.n << ", K = " << m.K() << ", " << to_string(m.param)
           << ", BIC = " << m.bic << '\n';
    }
    os << "eigenvalues:";
    for (Eigen::Index j = 0; j < fit.eigenvalues.size(); ++j) os << ' ' << fit.eigenvalues[j];
    os << '\n';
    for (const auto& w : fit.warnings) os << "warning: " << w << '\n';
}

// ----- fit -----

struct FitCommand {
    std::string input, response, output, method = "msir";
    FitFlags flags;
    CLI::App* cmd = nullptr;

    void add(CLI::App& app) {
        cmd = app.add_subcommand("fit", "Estimate the reduction subspace and save a fit document");
        cmd->add_option("--input", input, "Training CSV with a header row")->required();
        cmd->add_option("--response", response, "Response column name or 1-based index")->required();
        cmd->add_option("--method", method, "Estimator")->check(CLI::IsMember({"msir", "sir", "save", "phd"}))->capture_default_str();
        cmd->add_option("--output", output, "Fit document path (default: stdout)");
        flags.add(cmd);
    }

    void run() const {
        const Dataset ds = parse_csv(input, response);
        FitDocument doc;
        doc.columns = ds.predictor_names;
        doc.response = ds.response_name;
        doc.levels = ds.levels;
        doc.options = flags.options();
        doc.fit = fit_by_method(method, ds.X, ds.y, doc.options);
        if (output.empty() || output == "-") {
            std::cout << to_json(doc).dump(1) << '\n';
        } else {
            save_fit_document(output, doc);
            print_fit_summary(std::cout, doc.fit);
        }
    }
};

// ----- dim -----

struct DimCommand {
    std::string fit_path, input, response, method, penalty = "zhuzhu", output;
    int permutations = 199;
    double alpha = 0.05;
    FitFlags flags;
    CLI::App* cmd = nullptr;

    void add(CLI::App& app) {
        cmd = app.add_subcommand("dim", "Infer the structural dimension");
        cmd->add_option("--fit", fit_path, "Fit document (BIC-type criterion only)");
        cmd->add_option("--input", input, "Training CSV (required for the permutation test)");
        cmd->add_option("--response", response, "Response column name or 1-based index");
        cmd->add_option("--method", method, "perm|bic|both (default: bic with --fit, both with --input)")
            ->check(CLI::IsMember({"perm", "bic", "both"}));
        cmd->add_option("--permutations", permutations, "Permutations per hypothesis")->capture_default_str();
        cmd->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        cmd->add_option("--penalty", penalty, "zhuzhu|zmp")->check(CLI::IsMember({"zhuzhu", "zmp"}))->capture_default_str();
        cmd->add_option("--output", output, "Write the report as JSON to this path");
        flags.add(cmd);
    }

    void run() const {
        if (fit_path.empty() == input.empty()) throw UsageError("dim: give exactly one of --fit or --input");
        const BicPenalty pen = parse_penalty(penalty);
        DimensionReport report;
        if (!fit_path.empty()) {
            if (!method.empty() && method != "bic")
                throw UsageError("dim: the permutation test re-fits the raw data; use --input/--response instead of --fit");
            report = bic_dimension(load_fit_document(fit_path).fit, pen);
        } else {
            if (response.empty()) throw UsageError("dim: --input requires --response");
            const Dataset ds = parse_csv(input, response);
            const MsirOptions opts = flags.options();
            if (method == "bic") {
                report = bic_dimension(fit_msir(ds.X, ds.y, opts), pen);
            } else {
                DimensionOptions dopts;
                dopts.permutations = permutations;
                dopts.alpha = alpha;
                dopts.penalty = pen;
                dopts.seed = flags.seed;
                report = permutation_test(ds.X, ds.y, opts, dopts);
                if (method != "perm") {
                    report.penalty = pen;
                    report.G = bic_criterion(report.eigenvalues, report.n, report.H, pen);
                    Eigen::Index best = 0;
                    for (Eigen::Index d = 1; d < report.G.size(); ++d)
                        if (report.G[d] > report.G[best]) best = d;
                    report.d_hat_bic = static_cast<int>(best);
                }
            }
        }
        std::cout << format_report(report);
        for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
        if (!output.empty()) with_output(output, [&](std::ostream& os) { os << to_json(report).dump(1) << '\n'; });
    }
};

// ----- project -----

struct ProjectCommand {
    std::string fit_path, input, output;
    int dims = 0;
    CLI::App* cmd = nullptr;

    void add(CLI::App& app) {
        cmd = app.add_subcommand("project", "Project new observations onto the leading directions");
        cmd->add_option("--fit", fit_path, "Fit document")->required();
        cmd->add_option("--input", input, "CSV holding the fitted predictor columns")->required();
        cmd->add_option("--dims", dims, "Number of directions")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--output", output, "Projection CSV (default: stdout)");
    }

    void run() const {
        const FitDocument doc = load_fit_document(fit_path);
        if (dims > doc.fit.p()) throw UsageError("project: --dims exceeds the number of predictors");
        const Matrix X = read_columns(input, doc.columns);
        const Matrix Z = project(doc.fit, X, dims);
        std::vector<std::string> header;
        for (int j = 1; j <= dims; ++j) header.push_back("z" + std::to_string(j));
        with_output(output, [&](std::ostream& os) { write_matrix_csv(os, header, Z); });
    }
};

// ----- simulate -----

struct SimulateCommand {
    std::string model = "1", methods = "msir,sir,save,phd", h_sweep, slices = "auto", output, summary;
    long n = 100, p = 10;
    double sigma = 0.5, rho = 0.0, a = 0.0;
    int reps = 100, max_components = 5;
    std::uint64_t seed = 0;
    bool timing = false;
    CLI::App* cmd = nullptr;

    void add(CLI::App& app) {
        cmd = app.add_subcommand("simulate", "Run the Monte Carlo benchmark");
        cmd->add_option("--model", model, "1..5 or motivating")->capture_default_str();
        cmd->add_option("--n", n, "Sample size")->capture_default_str();
        cmd->add_option("--p", p, "Number of predictors")->capture_default_str();
        cmd->add_option("--sigma", sigma, "Error scale (models 1-3)")->capture_default_str();
        cmd->add_option("--rho", rho, "Predictor correlation (model 4)")->capture_default_str();
        cmd->add_option("--a", a, "Location constant (model 5)")->capture_default_str();
        cmd->add_option("--reps", reps, "Repetitions per cell")->capture_default_str();
        cmd->add_option("--methods", methods, "Comma-separated subset of msir,sir,save,phd")->capture_default_str();
        cmd->add_option("--slices", slices, "Number of slices H, or auto")->capture_default_str();
        cmd->add_option("--h-sweep", h_sweep, "Comma-separated list of H values, one cell each");
        cmd->add_option("--max-components", max_components, "Largest mixture size per slice")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
        cmd->add_option("--output", output, "Per-repetition CSV (default: stdout)");
        cmd->add_option("--summary", summary, "Aggregate CSV path");
        cmd->add_flag("--timing", timing, "Record wall time per fit (output is then not reproducible)");
    }

    static int parse_h(const std::string& text) {
        try {
            std::size_t used = 0;
            const int H = std::stoi(text, &used);
            if (used == text.size() && H >= 1) return H;
        } catch (const std::exception&) {
        }
        throw UsageError("expected a positive slice count, got '" + text + "'");
    }

    void run() const {
        SimulationSpec base;
        try {
            base.model = parse_model(model);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        base.n = n;
        base.p = p;
        base.sigma = sigma;
        base.rho = rho;
        base.a = a;
        base.reps = reps;
        base.seed = seed;
        base.methods = split_list(methods);
        if (slices != "auto") base.H = parse_h(slices);

        std::vector<SimulationSpec> specs;
        if (h_sweep.empty()) {
            specs.push_back(base);
        } else {
            for (const auto& h : split_list(h_sweep)) {
                specs.push_back(base);
                specs.back().H = parse_h(h);
            }
        }
        for (const auto& s : specs) {
            try {
                validate(s);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }

        GridOptions opts;
        opts.timing = timing;
        opts.gmm.components.clear();
        for (int k = 1; k <= max_components; ++k) opts.gmm.components.push_back(k);
        const auto rows = run_grid(specs, opts);
        with_output(output, [&](std::ostream& os) { write_rows_csv(os, rows); });
        if (!summary.empty()) with_output(summary, [&](std::ostream& os) { write_summary_csv(os, summarize(rows)); });
    }
};

// ----- classify -----

std::string label_text(const Dataset& ds, Eigen::Index i) {
    return ds.levels.empty() ? format_double(ds.y[i]) : ds.levels[static_cast<std::size_t>(ds.y[i])];
}

Dataset keep_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
    Dataset out = ds;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.p());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.X.row(static_cast<Eigen::Index>(r)) = ds.X.row(rows[r]);
        out.y[static_cast<Eigen::Index>(r)] = ds.y[rows[r]];
    }
    return out;
}

bool has_column(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    for (auto cell : split_list(header)) {
        std::erase_if(cell, [](char c) { return c == '"' || c == ' ' || c == '\r'; });
        if (cell == name) return true;
    }
    return false;
}

struct ClassifyCommand {
    std::string train, test, label_col, output, classes;
    int dims = 0;
    FitFlags flags;
    CLI::App* cmd = nullptr;

    void add(CLI::App& app) {
        cmd = app.add_subcommand("classify", "MAP classification in the reduced subspace");
        cmd->add_option("--train", train, "Labelled training CSV")->required();
        cmd->add_option("--test", test, "CSV to classify (labels optional)")->required();
        cmd->add_option("--label-col", label_col, "Label column name or 1-based index")->required();
        cmd->add_option("--dims", dims, "Number of directions")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--classes", classes, "Comma-separated labels to keep (default: all)");
        cmd->add_option("--output", output, "Predictions CSV (default: stdout)");
        flags.add(cmd);
    }

    // Restricts to --classes and re-codes labels as indices into `names`.
    Dataset encode(const Dataset& ds, std::vector<std::string>& names, bool allow_new) const {
        const std::vector<std::string> keep_list = split_list(classes);
        const std::set<std::string> keep(keep_list.begin(), keep_list.end());
        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < ds.n(); ++i)
            if (keep.empty() || keep.count(label_text(ds, i))) rows.push_back(i);
        Dataset out = keep_rows(ds, rows);
        if (allow_new) {
            std::set<std::string> seen;
            for (Eigen::Index i = 0; i < out.n(); ++i) seen.insert(label_text(out, i));
            names.assign(seen.begin(), seen.end());
            // Numeric labels keep their numeric order.
            if (ds.levels.empty())
                std::sort(names.begin(), names.end(), [](const std::string& l, const std::string& r) { return std::stod(l) < std::stod(r); });
        }
        for (Eigen::Index i = 0; i < out.n(); ++i) {
            const auto it = std::find(names.begin(), names.end(), label_text(out, i));
            if (it == names.end()) throw DataError("label '" + label_text(out, i) + "' does not occur in the training data");
            out.y[i] = double(it - names.begin());
        }
        out.levels = names;
        return out;
    }

    void run() const {
        const Dataset raw_train = parse_csv(train, label_col);
        std::vector<std::string> names;
        const Dataset tr = encode(raw_train, names, true);
        if (tr.n() <= tr.p()) throw DataError("classify: too few training rows after filtering");

        // The test file may omit the label column.
        Dataset te;
        const bool labelled = has_column(test, raw_train.response_name);
        if (labelled) {
            const Dataset raw_test = parse_csv(test, raw_train.response_name, false);
            if (raw_test.predictor_names != raw_train.predictor_names)
                throw DataError("classify: test predictor columns differ from the training columns");
            te = encode(raw_test, names, false);
        } else {
            te.X = read_columns(test, raw_train.predictor_names);
        }

        MsirOptions opts = flags.options();
        opts.discrete = DiscreteMode::Discrete;
        const ReducedClassifier clf = train_classifier(tr.X, tr.y, dims, opts);
        const Matrix post = posteriors(clf, te.X);
        const Vector pred = predict_labels(clf, te.X);

        with_output(output, [&](std::ostream& os) {
            os << "row_id,predicted";
            for (const auto& name : names) os << ",posterior_" << name;
            os << '\n';
            for (Eigen::Index i = 0; i < te.X.rows(); ++i) {
                os << i + 1 << ',' << names[static_cast<std::size_t>(pred[i])];
                for (Eigen::Index c = 0; c < post.cols(); ++c) os << ',' << format_double(post(i, c));
                os << '\n';
            }
        });
        std::ostream& log = (output.empty() || output == "-") ? std::cerr : std::cout;
        log << "classes: " << names.size() << ", training rows: " << tr.n() << ", d = " << dims << '\n';
        log << "training error (msir): " << error_rate(predict_labels(clf, tr.X), tr.y) << '\n';
        if (labelled) {
            const LdaClassifier lda = train_lda(tr.X, tr.y);
            log << "test error (msir): " << error_rate(pred, te.y) << '\n';
            log << "test error (lda): " << error_rate(predict_labels(lda, te.X), te.y) << '\n';
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-based sliced inverse regression"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: all available cores)")->check(CLI::NonNegativeNumber);

    FitCommand fit;
    DimCommand dim;
    ProjectCommand proj;
    SimulateCommand sim;
    ClassifyCommand cls;
    fit.add(app);
    dim.add(app);
    proj.add(app);
    sim.add(app);
    cls.add(app);

    try {
        app.parse(argc, argv);
        set_num_threads(threads);
        if (fit.cmd->parsed()) fit.run();
        if (dim.cmd->parsed()) dim.run();
        if (proj.cmd->parsed()) proj.run();
        if (sim.cmd->parsed()) sim.run();
        if (cls.cmd->parsed()) cls.run();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
