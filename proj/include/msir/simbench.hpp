#pragma once

// Simulation models, the Monte Carlo grid runner and accuracy aggregation.

#include "msir/msir.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace msir {

enum class SimModel { Motivating, Model1, Model2, Model3, Model4, Model5 };

std::string to_string(SimModel model);
SimModel parse_model(const std::string& name);
/// Structural dimension of each generating model.
int true_dimension(SimModel model);

struct SimulationSpec {
    SimModel model = SimModel::Model1;
    long n = 100;
    long p = 10;
    double sigma = 0.5;  // models 1-3
    double rho = 0.0;    // model 4
    double a = 0.0;      // model 5
    std::optional<int> H;
    std::vector<std::string> methods = {"msir", "sir", "save", "phd"};
    int reps = 100;
    std::uint64_t seed = 0;
};

struct SimData {
    Matrix X;
    Vector y;
    Matrix B_true;  // orthonormal columns
};

/// Throws std::invalid_argument when the parameters do not fit the model.
void validate(const SimulationSpec& spec);

/// Generating directions (columns not normalized).
Matrix true_basis(const SimulationSpec& spec);

/// Response of the model at predictors X with standard-normal errors eps.
Vector model_response(const SimulationSpec& spec, const Matrix& X, const Vector& eps);

SimData generate(const SimulationSpec& spec, std::uint64_t rep_seed);

/// Seed of repetition `rep`; every method in a repetition sees the same data.
std::uint64_t rep_seed(const SimulationSpec& spec, int rep);

struct SimRow {
    std::string model;
    long n = 0;
    long p = 0;
    double sigma = 0.0;
    double rho = 0.0;
    double a = 0.0;
    int H = 0;
    std::string method;
    int rep = 0;
    double delta = 0.0;
    double angle_deg = 0.0;
    double seconds = 0.0;
    std::string error;
};

struct SummaryRow {
    std::string model;
    long n = 0;
    long p = 0;
    double sigma = 0.0;
    double rho = 0.0;
    double a = 0.0;
    int H = 0;
    std::string method;
    int reps = 0;
    int failures = 0;
    double mean_angle = 0.0;
    double median_angle = 0.0;
    double sd_angle = 0.0;
    double mean_delta = 0.0;
};

struct GridOptions {
    GmmOptions gmm;
    bool timing = false;  // wall time per fit; off keeps output bit-reproducible
};

/// Fits one method at dimension d and returns the estimated basis.
Matrix estimate_basis(const std::string& method, const Matrix& X, const Vector& y, int d, std::optional<int> H,
                      const GmmOptions& gmm, std::uint64_t seed);

std::vector<SimRow> run_grid(const std::vector<SimulationSpec>& specs, const GridOptions& opts = {});

std::vector<SummaryRow> summarize(const std::vector<SimRow>& rows);

void write_rows_csv(std::ostream& os, const std::vector<SimRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace msir
