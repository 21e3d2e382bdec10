#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace maxent::conic {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Nonnegative blocks have arbitrary dimension. Exponential blocks have
// dimension 3 and represent cl{(x1,x2,x3) : x2 > 0, x2*exp(x1/x2) <= x3}.
enum class ConeKind { Nonnegative, Exponential };

struct Cone {
    ConeKind kind;
    int dim;
};

// minimize c'x  subject to  Ax = b,  h - Gx in K.
// Rows of G and h are ordered to follow `cones`.
struct Problem {
    Eigen::VectorXd c;
    SparseMatrix A;
    Eigen::VectorXd b;
    SparseMatrix G;
    Eigen::VectorXd h;
    std::vector<Cone> cones;
};

// NearOptimal: stalled, but within the reduced-accuracy tolerances.
enum class Status { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalError, NearOptimal };

std::string to_string(Status s);

struct Settings {
    double tol_feas = 1e-9;
    double tol_gap_abs = 1e-9;
    double tol_gap_rel = 1e-9;
    double tol_infeas = 1e-9;
    double tol_feas_inacc = 1e-6;
    double tol_gap_inacc = 1e-6;
    int max_iter = 300;
    bool verbose = false;
};

struct Solution {
    Status status = Status::NumericalError;
    // For Optimal these are the primal-dual point. For PrimalInfeasible (y,z)
    // is a Farkas certificate; for DualInfeasible x is an improving ray.
    Eigen::VectorXd x, y, z, s;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
};

// Homogeneous self-dual interior-point method for linear and exponential cones.
Solution solve(const Problem& problem, const Settings& settings = {});

// Cone membership helpers, exposed for tests.
bool in_exp_cone(const double* v, double tol = 0.0);
bool in_exp_dual_cone(const double* v, double tol = 0.0);

}  // namespace maxent::conic
