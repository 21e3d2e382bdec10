#include "maxent/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "maxent/error.hpp"

namespace maxent::conic {

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::PrimalInfeasible: return "infeasible";
        case Status::DualInfeasible: return "unbounded";
        case Status::MaxIterations: return "max-iterations";
        case Status::NumericalError: return "numerical-error";
        case Status::NearOptimal: return "near-optimal";
    }
    return "unknown";
}

namespace {

using Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Central point of the barrier -log(x2 log(x3/x2) - x1) - log x2 - log x3;
// there -grad F(x) = x, so it is also the dual starting point.
constexpr double kExpCentral[3] = {-1.051383945322714, 0.556409619469370, 1.258967884768947};

bool exp_primal_interior(const double* s) {
    if (!(s[1] > 0.0 && s[2] > 0.0)) return false;
    double psi = s[1] * std::log(s[2] / s[1]) - s[0];
    return psi > 0.0 && std::isfinite(psi);
}

bool exp_dual_interior(const double* z) {
    if (!(z[0] < 0.0 && z[2] > 0.0)) return false;
    // -u exp(v/u) < e w
    double lhs = std::log(-z[0]) + z[1] / z[0];
    double rhs = 1.0 + std::log(z[2]);
    return lhs < rhs && std::isfinite(lhs);
}

void exp_grad_hess(const double* s, Vec3& g, Mat3& H) {
    const double x1 = s[0], x2 = s[1], x3 = s[2];
    const double lg = std::log(x3 / x2);
    const double psi = x2 * lg - x1;
    const Vec3 dpsi(-1.0, lg - 1.0, x2 / x3);
    g = -dpsi / psi;
    g(1) -= 1.0 / x2;
    g(2) -= 1.0 / x3;
    Mat3 d2 = Mat3::Zero();
    d2(1, 1) = -1.0 / x2;
    d2(1, 2) = d2(2, 1) = 1.0 / x3;
    d2(2, 2) = -x2 / (x3 * x3);
    H = dpsi * dpsi.transpose() / (psi * psi) - d2 / psi;
    H(1, 1) += 1.0 / (x2 * x2);
    H(2, 2) += 1.0 / (x3 * x3);
}

struct Point {
    VectorXd x, y, z, s;
    double tau = 1.0, kappa = 1.0;
};

struct Direction {
    VectorXd x, y, z, s;
    double tau = 0.0, kappa = 0.0;
};

class Solver {
public:
    Solver(const Problem& p, const Settings& st) : P_(p), S_(st) {
        n_ = static_cast<int>(P_.c.size());
        p_ = static_cast<int>(P_.b.size());
        q_ = static_cast<int>(P_.h.size());
        if (P_.A.rows() != p_ || (p_ > 0 && P_.A.cols() != n_) || P_.G.rows() != q_ ||
            (q_ > 0 && P_.G.cols() != n_))
            throw std::invalid_argument("conic problem dimensions are inconsistent");
        int rows = 0;
        nu_ = 0.0;
        for (const Cone& k : P_.cones) {
            if (k.kind == ConeKind::Exponential && k.dim != 3)
                throw std::invalid_argument("exponential cone blocks must have dimension 3");
            offsets_.push_back(rows);
            rows += k.dim;
            nu_ += k.kind == ConeKind::Exponential ? 3.0 : k.dim;
        }
        if (rows != q_) throw std::invalid_argument("cone dimensions do not match h");
        At_ = P_.A.transpose();
        Gt_ = P_.G.transpose();
        norm_c_ = P_.c.norm();
        norm_b_ = P_.b.norm();
        norm_h_ = P_.h.norm();
    }

    Solution run();

private:
    void initial_point(Point& u) const;
    bool interior(const Point& u) const;
    double proximity(const Point& u, double mu) const;
    double complementarity(const Point& u) const {
        return (u.s.dot(u.z) + u.tau * u.kappa) / (nu_ + 1.0);
    }
    void build_scaling(const Point& u, double mu);
    bool factorize();
    VectorXd solve_kkt(const VectorXd& rhs) const;
    VectorXd apply_w(const VectorXd& v) const;
    Direction direction(const Point& u, double mu, bool predictor, const VectorXd& rx,
                        const VectorXd& ry, const VectorXd& rz, double rt, const VectorXd& qx,
                        const VectorXd& qy, const VectorXd& wh, double hwh) const;

    const Problem& P_;
    const Settings& S_;
    int n_ = 0, p_ = 0, q_ = 0;
    double nu_ = 0.0;
    std::vector<int> offsets_;
    SparseMatrix At_, Gt_;
    double norm_c_ = 0, norm_b_ = 0, norm_h_ = 0;

    // Scaling: diagonal part for nonnegative rows, 3x3 blocks for exp cones.
    VectorXd wdiag_;
    std::vector<Mat3> wexp_;
    std::vector<Vec3> gexp_;
    SparseMatrix W_;
    SparseMatrix K_, K0_;
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
    bool analyzed_ = false;
};

void Solver::initial_point(Point& u) const {
    u.x = VectorXd::Zero(n_);
    u.y = VectorXd::Zero(p_);
    u.s.resize(q_);
    u.z.resize(q_);
    for (std::size_t k = 0; k < P_.cones.size(); ++k) {
        int o = offsets_[k];
        if (P_.cones[k].kind == ConeKind::Nonnegative) {
            for (int i = 0; i < P_.cones[k].dim; ++i) u.s(o + i) = u.z(o + i) = 1.0;
        } else {
            for (int i = 0; i < 3; ++i) u.s(o + i) = u.z(o + i) = kExpCentral[i];
        }
    }
    u.tau = u.kappa = 1.0;
}

bool Solver::interior(const Point& u) const {
    if (!(u.tau > 0.0 && u.kappa > 0.0)) return false;
    for (std::size_t k = 0; k < P_.cones.size(); ++k) {
        int o = offsets_[k];
        if (P_.cones[k].kind == ConeKind::Nonnegative) {
            for (int i = 0; i < P_.cones[k].dim; ++i)
                if (!(u.s(o + i) > 0.0 && u.z(o + i) > 0.0)) return false;
        } else {
            if (!exp_primal_interior(u.s.data() + o) || !exp_dual_interior(u.z.data() + o))
                return false;
        }
    }
    return true;
}

double Solver::proximity(const Point& u, double mu) const {
    // Products below mu are penalized; products above it are free.
    double worst = std::max(0.0, 1.0 - u.tau * u.kappa / mu);
    for (std::size_t k = 0; k < P_.cones.size(); ++k) {
        int o = offsets_[k];
        if (P_.cones[k].kind == ConeKind::Nonnegative) {
            for (int i = 0; i < P_.cones[k].dim; ++i)
                worst = std::max(worst, 1.0 - u.s(o + i) * u.z(o + i) / mu);
        } else {
            Vec3 g;
            Mat3 H;
            exp_grad_hess(u.s.data() + o, g, H);
            Vec3 r = Vec3(u.z(o), u.z(o + 1), u.z(o + 2)) + mu * g;
            Eigen::LDLT<Mat3> f(H);
            double v = r.dot(f.solve(r));
            if (!(v >= 0.0) || !std::isfinite(v)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::sqrt(v) / mu);
        }
        if (!(worst < std::numeric_limits<double>::infinity())) break;
    }
    return worst;
}

void Solver::build_scaling(const Point& u, double mu) {
    wdiag_ = VectorXd::Zero(q_);
    wexp_.clear();
    gexp_.clear();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(q_ * 3);
    for (std::size_t k = 0; k < P_.cones.size(); ++k) {
        int o = offsets_[k];
        if (P_.cones[k].kind == ConeKind::Nonnegative) {
            for (int i = 0; i < P_.cones[k].dim; ++i) {
                wdiag_(o + i) = u.z(o + i) / u.s(o + i);
                trip.emplace_back(o + i, o + i, wdiag_(o + i));
            }
        } else {
            Vec3 g;
            Mat3 H;
            exp_grad_hess(u.s.data() + o, g, H);
            Mat3 Wk = mu * H;
            wexp_.push_back(Wk);
            gexp_.push_back(g);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) trip.emplace_back(o + i, o + j, Wk(i, j));
        }
    }
    W_.resize(q_, q_);
    W_.setFromTriplets(trip.begin(), trip.end());
}

VectorXd Solver::apply_w(const VectorXd& v) const { return W_ * v; }

bool Solver::factorize() {
    SparseMatrix GtWG = (Gt_ * W_ * P_.G).pruned(0.0);
    const int m = n_ + p_;
    const double reg = 1e-9;
    std::vector<Eigen::Triplet<double>> t0, t1;
    t0.reserve(GtWG.nonZeros() + P_.A.nonZeros() + m);
    for (int j = 0; j < GtWG.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(GtWG, j); it; ++it)
            if (it.row() >= it.col()) t0.emplace_back(it.row(), it.col(), it.value());
    for (int j = 0; j < P_.A.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(P_.A, j); it; ++it)
            t0.emplace_back(n_ + it.row(), it.col(), it.value());
    t1 = t0;
    for (int i = 0; i < n_; ++i) t1.emplace_back(i, i, reg);
    for (int i = 0; i < p_; ++i) t1.emplace_back(n_ + i, n_ + i, -reg);
    K0_.resize(m, m);
    K0_.setFromTriplets(t0.begin(), t0.end());
    K_.resize(m, m);
    K_.setFromTriplets(t1.begin(), t1.end());
    if (!analyzed_) {
        ldlt_.analyzePattern(K_);
        analyzed_ = true;
    }
    ldlt_.factorize(K_);
    if (ldlt_.info() != Eigen::Success) {
        ldlt_.compute(K_);
        if (ldlt_.info() != Eigen::Success) return false;
    }
    return true;
}

VectorXd Solver::solve_kkt(const VectorXd& rhs) const {
    VectorXd v = ldlt_.solve(rhs);
    // Iterative refinement against the unregularized matrix (lower triangle stored).
    for (int it = 0; it < 4; ++it) {
        VectorXd Kv = K0_.selfadjointView<Eigen::Lower>() * v;
        VectorXd r = rhs - Kv;
        if (r.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
        v += ldlt_.solve(r);
    }
    return v;
}

Direction Solver::direction(const Point& u, double mu, bool predictor, const VectorXd& rx,
                            const VectorXd& ry, const VectorXd& rz, double rt, const VectorXd& qx,
                            const VectorXd& qy, const VectorXd& wh, double hwh) const {
    const double f = predictor ? 1.0 : 0.0;
    VectorXd rc(q_);
    std::size_t e = 0;
    for (std::size_t k = 0; k < P_.cones.size(); ++k) {
        int o = offsets_[k];
        if (P_.cones[k].kind == ConeKind::Nonnegative) {
            for (int i = 0; i < P_.cones[k].dim; ++i)
                rc(o + i) = predictor ? -u.z(o + i) : mu / u.s(o + i) - u.z(o + i);
        } else {
            for (int i = 0; i < 3; ++i)
                rc(o + i) = predictor ? -u.z(o + i) : -u.z(o + i) - mu * gexp_[e](i);
            ++e;
        }
    }
    const double rk = predictor ? -u.tau * u.kappa : mu - u.tau * u.kappa;
    VectorXd t = rc;
    if (predictor) t -= apply_w(rz);
    VectorXd rhs(n_ + p_);
    rhs.head(n_) = -f * rx - Gt_ * t;
    rhs.tail(p_) = f * ry;
    VectorXd pv = solve_kkt(rhs);
    auto phi = [&](const VectorXd& vx, const VectorXd& vy) {
        return -P_.c.dot(vx) - wh.dot(vx) - P_.b.dot(vy);
    };
    const double rhs_tau = -f * rt + P_.h.dot(t) + rk / u.tau;
    const double denom = phi(qx, qy) + hwh + u.kappa / u.tau;
    Direction d;
    d.tau = (rhs_tau - phi(pv.head(n_), pv.tail(p_))) / denom;
    d.x = pv.head(n_) + d.tau * qx;
    d.y = pv.tail(p_) + d.tau * qy;
    d.s = -(P_.G * d.x) + P_.h * d.tau;
    if (predictor) d.s += rz;
    d.z = rc - apply_w(d.s);
    d.kappa = (rk - u.kappa * d.tau) / u.tau;
    return d;
}

Point combine(const Point& u, const Direction& a, double wa, const Direction& b, double wb) {
    Point v;
    v.x = u.x + wa * a.x + wb * b.x;
    v.y = u.y + wa * a.y + wb * b.y;
    v.z = u.z + wa * a.z + wb * b.z;
    v.s = u.s + wa * a.s + wb * b.s;
    v.tau = u.tau + wa * a.tau + wb * b.tau;
    v.kappa = u.kappa + wa * a.kappa + wb * b.kappa;
    return v;
}

Solution Solver::run() {
    Solution sol;
    Point u;
    initial_point(u);
    const double max_prox = 0.99;
    static const double kAlphas[] = {0.9999, 0.999, 0.998, 0.995, 0.99, 0.98, 0.97, 0.95, 0.92,
                                     0.9,    0.85,  0.8,   0.7,   0.6,  0.5,  0.4,  0.3,  0.2,
                                     0.1,    0.05,  0.02,  0.01,  0.0};

    for (int iter = 0;; ++iter) {
        VectorXd rx = At_ * u.y + Gt_ * u.z + P_.c * u.tau;
        VectorXd ry = -(P_.A * u.x) + P_.b * u.tau;
        VectorXd rz = -(P_.G * u.x) + P_.h * u.tau - u.s;
        double rt = -P_.c.dot(u.x) - P_.b.dot(u.y) - P_.h.dot(u.z) - u.kappa;
        double mu = complementarity(u);

        const double cx = P_.c.dot(u.x);
        const double byhz = P_.b.dot(u.y) + P_.h.dot(u.z);
        const double pres = std::max(ry.norm() / (1.0 + norm_b_), rz.norm() / (1.0 + norm_h_)) / u.tau;
        const double dres = rx.norm() / (1.0 + norm_c_) / u.tau;
        const double pobj = cx / u.tau, dobj = -byhz / u.tau;
        const double gap = u.s.dot(u.z) / (u.tau * u.tau);
        const double relgap = std::abs(pobj - dobj) / std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));

        sol.iterations = iter;
        sol.primal_objective = pobj;
        sol.dual_objective = dobj;
        sol.gap = gap;
        sol.primal_residual = pres;
        sol.dual_residual = dres;
        if (S_.verbose)
            std::fprintf(stderr, "%3d pobj % .9e dobj % .9e pres %.2e dres %.2e gap %.2e tau %.2e kap %.2e mu %.2e\n",
                         iter, pobj, dobj, pres, dres, gap, u.tau, u.kappa, mu);

        if (pres <= S_.tol_feas && dres <= S_.tol_feas &&
            (gap <= S_.tol_gap_abs || relgap <= S_.tol_gap_rel)) {
            sol.status = Status::Optimal;
            sol.x = u.x / u.tau;
            sol.y = u.y / u.tau;
            sol.z = u.z / u.tau;
            sol.s = u.s / u.tau;
            return sol;
        }
        if (byhz < 0.0 && u.tau < u.kappa) {
            double res = (At_ * u.y + Gt_ * u.z).norm() / -byhz;
            if (res <= S_.tol_infeas) {
                sol.status = Status::PrimalInfeasible;
                sol.y = u.y / -byhz;
                sol.z = u.z / -byhz;
                sol.x = VectorXd::Zero(n_);
                sol.s = VectorXd::Zero(q_);
                return sol;
            }
        }
        if (cx < 0.0 && u.tau < u.kappa) {
            double res = std::max((P_.A * u.x).norm(), (P_.G * u.x + u.s).norm()) / -cx;
            if (res <= S_.tol_infeas) {
                sol.status = Status::DualInfeasible;
                sol.x = u.x / -cx;
                sol.s = u.s / -cx;
                sol.y = VectorXd::Zero(p_);
                sol.z = VectorXd::Zero(q_);
                return sol;
            }
        }
        auto finish_unconverged = [&](Status st) {
            const bool close = pres <= S_.tol_feas_inacc && dres <= S_.tol_feas_inacc &&
                               (gap <= S_.tol_gap_inacc || relgap <= S_.tol_gap_inacc);
            sol.status = close ? Status::NearOptimal : st;
            sol.x = u.x / u.tau;
            sol.y = u.y / u.tau;
            sol.z = u.z / u.tau;
            sol.s = u.s / u.tau;
            return sol;
        };
        if (iter >= S_.max_iter) return finish_unconverged(Status::MaxIterations);

        build_scaling(u, mu);
        if (!factorize()) return finish_unconverged(Status::NumericalError);

        VectorXd wh = Gt_ * apply_w(P_.h);
        const double hwh = P_.h.dot(apply_w(P_.h));
        VectorXd rhs_q(n_ + p_);
        rhs_q.head(n_) = wh - P_.c;
        rhs_q.tail(p_) = P_.b;
        VectorXd qv = solve_kkt(rhs_q);
        VectorXd qx = qv.head(n_), qy = qv.tail(p_);

        Direction pred = direction(u, mu, true, rx, ry, rz, rt, qx, qy, wh, hwh);
        Direction cent = direction(u, mu, false, rx, ry, rz, rt, qx, qy, wh, hwh);

        bool stepped = false;
        for (double alpha : kAlphas) {
            Point v = combine(u, pred, alpha, cent, 1.0 - alpha);
            if (!interior(v)) continue;
            double mv = complementarity(v);
            if (!(mv > 0.0)) continue;
            if (proximity(v, mv) > max_prox) continue;
            u = std::move(v);
            stepped = true;
            break;
        }
        if (!stepped) {
            for (double beta = 0.5; beta > 1e-4; beta *= 0.5) {
                Point v = combine(u, cent, beta, cent, 0.0);
                if (!interior(v)) continue;
                double mv = complementarity(v);
                if (!(mv > 0.0)) continue;
                if (proximity(v, mv) > max_prox) continue;
                u = std::move(v);
                stepped = true;
                break;
            }
        }
        if (!stepped) return finish_unconverged(Status::NumericalError);
    }
}

}  // namespace

bool in_exp_cone(const double* v, double tol) {
    if (v[1] > 0.0 && v[2] > 0.0) {
        if (v[1] * std::log(v[2] / v[1]) - v[0] >= -tol) return true;
    }
    return v[0] <= tol && std::abs(v[1]) <= tol && v[2] >= -tol;
}

bool in_exp_dual_cone(const double* v, double tol) {
    if (v[0] < 0.0 && v[2] > 0.0) {
        double lhs = -v[0] * std::exp(v[1] / v[0]);
        if (lhs <= std::exp(1.0) * v[2] + tol) return true;
    }
    return std::abs(v[0]) <= tol && v[1] >= -tol && v[2] >= -tol;
}

Solution solve(const Problem& problem, const Settings& settings) {
    Solver s(problem, settings);
    return s.run();
}

}  // namespace maxent::conic
