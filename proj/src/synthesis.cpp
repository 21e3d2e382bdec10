#include "maxent/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseLU>

#include "maxent/error.hpp"
#include "maxent/graph.hpp"

namespace maxent {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
constexpr double kLn2 = std::numbers::ln2;

std::vector<char> mask_of(int n, std::span<const int> states, const char* what) {
    std::vector<char> m(n, 0);
    for (int s : states) {
        if (s < 0 || s >= n) throw DomainError(std::string(what) + ": state index out of range");
        m[s] = 1;
    }
    return m;
}

bool is_absorbing(const Mdp& mdp, int s) {
    for (int a = 0; a < mdp.num_actions(s); ++a) {
        auto succ = mdp.successors(s, a);
        if (succ.size() != 1 || succ[0] != s) return false;
    }
    return true;
}

conic::SparseMatrix sparse(int rows, int cols, const Triplets& t) {
    conic::SparseMatrix m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Eigen::VectorXd dense(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Balance rows and the linear side constraints of a program. The nonnegative
// block comes first in the cone list, followed by one exponential block per term.
struct LinearPart {
    Triplets A, G;
    std::vector<double> b, h;
    std::vector<std::pair<std::string, int>> side_rows;
};

LinearPart linear_part(const EntropyProgram& p, bool with_ell) {
    LinearPart L;
    const Mdp& m = p.mdp;
    const int n = m.num_states();
    L.b.assign(n, 0.0);
    L.b[m.initial()] = 1.0;
    for (int s = 0; s < n; ++s) {
        if (p.in_c[s]) {
            L.A.emplace_back(s, p.state_var[s], 1.0);
            continue;
        }
        for (int a = 0; a < m.num_actions(s); ++a) {
            int v = p.sa_var[s][a];
            L.A.emplace_back(s, v, 1.0);
            for (const auto& o : m.actions(s)[a].outcomes)
                if (o.prob > 0.0) L.A.emplace_back(o.target, v, -o.prob);
        }
    }
    int row = 0;
    for (int s = 0; s < n; ++s) {
        if (p.in_c[s]) {
            L.G.emplace_back(row++, p.state_var[s], -1.0);
            L.h.push_back(0.0);
        } else {
            for (int v : p.sa_var[s]) {
                L.G.emplace_back(row++, v, -1.0);
                L.h.push_back(0.0);
            }
        }
    }
    const ProgramOptions& o = p.opts;
    if (o.gamma) {
        for (int s = 0; s < n; ++s)
            if (!p.in_c[s])
                for (int v : p.sa_var[s]) L.G.emplace_back(row, v, 1.0);
        L.h.push_back(*o.gamma);
        L.side_rows.push_back({"gamma", row++});
    }
    if (o.beta) {
        for (int s : o.beta_targets) L.G.emplace_back(row, p.state_var[s], -1.0);
        L.h.push_back(-*o.beta);
        L.side_rows.push_back({"beta", row++});
    }
    if (o.epsilon) {
        for (int s : o.epsilon_states) L.G.emplace_back(row, p.state_var[s], -1.0);
        L.h.push_back(-*o.epsilon);
        L.side_rows.push_back({"epsilon", row++});
    }
    if (with_ell && o.ell) {
        for (const auto& t : p.terms) L.G.emplace_back(row, t.var, -1.0);
        L.h.push_back(-*o.ell * kLn2);
        L.side_rows.push_back({"ell", row++});
    }
    return L;
}

int lambda_var_count(const EntropyProgram& p) {
    return p.terms.empty() ? p.num_vars : p.terms.front().var;
}

// LP over the lambda variables with the program's linear constraints.
conic::Solution solve_lp(const EntropyProgram& p, const Eigen::VectorXd& c,
                         std::optional<double> total_cap, double tol) {
    LinearPart L = linear_part(p, false);
    const int nv = lambda_var_count(p);
    int rows = static_cast<int>(L.h.size());
    if (total_cap) {
        for (int s = 0; s < p.mdp.num_states(); ++s)
            if (!p.in_c[s])
                for (int v : p.sa_var[s]) L.G.emplace_back(rows, v, 1.0);
        L.h.push_back(*total_cap);
        ++rows;
    }
    conic::Problem P;
    P.c = c;
    P.A = sparse(p.mdp.num_states(), nv, L.A);
    P.b = dense(L.b);
    P.G = sparse(rows, nv, L.G);
    P.h = dense(L.h);
    P.cones = {{conic::ConeKind::Nonnegative, rows}};
    conic::Settings st;
    st.tol_feas = st.tol_gap_abs = st.tol_gap_rel = st.tol_infeas = tol;
    return conic::solve(P, st);
}

// Stationary occupancy of an end component under the uniform choice of its
// retained actions: a circulation d with A d = 0 and d >= 0.
std::vector<std::vector<double>> circulation(const Mdp& m, const MecDecomposition& ecs, int ec) {
    const auto& states = ecs.mecs[ec];
    const int k = static_cast<int>(states.size());
    std::vector<int> local(m.num_states(), -1);
    for (int i = 0; i < k; ++i) local[states[i]] = i;
    // pi (P - I) = 0 with the last equation replaced by sum pi = 1.
    Triplets t;
    for (int i = 0; i < k; ++i) {
        int s = states[i];
        const auto& D = ecs.retained[s];
        if (i != k - 1) t.emplace_back(i, i, -1.0);
        for (int a : D)
            for (const auto& o : m.actions(s)[a].outcomes) {
                int j = local[o.target];
                if (o.prob > 0.0 && j != k - 1) t.emplace_back(j, i, o.prob / D.size());
            }
        t.emplace_back(k - 1, i, 1.0);
    }
    Eigen::SparseMatrix<double> M = sparse(k, k, t);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(k - 1) = 1.0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(M);
    Eigen::VectorXd pi = lu.solve(rhs);
    std::vector<std::vector<double>> d(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) d[s].assign(m.num_actions(s), 0.0);
    for (int i = 0; i < k; ++i) {
        int s = states[i];
        for (int a : ecs.retained[s]) d[s][a] = std::max(0.0, pi(i)) / ecs.retained[s].size();
    }
    return d;
}

SolutionVector fill_solution(const EntropyProgram& p, const Eigen::VectorXd& x) {
    SolutionVector sol;
    const Mdp& m = p.mdp;
    sol.lambda_sa.resize(m.num_states());
    sol.lambda_state.assign(m.num_states(), 0.0);
    for (int s = 0; s < m.num_states(); ++s) {
        sol.lambda_sa[s].assign(m.num_actions(s), 0.0);
        if (p.in_c[s]) {
            sol.lambda_state[s] = std::max(0.0, x(p.state_var[s]));
        } else {
            for (int a = 0; a < m.num_actions(s); ++a)
                sol.lambda_sa[s][a] = std::max(0.0, x(p.sa_var[s][a]));
        }
    }
    sol.entropy_bits = occupancy_entropy(m, sol.lambda_sa);
    return sol;
}

}  // namespace

Mdp absorb_states(const Mdp& mdp, std::span<const int> C) {
    auto inC = mask_of(mdp.num_states(), C, "absorb_states");
    std::vector<std::vector<Action>> actions(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        actions[s] = mdp.actions(s);
        if (!inC[s]) continue;
        for (auto& a : actions[s]) a.outcomes = {{s, 1.0}};
    }
    return Mdp(mdp.state_names(), mdp.initial(), mdp.ap(), mdp.labels(), std::move(actions));
}

EntropyProgram build_program(const Mdp& absorbed, std::span<const int> C, const ProgramOptions& opts) {
    EntropyProgram p;
    p.mdp = absorbed;
    p.opts = opts;
    const int n = absorbed.num_states();
    p.in_c = mask_of(n, C, "build_program");
    for (int s = 0; s < n; ++s)
        if (p.in_c[s] && !is_absorbing(absorbed, s))
            throw DomainError("state " + absorbed.state_name(s) + " is in C but not absorbing");
    if (opts.objective == ProgramObjective::Feasibility && !opts.ell)
        throw DomainError("feasibility objective requires an entropy floor");
    if (opts.objective == ProgramObjective::MinTime && opts.ell)
        throw DomainError("entropy floor cannot be combined with the min-time objective");
    if (opts.gamma && !(*opts.gamma > 0.0)) throw DomainError("gamma must be positive");
    if (opts.beta) {
        if (!(*opts.beta >= 0.0 && *opts.beta <= 1.0)) throw DomainError("beta must lie in [0,1]");
        for (int s : opts.beta_targets)
            if (s < 0 || s >= n || !p.in_c[s]) throw DomainError("beta targets must be absorbed states");
    }
    if (opts.epsilon) {
        if (!(*opts.epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
        for (int s : opts.epsilon_states)
            if (s < 0 || s >= n || !p.in_c[s]) throw DomainError("epsilon states must be absorbed states");
    }
    if (opts.time_states)
        for (int s : *opts.time_states)
            if (s < 0 || s >= n) throw DomainError("time state index out of range");

    p.sa_var.resize(n);
    p.state_var.assign(n, -1);
    int nv = 0;
    for (int s = 0; s < n; ++s) {
        if (p.in_c[s]) {
            p.state_var[s] = nv++;
        } else {
            for (int a = 0; a < absorbed.num_actions(s); ++a) p.sa_var[s].push_back(nv++);
        }
    }
    const bool with_terms = opts.objective != ProgramObjective::MinTime;
    if (with_terms) {
        for (int s = 0; s < n; ++s) {
            if (p.in_c[s]) continue;
            auto succ = absorbed.successors_all(s);
            // A single successor contributes exactly zero entropy.
            if (succ.size() < 2) continue;
            for (int t : succ) p.terms.push_back({s, t, nv++});
        }
    }
    p.num_vars = nv;
    p.balance_rows = n;

    LinearPart L = linear_part(p, true);
    int rows = static_cast<int>(L.h.size());
    p.side_rows = L.side_rows;
    std::vector<conic::Cone> cones{{conic::ConeKind::Nonnegative, rows}};
    for (const auto& term : p.terms) {
        // (t, eta, nu) with eta = sum_a lambda(s,a) P(s,a,t), nu = sum_a lambda(s,a).
        L.G.emplace_back(rows, term.var, -1.0);
        for (int a = 0; a < absorbed.num_actions(term.state); ++a) {
            int v = p.sa_var[term.state][a];
            for (const auto& o : absorbed.actions(term.state)[a].outcomes)
                if (o.target == term.target && o.prob > 0.0) L.G.emplace_back(rows + 1, v, -o.prob);
            L.G.emplace_back(rows + 2, v, -1.0);
        }
        L.h.insert(L.h.end(), {0.0, 0.0, 0.0});
        rows += 3;
        cones.push_back({conic::ConeKind::Exponential, 3});
    }

    Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
    switch (opts.objective) {
        case ProgramObjective::MaxEntropy:
            for (const auto& term : p.terms) c(term.var) = -1.0;
            break;
        case ProgramObjective::Feasibility:
            for (int s = 0; s < n; ++s)
                for (int v : p.sa_var[s]) c(v) = 1.0;
            break;
        case ProgramObjective::MinTime: {
            std::vector<int> ts;
            if (opts.time_states) ts = *opts.time_states;
            else
                for (int s = 0; s < n; ++s) ts.push_back(s);
            for (int s : ts)
                for (int v : p.sa_var[s]) c(v) = 1.0;
            break;
        }
    }
    p.conic.c = c;
    p.conic.A = sparse(n, nv, L.A);
    p.conic.b = dense(L.b);
    p.conic.G = sparse(rows, nv, L.G);
    p.conic.h = dense(L.h);
    p.conic.cones = std::move(cones);
    return p;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::MaxIterations: return "max-iterations";
    }
    return "unknown";
}

double occupancy_entropy(const Mdp& mdp, const std::vector<std::vector<double>>& lambda_sa) {
    double total = 0.0;
    std::vector<double> eta(mdp.num_states(), 0.0);
    std::vector<int> touched;
    for (int s = 0; s < mdp.num_states(); ++s) {
        double nu = 0.0;
        touched.clear();
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            double l = lambda_sa[s][a];
            if (l <= 0.0) continue;
            nu += l;
            for (const auto& o : mdp.actions(s)[a].outcomes) {
                if (o.prob <= 0.0) continue;
                if (eta[o.target] == 0.0) touched.push_back(o.target);
                eta[o.target] += l * o.prob;
            }
        }
        for (int t : touched) {
            if (eta[t] > 0.0) total -= eta[t] * std::log2(eta[t] / nu);
            eta[t] = 0.0;
        }
    }
    return total;
}

SolutionVector solve_program(const EntropyProgram& p, double tol) {
    const Mdp& m = p.mdp;
    const int n = m.num_states();
    const int nl = lambda_var_count(p);

    if (p.opts.objective == ProgramObjective::MaxEntropy && !p.opts.gamma) {
        std::vector<char> outside(n);
        for (int s = 0; s < n; ++s) outside[s] = !p.in_c[s];
        MecDecomposition ecs = maximal_end_components(m, outside);
        if (!ecs.mecs.empty()) {
            Eigen::VectorXd time = Eigen::VectorXd::Zero(nl);
            for (int s = 0; s < n; ++s)
                for (int v : p.sa_var[s]) time(v) = 1.0;
            auto base = solve_lp(p, time, std::nullopt, 1e-9);
            if (base.status == conic::Status::PrimalInfeasible) {
                SolutionVector sol;
                sol.status = SolveStatus::Infeasible;
                sol.detail = "linear constraints are infeasible";
                return sol;
            }
            int ray_ec = -1;
            for (int s = 0; s < n && ray_ec < 0; ++s)
                if (ecs.membership[s] >= 0 && m.successors(s, ecs.retained[s]).size() > 1)
                    ray_ec = ecs.membership[s];
            const bool base_ok = base.status == conic::Status::Optimal || base.status == conic::Status::NearOptimal;
            if (ray_ec < 0 && base_ok) {
                Eigen::VectorXd leave = Eigen::VectorXd::Zero(nl);
                bool any = false;
                for (int s = 0; s < n; ++s) {
                    if (ecs.membership[s] < 0) continue;
                    const auto& D = ecs.retained[s];
                    for (int a = 0; a < m.num_actions(s); ++a)
                        if (std::find(D.begin(), D.end(), a) == D.end()) {
                            leave(p.sa_var[s][a]) = -1.0;
                            any = true;
                        }
                }
                if (any) {
                    double cap = 2.0 * base.primal_objective + 1.0;
                    auto lp = solve_lp(p, leave, cap, 1e-10);
                    if (lp.status == conic::Status::Optimal || lp.status == conic::Status::NearOptimal) {
                        double best = 0.0;
                        for (int s = 0; s < n; ++s) {
                            if (ecs.membership[s] < 0) continue;
                            for (int a = 0; a < m.num_actions(s); ++a) {
                                int v = p.sa_var[s][a];
                                if (leave(v) != 0.0 && lp.x(v) > best) {
                                    best = lp.x(v);
                                    if (best > 1e-7) ray_ec = ecs.membership[s];
                                }
                            }
                        }
                    }
                }
            }
            if (ray_ec >= 0) {
                SolutionVector sol = fill_solution(p, base_ok
                                                          ? Eigen::VectorXd(base.x)
                                                          : Eigen::VectorXd::Zero(p.num_vars));
                sol.status = SolveStatus::Unbounded;
                sol.ray = circulation(m, ecs, ray_ec);
                sol.detail = "end component outside C admits an entropy-increasing circulation";
                return sol;
            }
        }
    }

    conic::Settings st;
    st.tol_feas = st.tol_gap_abs = st.tol_gap_rel = st.tol_infeas = tol;
    auto cs = conic::solve(p.conic, st);
    SolutionVector sol;
    switch (cs.status) {
        case conic::Status::Optimal: sol = fill_solution(p, cs.x); sol.status = SolveStatus::Optimal; break;
        case conic::Status::NearOptimal:
            sol = fill_solution(p, cs.x);
            sol.status = SolveStatus::Optimal;
            sol.detail = "reduced accuracy";
            break;
        case conic::Status::PrimalInfeasible:
            sol.status = SolveStatus::Infeasible;
            sol.detail = "Farkas certificate found";
            return sol;
        case conic::Status::DualInfeasible: {
            sol = fill_solution(p, Eigen::VectorXd::Zero(p.num_vars));
            sol.status = SolveStatus::Unbounded;
            sol.ray.resize(n);
            for (int s = 0; s < n; ++s) {
                sol.ray[s].assign(m.num_actions(s), 0.0);
                if (!p.in_c[s])
                    for (int a = 0; a < m.num_actions(s); ++a) sol.ray[s][a] = cs.x(p.sa_var[s][a]);
            }
            sol.detail = "improving ray from the homogeneous embedding";
            return sol;
        }
        default:
            sol = fill_solution(p, cs.x);
            sol.status = SolveStatus::MaxIterations;
            sol.detail = "solver stopped: " + conic::to_string(cs.status);
            break;
    }
    sol.objective = p.opts.objective == ProgramObjective::MaxEntropy ? -cs.primal_objective / kLn2
                                                                     : cs.primal_objective;
    sol.gap = std::abs(cs.primal_objective - cs.dual_objective);
    if (p.opts.objective == ProgramObjective::MaxEntropy) sol.gap /= kLn2;
    sol.primal_residual = cs.primal_residual;
    sol.dual_residual = cs.dual_residual;
    sol.iterations = cs.iterations;
    for (const auto& [name, row] : p.side_rows) {
        double slack = cs.s(row);
        if (name == "ell") slack /= kLn2;
        sol.slacks.push_back({name, slack});
    }
    return sol;
}

StationaryPolicy extract_policy(const Mdp& mdp, const SolutionVector& sol, std::span<const int> C) {
    auto inC = mask_of(mdp.num_states(), C, "extract_policy");
    StationaryPolicy pol;
    pol.dist.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        auto& d = pol.dist[s];
        d.assign(mdp.num_actions(s), 0.0);
        double total = 0.0;
        if (!inC[s] && s < static_cast<int>(sol.lambda_sa.size()))
            for (double l : sol.lambda_sa[s]) total += std::max(0.0, l);
        if (inC[s] || total < kExtractThreshold) {
            d[0] = 1.0;
            continue;
        }
        for (int a = 0; a < mdp.num_actions(s); ++a) d[a] = std::max(0.0, sol.lambda_sa[s][a]) / total;
    }
    return pol;
}

void set_uniform(StationaryPolicy& pol, int s, const std::vector<int>& acts) {
    std::fill(pol.dist[s].begin(), pol.dist[s].end(), 0.0);
    for (int a : acts) pol.dist[s][a] = 1.0 / acts.size();
}

std::vector<int> bsc_mec_states(const Mdp& mdp, const MecDecomposition& dec) {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(dec.mecs.size()); ++k)
        if (is_bsc_mec(mdp, dec, k)) out.insert(out.end(), dec.mecs[k].begin(), dec.mecs[k].end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void require_solved(const SolutionVector& sol, SynthesisResult& res) {
    if (sol.status == SolveStatus::Infeasible)
        throw DomainError("entropy program is infeasible (" + sol.detail + ")");
    if (sol.status == SolveStatus::Unbounded)
        throw DomainError("entropy program is unbounded; supply ell or gamma");
    if (sol.status == SolveStatus::MaxIterations) res.notes.push_back("solver did not converge: " + sol.detail);
}

}  // namespace

SynthesisResult synthesize_max_entropy(const Mdp& mdp, const SynthesisOptions& opts) {
    auto rep = validate_mdp(mdp);
    if (!rep.ok()) throw DomainError("invalid MDP: " + rep.violations.front());
    SynthesisResult res;
    res.cls = classify_max_entropy(mdp);
    const auto& dec = res.cls.mecs;
    const int n = mdp.num_states();

    switch (res.cls.tag) {
        case EntropyTag::Finite: {
            res.absorbed = dec.states_in_mecs();
            Mdp abs = absorb_states(mdp, res.absorbed);
            auto prog = build_program(abs, res.absorbed, {});
            res.solution = solve_program(prog, opts.tol);
            require_solved(res.solution, res);
            res.policy = extract_policy(mdp, res.solution, res.absorbed);
            if (opts.ell || opts.gamma) res.notes.push_back("finite class: ell and gamma ignored");
            break;
        }
        case EntropyTag::Unbounded: {
            res.absorbed = bsc_mec_states(mdp, dec);
            Mdp abs = absorb_states(mdp, res.absorbed);
            ProgramOptions po;
            if (opts.gamma) {
                po.gamma = opts.gamma;
                po.ell = opts.ell;
                res.notes.push_back("gamma-capped maximizer for the unbounded class");
            } else if (opts.ell) {
                po.objective = ProgramObjective::Feasibility;
                po.ell = opts.ell;
                res.notes.push_back("entropy-floor feasibility route for the unbounded class");
            } else {
                throw DomainError("maximum entropy is unbounded: supply --ell or --gamma");
            }
            auto prog = build_program(abs, res.absorbed, po);
            res.solution = solve_program(prog, opts.tol);
            require_solved(res.solution, res);
            res.policy = extract_policy(mdp, res.solution, res.absorbed);
            break;
        }
        case EntropyTag::Infinite: {
            const int star = res.cls.witness_state;
            const int star_mec = res.cls.witness_mec;
            for (int s = star + 1; s < n; ++s)
                if (dec.membership[s] >= 0 && s != star &&
                    mdp.successors(s, dec.retained[s]).size() > 1) {
                    res.notes.push_back("multiple infinite-entropy witnesses; using the first, " +
                                        mdp.state_name(star));
                    break;
                }
            std::vector<int> C = bsc_mec_states(mdp, dec);
            if (!is_bsc_mec(mdp, dec, star_mec))
                C.insert(C.end(), dec.mecs[star_mec].begin(), dec.mecs[star_mec].end());
            std::sort(C.begin(), C.end());
            res.absorbed = C;
            Mdp abs = absorb_states(mdp, C);
            ProgramOptions po;
            po.epsilon = opts.epsilon;
            po.epsilon_states = dec.mecs[star_mec];
            std::vector<char> inC = mask_of(n, C, "synthesize");
            bool open_ec = false;
            for (int k = 0; k < static_cast<int>(dec.mecs.size()); ++k)
                if (!inC[dec.mecs[k].front()]) open_ec = true;
            if (opts.gamma) {
                po.gamma = opts.gamma;
            } else if (open_ec) {
                po.objective = ProgramObjective::Feasibility;
                po.ell = 0.0;
                res.notes.push_back("non-BSC end component outside C and no gamma: feasibility objective");
            }
            auto prog = build_program(abs, C, po);
            res.solution = solve_program(prog, opts.tol);
            require_solved(res.solution, res);
            res.policy = extract_policy(mdp, res.solution, C);
            for (int s : dec.mecs[star_mec]) set_uniform(res.policy, s, dec.retained[s]);
            res.notes.push_back("witness " + mdp.state_name(star) + " made stochastic and recurrent");
            break;
        }
    }
    res.objective = res.solution.objective + 0.0;  // no negative zero
    res.achieved_entropy = chain_entropy(induce_chain(mdp, res.policy));
    return res;
}

double min_expected_time(const Mdp& absorbed, std::span<const int> C, double beta,
                         std::span<const int> B, double tol) {
    auto part = reachability_partition(absorbed, B);
    auto inC = mask_of(absorbed.num_states(), C, "min_expected_time");
    double max_reach = max_reach_probability(absorbed, B);
    if (beta > max_reach + 1e-9)
        throw DomainError("beta exceeds the maximal reachability probability " + std::to_string(max_reach));
    ProgramOptions po;
    po.objective = ProgramObjective::MinTime;
    po.beta = std::min(beta, max_reach);
    po.beta_targets.assign(B.begin(), B.end());
    std::vector<int> ts;
    for (int s : part.Sr)
        if (!inC[s]) ts.push_back(s);
    po.time_states = ts;
    auto prog = build_program(absorbed, C, po);
    auto sol = solve_program(prog, tol);
    if (sol.status == SolveStatus::Infeasible) throw DomainError("beta is infeasible");
    if (sol.status != SolveStatus::Optimal)
        throw std::runtime_error(std::string("min-time LP failed: ") + to_string(sol.status));
    return sol.objective;
}

}  // namespace maxent
