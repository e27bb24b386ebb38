#include "ibc1d/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ibc {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Dense Hermitian matrix in the symmetrised variables (phi0, sqrt(w) phi1).
MatrixXcd dense_hamiltonian_line(const LatticeModel& m) {
    int n = m.intervals - 1;
    MatrixXcd H = MatrixXcd::Zero(n + 1, n + 1);
    double ih2 = 1.0 / (m.h * m.h);
    for (int j = 0; j < n; ++j) {
        H(1 + j, 1 + j) = 2.0 * ih2;
        if (j + 1 < n) {
            H(1 + j, 2 + j) = -ih2;
            H(2 + j, 1 + j) = -ih2;
        }
    }
    double sqh = std::sqrt(m.h);
    for (size_t s = 0; s < m.source_indices.size(); ++s) {
        int j = m.source_indices[s];
        H(0, 1 + j) = std::conj(m.couplings[s]) / sqh;
        H(1 + j, 0) = m.couplings[s] / sqh;
    }
    return H;
}

struct GraphDofs {
    // dof 0 = vacuum; then one per non-Dirichlet vertex; then edge interiors.
    std::vector<int> vertex_dof; // -1 for Dirichlet
    std::vector<int> edge_first; // first interior dof of each edge
    std::vector<double> edge_h;
    int total = 0;
};

GraphDofs graph_dofs(const LatticeModel& m) {
    const MetricGraph& g = m.graph_model;
    GraphDofs d;
    d.vertex_dof.assign(g.num_vertices, -1);
    int next = 1;
    for (int v = 0; v < g.num_vertices; ++v)
        if (g.bc[v] != VertexBC::dirichlet)
            d.vertex_dof[v] = next++;
    d.edge_first.resize(g.edges.size());
    d.edge_h.resize(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        d.edge_first[e] = next;
        int m_e = m.edge_intervals[e];
        d.edge_h[e] = g.edges[e].length / m_e;
        next += m_e - 1;
    }
    d.total = next;
    return d;
}

// Stiffness + coupling and lumped weights for the graph discretisation.
void graph_operator(const LatticeModel& m, MatrixXcd& K, VectorXd& W) {
    const MetricGraph& g = m.graph_model;
    GraphDofs d = graph_dofs(m);
    K = MatrixXcd::Zero(d.total, d.total);
    W = VectorXd::Zero(d.total);
    W(0) = 1.0;

    for (size_t e = 0; e < g.edges.size(); ++e) {
        int m_e = m.edge_intervals[e];
        double h = d.edge_h[e];
        auto dof = [&](int node) { // node 0..m_e along the edge
            if (node == 0) return d.vertex_dof[g.edges[e].a];
            if (node == m_e) return d.vertex_dof[g.edges[e].b];
            return d.edge_first[e] + node - 1;
        };
        for (int seg = 0; seg < m_e; ++seg) {
            int a = dof(seg), b = dof(seg + 1);
            if (a >= 0) K(a, a) += 1.0 / h;
            if (b >= 0) K(b, b) += 1.0 / h;
            if (a >= 0 && b >= 0) {
                K(a, b) -= 1.0 / h;
                K(b, a) -= 1.0 / h;
            }
        }
        for (int node = 1; node < m_e; ++node)
            W(dof(node)) = h;
        for (int node : {0, m_e}) {
            int dd = dof(node);
            if (dd >= 0)
                W(dd) += 0.5 * h;
        }
    }
    for (int v = 0; v < g.num_vertices; ++v) {
        int dd = d.vertex_dof[v];
        if (dd < 0)
            continue;
        K(0, dd) += std::conj(g.couplings[v]);
        K(dd, 0) += g.couplings[v];
    }
}

MatrixXcd dense_hamiltonian_graph(const LatticeModel& m) {
    MatrixXcd K;
    VectorXd W;
    graph_operator(m, K, W);
    VectorXd inv_sqrt = W.cwiseSqrt().cwiseInverse();
    return inv_sqrt.asDiagonal() * K * inv_sqrt.asDiagonal();
}

// Complex tridiagonal solve (Thomas); diag/off vectors are not modified.
void thomas_solve(const std::vector<cplx>& diag, const cplx off, std::vector<cplx>& x,
                  std::vector<cplx>& scratch) {
    int n = static_cast<int>(diag.size());
    scratch.resize(n);
    cplx d = diag[0];
    x[0] /= d;
    for (int i = 1; i < n; ++i) {
        scratch[i] = off / d;
        d = diag[i] - off * scratch[i];
        x[i] = (x[i] - off * x[i - 1]) / d;
    }
    for (int i = n - 2; i >= 0; --i)
        x[i] -= scratch[i + 1] * x[i + 1];
}

} // namespace

LatticeModel LatticeModel::line(double x_min, double x_max, double h,
                                const std::vector<std::pair<double, cplx>>& sources,
                                Boundary boundary, double cap_start, double cap_strength) {
    if (!(x_max > x_min) || !(h > 0.0))
        throw std::invalid_argument("LatticeModel::line: bad geometry");
    LatticeModel m;
    m.kind = Kind::line;
    m.x_min = x_min;
    m.x_max = x_max;
    m.intervals = static_cast<int>(std::round((x_max - x_min) / h));
    m.h = (x_max - x_min) / m.intervals;
    m.boundary = boundary;
    m.cap_start = cap_start;
    m.cap_strength = cap_strength;
    for (auto& [x, c] : sources) {
        double pos = (x - x_min) / m.h;
        int j = static_cast<int>(std::round(pos)) - 1; // interior index
        if (std::abs(pos - (j + 1)) > 1e-9 * m.intervals)
            throw std::invalid_argument("LatticeModel::line: source not on a grid point");
        if (j < 0 || j >= m.intervals - 1)
            throw std::invalid_argument("LatticeModel::line: source on or outside boundary");
        m.source_indices.push_back(j);
        m.couplings.push_back(c);
    }
    return m;
}

LatticeModel LatticeModel::graph(const MetricGraph& g, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("LatticeModel::graph: h must be positive");
    LatticeModel m;
    m.kind = Kind::graph;
    m.graph_model = g;
    m.h = h;
    for (auto& e : g.edges)
        m.edge_intervals.push_back(std::max(2, static_cast<int>(std::round(e.length / h))));
    return m;
}

int LatticeModel::grid_points() const {
    if (kind == Kind::line)
        return intervals - 1;
    int total = 0;
    for (int v = 0; v < graph_model.num_vertices; ++v)
        if (graph_model.bc[v] != VertexBC::dirichlet)
            ++total;
    for (int me : edge_intervals)
        total += me - 1;
    return total;
}

double LatticeModel::grid_x(int j) const {
    return x_min + (j + 1) * h;
}

double discrete_norm2(const LatticeModel& m, const DiscreteState& s) {
    double acc = 0.0;
    for (auto& v : s.vacuum)
        acc += std::norm(v);
    if (m.kind == LatticeModel::Kind::line) {
        for (auto& z : s.phi1)
            acc += m.h * std::norm(z);
    } else {
        MatrixXcd K;
        VectorXd W;
        graph_operator(m, K, W);
        for (size_t i = 0; i < s.phi1.size(); ++i)
            acc += W(1 + i) * std::norm(s.phi1[i]);
    }
    return acc;
}

DiscreteState vacuum_state(const LatticeModel& m) {
    DiscreteState s;
    s.vacuum = {1.0};
    s.phi1.assign(m.grid_points(), 0.0);
    return s;
}

DiscreteState apply_hamiltonian(const LatticeModel& m, const DiscreteState& s) {
    DiscreteState out;
    out.vacuum = {0.0};
    out.phi1.assign(s.phi1.size(), 0.0);
    if (m.kind == LatticeModel::Kind::line) {
        int n = m.intervals - 1;
        double ih2 = 1.0 / (m.h * m.h);
        for (int j = 0; j < n; ++j) {
            cplx left = j > 0 ? s.phi1[j - 1] : 0.0;
            cplx right = j + 1 < n ? s.phi1[j + 1] : 0.0;
            out.phi1[j] = (2.0 * s.phi1[j] - left - right) * ih2;
        }
        for (size_t k = 0; k < m.source_indices.size(); ++k) {
            int j = m.source_indices[k];
            out.phi1[j] += m.couplings[k] / m.h * s.vacuum[0];
            out.vacuum[0] += std::conj(m.couplings[k]) * s.phi1[j];
        }
    } else {
        MatrixXcd K;
        VectorXd W;
        graph_operator(m, K, W);
        VectorXcd v(K.rows());
        v(0) = s.vacuum[0];
        for (size_t i = 0; i < s.phi1.size(); ++i)
            v(1 + i) = s.phi1[i];
        VectorXcd Hv = K * v;
        out.vacuum[0] = Hv(0) / W(0);
        for (size_t i = 0; i < s.phi1.size(); ++i)
            out.phi1[i] = Hv(1 + i) / W(1 + i);
    }
    return out;
}

namespace {

std::vector<double> dense_spectrum(const MatrixXcd& H, int num_levels) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("lattice_spectrum: eigensolver failed");
    int n = static_cast<int>(solver.eigenvalues().size());
    std::vector<double> out;
    for (int i = 0; i < std::min(num_levels, n); ++i)
        out.push_back(solver.eigenvalues()(i));
    return out;
}

// Inverse iteration on the arrowhead+tridiagonal line Hamiltonian,
// O(N) per step via the vacuum Schur complement.
std::pair<double, DiscreteState> line_ground_inverse_iteration(const LatticeModel& m) {
    int n = m.intervals - 1;
    double ih2 = 1.0 / (m.h * m.h);
    double kap_max = 0.0;
    for (auto& c : m.couplings)
        kap_max = std::max(kap_max, std::cbrt(0.5 * std::norm(c)));
    double sigma = -2.0 * kap_max * kap_max - 1.0;

    std::vector<cplx> diag(n, 2.0 * ih2 - sigma);
    const cplx off = -ih2;
    std::vector<cplx> scratch;

    // u = sum_s (c_s/h) e_s ; precompute T^{-1} u
    std::vector<cplx> Tinv_u(n, 0.0);
    for (size_t s = 0; s < m.source_indices.size(); ++s)
        Tinv_u[m.source_indices[s]] += m.couplings[s] / m.h;
    thomas_solve(diag, off, Tinv_u, scratch);

    auto solve_shifted = [&](const DiscreteState& b, DiscreteState& x) {
        // rows: (-sigma) x0 + sum_s conj(c_s) x1[s] = b0 ; (T x1) + (c_s/h) x0 = b1
        x.phi1 = b.phi1;
        thomas_solve(diag, off, x.phi1, scratch); // T^{-1} b1
        cplx num = b.vacuum[0], den = -sigma;
        for (size_t s = 0; s < m.source_indices.size(); ++s) {
            num -= std::conj(m.couplings[s]) * x.phi1[m.source_indices[s]];
            den -= std::conj(m.couplings[s]) * Tinv_u[m.source_indices[s]];
        }
        cplx x0 = num / den;
        for (int j = 0; j < n; ++j)
            x.phi1[j] -= x0 * Tinv_u[j];
        x.vacuum = {x0};
    };

    DiscreteState x = vacuum_state(m);
    DiscreteState y = x;
    double lambda = sigma;
    for (int it = 0; it < 300; ++it) {
        solve_shifted(x, y);
        double nrm = std::sqrt(discrete_norm2(m, y));
        for (auto& z : y.phi1)
            z /= nrm;
        y.vacuum[0] /= nrm;
        DiscreteState Hy = apply_hamiltonian(m, y);
        cplx ray = std::conj(y.vacuum[0]) * Hy.vacuum[0];
        for (int j = 0; j < n; ++j)
            ray += m.h * std::conj(y.phi1[j]) * Hy.phi1[j];
        lambda = ray.real();
        double resid = 0.0;
        resid += std::norm(Hy.vacuum[0] - lambda * y.vacuum[0]);
        for (int j = 0; j < n; ++j)
            resid += m.h * std::norm(Hy.phi1[j] - lambda * y.phi1[j]);
        x = y;
        if (std::sqrt(resid) < 1e-11 * std::max(1.0, std::abs(lambda)))
            break;
    }
    return {lambda, x};
}

} // namespace

std::vector<double> lattice_spectrum(const LatticeModel& m, int num_levels) {
    if (num_levels < 1)
        throw std::invalid_argument("lattice_spectrum: num_levels must be >= 1");
    int dim = m.grid_points() + 1;
    if (m.kind == LatticeModel::Kind::graph)
        return dense_spectrum(dense_hamiltonian_graph(m), num_levels);
    if (dim <= 3500)
        return dense_spectrum(dense_hamiltonian_line(m), num_levels);
    if (num_levels != 1)
        throw std::invalid_argument(
            "lattice_spectrum: large line grids support the ground level only");
    return {line_ground_inverse_iteration(m).first};
}

std::pair<double, DiscreteState> lattice_ground_state(const LatticeModel& m) {
    if (m.kind != LatticeModel::Kind::line)
        throw std::invalid_argument("lattice_ground_state: line models only");
    return line_ground_inverse_iteration(m);
}

DiscreteState crank_nicolson_evolve(const LatticeModel& m, DiscreteState state,
                                    double t_final, double dt) {
    if (m.kind != LatticeModel::Kind::line)
        throw std::invalid_argument("crank_nicolson_evolve: line models only");
    if (!(dt > 0.0) || !(t_final > 0.0))
        throw std::invalid_argument("crank_nicolson_evolve: dt and t_final must be positive");

    const int n = m.intervals - 1;
    const double ih2 = 1.0 / (m.h * m.h);
    const cplx ia(0.0, 0.5 * dt); // i dt/2
    const int steps = static_cast<int>(std::round(t_final / dt));
    if (std::abs(steps * dt - t_final) > 1e-9 * t_final)
        throw std::invalid_argument("crank_nicolson_evolve: t_final must be a multiple of dt");

    // A = I + i dt/2 (L - i W) on the one-particle block
    std::vector<cplx> diag(n);
    for (int j = 0; j < n; ++j) {
        double x = m.grid_x(j);
        double W = 0.0;
        if (m.boundary == LatticeModel::Boundary::absorbing && std::abs(x) > m.cap_start) {
            double span = std::max(m.x_max, -m.x_min) - m.cap_start;
            double r = (std::abs(x) - m.cap_start) / span;
            W = m.cap_strength * r * r;
        }
        diag[j] = 1.0 + ia * (2.0 * ih2 + cplx(0.0, -W));
    }
    const cplx off = ia * (-ih2);

    const int ns = static_cast<int>(m.source_indices.size());
    std::vector<cplx> scratch;

    // Woodbury data: columns A^{-1} e_s
    std::vector<std::vector<cplx>> Ainv_e(ns, std::vector<cplx>(n, 0.0));
    for (int s = 0; s < ns; ++s) {
        Ainv_e[s][m.source_indices[s]] = 1.0;
        thomas_solve(diag, off, Ainv_e[s], scratch);
    }
    // gamma = -(i dt/2)^2 / h ; correction operator sum_{s,s'} gamma c_s conj(c_s') ...
    const cplx gamma = -(ia * ia) / m.h;
    MatrixXcd M = MatrixXcd::Identity(ns, ns);
    for (int s = 0; s < ns; ++s)
        for (int sp = 0; sp < ns; ++sp)
            M(s, sp) += gamma * m.couplings[s] * std::conj(m.couplings[sp]) *
                        Ainv_e[s][m.source_indices[s]] * 0.0; // filled below
    // M(s, sp) = delta + gamma c_sp_conj ... build properly:
    for (int s = 0; s < ns; ++s)
        for (int sp = 0; sp < ns; ++sp) {
            cplx acc = (s == sp) ? 1.0 : 0.0;
            acc += gamma * std::conj(m.couplings[sp]) * m.couplings[s] *
                   Ainv_e[s][m.source_indices[sp]];
            M(sp, s) = acc;
        }
    Eigen::PartialPivLU<MatrixXcd> M_lu(M);

    std::vector<cplx> rhs(n), work(n);
    for (int step = 0; step < steps; ++step) {
        // r = (I - i dt/2 H) state
        DiscreteState Hs = apply_hamiltonian_capless(m, state, diag, off, ih2);
        (void)Hs;
        break;
    }

    // The loop body is implemented below without the helper stub.
    for (int step = 0; step < steps; ++step) {
        // r1 = (I - ia L + ia i W) phi1 - ia (c/h) phi0 ; r0 = phi0 - ia sum conj(c) phi1(s)
        for (int j = 0; j < n; ++j) {
            cplx lap = 2.0 * state.phi1[j];
            if (j > 0) lap -= state.phi1[j - 1];
            if (j + 1 < n) lap -= state.phi1[j + 1];
            double x = m.grid_x(j);
            double W = 0.0;
            if (m.boundary == LatticeModel::Boundary::absorbing && std::abs(x) > m.cap_start) {
                double span = std::max(m.x_max, -m.x_min) - m.cap_start;
                double r = (std::abs(x) - m.cap_start) / span;
                W = m.cap_strength * r * r;
            }
            rhs[j] = state.phi1[j] - ia * (lap * ih2 + cplx(0.0, -W) * state.phi1[j]);
        }
        cplx r0 = state.vacuum[0];
        for (int s = 0; s < ns; ++s) {
            int j = m.source_indices[s];
            rhs[j] -= ia * m.couplings[s] / m.h * state.vacuum[0];
            r0 -= ia * std::conj(m.couplings[s]) * state.phi1[j];
        }
        // effective rhs for the Woodbury-reduced system
        for (int s = 0; s < ns; ++s) {
            int j = m.source_indices[s];
            rhs[j] -= ia * m.couplings[s] / m.h * 0.0; // phi0 already moved to r0 handling
        }
        // y1 solves (A + sum gamma c_s conj(c_sp) e_s e_sp^T) y1 = rhs - ia (c_s/h) r0 e_s
        for (int s = 0; s < ns; ++s)
            rhs[m.source_indices[s]] -= ia * m.couplings[s] / m.h * r0;

        work = rhs;
        thomas_solve(diag, off, work, scratch); // z0 = A^{-1} rhs
        if (ns > 0) {
            VectorXcd beta(ns);
            for (int sp = 0; sp < ns; ++sp) {
                cplx acc = 0.0;
                for (int s = 0; s < ns; ++s)
                    (void)s;
                beta(sp) = std::conj(m.couplings[sp]) * work[m.source_indices[sp]];
            }
            VectorXcd alpha = M_lu.solve(beta);
            for (int s = 0; s < ns; ++s)
                for (int j = 0; j < n; ++j)
                    work[j] -= gamma * m.couplings[s] * alpha(s) * Ainv_e[s][j];
        }
        // recover phi0
        cplx y0 = r0;
        for (int s = 0; s < ns; ++s)
            y0 -= ia * std::conj(m.couplings[s]) * work[m.source_indices[s]];
        state.phi1 = work;
        state.vacuum[0] = y0;
    }
    return state;
}

} // namespace ibc
