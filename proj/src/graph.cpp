#include "ibc1d/graph.hpp"

#include "ibc1d/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace ibc {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Edge endpoint data in the energy basis: value and outgoing derivative at
// one end as linear forms in the coefficients (p, q).
struct EndForms {
    cplx val_p, val_q;
    cplx der_p, der_q;
};

// Positive energy: phi(x) = p cos(kx) + q sin(kx).
// Negative energy: phi(x) = p e^{-kappa x} + q e^{-kappa (l - x)}.
EndForms end_forms(double E, double length, bool at_a) {
    EndForms f;
    if (E > 0.0) {
        double k = std::sqrt(E);
        if (at_a) {
            f.val_p = 1.0; f.val_q = 0.0;
            f.der_p = 0.0; f.der_q = k;
        } else {
            double c = std::cos(k * length), s = std::sin(k * length);
            f.val_p = c; f.val_q = s;
            f.der_p = k * s; f.der_q = -k * c;
        }
    } else {
        double kap = std::sqrt(-E);
        double g = std::exp(-kap * length);
        if (at_a) {
            f.val_p = 1.0; f.val_q = g;
            f.der_p = -kap; f.der_q = kap * g;
        } else {
            f.val_p = g; f.val_q = 1.0;
            f.der_p = kap * g; f.der_q = -kap;
        }
    }
    return f;
}

int system_dim(const MetricGraph& g, Variant variant) {
    int ne = static_cast<int>(g.edges.size());
    return 2 * ne + (variant == Variant::shared_vacuum ? 1 : g.num_vertices);
}

MatrixXcd assemble(const MetricGraph& g, double E, Variant variant) {
    if (E == 0.0)
        throw std::invalid_argument("secular system: E = 0 excluded");
    int ne = static_cast<int>(g.edges.size());
    int dim = system_dim(g, variant);
    int vac0 = 2 * ne;
    auto vac_index = [&](int v) {
        return variant == Variant::shared_vacuum ? vac0 : vac0 + v;
    };

    MatrixXcd A = MatrixXcd::Zero(dim, dim);
    int row = 0;

    for (int v = 0; v < g.num_vertices; ++v) {
        const auto& inc = g.incident[v];
        // per-edge endpoint forms at this vertex
        std::vector<EndForms> forms(inc.size());
        for (size_t i = 0; i < inc.size(); ++i) {
            const auto& e = g.edges[inc[i]];
            forms[i] = end_forms(E, e.length, e.a == v);
        }
        if (g.bc[v] == VertexBC::dirichlet) {
            A(row, 2 * inc[0]) = forms[0].val_p;
            A(row, 2 * inc[0] + 1) = forms[0].val_q;
            ++row;
            continue;
        }
        for (size_t i = 1; i < inc.size(); ++i) {
            A(row, 2 * inc[i]) = forms[i].val_p;
            A(row, 2 * inc[i] + 1) = forms[i].val_q;
            A(row, 2 * inc[0]) -= forms[0].val_p;
            A(row, 2 * inc[0] + 1) -= forms[0].val_q;
            ++row;
        }
        for (size_t i = 0; i < inc.size(); ++i) {
            A(row, 2 * inc[i]) += forms[i].der_p;
            A(row, 2 * inc[i] + 1) += forms[i].der_q;
        }
        A(row, vac_index(v)) = -g.couplings[v];
        ++row;
    }

    // zero-sector eigenvalue rows
    if (variant == Variant::shared_vacuum) {
        for (int v = 0; v < g.num_vertices; ++v) {
            if (g.bc[v] == VertexBC::dirichlet)
                continue; // value pinned to zero
            int e0 = g.incident[v][0];
            EndForms f = end_forms(E, g.edges[e0].length, g.edges[e0].a == v);
            A(row, 2 * e0) += std::conj(g.couplings[v]) * f.val_p;
            A(row, 2 * e0 + 1) += std::conj(g.couplings[v]) * f.val_q;
        }
        A(row, vac0) = -E;
        ++row;
    } else {
        for (int v = 0; v < g.num_vertices; ++v) {
            if (g.bc[v] != VertexBC::dirichlet) {
                int e0 = g.incident[v][0];
                EndForms f = end_forms(E, g.edges[e0].length, g.edges[e0].a == v);
                A(row, 2 * e0) = std::conj(g.couplings[v]) * f.val_p;
                A(row, 2 * e0 + 1) = std::conj(g.couplings[v]) * f.val_q;
            }
            A(row, vac_index(v)) = -E;
            ++row;
        }
    }
    return A;
}

void normalize_rows(MatrixXcd& A) {
    for (int r = 0; r < A.rows(); ++r) {
        double n = A.row(r).norm();
        if (n > 0.0)
            A.row(r) /= n;
    }
}

double sigma_ratio(const MatrixXcd& A) {
    Eigen::JacobiSVD<MatrixXcd> svd(A);
    const auto& s = svd.singularValues();
    double smax = s(0);
    return smax > 0.0 ? s(s.size() - 1) / smax : 0.0;
}

} // namespace

bool MetricGraph::adjacent(int u, int v) const {
    for (const auto& e : edges)
        if ((e.a == u && e.b == v) || (e.a == v && e.b == u))
            return true;
    return false;
}

double MetricGraph::longest_edge() const {
    double m = 0.0;
    for (const auto& e : edges)
        m = std::max(m, e.length);
    return m;
}

MetricGraph build_graph(const std::vector<std::tuple<int, int, double>>& edge_list,
                        const std::vector<cplx>& couplings,
                        const std::vector<VertexBC>& bc) {
    MetricGraph g;
    g.num_vertices = static_cast<int>(couplings.size());
    g.couplings = couplings;
    g.bc = bc.empty() ? std::vector<VertexBC>(g.num_vertices, VertexBC::ibc) : bc;
    if (static_cast<int>(g.bc.size()) != g.num_vertices)
        throw GraphConfigError("build_graph: bc list size mismatch");
    g.incident.resize(g.num_vertices);

    for (auto& [a, b, length] : edge_list) {
        if (a < 0 || b < 0 || a >= g.num_vertices || b >= g.num_vertices)
            throw GraphConfigError("build_graph: edge endpoint out of range");
        if (a == b)
            throw GraphConfigError("build_graph: loops not allowed (simple graph)");
        if (!(length > 0.0))
            throw GraphConfigError("build_graph: edge length must be positive");
        if (g.adjacent(a, b))
            throw GraphConfigError("build_graph: duplicate edge (simple graph)");
        int idx = static_cast<int>(g.edges.size());
        g.edges.push_back({a, b, length});
        g.incident[a].push_back(idx);
        g.incident[b].push_back(idx);
    }

    for (int v = 0; v < g.num_vertices; ++v) {
        if (g.incident[v].empty())
            throw GraphConfigError("build_graph: isolated vertex");
        if (g.bc[v] == VertexBC::dirichlet) {
            if (g.degree(v) != 1 || std::norm(g.couplings[v]) != 0.0)
                throw GraphConfigError(
                    "build_graph: Dirichlet flag requires valency 1 and zero coupling");
        }
    }
    return g;
}

MetricGraph insert_vertex_on_edge(const MetricGraph& g, int edge_index, double distance,
                                  cplx coupling) {
    if (edge_index < 0 || edge_index >= static_cast<int>(g.edges.size()))
        throw GraphConfigError("insert_vertex_on_edge: bad edge index");
    const auto& e = g.edges[edge_index];
    if (!(distance > 0.0) || !(distance < e.length))
        throw GraphConfigError("insert_vertex_on_edge: distance outside edge");

    std::vector<std::tuple<int, int, double>> edge_list;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
        if (i != edge_index)
            edge_list.emplace_back(g.edges[i].a, g.edges[i].b, g.edges[i].length);
    int m = g.num_vertices;
    edge_list.emplace_back(e.a, m, distance);
    edge_list.emplace_back(m, e.b, e.length - distance);

    auto couplings = g.couplings;
    couplings.push_back(coupling);
    auto bc = g.bc;
    bc.push_back(VertexBC::ibc);
    return build_graph(edge_list, couplings, bc);
}

cplx secular_determinant(const MetricGraph& g, double E, Variant variant) {
    MatrixXcd A = assemble(g, E, variant);
    normalize_rows(A);
    return Eigen::PartialPivLU<MatrixXcd>(A).determinant();
}

std::vector<cplx> secular_determinant_grid_serial(const MetricGraph& g,
                                                  std::span<const double> E,
                                                  Variant variant) {
    std::vector<cplx> out(E.size());
    for (size_t i = 0; i < E.size(); ++i)
        out[i] = secular_determinant(g, E[i], variant);
    return out;
}

std::vector<cplx> secular_determinant_grid(const MetricGraph& g, std::span<const double> E,
                                           Variant variant) {
    std::vector<cplx> out(E.size());
    parallel_for(static_cast<std::ptrdiff_t>(E.size()),
                 [&](std::ptrdiff_t i) { out[i] = secular_determinant(g, E[i], variant); });
    return out;
}

namespace {

bool couplings_real(const MetricGraph& g) {
    for (auto& c : g.couplings)
        if (c.imag() != 0.0)
            return false;
    return true;
}

// One census pass over a parameter grid (k for E>0, kappa for E<0).
// Returns accepted roots in the grid parameter.
std::vector<double> census_roots(const MetricGraph& g, Variant variant, bool positive,
                                 double p_lo, double p_hi, int n) {
    std::vector<double> grid(n + 1);
    std::vector<double> energies(n + 1);
    for (int i = 0; i <= n; ++i) {
        grid[i] = p_lo + (p_hi - p_lo) * (static_cast<double>(i) / n);
        energies[i] = positive ? grid[i] * grid[i] : -grid[i] * grid[i];
    }
    auto dets = secular_determinant_grid(g, energies, variant);

    bool real_case = couplings_real(g);
    auto det_at = [&](double p) {
        return secular_determinant(g, positive ? p * p : -p * p, variant);
    };

    std::vector<double> roots;
    double med = 0.0;
    {
        std::vector<double> mags(dets.size());
        for (size_t i = 0; i < dets.size(); ++i)
            mags[i] = std::abs(dets[i]);
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
        med = std::max(mags[mags.size() / 2], 1e-300);
    }

    auto refine_dip = [&](double a, double b) {
        // golden-section on |det|
        const double phi = 0.6180339887498949;
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = std::abs(det_at(x1)), f2 = std::abs(det_at(x2));
        for (int it = 0; it < 80 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
            if (f1 < f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - phi * (b - a);
                f1 = std::abs(det_at(x1));
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + phi * (b - a);
                f2 = std::abs(det_at(x2));
            }
        }
        return 0.5 * (a + b);
    };

    for (int i = 0; i + 1 <= n; ++i) {
        if (real_case) {
            double f0 = dets[i].real(), f1 = dets[i + 1].real();
            if (f0 == 0.0) continue;
            if (f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
                auto fr = [&](double p) { return det_at(p).real(); };
                double lo = grid[i], hi = grid[i + 1], flo = f0;
                for (int it = 0; it < 100; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    double fm = fr(mid);
                    if (fm == 0.0) { lo = hi = mid; break; }
                    if (std::signbit(fm) == std::signbit(flo)) { lo = mid; flo = fm; }
                    else hi = mid;
                }
                roots.push_back(0.5 * (lo + hi));
                continue;
            }
        }
        // deep local minimum without sign change (even-multiplicity roots)
        if (i >= 1) {
            double m0 = std::abs(dets[i - 1]), m1 = std::abs(dets[i]), m2 = std::abs(dets[i + 1]);
            if (m1 < m0 && m1 < m2 && m1 < 1e-3 * med) {
                double p = refine_dip(grid[i - 1], grid[i + 1]);
                MatrixXcd A = assemble(g, positive ? p * p : -p * p, variant);
                normalize_rows(A);
                if (sigma_ratio(A) < 1e-8)
                    roots.push_back(p);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    // dedupe (sign-change root may coincide with a dip candidate)
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > 1e-7 * std::max(1.0, r))
            unique.push_back(r);
    return unique;
}

bool roots_match(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-6 * std::max(1.0, std::abs(a[i])))
            return false;
    return true;
}

} // namespace

GraphSpectrum graph_spectrum(const MetricGraph& g, double E_min, double E_max,
                             Variant variant, double resolution) {
    if (!(E_min < E_max))
        throw std::invalid_argument("graph_spectrum: need E_min < E_max");
    GraphSpectrum out;
    double step = (M_PI / g.longest_edge()) / (20.0 * resolution);

    auto scan_branch = [&](bool positive, double p_lo, double p_hi) {
        if (!(p_hi > p_lo))
            return std::vector<double>{};
        int n = std::max(8, static_cast<int>(std::ceil((p_hi - p_lo) / step)));
        auto roots = census_roots(g, variant, positive, p_lo, p_hi, n);
        bool stable = false;
        for (int pass = 0; pass < 5; ++pass) {
            n *= 2;
            auto refined = census_roots(g, variant, positive, p_lo, p_hi, n);
            if (roots_match(roots, refined)) {
                roots = refined;
                stable = true;
                break;
            }
            roots = refined;
        }
        if (!stable)
            out.warnings.push_back("scan-resolution: censuses did not stabilise; "
                                   "roots closer than the grid step are possible");
        return roots;
    };

    if (E_min < 0.0) {
        double kap_hi = std::sqrt(-E_min);
        double kap_lo = E_max < 0.0 ? std::sqrt(-E_max) : 1e-6;
        for (double p : scan_branch(false, kap_lo, kap_hi))
            out.energies.push_back(-p * p);
    }
    if (E_max > 0.0) {
        double k_lo = E_min > 0.0 ? std::sqrt(E_min) : 1e-6;
        double k_hi = std::sqrt(E_max);
        for (double p : scan_branch(true, k_lo, k_hi))
            out.energies.push_back(p * p);
    }
    std::sort(out.energies.begin(), out.energies.end());
    return out;
}

double GraphState01::weight_vacuum() const {
    double w = 0.0;
    for (auto& v : vacuum)
        w += std::norm(v);
    return w;
}

GraphState01 graph_eigenstate(const MetricGraph& g, double E, Variant variant) {
    MatrixXcd A = assemble(g, E, variant);
    normalize_rows(A);
    Eigen::JacobiSVD<MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s(0);
    if (!(s(s.size() - 1) < 1e-8 * smax))
        throw std::invalid_argument("graph_eigenstate: E is not an eigenvalue");

    int dim = static_cast<int>(s.size());
    int null_dim = 0;
    for (int i = dim - 1; i >= 0 && s(i) < 1e-10 * smax; --i)
        ++null_dim;
    null_dim = std::max(null_dim, 1);

    VectorXcd v = svd.matrixV().col(dim - 1);

    GraphState01 st;
    st.energy = E;
    st.variant = variant;
    st.nullspace_dim = null_dim;
    int ne = static_cast<int>(g.edges.size());
    st.edge_coeffs.resize(ne);
    for (int e = 0; e < ne; ++e)
        st.edge_coeffs[e] = {v(2 * e), v(2 * e + 1)};
    int nv = variant == Variant::shared_vacuum ? 1 : g.num_vertices;
    st.vacuum.resize(nv);
    for (int i = 0; i < nv; ++i)
        st.vacuum[i] = v(2 * ne + i);

    // total weight: vacuum moduli plus closed-form edge integrals
    double w = st.weight_vacuum();
    for (int e = 0; e < ne; ++e) {
        cplx p = st.edge_coeffs[e][0], q = st.edge_coeffs[e][1];
        double L = g.edges[e].length;
        if (E > 0.0) {
            double k = std::sqrt(E);
            double s2 = std::sin(2.0 * k * L), c2 = std::cos(2.0 * k * L);
            w += std::norm(p) * (0.5 * L + s2 / (4.0 * k)) +
                 std::norm(q) * (0.5 * L - s2 / (4.0 * k)) +
                 2.0 * std::real(std::conj(p) * q) * (1.0 - c2) / (4.0 * k);
        } else {
            double kap = std::sqrt(-E);
            double gL = std::exp(-kap * L);
            w += (std::norm(p) + std::norm(q)) * (1.0 - gL * gL) / (2.0 * kap) +
                 2.0 * std::real(std::conj(p) * q) * L * gL;
        }
    }
    double scale = 1.0 / std::sqrt(w);

    // deterministic phase: largest component real positive
    cplx pivot = 0.0;
    double best = -1.0;
    for (int i = 0; i < dim; ++i)
        if (std::abs(v(i)) > best) {
            best = std::abs(v(i));
            pivot = v(i);
        }
    cplx rot = std::conj(pivot) / std::abs(pivot);

    for (auto& pc : st.edge_coeffs) {
        pc[0] *= rot * scale;
        pc[1] *= rot * scale;
    }
    for (auto& vc : st.vacuum)
        vc *= rot * scale;
    return st;
}

cplx graph_edge_value(const MetricGraph& g, const GraphState01& s, int edge, double x) {
    cplx p = s.edge_coeffs[edge][0], q = s.edge_coeffs[edge][1];
    double L = g.edges[edge].length;
    if (s.energy > 0.0) {
        double k = std::sqrt(s.energy);
        return p * std::cos(k * x) + q * std::sin(k * x);
    }
    double kap = std::sqrt(-s.energy);
    return p * std::exp(-kap * x) + q * std::exp(-kap * (L - x));
}

GraphResiduals graph_state_residuals(const MetricGraph& g, const GraphState01& s,
                                     Variant variant) {
    double E = s.energy;
    GraphResiduals r{0.0, 0.0, 0.0};
    auto val_at = [&](int e, int v) {
        const auto& ed = g.edges[e];
        return graph_edge_value(g, s, e, ed.a == v ? 0.0 : ed.length);
    };
    auto der_at = [&](int e, int v) {
        const auto& ed = g.edges[e];
        EndForms f = end_forms(E, ed.length, ed.a == v);
        return f.der_p * s.edge_coeffs[e][0] + f.der_q * s.edge_coeffs[e][1];
    };

    cplx shared_sum = 0.0;
    for (int v = 0; v < g.num_vertices; ++v) {
        const auto& inc = g.incident[v];
        if (g.bc[v] == VertexBC::dirichlet) {
            r.continuity = std::max(r.continuity, std::abs(val_at(inc[0], v)));
            continue;
        }
        cplx v0 = val_at(inc[0], v);
        for (size_t i = 1; i < inc.size(); ++i)
            r.continuity = std::max(r.continuity, std::abs(val_at(inc[i], v) - v0));
        cplx dsum = 0.0;
        for (int e : inc)
            dsum += der_at(e, v);
        cplx vac = variant == Variant::shared_vacuum ? s.vacuum[0] : s.vacuum[v];
        r.ibc = std::max(r.ibc, std::abs(dsum - g.couplings[v] * vac));
        if (variant == Variant::shared_vacuum)
            shared_sum += std::conj(g.couplings[v]) * v0;
        else
            r.eigen_equation = std::max(
                r.eigen_equation, std::abs(std::conj(g.couplings[v]) * v0 - E * s.vacuum[v]));
    }
    if (variant == Variant::shared_vacuum)
        r.eigen_equation = std::abs(shared_sum - E * s.vacuum[0]);
    return r;
}

} // namespace ibc
