#pragma once

#include "ibc1d/single_source.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace ibc {

enum class VertexBC { ibc, dirichlet };
enum class Variant { shared_vacuum, trapped };

/// Simple metric graph with one coupling per vertex. Vertices with zero
/// coupling carry Kirchhoff conditions (the c -> 0 limit of the vertex IBC)
/// unless flagged Dirichlet (valency-1 vertices only).
struct MetricGraph {
    struct Edge {
        int a, b;
        double length;
    };
    int num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<cplx> couplings;
    std::vector<VertexBC> bc;
    std::vector<std::vector<int>> incident; // edge indices per vertex

    int degree(int v) const { return static_cast<int>(incident[v].size()); }
    bool adjacent(int u, int v) const;
    double longest_edge() const;
};

struct GraphConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

MetricGraph build_graph(const std::vector<std::tuple<int, int, double>>& edge_list,
                        const std::vector<cplx>& couplings,
                        const std::vector<VertexBC>& bc = {});

/// Splits edge `edge_index` at `distance` from its a-end, inserting a new
/// valency-2 vertex carrying `coupling` (how sources on edges are made).
MetricGraph insert_vertex_on_edge(const MetricGraph& g, int edge_index, double distance,
                                  cplx coupling);

/// Row-normalised determinant of the vertex-condition system at energy E != 0
/// (positive E: trigonometric edge basis; negative E: decaying-exponential
/// basis). Zero exactly at the eigenvalues of the chosen variant.
cplx secular_determinant(const MetricGraph& g, double E, Variant variant);

/// Determinant over an energy grid; OpenMP-parallel plus a serial reference.
std::vector<cplx> secular_determinant_grid(const MetricGraph& g, std::span<const double> E,
                                           Variant variant);
std::vector<cplx> secular_determinant_grid_serial(const MetricGraph& g,
                                                  std::span<const double> E,
                                                  Variant variant);

struct GraphSpectrum {
    std::vector<double> energies;
    std::vector<std::string> warnings; // scan-resolution suspicions
};

/// All eigenvalues in [E_min, E_max] located by a sign-change/deep-minimum
/// census of the secular determinant; grid step (pi/l_max)/20 in k, refined
/// until two censuses agree. resolution > 1 tightens the initial grid.
GraphSpectrum graph_spectrum(const MetricGraph& g, double E_min, double E_max,
                             Variant variant, double resolution = 1.0);

/// Eigenstate at an eigenvalue: nullspace vector of the secular system,
/// normalised to unit total weight (vacuum moduli plus edge integrals).
struct GraphState01 {
    double energy;
    Variant variant;
    std::vector<cplx> vacuum;                    // size 1 (shared) or N_v (trapped)
    std::vector<std::array<cplx, 2>> edge_coeffs; // per edge, in the energy basis
    int nullspace_dim = 1;

    double weight_vacuum() const;
};

GraphState01 graph_eigenstate(const MetricGraph& g, double E, Variant variant);

/// phi1 on edge e at coordinate x in [0, length], measured from the a-end.
cplx graph_edge_value(const MetricGraph& g, const GraphState01& s, int edge, double x);

struct GraphResiduals {
    double continuity;
    double ibc;
    double eigen_equation;
};
GraphResiduals graph_state_residuals(const MetricGraph& g, const GraphState01& s,
                                     Variant variant);

/// Parses the plain-text graph description (see tools/ibc1d --help):
///   vertex <id> <c_re> <c_im> [dirichlet|kirchhoff]
///   edge <j> <k> <length>
/// with '#' comments. Throws GraphConfigError with a line number on bad input.
MetricGraph parse_graph_config(std::istream& in);
MetricGraph load_graph_config(const std::string& path);

} // namespace ibc
