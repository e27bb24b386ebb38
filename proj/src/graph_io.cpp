#include "ibc1d/graph.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace ibc {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw GraphConfigError("graph config line " + std::to_string(line) + ": " + what);
}

} // namespace

MetricGraph parse_graph_config(std::istream& in) {
    struct VertexDecl {
        cplx c;
        VertexBC bc;
    };
    std::map<int, VertexDecl> vertices;
    std::vector<std::tuple<int, int, double>> raw_edges;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::string kw;
        if (!(ss >> kw))
            continue;
        if (kw == "vertex") {
            int id;
            double re, im;
            if (!(ss >> id >> re >> im))
                fail(lineno, "expected: vertex <id> <c_re> <c_im> [dirichlet|kirchhoff]");
            VertexBC bc = VertexBC::ibc;
            std::string flag;
            if (ss >> flag) {
                if (flag == "dirichlet")
                    bc = VertexBC::dirichlet;
                else if (flag == "kirchhoff")
                    bc = VertexBC::ibc;
                else
                    fail(lineno, "unknown boundary flag '" + flag + "'");
            }
            if (vertices.count(id))
                fail(lineno, "duplicate vertex id " + std::to_string(id));
            vertices[id] = {cplx(re, im), bc};
        } else if (kw == "edge") {
            int a, b;
            double length;
            if (!(ss >> a >> b >> length))
                fail(lineno, "expected: edge <j> <k> <length>");
            raw_edges.emplace_back(a, b, length);
        } else {
            fail(lineno, "unknown keyword '" + kw + "'");
        }
    }

    for (auto& [a, b, len] : raw_edges) {
        if (!vertices.count(a))
            throw GraphConfigError("edge references undeclared vertex " + std::to_string(a));
        if (!vertices.count(b))
            throw GraphConfigError("edge references undeclared vertex " + std::to_string(b));
        (void)len;
    }
    if (vertices.empty())
        throw GraphConfigError("graph config declares no vertices");

    std::map<int, int> index; // sorted by declared id
    std::vector<cplx> couplings;
    std::vector<VertexBC> bc;
    for (auto& [id, decl] : vertices) {
        index[id] = static_cast<int>(couplings.size());
        couplings.push_back(decl.c);
        bc.push_back(decl.bc);
    }
    std::vector<std::tuple<int, int, double>> edges;
    for (auto& [a, b, len] : raw_edges)
        edges.emplace_back(index[a], index[b], len);

    return build_graph(edges, couplings, bc);
}

MetricGraph load_graph_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw GraphConfigError("cannot open graph config '" + path + "'");
    return parse_graph_config(in);
}

} // namespace ibc
