#include "tvpl/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tvpl {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string grid_to_json(const Grid& g) {
    nlohmann::json j;
    j["dim"] = g.dim;
    j["extents"] = std::vector<int>(g.cells.begin(), g.cells.begin() + g.dim);
    j["spacing"] = std::vector<double>(g.spacing.begin(), g.spacing.begin() + g.dim);
    j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dim);
    return j.dump(2);
}

Grid grid_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Grid g;
    g.dim = j.at("dim").get<int>();
    auto ext = j.at("extents").get<std::vector<int>>();
    auto sp = j.at("spacing").get<std::vector<double>>();
    auto org = j.at("origin").get<std::vector<double>>();
    for (int a = 0; a < g.dim; ++a) {
        g.cells[a] = ext.at(a);
        g.spacing[a] = sp.at(a);
        g.origin[a] = org.at(a);
    }
    g.validate();
    return g;
}

void write_scalar_csv(const ScalarField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    const Grid& g = u.grid;
    out << (g.dim == 2 ? "x,y,value\n" : "x,value\n");
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int i = 0; i < g.nodes_x(); ++i) {
            out << format_double(g.x(i));
            if (g.dim == 2) out << ',' << format_double(g.y(j));
            out << ',' << format_double(u.at(i, j)) << '\n';
        }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

} // namespace

ScalarField read_scalar_csv(const Grid& g, const std::string& path, BoundaryMode mode) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    ScalarField u(g, 0.0, mode);
    std::string line;
    std::getline(in, line); // header
    long k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split(line, ',');
        if (k >= g.node_count()) throw Error("too many rows in " + path);
        u.values[k++] = std::stod(cols.back());
    }
    if (k != g.node_count()) throw Error("row count does not match grid in " + path);
    return u;
}

void write_vector_csv(const VectorField& z, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    const Grid& g = z.grid;
    out << (g.dim == 2 ? "axis,x,y,value\n" : "axis,x,value\n");
    for (int j = 0; j < g.nodes_y(); ++j)
        for (int e = 0; e < g.cells[0]; ++e) {
            out << 0 << ',' << format_double(g.x(e) + 0.5 * g.spacing[0]);
            if (g.dim == 2) out << ',' << format_double(g.y(j));
            out << ',' << format_double(z.x_at(e, j)) << '\n';
        }
    if (g.dim == 2)
        for (int e = 0; e < g.cells[1]; ++e)
            for (int i = 0; i < g.nodes_x(); ++i)
                out << 1 << ',' << format_double(g.x(i)) << ','
                    << format_double(g.y(e) + 0.5 * g.spacing[1]) << ','
                    << format_double(z.y_at(i, e)) << '\n';
}

VectorField read_vector_csv(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    VectorField z(g);
    std::string line;
    std::getline(in, line);
    std::array<long, 2> k{0, 0};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split(line, ',');
        int axis = std::stoi(cols.front());
        if (axis < 0 || axis >= g.dim) throw Error("bad axis in " + path);
        if (k[axis] >= static_cast<long>(z.comp[axis].size()))
            throw Error("too many rows in " + path);
        z.comp[axis][k[axis]++] = std::stod(cols.back());
    }
    for (int a = 0; a < g.dim; ++a)
        if (k[a] != static_cast<long>(z.comp[a].size()))
            throw Error("edge count does not match grid in " + path);
    return z;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace tvpl
