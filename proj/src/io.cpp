#include "mgraphon/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mgraphon {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

bool data_line(const std::string& line) {
    for (char c : line) {
        if (c == '#') return false;
        if (!std::isspace(static_cast<unsigned char>(c))) return true;
    }
    return false;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// edge lists and covariates
// ---------------------------------------------------------------------------

GraphCollection read_edge_list(const std::string& path, std::optional<int> n_opt,
                               std::optional<int> m_opt) {
    auto in = open_in(path);
    struct Edge {
        int l, i, j;
        double w;
    };
    std::vector<Edge> edges;
    int max_node = 0, max_layer = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!data_line(line)) continue;
        std::istringstream ss(line);
        Edge e;
        if (!(ss >> e.l >> e.i >> e.j >> e.w))
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected `layer i j weight`");
        if (e.l < 1 || e.i < 1 || e.j < 1)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": indices are 1-based and positive");
        if (e.i == e.j)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": self-loops are not allowed");
        if (e.w < 0.0)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": negative edge weight");
        max_node = std::max({max_node, e.i, e.j});
        max_layer = std::max(max_layer, e.l);
        edges.push_back(e);
    }
    const int n = n_opt.value_or(max_node);
    const int m = m_opt.value_or(max_layer);
    if (n < 2 || m < 1) throw std::invalid_argument(path + ": no usable network data");
    if (max_node > n || max_layer > m)
        throw std::invalid_argument(path + ": index exceeds declared n/m");

    GraphCollection g;
    g.n = n;
    g.m = m;
    g.binary = true;
    g.layers.assign(static_cast<std::size_t>(m), Matrix::Zero(n, n));
    for (const auto& e : edges) {
        Matrix& a = g.layers[static_cast<std::size_t>(e.l - 1)];
        if (a(e.i - 1, e.j - 1) != 0.0)
            throw std::invalid_argument(path + ": duplicate pair (" + std::to_string(e.i) + "," +
                                        std::to_string(e.j) + ") in layer " + std::to_string(e.l));
        a(e.i - 1, e.j - 1) = e.w;
        a(e.j - 1, e.i - 1) = e.w;
        if (e.w != 0.0 && e.w != 1.0) g.binary = false;
    }
    return g;
}

void write_edge_list(const GraphCollection& g, const std::string& path) {
    auto out = open_out(path);
    for (int l = 0; l < g.m; ++l) {
        const Matrix& a = g.layer(l);
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (a(i, j) != 0.0)
                    out << l + 1 << '\t' << i + 1 << '\t' << j + 1 << '\t' << fmt_double(a(i, j))
                        << '\n';
    }
}

Vector read_covariates(const std::string& path, int m) {
    auto in = open_in(path);
    Vector v = Vector::Zero(m);
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!data_line(line)) continue;
        std::istringstream ss(line);
        int l;
        double value;
        if (!(ss >> l >> value))
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected `layer value`");
        if (l < 1 || l > m)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": layer index out of range");
        v[l - 1] = value;
        seen[static_cast<std::size_t>(l - 1)] = 1;
    }
    for (int l = 0; l < m; ++l)
        if (!seen[static_cast<std::size_t>(l)])
            throw std::invalid_argument(path + ": missing covariate for layer " +
                                        std::to_string(l + 1));
    return v;
}

void write_covariates(const Vector& values, const std::string& path) {
    auto out = open_out(path);
    for (int l = 0; l < static_cast<int>(values.size()); ++l)
        out << l + 1 << '\t' << fmt_double(values[l]) << '\n';
}

// ---------------------------------------------------------------------------
// matrices, distances, positions
// ---------------------------------------------------------------------------

DistanceMatrix read_distance_matrix(const std::string& path) {
    auto in = open_in(path);
    int n;
    if (!(in >> n) || n < 1) throw std::invalid_argument(path + ": bad n header");
    DistanceMatrix d;
    d.n = n;
    d.D.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(in >> d.D(i, j))) throw std::invalid_argument(path + ": truncated matrix");
    d.split = "external";
    return d;
}

void write_distance_matrix(const DistanceMatrix& d, const std::string& path) {
    auto out = open_out(path);
    out << d.n << '\n';
    for (int i = 0; i < d.n; ++i) {
        for (int j = 0; j < d.n; ++j) out << (j ? "\t" : "") << fmt_double(d.D(i, j));
        out << '\n';
    }
}

Vector read_positions(const std::string& path, std::optional<int> n_opt) {
    auto in = open_in(path);
    std::vector<std::pair<int, double>> rows;
    int max_node = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!data_line(line)) continue;
        std::istringstream ss(line);
        int id;
        double pos;
        if (!(ss >> id >> pos))
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected `node_id position`");
        if (id < 1)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": node ids are 1-based");
        rows.emplace_back(id, pos);
        max_node = std::max(max_node, id);
    }
    const int n = n_opt.value_or(max_node);
    if (n < 1 || static_cast<int>(rows.size()) != n)
        throw std::invalid_argument(path + ": expected exactly one position per node");
    Vector v = Vector::Zero(n);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& [id, pos] : rows) {
        if (id > n) throw std::invalid_argument(path + ": node id exceeds n");
        if (seen[static_cast<std::size_t>(id - 1)])
            throw std::invalid_argument(path + ": duplicate node id " + std::to_string(id));
        seen[static_cast<std::size_t>(id - 1)] = 1;
        v[id - 1] = pos;
    }
    return v;
}

void write_positions(const Vector& positions, const std::string& path) {
    auto out = open_out(path);
    for (int i = 0; i < static_cast<int>(positions.size()); ++i)
        out << i + 1 << '\t' << fmt_double(positions[i]) << '\n';
}

Matrix read_matrix(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!data_line(line)) continue;
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument(path + ": ragged matrix rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument(path + ": empty matrix");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_matrix(const Matrix& m, const std::string& path) {
    auto out = open_out(path);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) out << (j ? "\t" : "") << fmt_double(m(i, j));
        out << '\n';
    }
}

void write_pgm(const Matrix& m, const std::string& path, double vmax) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (vmax <= 0.0) vmax = m.maxCoeff();
    if (vmax <= 0.0) vmax = 1.0;
    out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double t = std::clamp(m(i, j) / vmax, 0.0, 1.0);
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0))));
        }
}

// ---------------------------------------------------------------------------
// configs and specs
// ---------------------------------------------------------------------------

std::map<std::string, std::string> read_flat_config(const std::string& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!data_line(line)) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

GridKernel read_grid_file(const std::string& path) {
    auto in = open_in(path);
    GridKernel g;
    if (!(in >> g.nx >> g.ny >> g.nz))
        throw std::invalid_argument(path + ": expected `nx ny nz` header");
    if (g.nx < 1 || g.ny < 1 || g.nz < 1)
        throw std::invalid_argument("invalid-spec: grid lattice is empty");
    const std::size_t total = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny) *
                              static_cast<std::size_t>(g.nz);
    g.values.resize(total);
    for (std::size_t t = 0; t < total; ++t)
        if (!(in >> g.values[t])) throw std::invalid_argument(path + ": truncated grid values");
    return g;
}

MultiGraphonSpec read_spec_config(const std::string& path) {
    const auto kv = read_flat_config(path);
    const auto kind_it = kv.find("kind");
    if (kind_it == kv.end()) throw std::invalid_argument(path + ": missing kind=");
    const std::string& kind = kind_it->second;
    double beta = 0.0;
    if (const auto it = kv.find("beta"); it != kv.end()) beta = std::stod(it->second);
    if (beta < 0.0) throw std::invalid_argument(path + ": beta must be >= 0");
    if (kind == "f1") return MultiGraphonSpec::f1(beta);
    if (kind == "f2") return MultiGraphonSpec::f2(beta);
    if (kind == "f3") return MultiGraphonSpec::f3(beta);
    if (kind == "grid") {
        const auto it = kv.find("grid");
        if (it == kv.end()) throw std::invalid_argument(path + ": grid kind needs grid=<file>");
        std::filesystem::path gp(it->second);
        if (gp.is_relative()) gp = std::filesystem::path(path).parent_path() / gp;
        return MultiGraphonSpec::from_grid(read_grid_file(gp.string()));
    }
    throw std::invalid_argument(path + ": unknown kind `" + kind + "`");
}

void write_spec_config(const MultiGraphonSpec& spec, const std::string& path,
                       const std::string& grid_path) {
    auto out = open_out(path);
    switch (spec.kind) {
        case GraphonKind::F1: out << "kind=f1\n"; break;
        case GraphonKind::F2: out << "kind=f2\n"; break;
        case GraphonKind::F3: out << "kind=f3\n"; break;
        case GraphonKind::Grid: {
            if (grid_path.empty())
                throw std::invalid_argument("write_spec_config: grid spec needs grid_path");
            out << "kind=grid\n";
            out << "grid=" << grid_path << '\n';
            auto gout = open_out(grid_path);
            const GridKernel& g = *spec.grid;
            gout << g.nx << ' ' << g.ny << ' ' << g.nz << '\n';
            for (std::size_t t = 0; t < g.values.size(); ++t)
                gout << fmt_double(g.values[t]) << ((t + 1) % 8 == 0 ? '\n' : ' ');
            gout << '\n';
            break;
        }
    }
    out << "beta=" << fmt_double(spec.beta) << '\n';
}

std::vector<std::string> write_fit_layers(const FitResult& fit, const std::string& out_dir,
                                          const std::string& prefix) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const std::string manifest_path = (fs::path(out_dir) / (prefix + "_manifest.txt")).string();
    auto manifest = open_out(manifest_path);
    manifest << "# layer_index\tnetpos\tfile\n";
    const int layers = fit.constant_in_layers ? 1 : fit.m;
    for (int l = 0; l < layers; ++l) {
        const std::string name = prefix + "_layer" + std::to_string(l + 1) + ".txt";
        write_matrix(fit.p_hat_layer(l), (fs::path(out_dir) / name).string());
        const double np = fit.netpos.size() == fit.m ? fit.netpos[l] : 0.0;
        manifest << l + 1 << '\t' << fmt_double(np) << '\t' << name << '\n';
        written.push_back((fs::path(out_dir) / name).string());
    }
    written.push_back(manifest_path);
    return written;
}

}  // namespace mgraphon
