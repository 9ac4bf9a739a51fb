#pragma once

#include <map>
#include <optional>
#include <string>

#include "mgraphon/distance.hpp"
#include "mgraphon/model.hpp"
#include "mgraphon/smoother.hpp"

namespace mgraphon {

// Network data: one whitespace/tab-delimited line per edge with columns
// (layer, i, j, weight), all 1-indexed, each undirected pair listed once.
// n and m default to the largest observed index; pass them to keep isolated
// nodes or empty trailing layers.
GraphCollection read_edge_list(const std::string& path, std::optional<int> n = {},
                               std::optional<int> m = {});
void write_edge_list(const GraphCollection& g, const std::string& path);

// Covariates: one line per layer, columns (layer, value), 1-indexed layers.
Vector read_covariates(const std::string& path, int m);
void write_covariates(const Vector& values, const std::string& path);

// Dense whitespace-delimited distance matrix with an `n` header line.
DistanceMatrix read_distance_matrix(const std::string& path);
void write_distance_matrix(const DistanceMatrix& d, const std::string& path);

// Two-column (node_id, position) text, 1-indexed nodes.
Vector read_positions(const std::string& path, std::optional<int> n = {});
void write_positions(const Vector& positions, const std::string& path);

// Flat key=value config files ('#' starts a comment line).
std::map<std::string, std::string> read_flat_config(const std::string& path);

// Multi-graphon spec config: kind=f1|f2|f3|grid, beta=<real>, grid=<file>.
// The grid file is whitespace-delimited values with a 3-integer header
// (nx, ny, nz); values are laid out x fastest, then y, then z.
MultiGraphonSpec read_spec_config(const std::string& path);
void write_spec_config(const MultiGraphonSpec& spec, const std::string& path,
                       const std::string& grid_path = "");
GridKernel read_grid_file(const std::string& path);

// Bare dense matrix (row per line).
Matrix read_matrix(const std::string& path);
void write_matrix(const Matrix& m, const std::string& path);

// Binary 8-bit PGM, scaled so vmax maps to white; vmax <= 0 uses the matrix max.
void write_pgm(const Matrix& m, const std::string& path, double vmax = 0.0);

// Per-layer estimate files <prefix>_layer<l>.txt plus a manifest listing
// (layer index, netpos value, filename).
std::vector<std::string> write_fit_layers(const FitResult& fit, const std::string& out_dir,
                                          const std::string& prefix);

}  // namespace mgraphon
