#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mgraphon/io.hpp"
#include "mgraphon/rng.hpp"

using namespace mgraphon;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "mgraphon_io_test";
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("edge list: round trip preserves the collection") {
    const auto res = sample(MultiGraphonSpec::f2(0.5), 9, 5, 0.7, 0.0, SamplingMode::Dynamic, 12);
    const auto path = work_dir() / "net.tsv";
    write_edge_list(res.graphs, path.string());
    const auto back = read_edge_list(path.string());
    REQUIRE(back.n == 9);
    REQUIRE(back.m == 5);
    CHECK(back.binary);
    for (int l = 0; l < 5; ++l) CHECK(back.layer(l) == res.graphs.layer(l));
}

TEST_CASE("edge list: explicit n/m keep isolated nodes and empty layers") {
    const auto path = work_dir() / "small.tsv";
    write_text(path, "1 1 2 1\n2 2 3 2.5\n");
    const auto g = read_edge_list(path.string(), 6, 4);
    CHECK(g.n == 6);
    CHECK(g.m == 4);
    CHECK_FALSE(g.binary);
    CHECK(g.layer(0)(0, 1) == 1.0);
    CHECK(g.layer(1)(1, 2) == 2.5);
    CHECK(g.layer(3).sum() == 0.0);
}

TEST_CASE("edge list: validation failures") {
    const auto dir = work_dir();
    write_text(dir / "selfloop.tsv", "1 2 2 1\n");
    CHECK_THROWS_AS(read_edge_list((dir / "selfloop.tsv").string()), std::invalid_argument);
    write_text(dir / "dup.tsv", "1 1 2 1\n1 2 1 1\n");
    CHECK_THROWS_AS(read_edge_list((dir / "dup.tsv").string()), std::invalid_argument);
    write_text(dir / "zero.tsv", "0 1 2 1\n");
    CHECK_THROWS_AS(read_edge_list((dir / "zero.tsv").string()), std::invalid_argument);
    write_text(dir / "neg.tsv", "1 1 2 -3\n");
    CHECK_THROWS_AS(read_edge_list((dir / "neg.tsv").string()), std::invalid_argument);
    write_text(dir / "overn.tsv", "1 1 9 1\n");
    CHECK_THROWS_AS(read_edge_list((dir / "overn.tsv").string(), 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(read_edge_list((dir / "missing_file.tsv").string()), std::runtime_error);
}

TEST_CASE("covariates: round trip and missing-layer detection") {
    Vector v(4);
    v << 0.2, -0.3, 1.4, 0.9;
    const auto path = work_dir() / "cov.tsv";
    write_covariates(v, path.string());
    CHECK(read_covariates(path.string(), 4) == v);
    write_text(path, "1 0.5\n3 0.7\n");
    CHECK_THROWS_AS(read_covariates(path.string(), 3), std::invalid_argument);
}

TEST_CASE("distance matrix and positions: round trip") {
    RngStream r(5, "d");
    DistanceMatrix d;
    d.n = 6;
    d.D = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) d.D(i, j) = d.D(j, i) = r.uniform();
    const auto dpath = work_dir() / "dist.tsv";
    write_distance_matrix(d, dpath.string());
    const auto dback = read_distance_matrix(dpath.string());
    CHECK(dback.n == 6);
    CHECK((dback.D - d.D).cwiseAbs().maxCoeff() <= 1e-12);

    Vector pos(5);
    pos << 0.1, 0.9, 0.4, 0.6, 0.2;
    const auto ppath = work_dir() / "pos.tsv";
    write_positions(pos, ppath.string());
    CHECK((read_positions(ppath.string()) - pos).cwiseAbs().maxCoeff() <= 1e-12);
    write_text(ppath, "1 0.5\n1 0.7\n");
    CHECK_THROWS_AS(read_positions(ppath.string()), std::invalid_argument);
}

TEST_CASE("spec config: built-in and grid round trips") {
    const auto dir = work_dir();
    write_spec_config(MultiGraphonSpec::f2(0.5), (dir / "spec_f2.cfg").string());
    const auto f2 = read_spec_config((dir / "spec_f2.cfg").string());
    CHECK(f2.kind == GraphonKind::F2);
    CHECK(f2.beta == 0.5);

    GridKernel g;
    g.nx = g.ny = 3;
    g.nz = 2;
    g.values.resize(18);
    RngStream r(9, "grid");
    for (auto& v : g.values) v = r.uniform();
    const auto spec = MultiGraphonSpec::from_grid(g);
    write_spec_config(spec, (dir / "spec_grid.cfg").string(), (dir / "grid_values.txt").string());
    const auto back = read_spec_config((dir / "spec_grid.cfg").string());
    REQUIRE(back.kind == GraphonKind::Grid);
    for (double x : {0.0, 0.3, 0.8})
        for (double y : {0.1, 0.9})
            for (double z : {0.0, 0.5, 1.0})
                CHECK(evaluate(back, x, y, z) == doctest::Approx(evaluate(spec, x, y, z)).epsilon(1e-12));

    write_text(dir / "bad.cfg", "kind=f9\n");
    CHECK_THROWS_AS(read_spec_config((dir / "bad.cfg").string()), std::invalid_argument);
    write_text(dir / "nobeta.cfg", "kind=f1\nbeta=-1\n");
    CHECK_THROWS_AS(read_spec_config((dir / "nobeta.cfg").string()), std::invalid_argument);
}

TEST_CASE("flat config: parsing, comments, whitespace") {
    const auto path = work_dir() / "flat.cfg";
    write_text(path, "# comment\nalpha=1\n beta = two words \n\nkey=\n");
    const auto kv = read_flat_config(path.string());
    CHECK(kv.at("alpha") == "1");
    CHECK(kv.at("beta") == "two words");
    CHECK(kv.at("key").empty());
    write_text(path, "no_equals_here\n");
    CHECK_THROWS_AS(read_flat_config(path.string()), std::invalid_argument);
}

TEST_CASE("matrix file: round trip and ragged detection") {
    Matrix m(2, 3);
    m << 1.5, -2.25, 0.0, 4.0, 5.5, 6.125;
    const auto path = work_dir() / "mat.tsv";
    write_matrix(m, path.string());
    CHECK((read_matrix(path.string()) - m).cwiseAbs().maxCoeff() == 0.0);
    write_text(path, "1 2 3\n4 5\n");
    CHECK_THROWS_AS(read_matrix(path.string()), std::invalid_argument);
}

TEST_CASE("pgm: header and payload bytes") {
    Matrix m(2, 2);
    m << 0.0, 0.5, 1.0, 0.25;
    const auto path = work_dir() / "img.pgm";
    write_pgm(m, path.string(), 1.0);
    std::ifstream in(path, std::ios::binary);
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    CHECK(data.rfind("P5\n2 2\n255\n", 0) == 0);
    const auto payload = data.substr(data.size() - 4);
    CHECK(static_cast<unsigned char>(payload[0]) == 0);
    CHECK(static_cast<unsigned char>(payload[1]) == 128);
    CHECK(static_cast<unsigned char>(payload[2]) == 255);
    CHECK(static_cast<unsigned char>(payload[3]) == 64);
}

TEST_CASE("fit layers: per-layer files plus manifest") {
    FitResult fit;
    fit.kind = FitKind::Standard;
    fit.n = 3;
    fit.m = 2;
    fit.rho_hat = 0.5;
    fit.netpos = Vector(2);
    fit.netpos << 0.25, 0.75;
    fit.P_layers.assign(2, Matrix::Zero(3, 3));
    fit.P_layers[0](0, 1) = fit.P_layers[0](1, 0) = 0.5;
    fit.P_layers[1](1, 2) = fit.P_layers[1](2, 1) = 0.25;
    const auto dir = (work_dir() / "fit_out").string();
    const auto files = write_fit_layers(fit, dir, "phat");
    REQUIRE(files.size() == 3);
    const Matrix l2 = read_matrix(files[1]);
    CHECK(l2(1, 2) == 0.25);
    std::ifstream manifest(files[2]);
    std::string text{std::istreambuf_iterator<char>(manifest), std::istreambuf_iterator<char>()};
    CHECK(text.find("1\t0.25\tphat_layer1.txt") != std::string::npos);
    CHECK(text.find("2\t0.75\tphat_layer2.txt") != std::string::npos);
}
