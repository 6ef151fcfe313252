#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "corrfit/bundle_io.hpp"
#include "corrfit/fixtures.hpp"
#include "corrfit/optimizer.hpp"
#include "test_support.hpp"

using namespace corrfit;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;

    explicit TempFile(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("corrfit_io_test_" + tag + "_" + std::to_string(counter++) + ".txt");
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }

    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

} // namespace

TEST_CASE("read_bundle parses a commented single matrix") {
    TempFile file("single");
    file.write(
        "# nearest-correlation test input\n"
        " 1.0000  0.1849 -0.2867 -0.2997\n"
        " 0.1849  1.0000  0.2851  0.2582\n"
        "-0.2867  0.2851  1.0000 -0.3100\n"
        "-0.2997  0.2582 -0.3100  1.0000\n");
    const auto matrices = read_bundle(file.path);
    REQUIRE(matrices.size() == 1);
    CHECK(matrices.front()(0, 1) == 0.1849);
    CHECK(matrices.front()(2, 3) == -0.3100);
}

TEST_CASE("read_bundle splits blocks on blank lines and accepts commas") {
    TempFile file("blocks");
    file.write("1, 0\n0, 1\n\n\n1 0\n0 1\n");
    const auto matrices = read_bundle(file.path);
    REQUIRE(matrices.size() == 2);
    CHECK(matrices[0] == Matrix::Identity(2, 2));
    CHECK(matrices[1] == Matrix::Identity(2, 2));
}

TEST_CASE("read_bundle rejects a non-square block") {
    TempFile file("nonsquare");
    file.write("1 0 0\n0 1 0\n");
    CHECK_THROWS_AS(read_bundle(file.path), ParseError);
    try {
        read_bundle(file.path);
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("square") != std::string::npos);
    }
}

TEST_CASE("read_bundle reports ragged rows with their line number") {
    TempFile file("ragged");
    file.write("1 0\n0 1 0.5\n");
    try {
        read_bundle(file.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("read_bundle rejects non-numeric tokens") {
    TempFile file("token");
    file.write("1 0\nx 1\n");
    try {
        read_bundle(file.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
}

TEST_CASE("read_bundle rejects mixed block dimensions") {
    TempFile file("mixed");
    file.write("1 0\n0 1\n\n1\n");
    CHECK_THROWS_AS(read_bundle(file.path), ParseError);
}

TEST_CASE("empty and comment-only files are rejected") {
    TempFile empty("empty");
    empty.write("");
    CHECK_THROWS_AS(read_bundle(empty.path), EmptyFile);

    TempFile comments("comments");
    comments.write("# nothing here\n\n# still nothing\n");
    CHECK_THROWS_AS(read_bundle(comments.path), EmptyFile);
}

TEST_CASE("missing files raise IoError") {
    CHECK_THROWS_AS(read_bundle(fs::temp_directory_path() / "corrfit_does_not_exist.txt"),
                    IoError);
}

TEST_CASE("read_matrix accepts one rectangular block only") {
    TempFile file("angles");
    file.write("0.1 0.2\n0.3 0.4\n0.5 0.6\n");
    const Matrix m = read_matrix(file.path);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
    CHECK(m(2, 1) == 0.6);

    TempFile two("two_blocks");
    two.write("1\n\n2\n");
    CHECK_THROWS_AS(read_matrix(two.path), ParseError);
}

TEST_CASE("write then read is lossless at 16 significant digits") {
    std::mt19937_64 rng(23);
    const Matrix original = corrfit::testing::random_correlation(6, 6, rng);
    TempFile file("roundtrip");
    write_matrix(file.path, original);
    const auto back = read_bundle(file.path);
    REQUIRE(back.size() == 1);
    CHECK((back.front() - original).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("write_solution records a converged trace") {
    const ProblemInstance inst = load_fixture("example31", 3);
    SolverConfig config;
    config.init_angles = fixture_initial_angles("example31", 3);
    const SolveReport report = solve(inst, config);
    REQUIRE(report.termination == Termination::converged);

    TempFile matrix_file("solution");
    TempFile trace_file("trace");
    write_solution(report, matrix_file.path, trace_file.path);

    const Matrix back = read_bundle(matrix_file.path).front();
    CHECK((back - report.final_corr.entries()).cwiseAbs().maxCoeff() < 1e-15);

    std::ifstream in(trace_file.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,F,grad_norm,rel_residual,step,backtracks");
    std::string last, second;
    int rows = 0;
    while (std::getline(in, line)) {
        if (rows == 1) second = line;
        last = line;
        ++rows;
    }
    CHECK(rows == static_cast<int>(report.trace.size()));

    // grad_norm of the last row is below the stopping threshold
    std::stringstream ss(last);
    std::string field;
    std::getline(ss, field, ','); // t
    std::getline(ss, field, ','); // F
    std::getline(ss, field, ','); // grad_norm
    CHECK(std::stod(field) < 1e-4);

    // rows past t=0 carry the step and backtrack count
    CHECK(second.find(",,") == std::string::npos);
}

TEST_CASE("a zero-iteration trace has one row with empty step fields") {
    const ProblemInstance inst = validate_problem({Matrix::Ones(3, 3)}, 2);
    SolverConfig config;
    config.init_angles = AngleMatrix::Zero(3, 2); // already optimal
    const SolveReport report = solve(inst, config);
    REQUIRE(report.iterations == 0);

    TempFile trace_file("trace0");
    write_trace_csv(trace_file.path, report.trace);
    std::ifstream in(trace_file.path);
    std::string header, row, extra;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK_FALSE(std::getline(in, extra));
    CHECK(row.substr(0, 2) == "0,");
    CHECK(row.substr(row.size() - 2) == ",,");
}

TEST_CASE("fixtures are symmetric with unit diagonals and validate strictly") {
    for (const std::string& name : fixture_names()) {
        for (const Matrix& a : fixture_targets(name)) {
            CHECK(a == a.transpose().eval());
            CHECK(a.diagonal().isOnes(0.0));
        }
        CHECK_NOTHROW(load_fixture(name, 2));
    }
}

TEST_CASE("fixture contents match their recorded entries") {
    const ProblemInstance ex31 = load_fixture("example31", 3);
    CHECK(ex31.dim() == 4);
    CHECK(ex31.num_targets() == 1);
    CHECK(ex31.targets().front()(2, 3) == -0.3100);

    const ProblemInstance ex32 = load_fixture("example32", 3);
    CHECK(ex32.dim() == 11);
    CHECK(ex32.num_targets() == 5);
    CHECK(ex32.targets()[4](0, 6) == 0.7000);
}

TEST_CASE("unknown fixture names are rejected") {
    CHECK_THROWS_AS(load_fixture("example33", 2), UnknownFixture);
    CHECK_THROWS_AS(fixture_initial_angles("nope", 2), UnknownFixture);
}

TEST_CASE("bundled starts exist exactly where recorded") {
    CHECK(fixture_initial_angles("example31", 2).has_value());
    CHECK(fixture_initial_angles("example31", 3).has_value());
    CHECK_FALSE(fixture_initial_angles("example31", 1).has_value());
    CHECK(fixture_initial_angles("example32", 3).has_value());
    CHECK_FALSE(fixture_initial_angles("example32", 2).has_value());
    CHECK(fixture_initial_angles("example32", 3)->rows() == 11);
}
