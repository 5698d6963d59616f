#include "gamma3/generators.hpp"
#include "gamma3/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

using namespace gamma3;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + GAMMA3_BIN + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    for (size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() / ("gamma3_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write_matrix(const std::string& name, const ComplexMatrix& M) {
        const auto path = (dir / name).string();
        write_json_file(path, matrix_to_json(M));
        return path;
    }
    std::string write_triple(const std::string& name, const ComplexMatrix& S1, const ComplexMatrix& S2,
                             const ComplexMatrix& P) {
        const auto path = (dir / name).string();
        write_json_file(path, triple_to_json({S1, S2, P, Json::object()}));
        return path;
    }
};

ComplexMatrix scalar(Complex v) {
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

}  // namespace

TEST_F(Cli, MembershipExamples) {
    auto r = run("membership --point 0,0,0");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["verdict"], "InteriorG3");
    r = run("membership --roots 1,1,1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["verdict"], "DistinguishedBoundary");
    r = run("membership --point 4,0,0");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(Json::parse(r.out)["slacks"].size(), 6u);
    EXPECT_EQ(run("membership --point 1+2i,0.5-i,0.1i --report text").code, 1);
}

TEST_F(Cli, MembershipInputErrors) {
    EXPECT_EQ(run("membership --point 1,2").code, 3);
    EXPECT_EQ(run("membership --point 1,x,0").code, 3);
    EXPECT_EQ(run("membership").code, 3);
    EXPECT_EQ(run("membership --point 0,0,0 --report xml").code, 3);
    EXPECT_EQ(run("nosuchcommand").code, 3);
}

TEST_F(Cli, MembershipStrictChecksRoots) {
    EXPECT_EQ(run("membership --point 1.4,1.4,0").code, 0);
    EXPECT_EQ(run("membership --point 1.4,1.4,0 --strict").code, 1);
}

TEST_F(Cli, CertifyExamples) {
    const auto member = write_triple("m.json", scalar(1.5), scalar(0.75), scalar(0.125));
    auto r = run("certify " + member + " --trials 50");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["verdict"], "PassedSampled");

    const auto big = write_triple("big.json", scalar(0), scalar(0), scalar(1.2));
    r = run("certify " + big);
    EXPECT_EQ(r.code, 1);
    const auto failed = Json::parse(r.out)["failed_checks"];
    EXPECT_NE(std::find(failed.begin(), failed.end(), "p_contraction"), failed.end());

    ComplexMatrix N = ComplexMatrix::Zero(2, 2);
    N(0, 1) = 1;
    EXPECT_EQ(run("certify " + write_triple("nc.json", N, N.adjoint(), ComplexMatrix::Zero(2, 2))).code, 3);
    EXPECT_EQ(run("certify " + (dir / "missing.json").string()).code, 3);
}

TEST_F(Cli, FundamentalExamples) {
    auto r = run("fundamental " + write_triple("s.json", scalar(1.5), scalar(0.75), scalar(0.125)) + " --verify-suite");
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    const auto A1 = matrix_from_json(j["A"]["A1"]), A2 = matrix_from_json(j["A"]["A2"]);
    EXPECT_NEAR(std::abs(A1(0, 0) - 10.0 / 7.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(A2(0, 0) - 4.0 / 7.0), 0, 1e-12);
    for (const auto& [k, v] : j["residuals"].items()) EXPECT_LE(v.get<double>(), 1e-10) << k;

    ComplexMatrix S1 = ComplexMatrix::Zero(2, 2), S2 = S1;
    S1.diagonal() << 0.5, 0.2;
    S2.diagonal() << 0.1, Complex(0, 0.3);
    r = run("fundamental " + write_triple("z.json", S1, S2, ComplexMatrix::Zero(2, 2)));
    ASSERT_EQ(r.code, 0);
    const auto z = Json::parse(r.out);
    EXPECT_LE(op_norm(ComplexMatrix(matrix_from_json(z["A"]["lifted"]["A1"]) - S1)), 1e-14);
    EXPECT_LE(op_norm(ComplexMatrix(matrix_from_json(z["A"]["lifted"]["A2"]) - S2)), 1e-14);

    const Complex w = std::polar(1.0, 0.3);
    r = run("fundamental " + write_triple("u.json", scalar(1.0 + w), scalar(1.0 + w), scalar(w)));
    ASSERT_EQ(r.code, 0);
    const auto u = Json::parse(r.out);
    EXPECT_EQ(u["A"]["A1"]["rows"], 0);
    EXPECT_EQ(u["note"], "defect space of P is trivial");
}

TEST_F(Cli, ModelExamples) {
    const auto one = write_matrix("one.json", scalar(1)), zero = write_matrix("zero.json", scalar(0));
    auto r = run("model --F1 " + one + " --F2 " + one + " --truncation 8");
    ASSERT_EQ(r.code, 0);
    auto j = Json::parse(r.out);
    EXPECT_TRUE(j["valid"]);
    EXPECT_EQ(j["symbol_members"], 64);
    EXPECT_EQ(j["triple"]["P"]["rows"], 9);

    const auto out = (dir / "shift.json").string();
    r = run("model --F1 " + zero + " --F2 " + zero + " --truncation 4 --out " + out);
    ASSERT_EQ(r.code, 0);
    const auto t = triple_from_json(read_json_file(out));
    EXPECT_EQ(t.S1.norm(), 0);
    ComplexMatrix shift = ComplexMatrix::Zero(5, 5);
    shift.diagonal(-1).setOnes();
    EXPECT_EQ(t.P, shift);

    ComplexMatrix N = ComplexMatrix::Zero(2, 2);
    N(0, 1) = 1;
    r = run("model --F1 " + write_matrix("n.json", N) + " --F2 " + write_matrix("z2.json", ComplexMatrix::Zero(2, 2)));
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(run("model --F1 " + one).code, 3);
}

TEST_F(Cli, ModelAdmissible) {
    const auto r = run("model --admissible " + write_matrix("p.json", scalar(0.5)) + "," + write_matrix("b1.json", scalar(1)) +
                       "," + write_matrix("b2.json", scalar(0.5)));
    ASSERT_EQ(r.code, 0);
    const auto t = triple_from_json(Json::parse(r.out)["triple"]);
    EXPECT_NEAR(std::abs(t.S1(0, 0) - 1.25), 0, 1e-12);
    EXPECT_NEAR(std::abs(t.S2(0, 0) - 1.0), 0, 1e-12);
}

TEST_F(Cli, InvariantsExamples) {
    const auto a = write_triple("a.json", scalar(1.5), scalar(0.75), scalar(0.3));
    const auto b = write_triple("b.json", scalar(1.5), scalar(0.75), scalar(0.5));
    EXPECT_EQ(run("invariants " + a + " " + a).code, 0);
    EXPECT_EQ(run("invariants " + a + " " + b).code, 1);

    Rng rng(81);
    const auto T = diagonal_triple(3, rng);
    const ComplexMatrix U = random_unitary(3, rng);
    const auto C = conjugate(T, U);
    const auto r = run("invariants " + write_triple("t.json", T.S1, T.S2, T.P) + " " +
                       write_triple("c.json", C.S1, C.S2, C.P) + " --budget 4");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(Json::parse(r.out)["verdict"], "Equivalent");
}

TEST_F(Cli, RandomIsSeededAndDeterministic) {
    const auto a = run("random --kind scalar --seed 7"), b = run("random --kind scalar --seed 7");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("random --kind scalar --seed 8").out);
    const auto t = triple_from_json(Json::parse(a.out));
    EXPECT_TRUE(classify({t.S1(0, 0), t.S2(0, 0), t.P(0, 0)}).member());

    // GAMMA3_SEED supplies the default seed.
    EXPECT_EQ(run("random --kind scalar", "GAMMA3_SEED=7").out, a.out);
    EXPECT_EQ(run("random --kind scalar", "GAMMA3_SEED=seven").code, 3);

    for (const char* kind : {"diagonal", "admissible"}) {
        const std::string args = std::string("random --kind ") + kind + " --dim 4 --seed 3";
        const auto x = run(args);
        EXPECT_EQ(x.code, 0) << kind;
        EXPECT_EQ(x.out, run(args).out) << kind;
    }
}

TEST_F(Cli, RandomModelIsAnIsometryTruncation) {
    const auto path = (dir / "m.json").string();
    ASSERT_EQ(run("random --kind model --dim 2 --seed 1 --out " + path).code, 0);
    const auto t = triple_from_json(read_json_file(path));
    EXPECT_EQ(t.P.rows(), 2 * 5);
    const auto r = run("certify " + path + " --trials 40");
    EXPECT_EQ(r.code, 0);
}

TEST_F(Cli, ReportsAreByteIdentical) {
    const auto path = write_triple("s.json", scalar(1.5), scalar(0.75), scalar(0.125));
    EXPECT_EQ(run("certify " + path + " --trials 20 --seed 5").out, run("certify " + path + " --trials 20 --seed 5").out);
    EXPECT_EQ(run("certify " + path + " --trials 20", "GAMMA3_SEED=5").out,
              run("certify " + path + " --trials 20 --seed 5").out);
}
