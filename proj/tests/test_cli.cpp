#include "sedf/cli.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace sedf;
using sedf::testing::path_in;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sedf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fam(const char* name) { return path_in(SEDF_FAMILIES_DIR, name); }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST(CliVerify, AcceptsRejectsAndDiagnoses) {
    const auto ok = cli({"verify", fam("z5_sedf.txt")});
    EXPECT_EQ(ok.code, kExitOk);
    EXPECT_EQ(ok.out, "SEDF(5,2,2,1)\n");

    const auto no = cli({"verify", fam("z5_perturbed.txt")});
    EXPECT_EQ(no.code, kExitNo);
    EXPECT_TRUE(contains(no.out, "NOT SEDF"));
    EXPECT_TRUE(contains(no.out, "witness: set 1, element (3) occurs 2 times"));

    const auto bad = cli({"verify", fam("z5_overlap.txt")});
    EXPECT_EQ(bad.code, kExitUsage);
    EXPECT_TRUE(contains(bad.err, "overlap"));

    EXPECT_EQ(cli({"verify", fam("missing.txt")}).code, kExitUsage);
}

TEST(CliVerify, CsvAndProfile) {
    const auto c = cli({"verify", "--csv", fam("z5_perturbed.txt")});
    EXPECT_EQ(c.code, kExitNo);
    EXPECT_EQ(c.out, "v,m,k,lambda,sedf,witness_set,witness_element,witness_count\n5,2,2,1,no,1,\"(3)\",2\n");

    const auto p = cli({"chars", fam("z5_sedf.txt")});
    EXPECT_EQ(p.code, kExitOk);
    EXPECT_TRUE(contains(p.out, "4 nonprincipal characters"));
    EXPECT_TRUE(contains(p.out, "all character identities hold"));

    const auto big = cli({"verify", "--profile", fam("c3_5_order11_classes.txt")});
    EXPECT_EQ(big.code, kExitOk);
    EXPECT_TRUE(contains(big.out, "SEDF(243,11,22,20)"));
    EXPECT_TRUE(contains(big.out, "all character identities hold"));
    EXPECT_FALSE(contains(big.out, "violation"));
}

TEST(CliVerify, GroupAdvisoryNote) {
    const auto dir = std::filesystem::temp_directory_path() / "sedf_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "c27_singletons.txt").string();
    {
        std::ofstream f(path);
        f << "group: 27\n";
        for (int i = 0; i < 27; ++i) f << "set: (" << i << ")\n";
    }
    const auto r = cli({"verify", path});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "note: C_27 is a cyclic group of prime power order"));
}

TEST(CliSieve, KnownRowAndEmptyRange) {
    const auto r = cli({"sieve", "--vmax", "243"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "\n243,11,22,20,SURVIVES,,10;16\n"));

    const auto e = cli({"sieve", "--vmax", "3"});
    EXPECT_EQ(e.code, kExitOk);
    EXPECT_EQ(e.out, std::string(kSieveCsvHeader) + "\n");

    EXPECT_EQ(cli({"sieve", "--vmax", "200000"}).code, kExitUsage);
    EXPECT_EQ(cli({"sieve", "--vmax", "abc"}).code, kExitUsage);
}

TEST(CliSieve, FixturesAgree) {
    const auto r = cli({"sieve", "--vmax", "10000", "--fixtures", SEDF_TABLES_DIR});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.err, "fixtures: 70 rows checked, 0 mismatches"));
}

TEST(CliSieve, FixtureMismatchExitsOne) {
    const auto dir = std::filesystem::temp_directory_path() / "sedf_cli_fixtures";
    std::filesystem::create_directories(dir);
    for (const char* name : {"table1.csv", "table2.csv", "table3.csv"}) {
        std::ofstream f(dir / name);
        f << kSieveCsvHeader << '\n';
        if (std::string(name) == "table1.csv") f << "243,11,22,20,ELIMINATED,F-ADMA,\n";
    }
    const auto r = cli({"sieve", "--vmax", "300", "--fixtures", dir.string()});
    EXPECT_EQ(r.code, kExitNo);
    EXPECT_TRUE(contains(r.err, "1 mismatches"));
}

TEST(CliPrimeSearch, DefaultBound) {
    const auto r = cli({"primesearch", "--bound", "3000000000000", "--brute", "100000"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "identical to the recurrence"));
    EXPECT_TRUE(contains(r.out, "313,181,yes,ELIMINATED,5\n"));
    EXPECT_TRUE(contains(r.out, "2288805793,"));
    EXPECT_TRUE(contains(r.out, ",yes,ELIMINATED,5;17;29;149\n"));
    EXPECT_TRUE(contains(r.out, "candidate primes: 2, eliminated: 2, open: 0"));
    EXPECT_EQ(cli({"primesearch", "--bound", "9300000000000000000"}).code, kExitUsage);
}

TEST(CliSearch, FindsAndRoundTripsThroughVerify) {
    const auto dir = std::filesystem::temp_directory_path() / "sedf_cli_search";
    std::filesystem::remove_all(dir);
    const auto r = cli({"search", "--group", "5", "--m", "2", "--k", "2", "--out", dir.string()});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "C_5 (v,m,k) = (5,2,2) lambda = 1: FOUND"));
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        ++files;
        EXPECT_EQ(cli({"verify", entry.path().string()}).code, kExitOk);
    }
    EXPECT_GE(files, 1u);
    EXPECT_TRUE(std::filesystem::exists(dir / "sedf_5_2_2_1.txt"));
}

TEST(CliSearch, AllInSmallGroup) {
    const auto r = cli({"search", "--group", "3,3", "--all"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "(9,2,4) lambda = 2: FOUND"));
    EXPECT_TRUE(contains(r.out, "(9,9,1) lambda = 1: FOUND"));
    std::istringstream lines(r.out);
    for (std::string line; std::getline(lines, line);) {
        if (!contains(line, "(v,m,k)")) continue;
        if (contains(line, "FOUND")) {
            EXPECT_TRUE(contains(line, "(9,2,") || contains(line, "(9,9,1)")) << line;
        }
    }
}

TEST(CliSearch, UsageErrorsAndBudget) {
    EXPECT_EQ(cli({"search", "--group", "5", "--m", "2"}).code, kExitUsage);
    EXPECT_EQ(cli({"search", "--m", "2", "--k", "2"}).code, kExitUsage);
    EXPECT_EQ(cli({"search", "--group", "5", "--all", "--m", "2"}).code, kExitUsage);
    EXPECT_EQ(cli({"search", "--group", "x", "--m", "2", "--k", "2"}).code, kExitUsage);
    EXPECT_EQ(cli({"search", "--group", "1", "--m", "2", "--k", "2"}).code, kExitUsage);
    const auto b = cli({"search", "--group", "25", "--m", "3", "--k", "6", "--node-budget", "2000"});
    EXPECT_EQ(b.code, kExitBudget);
    EXPECT_TRUE(contains(b.out, "BUDGET_EXCEEDED"));
}

TEST(CliGeneral, UsageAndHelp) {
    const auto none = cli({});
    EXPECT_EQ(none.code, kExitUsage);
    EXPECT_TRUE(contains(none.err, "verify"));
    EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cli({"verify", "--bogus", fam("z5_sedf.txt")}).code, kExitUsage);
    const auto help = cli({"--help"});
    EXPECT_EQ(help.code, kExitOk);
    EXPECT_TRUE(contains(help.out, "sieve"));
}
