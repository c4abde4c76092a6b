#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tunnel/report.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(TUNNEL_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

int data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    int rows = -1;  // header
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            ++rows;
        }
    }
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("tunnel_cli_test_" + name);
}

}  // namespace

TEST(Cli, TransmissionShape) {
    const auto r = run("transmission --wa 4 --La 0.25 --k-points 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out), 100);
    const auto t = tunnel::parse_table_csv(r.out);
    EXPECT_EQ(t.rows.values.back(), 4.0);
}

TEST(Cli, FreeSpaceTransmissionIsUnity) {
    const auto r = run("transmission --wa 4 --La 0 --k-points 20");
    ASSERT_EQ(r.code, 0);
    const auto t = tunnel::parse_table_csv(r.out);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        EXPECT_EQ(t.at(i, 0).value, 1.0);
    }
}

TEST(Cli, Table1SingleCell) {
    const auto r = run("table1 --k0a 1 --La 0.5 --wa 4");
    ASSERT_EQ(r.code, 0);
    const auto t = tunnel::parse_table_csv(r.out);
    ASSERT_EQ(t.cells.size(), 1u);
    EXPECT_NEAR(t.cells[0].value, 2.1155, 1e-4);
}

TEST(Cli, Table1SingleColumn) {
    const auto r = run("table1 --wa 4");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out), 21);
}

TEST(Cli, Table1JsonMatchesCsv) {
    const auto csv = run("table1 --wa 1.5,20 --La 0.1,0.9");
    const auto json = run("table1 --wa 1.5,20 --La 0.1,0.9 --format json");
    ASSERT_EQ(csv.code, 0);
    ASSERT_EQ(json.code, 0);
    EXPECT_TRUE(tunnel::parse_table_csv(csv.out) == tunnel::parse_table_json(json.out));
}

TEST(Cli, PacketSinglePoint) {
    const auto r = run("packet --kind incident --grid 0 --k0-frac 0.5 --kcut-frac 0.8");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out), 1);
}

TEST(Cli, TransmittedTimeSeries) {
    const auto r = run("packet --kind transmitted --axis t --grid -1:2:31 --La 0.7");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out), 31);
    EXPECT_NE(r.out.find("# x: 0.7"), std::string::npos);
}

TEST(Cli, TimesSweep) {
    const auto r = run("times --mode vs_L --policy naive --grid 3:6:4");
    ASSERT_EQ(r.code, 0);
    const auto t = tunnel::parse_table_csv(r.out);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_NEAR(t.at(3, 1).value, 2.0 / std::sqrt(15.0), 1e-2);
}

TEST(Cli, HelpListsDefaults) {
    const auto top = run("--help");
    EXPECT_EQ(top.code, 0);
    for (const char* sub : {"transmission", "table1", "packet", "times"}) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
    }
    const auto help = run("packet --help");
    EXPECT_EQ(help.code, 0);
    for (const char* text : {"--rel-tol", "1e-08", "-10:10:401", "incident", "--band", "auto"}) {
        EXPECT_NE(help.out.find(text), std::string::npos) << text;
    }
    const auto table_help = run("table1 --help");
    EXPECT_NE(table_help.out.find("4096"), std::string::npos);
    EXPECT_NE(table_help.out.find("1.5"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("table1 --bogus 1").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("transmission --wa -1").code, 2);
    EXPECT_EQ(run("table1 --wa 0.5").code, 2);
    EXPECT_EQ(run("times --grid 1:0:3").code, 2);
    EXPECT_EQ(run("packet --grid 0 --rel-tol 1e-300 --max-doublings 1 --kind transmitted --La 1").code, 3);
    EXPECT_EQ(run("transmission -o /nonexistent-dir/out.csv").code, 4);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto cfg = temp_path("table1.ini");
    {
        std::ofstream f(cfg);
        f << "wa=4\nLa=0.25\nk0a=1\n";
    }
    const auto from_file = run("table1 --config " + cfg.string());
    ASSERT_EQ(from_file.code, 0);
    const auto t = tunnel::parse_table_csv(from_file.out);
    ASSERT_EQ(t.cells.size(), 1u);
    EXPECT_NEAR(t.cells[0].value, 1.7575, 1e-3);

    const auto overridden = run("table1 --config " + cfg.string() + " --La 0.5");
    ASSERT_EQ(overridden.code, 0);
    EXPECT_NEAR(tunnel::parse_table_csv(overridden.out).cells[0].value, 2.1155, 1e-3);
    std::filesystem::remove(cfg);
}

TEST(Cli, OutputFilesAreByteIdentical) {
    const auto a = temp_path("a.json");
    const auto b = temp_path("b.json");
    ASSERT_EQ(run("packet --kind transmitted --axis t --grid 0:1:11 --format json -o " + a.string()).code, 0);
    ASSERT_EQ(run("packet --kind transmitted --axis t --grid 0:1:11 --format json -o " + b.string()).code, 0);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
    };
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
