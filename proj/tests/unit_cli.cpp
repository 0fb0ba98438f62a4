#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CmdResult {
    int status = -1;
    std::string out;
};

std::string evtool() {
    const char* path = std::getenv("EVTOOL");
    REQUIRE(path != nullptr);
    return path;
}

std::string specs_dir() {
    const char* dir = std::getenv("EV_SPECS_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

std::string fixtures_dir() {
    const char* dir = std::getenv("EV_FIXTURES_DIR");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/oeis";
}

CmdResult run(const std::string& args) {
    CmdResult r;
    std::string cmd = "'" + evtool() + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string spec_arg(const std::string& stem) {
    return "--spec '" + specs_dir() + "/" + stem + ".spec'";
}

} // namespace

TEST_CASE("generate prints csv rows") {
    CmdResult r = run("generate " + spec_arg("eulerian") + " --rows 4");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("n,k,value\n", 0) == 0);
    CHECK(r.out.find("\n3,1,4\n") != std::string::npos);
    CHECK(r.out.find("\n4,1,11\n") != std::string::npos);
    CHECK(r.out.find("\n4,2,11\n") != std::string::npos);

    CmdResult r0 = run("generate " + spec_arg("eulerian") + " --rows 0");
    CHECK(r0.status == 0);
    CHECK(r0.out == "n,k,value\n0,0,1\n");
}

TEST_CASE("generate emits json for a catalog family") {
    CmdResult r = run("generate --family a --params 1 1 1 --rows 3 --format json");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["name"] == "A(1,1,1)");
    CHECK(j["start"] == 0);
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][3][1] == "4");

    CmdResult bad = run("generate --family a --params 1 0 1 --rows 3");
    CHECK(bad.status == 2);
}

TEST_CASE("classify reports the law with the cross-check for families") {
    CmdResult r = run("classify " + spec_arg("eulerian"));
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "Normal");
    CHECK(j["spec"] == "eulerian");
    CHECK(j["mean"]["rational"] == "1/2");
    CHECK(j["variance"]["rational"] == "1/12");
    CHECK(!j.contains("analytic_cross_check"));

    CmdResult fam = run("classify --family a --params 1 1 1");
    CHECK(fam.status == 0);
    nlohmann::json jf = nlohmann::json::parse(fam.out);
    REQUIRE(jf.contains("analytic_cross_check"));
    CHECK(jf["analytic_cross_check"]["consistent"] == true);
    CHECK(jf["analytic_cross_check"]["id"] == "a(q=1)");
}

TEST_CASE("unresolved classifications and strict mode") {
    CmdResult r = run("classify " + spec_arg("a156920"));
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "Unknown");
    CHECK(j["reason"] == "derivative multiplier lacks a (1-v) factor");

    CmdResult strict = run("classify " + spec_arg("a156920") + " --strict");
    CHECK(strict.status == 4);
}

TEST_CASE("error exit codes") {
    CmdResult missing = run("classify --spec /nonexistent/x.spec");
    CHECK(missing.status == 6);
    CHECK(missing.out.find("cannot open spec file") != std::string::npos);

    std::string tmp = "/tmp/evtool-cli-broken.spec";
    std::ofstream(tmp) << "name = broken\ninitial = \"1\"\na = \"v +\"\n";
    CmdResult malformed = run("classify --spec " + tmp);
    CHECK(malformed.status == 2);
    CHECK(malformed.out.find("expression error") != std::string::npos);
    std::remove(tmp.c_str());

    CmdResult noargs = run("classify");
    CHECK(noargs.status == 2);
}

TEST_CASE("verify runs the classified law against chosen sizes") {
    CmdResult r = run("verify --family a --params 0 1 1 --ns 100,200,400");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["law"] == "Normal");
    CHECK(j["pass"] == true);
    REQUIRE(j["records"].size() == 3);
    CHECK(j["records"][0]["n"] == 100);
    CHECK(j["records"][2]["pass"] == true);
}

TEST_CASE("moments writes the csv table to a file") {
    std::string tmp = "/tmp/evtool-cli-moments.csv";
    CmdResult r = run("moments " + spec_arg("eulerian") + " --rows 4 --order 2 --out " + tmp);
    CHECK(r.status == 0);
    std::ifstream in(tmp);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,total,mean,variance,central2,factorial1,factorial2");
    int rows = 0;
    std::string last;
    while (std::getline(in, line))
        if (!line.empty()) {
            ++rows;
            last = line;
        }
    CHECK(rows == 5);
    CHECK(last.substr(0, 9) == "4,24,3/2,");
    in.close();
    std::remove(tmp.c_str());
}

TEST_CASE("b-file comparison outcome drives the exit code") {
    CmdResult ok = run("oeis " + spec_arg("eulerian") + " --id A008292 --fixtures '" +
                       fixtures_dir() + "' --offline");
    CHECK(ok.status == 0);
    nlohmann::json j = nlohmann::json::parse(ok.out);
    CHECK(j["full_match"] == true);
    CHECK(j["rows_matched"].get<long>() >= 25);

    CmdResult bad = run("oeis " + spec_arg("pascal") + " --id A008292 --fixtures '" +
                        fixtures_dir() + "' --offline");
    CHECK(bad.status == 5);
    nlohmann::json jb = nlohmann::json::parse(bad.out);
    CHECK(jb["full_match"] == false);
    CHECK(jb["mismatch"]["n"] == 2);
}
