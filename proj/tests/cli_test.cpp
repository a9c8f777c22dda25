#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "qarena/service.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = qarena::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("qarena_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

constexpr const char* kMateInOne = "4k3/1R6/R7/8/8/8/8/4K3 w - - 0 20";
constexpr const char* kMateInTwo = "4k3/R7/R7/8/8/8/8/4K3 w - - 0 20";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve-chess") {
    auto r = run({"solve-chess", "--fen", kMateInOne, "--depth", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "mate in 1: Ra8#\n");
    r = run({"solve-chess", "--fen", kMateInTwo, "--depth", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "no mate in 1\n");
    r = run({"solve-chess", "--fen", kMateInTwo, "--depth", "2"});
    CHECK(r.out.rfind("mate in 2: ", 0) == 0);
    CHECK(r.out.find("Rb7") != std::string::npos);
}

TEST_CASE("perft") {
    CHECK(run({"perft", "--depth", "3"}).out == "8902\n");
    const auto d = run({"perft", "--depth", "2", "--divide"});
    CHECK(d.out.find("e2e4: 20\n") != std::string::npos);
    CHECK(d.out.find("total: 400\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"solve-chess"}).code == 2);
    CHECK(run({"solve-chess", "--fen", kMateInOne, "--depth", "9"}).code == 2);
    CHECK(run({"play", "go"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    auto r = run({"solve-chess", "--fen", "not a fen"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(run({"negate", "--formula", "forall x. "}).code == 1);
    CHECK(run({"export-graph", "--fen", kMateInTwo, "--depth", "1"}).code == 1);
    CHECK(run({"export-graph", "--depth", "1"}).code == 2);
    CHECK(run({"verify-delta", "--expr", "x^2", "--x0", "3", "--a", "9", "--eps", "-1", "--delta", "0.1"}).code == 1);
}

TEST_CASE("play bachet from standard input") {
    const auto r = run({"play", "bachet", "--tokens", "10"}, "3\n5\n1\n3\n");
    CHECK(r.code == 0);
    CHECK(r.out.find("verifier (engine): remove 2, 8 left\n") != std::string::npos);
    CHECK(r.out.find("falsifier: remove 3, 5 left\n") != std::string::npos);
    CHECK(r.out.find("rejected: ") != std::string::npos);
    CHECK(r.out.find("verifier (engine): remove 1, 4 left\n") != std::string::npos);
    CHECK(r.out.find("no tokens left: verifier wins\n") != std::string::npos);

    const auto warned = run({"play", "bachet", "--tokens", "8", "--human", "falsifier"}, "");
    CHECK(warned.out.find("warning: ") != std::string::npos);
    CHECK(warned.out.find("stopped before the end of the game") != std::string::npos);
}

TEST_CASE("play chess and limit games from a script") {
    const auto script = temp_file("moves.txt");
    std::ofstream(script) << "Ra8\n";
    auto r = run({"play", "chess", "--fen", kMateInOne, "--human", "verifier", "--script", script.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("verifier: Ra8#") != std::string::npos);
    CHECK(r.out.find("checkmate: verifier wins") != std::string::npos);

    std::ofstream(script) << "1\n3.17\n";
    r = run({"play", "limit", "--expr", "x^2", "--x0", "3", "--a", "9", "--human", "falsifier", "--script",
             script.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("claim: ") != std::string::npos);
    CHECK(r.out.find("closed form") != std::string::npos);
    CHECK(r.out.find("rejected: ") != std::string::npos);  // 3.17 lies outside the engine's delta
    CHECK(r.out.find("stopped before the end") != std::string::npos);

    std::ofstream(script) << "9\n1\n3 - sqrt(8)\n3.17\n";
    r = run({"play", "limit", "--expr", "x^2", "--x0", "3", "--human", "both", "--script", script.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("|f(3.17) - 9| = ") != std::string::npos);
    CHECK(r.out.find("falsifier wins") != std::string::npos);
    std::filesystem::remove(script);
}

TEST_CASE("negate") {
    const std::string f = "exists a. forall eps>0. exists M. forall x. (x>=M) -> abs(f(x)-a) < eps";
    auto r = run({"negate", "--formula", f});
    CHECK(r.code == 0);
    CHECK(r.out == "forall a. exists eps>0. forall M. exists x. x >= M and abs(f(x) - a) >= eps\n");
    r = run({"negate", "--formula", f, "--absorb", "--unicode"});
    CHECK(r.out == "∀a ∃ε>0 ∀M ∃x≥M |f(x) − a| ≥ ε\n");
}

TEST_CASE("export-graph matches the API byte for byte") {
    qarena::service::Service svc;
    for (const char* format : {"dot", "json"}) {
        for (bool refutations : {false, true}) {
            json body = {{"fen", kMateInTwo}, {"depth", 2}, {"format", format}, {"refutations", refutations}};
            const auto api = svc.handle("POST", "/api/solve", body.dump());
            REQUIRE(api.status == 200);
            std::vector<std::string> args = {"export-graph", "--fen", kMateInTwo, "--depth", "2", "--format", format};
            if (refutations) args.push_back("--refutations");
            const auto r = run(args);
            CHECK(r.code == 0);
            CHECK(r.out == api.body);
        }
    }
    const auto api = svc.handle("POST", "/api/solve", json{{"tokens", 10}, {"depth", 3}, {"format", "dot"}}.dump());
    const auto out = temp_file("bachet.dot");
    CHECK(run({"export-graph", "--tokens", "10", "--depth", "3", "-o", out.string()}).code == 0);
    CHECK(slurp(out) == api.body);
    std::filesystem::remove(out);

    const auto keyed = svc.handle("POST", "/api/solve",
                                  json{{"fen", kMateInTwo}, {"depth", 2}, {"key", "a7b7"}, {"format", "json"}}.dump());
    CHECK(run({"export-graph", "--fen", kMateInTwo, "--depth", "2", "--key", "a7b7", "--format", "json"}).out ==
          keyed.body);
}

TEST_CASE("verify-delta") {
    auto r = run({"verify-delta", "--expr", "x^2", "--x0", "3", "--a", "9", "--eps", "1", "--delta", "3 - sqrt(8)"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("refuted: |f(3.17) - 9| = 1.04", 0) == 0);
    r = run({"verify-delta", "--expr", "x^2", "--x0", "3", "--a", "9", "--eps", "1", "--delta", "0.12"});
    CHECK(r.out.rfind("proved: ", 0) == 0);
    const auto cert = temp_file("cert.json");
    r = run({"verify-delta", "--expr", "x^2", "--x0", "3", "--a", "9", "--eps", "1", "--certificate", cert.string()});
    CHECK(r.out.rfind("delta = 0.125\n", 0) == 0);
    const auto c = json::parse(slurp(cert));
    CHECK(c["schema"] == "certificate/1");
    CHECK(c["delta"] == 0.125);
    CHECK(c["verdict"] == "proved");
    std::filesystem::remove(cert);
}

}
