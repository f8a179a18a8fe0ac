#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crr/cli.hpp"
#include "crr/pmf_io.hpp"
#include "crr/source.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = crr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Runs the installed executable through the shell and returns its exit code.
int run_binary(const std::string &args) {
  const std::string cmd = std::string(CRR_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("crr_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string &name, const std::string &text = "") const {
    const auto p = path / name;
    if (!text.empty()) std::ofstream(p) << text;
    return p.string();
  }
};

const char *kIdentity2 = R"({"variables":[{"name":"X","symbols":["0","1"]},
  {"name":"Y","symbols":["0","1"]}],
  "mass":[{"index":["0","0"],"p":"1/2"},{"index":["1","1"],"p":"1/2"}]})";

} // namespace

TEST_CASE("gk on the worked example") {
  const auto r = run({"gk", "--input", testutil::data_path("gk_example_p.json")});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["classes"] == 3);
  CHECK(j["mapping_choices"] == 16);
  CHECK(j["class_masses"][0].get<double>() == doctest::Approx(0.35));
  CHECK(j["class_masses"][1].get<double>() == doctest::Approx(0.30));
  CHECK(j["gk_entropy"].get<double>() == doctest::Approx(1.58129090).epsilon(1e-8));
}

TEST_CASE("gk on small couplings") {
  TempDir tmp;
  auto r = run({"gk", "--input", tmp.file("id.json", kIdentity2)});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["classes"] == 2);
  CHECK(j["mapping_choices"] == 1);
  CHECK(j["gk_entropy"].get<double>() == doctest::Approx(1.0));

  const auto product = crr::JointPmf::product(
      crr::JointPmf::uniform({crr::Alphabet::range("X", 2)}),
      crr::JointPmf::uniform({crr::Alphabet::range("Y", 3)}));
  r = run({"gk", "--input", tmp.file("prod.json", crr::pmf_to_json(product).dump()),
           "--left", "X", "--right", "Y"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["classes"] == 1);
  CHECK(j["gk_entropy"].get<double>() == 0.0);
}

TEST_CASE("binary region rows") {
  const auto r = run({"region", "--method", "binary", "--rho", "0.05", "--delta", "0.2",
                      "--D", "0,0.1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("D,corner_index,r_uv_min,sum_rate_min") != std::string::npos);
  CHECK(r.out.find("0,0,0.286396957,0.778011304") != std::string::npos);
  CHECK(r.out.find("0.1,0,0.115243218,0.391848413") != std::string::npos);
  CHECK(r.out.find("region method=binary D=0 corners=1") != std::string::npos);
}

TEST_CASE("star region above dbar is the origin") {
  TempDir tmp;
  const auto src = tmp.file("src.json", crr::pmf_to_json(crr::binary_family_pmf(0.1, 0.3)).dump());
  const auto r = run({"region", "--method", "star", "--input", src, "--D", "1", "--k", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1,0,0,0\n") != std::string::npos);
  CHECK(r.out.find("corners=1") != std::string::npos);
}

TEST_CASE("region outputs are byte-deterministic") {
  TempDir tmp;
  const auto src = tmp.file("src.json", crr::pmf_to_json(crr::binary_family_pmf(0.05, 0.2)).dump());
  const auto out1 = tmp.file("a.csv"), out2 = tmp.file("b.csv");
  for (const auto &out : {out1, out2}) {
    const auto r = run({"region", "--method", "qb", "--input", src, "--D", "0.1,0.2",
                        "--grid", "0.05", "--seed", "7", "--out", out});
    REQUIRE(r.code == 0);
  }
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1 + ".manifest.json") == slurp(out2 + ".manifest.json"));
  const auto m = json::parse(slurp(out1 + ".manifest.json"));
  CHECK(m["command"] == "region");
  CHECK(m["seed"] == 7);
  CHECK(m["input_sha256"] == crr::cli::sha256_file(src));
  CHECK(m["output_sha256"] == crr::cli::sha256_file(out1));
  CHECK(m["parameters"]["method"] == "qb");
  CHECK(m.contains("version"));
}

TEST_CASE("sha256 of a known file") {
  TempDir tmp;
  CHECK(crr::cli::sha256_file(tmp.file("abc.txt", "abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("classify and demo output") {
  TempDir tmp;
  const auto src = tmp.file("src.json", crr::pmf_to_json(crr::binary_family_pmf(0.05, 0.2)).dump());
  auto r = run({"classify", "--input", src});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["single_letter_cases"]["E"] == true);
  CHECK(j["single_letter_cases"]["B"] == false);

  const auto csv = tmp.file("demo.csv");
  r = run({"demo-discontinuity", "--rho", "0.05", "--D", "0.1", "--out", csv});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["gap"].get<double>() == doctest::Approx(0.115243218).epsilon(1e-8));
  CHECK(j["gap_positive"] == true);
  CHECK(fs::exists(csv + ".manifest.json"));
}

TEST_CASE("prune reports") {
  TempDir tmp;
  testutil::Rng rng(12);
  const auto tuple = testutil::random_five_tuple(rng, 2, 2, 2, 2, 2, 0.0);
  const auto in = tmp.file("t.json", crr::pmf_to_json(tuple).dump());
  auto r = run({"prune", "--input", in, "--method", "b", "--eta", "0.1", "--delta", "0"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["all_hold"] == true);
  r = run({"prune", "--input", in, "--method", "a", "--eta", "0.1", "--keep",
           "0:0,0:1,1:0,1:1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["l1"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("gen writes a loadable source") {
  TempDir tmp;
  const auto out = tmp.file("gen.json");
  REQUIRE(run({"gen", "--rho", "0.05", "--delta", "0.2", "--out", out}).code == 0);
  const auto p = crr::pmf_from_json(crr::read_json_file(out));
  CHECK(crr::variational_distance(p, crr::binary_family_pmf(0.05, 0.2)) <= 1e-15);
}

TEST_CASE("exit codes of the executable") {
  TempDir tmp;
  CHECK(run_binary("gk --input " + testutil::data_path("gk_example_p.json")) == 0);

  // 2: malformed JSON, unknown flag, unknown method.
  CHECK(run_binary("gk --input " + tmp.file("bad.json", "{not json")) == 2);
  CHECK(run_binary("gk --bogus") == 2);
  CHECK(run_binary("region --method nope --D 0.1") == 2);

  // 3: empty support.
  const auto empty = tmp.file("empty.json", R"({"variables":[{"name":"X","symbols":["0"]},
      {"name":"Y","symbols":["0"]}],"mass":[]})");
  CHECK(run_binary("gk --input " + empty) == 3);

  // 4: every reconstruction costs at least 0.1.
  const auto costly = tmp.file("costly.json", [] {
    auto doc = crr::pmf_to_json(crr::binary_family_pmf(0.1, 0.2));
    doc["distortion"] = {{"source", "S"},
                         {"recon", {"x", "y"}},
                         {"values", {{0.1, 1.0}, {1.0, 0.1}}}};
    return doc.dump();
  }());
  CHECK(run_binary("region --method qb --input " + costly + " --D 0.05") == 4);
  const auto r = run({"region", "--method", "qb", "--input", costly, "--D", "0.05"});
  CHECK(r.code == 4);
  CHECK(r.err.find("D_min = 0.1") != std::string::npos);

  // 5: parameter ordering and closed-form applicability.
  CHECK(run_binary("demo-discontinuity --rho 0.2 --D 0.1") == 5);
  CHECK(run_binary("region --method binary --rho 0.05 --delta 0 --D 0.1") == 5);
  CHECK(run_binary("prune --input " + empty + " --method a --eta 0.1") == 3);
}
