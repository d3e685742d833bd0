#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tzeta/cli.hpp"
#include "tzeta/error.hpp"

using namespace tzeta;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tzeta-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out);
  return {code, out.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::string error_kind(const std::string& text) {
  return nlohmann::json::parse(text).at("error").at("kind").get<std::string>();
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("class-group") {
  auto r = run({"class-group", "--variety", "wp112"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "rank=1"));
  CHECK(has_line(r.out, "torsion_trivial=yes"));
  CHECK(has_line(r.out, "class[D2]=(2)"));

  auto f1 = run({"class-group", "--variety", "hirzebruch:1"});
  CHECK(has_line(f1.out, "rank=2"));
}

TEST_CASE("zeta-coeffs") {
  auto r = run({"zeta-coeffs", "--variety", "p1xp1", "--q", "2", "--dmax", "4"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "M_2=29"));
  auto csv = run({"zeta-coeffs", "--variety", "p1xp1", "--q", "2", "--dmax", "2", "--out", "csv"});
  CHECK(csv.out == "d,M_d,ord_p M_d\n0,1,0\n1,6,1\n2,29,0\n");
}

TEST_CASE("pole") {
  auto r = run({"pole", "--variety", "p2", "--q", "2", "--p", "2", "--dmax", "24", "--prec", "8"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "order=1"));
  CHECK(has_line(r.out, "special_value_residue=255"));
  auto pp = run({"pole", "--variety", "p1xp1", "--q", "2", "--dmax", "24", "--prec", "8"});
  CHECK(has_line(pp.out, "order=2"));
  CHECK(has_line(pp.out, "special_value_residue=255"));
}

TEST_CASE("sections and ehrhart") {
  auto s = run({"sections", "--variety", "p2", "--divisor", "3,0,0"});
  CHECK(s.code == 0);
  CHECK(has_line(s.out, "l=10"));
  auto e = run({"ehrhart", "--variety", "wp112", "--divisor", "1,0,0"});
  CHECK(e.code == 0);
  CHECK(e.out.find("period=2") != std::string::npos);
}

TEST_CASE("mero-eval") {
  auto r = run({"mero-eval", "--poly", "x^2", "--prec", "4", "--t", "1"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "value=val=0, residue=3 mod 2^4"));
  auto pole = run({"mero-eval", "--poly", "x1*x2", "--t", "1/2"});
  CHECK(pole.code == 1);
  CHECK(error_kind(pole.out) == "pole");
  auto bad = run({"mero-eval", "--poly", "x1-x2"});
  CHECK(error_kind(bad.out) == "not_increasing");
}

TEST_CASE("fan files") {
  auto r = run({"fan", "--variety", "hirzebruch:1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("rays") == nlohmann::json::parse("[[1,0],[0,1],[-1,1],[0,-1]]"));

  auto path = write_temp("tzeta_f1.json", r.out);
  auto cg = run({"class-group", "--fan-file", path});
  CHECK(cg.code == 0);
  CHECK(has_line(cg.out, "rank=2"));

  auto fan = builtin_variety("p2").fan;
  auto back = parse_fan_json(fan_to_json(fan));
  CHECK(back.rays == fan.rays);
  CHECK(back.max_cones == fan.max_cones);

  auto bad = write_temp("tzeta_bad.json",
                        R"({"dim":2,"rays":[[2,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]],"complete":true})");
  auto e = run({"class-group", "--fan-file", bad});
  CHECK(e.code == 1);
  CHECK(error_kind(e.out) == "invalid_fan");
  CHECK(e.out.find("(2,0)") != std::string::npos);

  auto junk = write_temp("tzeta_junk.json", "{not json");
  CHECK(error_kind(run({"class-group", "--fan-file", junk}).out) == "parse_error");
  CHECK(run({"class-group", "--fan-file", "/nonexistent/fan.json"}).code == 1);
}

TEST_CASE("usage errors") {
  auto none = run({});
  CHECK(none.code == 2);
  CHECK(error_kind(none.out) == "usage");
  auto both = run({"class-group", "--variety", "p2", "--fan-file", "x.json"});
  CHECK(both.code == 2);
  auto unknown = run({"class-group", "--variety", "p9"});
  CHECK(unknown.code == 1);
  CHECK(error_kind(unknown.out) == "invalid_argument");
  auto badq = run({"zeta-coeffs", "--variety", "p2", "--q", "6"});
  CHECK(badq.code != 0);
}
