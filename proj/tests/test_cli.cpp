// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "adascale/geometry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli() { return ADASCALE_CLI; }

fs::path work(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "adascale_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code = -1;
  std::string err;
};

Result run(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + cli() + "\" " + args + " 2>\"" + err.string() + "\" >/dev/null";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

void save(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("synth with zero words writes an empty scene") {
  const fs::path d = work("empty");
  REQUIRE(run("synth --n-words 0 --out " + q(d / "s.json"), d).code == 0);
  const json s = load(d / "s.json");
  CHECK(s["schema_version"] == "1.0");
  CHECK(s["words"].empty());
}

TEST_CASE("synth is byte-reproducible per seed") {
  const fs::path d = work("repro");
  REQUIRE(run("synth --seed 11 --out " + q(d / "a.json"), d).code == 0);
  REQUIRE(run("synth --seed 11 --out " + q(d / "b.json"), d).code == 0);
  REQUIRE(run("synth --seed 12 --out " + q(d / "c.json"), d).code == 0);
  CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
  CHECK(slurp(d / "a.json") != slurp(d / "c.json"));
}

TEST_CASE("synth density targets the text area fraction") {
  const fs::path d = work("density");
  REQUIRE(run("synth --n-words 50 --density 0.03 --width 2000 --height 1500 --seed 3 --out " + q(d / "s.json"), d)
              .code == 0);
  const json s = load(d / "s.json");
  CHECK(s["words"].size() == 50);
  double area = 0;
  for (const json& w : s["words"]) {
    std::vector<adascale::Point2> pts;
    for (const json& p : w["quad"]) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    area += adascale::Polygon(pts).area();
  }
  CHECK(area / (2000.0 * 1500.0) == doctest::Approx(0.03).epsilon(0.34));
}

TEST_CASE("run on an empty scene yields no detections") {
  const fs::path d = work("run_empty");
  REQUIRE(run("synth --n-words 0 --out " + q(d / "s.json"), d).code == 0);
  for (const char* mode : {"single", "adaptive"}) {
    REQUIRE(run("run --scene " + q(d / "s.json") + " --mode " + mode + " --out-dir " + q(d / mode), d).code == 0);
    CHECK(load(d / mode / "detections.json")["detections"].empty());
  }
}

TEST_CASE("adaptive recovers words a coarse single pass misses") {
  const fs::path d = work("pairs");
  REQUIRE(run("synth --pairs --seed 1 --out " + q(d / "s.json"), d).code == 0);
  REQUIRE(run("run --scene " + q(d / "s.json") + " --mode single --long-side 720 --out-dir " + q(d / "single"), d)
              .code == 0);
  REQUIRE(run("run --scene " + q(d / "s.json") + " --mode adaptive --out-dir " + q(d / "adaptive"), d).code == 0);
  for (const char* m : {"single", "adaptive"})
    REQUIRE(run("eval --detections " + q(d / m / "detections.json") + " --scene " + q(d / "s.json") + " --out " +
                    q(d / m / "report.json"),
                d)
                .code == 0);
  const double fs_single = load(d / "single" / "report.json")["scores"]["f_score"];
  const double fs_adaptive = load(d / "adaptive" / "report.json")["scores"]["f_score"];
  CHECK(fs_adaptive > fs_single);
  CHECK(fs_adaptive >= 0.95);
}

TEST_CASE("corrupt and mismatched inputs exit with code 2") {
  const fs::path d = work("corrupt");
  std::ofstream(d / "bad.json") << "{\"schema_version\": \"1.0\", \"words\": [";
  const Result r = run("run --scene " + q(d / "bad.json") + " --out-dir " + q(d / "o"), d);
  CHECK(r.code == 2);
  CHECK(r.err.find("byte") != std::string::npos);

  save(d / "v2.json", json{{"schema_version", "2.0"}, {"canvas_width", 10}, {"canvas_height", 10}, {"words", json::array()}});
  const Result v = run("run --scene " + q(d / "v2.json") + " --out-dir " + q(d / "o"), d);
  CHECK(v.code == 2);
  CHECK(v.err.find("schema_version") != std::string::npos);

  CHECK(run("run --scene " + q(d / "missing.json") + " --out-dir " + q(d / "o"), d).code == 2);
  CHECK(run("run --bogus-flag", d).code == 2);
}

TEST_CASE("unknown config fields exit with code 3") {
  const fs::path d = work("config");
  REQUIRE(run("synth --n-words 2 --out " + q(d / "s.json"), d).code == 0);
  save(d / "c.json", json{{"schema_version", "1.0"}, {"pipeline", {{"frist_pass_long_side", 720}}}});
  const Result r = run("run --scene " + q(d / "s.json") + " --config " + q(d / "c.json") + " --out-dir " + q(d / "o"), d);
  CHECK(r.code == 3);
  CHECK(r.err.find("frist_pass_long_side") != std::string::npos);
  CHECK(run("run --scene " + q(d / "s.json") + " --mode triple --out-dir " + q(d / "o"), d).code == 3);
}

TEST_CASE("eval scores perfect, empty and partial detection sets") {
  const fs::path d = work("eval");
  REQUIRE(run("synth --n-words 4 --seed 5 --out " + q(d / "s.json"), d).code == 0);
  const json scene = load(d / "s.json");

  auto dets_from = [&](std::size_t n) {
    json dets = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<adascale::Point2> pts;
      for (const json& p : scene["words"][i]["quad"]) pts.push_back({p[0].get<double>(), p[1].get<double>()});
      const adascale::RotatedRect r = adascale::min_area_rect(pts);
      dets.push_back({{"id", i}, {"confidence", 1.0}, {"cx", r.cx()}, {"cy", r.cy()}, {"width", r.width()},
                      {"height", r.height()}, {"angle", r.angle()}});
    }
    return json{{"schema_version", "1.0"}, {"detections", dets}};
  };
  auto f_of = [&](const json& dets) {
    save(d / "d.json", dets);
    REQUIRE(run("eval --detections " + q(d / "d.json") + " --scene " + q(d / "s.json") + " --out " + q(d / "r.json"),
                d)
                .code == 0);
    return load(d / "r.json")["scores"];
  };
  CHECK(f_of(dets_from(4))["f_score"] == doctest::Approx(1.0));
  CHECK(f_of(dets_from(0))["f_score"] == 0.0);
  const json half = f_of(dets_from(2));
  CHECK(half["recall"] == doctest::Approx(0.5));
  CHECK(half["precision"] == doctest::Approx(1.0));

  json dup = dets_from(2);
  dup["detections"][1]["id"] = 0;
  save(d / "dup.json", dup);
  CHECK(run("eval --detections " + q(d / "dup.json") + " --scene " + q(d / "s.json") + " --out " + q(d / "r.json"), d)
            .code == 2);
}

TEST_CASE("pack output is stable across runs") {
  const fs::path d = work("pack");
  json items = json::array();
  for (int i = 0; i < 30; ++i) items.push_back({{"id", i}, {"width", 10 + (i * 37) % 90}, {"height", 8 + (i * 13) % 30}});
  save(d / "items.json", json{{"schema_version", "1.0"}, {"items", items}});
  REQUIRE(run("pack --items " + q(d / "items.json") + " --out " + q(d / "a.json"), d).code == 0);
  REQUIRE(run("pack --items " + q(d / "items.json") + " --out " + q(d / "b.json"), d).code == 0);
  CHECK(slurp(d / "a.json") == slurp(d / "b.json"));
  const json layout = load(d / "a.json");
  std::size_t placed = 0;
  for (const json& b : layout["bins"]) placed += b["placements"].size();
  CHECK(placed == 30);

  save(d / "huge.json", json{{"schema_version", "1.0"}, {"items", {{{"id", 0}, {"width", 9000}, {"height", 9}}}}});
  CHECK(run("pack --items " + q(d / "huge.json") + " --out " + q(d / "c.json"), d).code == 2);
}

TEST_CASE("loss between identical map sets is zero") {
  const fs::path d = work("loss");
  REQUIRE(run("synth --n-words 6 --seed 2 --out " + q(d / "s.json"), d).code == 0);
  REQUIRE(run("labels --scene " + q(d / "s.json") + " --long-side 640 --out-dir " + q(d / "gt"), d).code == 0);
  REQUIRE(run("loss --pred " + q(d / "gt") + " --gt " + q(d / "gt") + " --out " + q(d / "l.json"), d).code == 0);
  CHECK(load(d / "l.json")["total"] == 0.0);

  REQUIRE(run("labels --scene " + q(d / "s.json") + " --long-side 640 --predict --out-dir " + q(d / "pred"), d).code ==
          0);
  REQUIRE(run("loss --pred " + q(d / "pred") + " --gt " + q(d / "gt") + " --out " + q(d / "l2.json"), d).code == 0);
  CHECK(load(d / "l2.json")["total"].get<double>() > 0.0);

  REQUIRE(run("labels --scene " + q(d / "s.json") + " --long-side 320 --out-dir " + q(d / "small"), d).code == 0);
  CHECK(run("loss --pred " + q(d / "small") + " --gt " + q(d / "gt") + " --out " + q(d / "l3.json"), d).code == 2);
}

TEST_CASE("eval appends one csv row per method") {
  const fs::path d = work("csv");
  REQUIRE(run("synth --n-words 3 --seed 4 --out " + q(d / "s.json"), d).code == 0);
  REQUIRE(run("run --scene " + q(d / "s.json") + " --out-dir " + q(d / "r"), d).code == 0);
  for (const char* m : {"first", "second"})
    REQUIRE(run("eval --detections " + q(d / "r" / "detections.json") + " --scene " + q(d / "s.json") + " --stats " +
                    q(d / "r" / "stats.json") + " --method " + m + " --csv " + q(d / "t.csv") + " --out " +
                    q(d / "e.json"),
                d)
                .code == 0);
  std::istringstream in(slurp(d / "t.csv"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "method,R,P,F,pixels_pass1,pixels_pass2,pixels_total,reduction");
  CHECK(lines[1].rfind("first,", 0) == 0);
  CHECK(lines[2].rfind("second,", 0) == 0);
  CHECK(lines[1].substr(5) == lines[2].substr(6));
}
