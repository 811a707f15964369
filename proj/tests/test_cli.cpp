#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("marg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(MARG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("cli: segment runs are byte-reproducible") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene split --height 32 --width 32 --split-col 16 --noise 4 --out " +
              q(scene)) == 0);
  REQUIRE(fs::exists(scene / "image.png"));
  REQUIRE(fs::exists(scene / "mask.png"));

  const fs::path a = tmp.path / "a", b = tmp.path / "b";
  const std::string common = "segment --input " + q(scene / "image.png") + " --seed 5 --out ";
  REQUIRE(run(common + q(a)) == 0);
  REQUIRE(run(common + q(b)) == 0);

  for (const char* f : {"region_map.png", "region_map.json", "sweep.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  // the emitted configs may differ only in where they point their output
  json ca = load_json(a / "config.json"), cb = load_json(b / "config.json");
  ca.erase("out");
  cb.erase("out");
  CHECK(ca == cb);
}

TEST_CASE("cli: rerunning from the emitted config reproduces the run") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene stripe --height 32 --width 32 --stripe-width 8 --out " + q(scene)) ==
          0);

  const fs::path a = tmp.path / "a", b = tmp.path / "b";
  REQUIRE(run("segment --input " + q(scene / "image.png") +
              " --topology cartesian --seed 9 --out " + q(a)) == 0);
  REQUIRE(run("segment --config " + q(a / "config.json") + " --out " + q(b)) == 0);
  CHECK(slurp(a / "region_map.png") == slurp(b / "region_map.png"));
  CHECK(slurp(a / "region_map.json") == slurp(b / "region_map.json"));
}

TEST_CASE("cli: fixed thresholds switch the sweep off") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene flat --height 16 --width 16 --out " + q(scene)) == 0);

  const fs::path out = tmp.path / "out";
  REQUIRE(run("segment --input " + q(scene / "image.png") +
              " --topology cartesian --no-merge --fixed-tau 12,8 --out " + q(out)) == 0);
  CHECK(!fs::exists(out / "sweep.json"));

  const json cfg = load_json(out / "config.json");
  CHECK(cfg.at("use_adaptive") == false);
  CHECK(cfg.at("do_merge") == false);
  CHECK(cfg.at("grow").at("topology") == "cartesian");
  CHECK(cfg.at("grow").at("tau_l") == 12);
  CHECK(cfg.at("grow").at("tau_s") == 8);

  const json manifest = load_json(out / "region_map.json");
  CHECK(manifest.at("n_regions") == 1);
  CHECK(manifest.at("coverage") == 1.0);
}

TEST_CASE("cli: flags passed next to --config win") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene flat --height 16 --width 16 --out " + q(scene)) == 0);

  const fs::path a = tmp.path / "a";
  REQUIRE(run("segment --input " + q(scene / "image.png") +
              " --fixed-tau 6,6 --topology cartesian --seed 77 --out " + q(a)) == 0);

  const fs::path b = tmp.path / "b";
  REQUIRE(run("segment --config " + q(a / "config.json") + " --topology modular --out " + q(b)) ==
          0);
  const json cfg = load_json(b / "config.json");
  CHECK(cfg.at("grow").at("topology") == "modular");   // overridden
  CHECK(cfg.at("grow").at("tau_l") == 6);              // carried from the file
  CHECK(cfg.at("grow").at("prng_seed") == 77);
  CHECK(cfg.at("use_adaptive") == false);
}

TEST_CASE("cli: sweep emits the full report") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene split --height 24 --width 24 --split-col 12 --out " + q(scene)) == 0);

  const fs::path out = tmp.path / "sweep";
  REQUIRE(run("sweep --input " + q(scene / "image.png") + " --csv --out " + q(out)) == 0);
  const json rep = load_json(out / "sweep.json");
  CHECK(rep.at("seed_sweep").is_array());
  CHECK(rep.at("seed_sweep").size() >= 3);
  CHECK(rep.at("local_sweep").is_array());
  CHECK(rep.at("chosen").contains("tau_s"));
  CHECK(rep.at("seed_converged").is_boolean());

  const std::string csv = slurp(out / "seed_sweep.csv");
  CHECK(csv.rfind("tau,coverage,n_regions\n", 0) == 0);
  CHECK(fs::exists(out / "local_sweep.csv"));
}

TEST_CASE("cli: eval writes both report flavors") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene split --height 24 --width 24 --split-col 12 --out " + q(scene)) == 0);

  const fs::path out = tmp.path / "eval";
  REQUIRE(run("eval --input " + q(scene / "image.png") + " --mask " + q(scene / "mask.png") +
              " --metric iou --out " + q(out)) == 0);
  const json rep = load_json(out / "eval.json");
  CHECK(rep.at("metric") == "iou");
  CHECK(rep.at("weighted").at("image_score").is_number());
  CHECK(rep.at("weighted").at("n_regions").is_number());
  for (const char* k : {"accuracy", "precision", "recall", "f1", "miou"})
    CHECK(rep.at("oracle").at(k).is_number());
}

TEST_CASE("cli: regionmix exports a dataset") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene split --height 24 --width 24 --split-col 12 --out " + q(scene)) == 0);

  const fs::path out = tmp.path / "mix";
  REQUIRE(run("regionmix --input " + q(scene / "image.png") + " --mask " + q(scene / "mask.png") +
              " --samples 5 --seed 3 --out " + q(out)) == 0);
  REQUIRE(fs::exists(out / "manifest.jsonl"));
  REQUIRE(fs::exists(out / "labels.json"));
  CHECK(fs::exists(out / "mix_00000.png"));

  const json labels = load_json(out / "labels.json");
  REQUIRE(labels.is_array());
  REQUIRE(!labels.empty());
  for (const auto& e : labels) {
    CHECK(e.contains("id"));
    CHECK(e.contains("label"));
    CHECK(e.at("purity").is_number());
  }

  std::ifstream manifest(out / "manifest.jsonl");
  std::string line;
  REQUIRE(std::getline(manifest, line));
  CHECK(json::parse(line).at("n_samples") == 5);
  int n_lines = 0;
  while (std::getline(manifest, line)) ++n_lines;
  CHECK(n_lines == 5);
}

TEST_CASE("cli: bad invocations fail loudly") {
  TempDir tmp;
  CHECK(run("segment --input " + q(tmp.path / "nope.png") + " --out " + q(tmp.path / "o")) != 0);
  CHECK(run("segment") != 0);                       // --input is required
  CHECK(run("nonsense") != 0);                      // unknown subcommand
  CHECK(run("synth --scene blob --out " + q(tmp.path / "s")) != 0);
  CHECK(run("eval --input " + q(tmp.path / "x.png") + " --out " + q(tmp.path / "e")) != 0);
}

TEST_CASE("cli: merge reports its components") {
  TempDir tmp;
  const fs::path scene = tmp.path / "scene";
  REQUIRE(run("synth --scene stripe --height 32 --width 32 --stripe-width 10 --bg-gradient "
              "--out " +
              q(scene)) == 0);

  const fs::path out = tmp.path / "merged";
  REQUIRE(run("merge --input " + q(scene / "image.png") + " --out " + q(out)) == 0);
  const json rep = load_json(out / "merge.json");
  CHECK(rep.at("overlap_threshold") == 0.1);
  REQUIRE(rep.at("components").is_array());
  for (const auto& comp : rep.at("components")) {
    CHECK(comp.at("id").is_number());
    CHECK(comp.at("members").is_array());
    CHECK(!comp.at("members").empty());
  }
  CHECK(fs::exists(out / "region_map.png"));
}
