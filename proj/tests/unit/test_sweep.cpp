#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "entrench/sweep.hpp"

using namespace entrench;
using namespace entrench::sweep;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("entrench-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.geometries = {{7, 7}};
  spec.amplification = {0.5};
  spec.mixing = MixingKind::Telephoning;
  spec.mixing_levels = {1.0};
  spec.replicates = 3;
  spec.max_steps = 400;
  spec.master_seed = 12;
  return spec;
}

}  // namespace

TEST_CASE("spec files parse into full experiment specs") {
  const auto spec = parse_spec_text(
      "# demo sweep\n"
      "grid = 51x51, 101x101\n"
      "L = 2\n"
      "pa = 0.01, 0.1   # amplification axis\n"
      "mode = relocation\n"
      "mix = 0.005, 0.02\n"
      "influence = uniform, quadratic\n"
      "init = droplet\n"
      "radius = 12\n"
      "reps = 5\n"
      "max_steps = 1000\n"
      "seed = 99\n");
  spec.validate();
  CHECK(spec.geometries.size() == 2);
  CHECK(spec.geometries[1].width == 101);
  CHECK(spec.amplification == std::vector<double>{0.01, 0.1});
  CHECK(spec.mixing == MixingKind::Relocation);
  CHECK(spec.influences.size() == 2);
  CHECK(spec.init.kind == InitKind::Droplet);
  CHECK(spec.init.radius == 12.0);
  CHECK(spec.replicates == 5);
  CHECK(spec.master_seed == 99);
  CHECK(spec.cell_count() == 16);
}

TEST_CASE("spec errors carry the offending field") {
  CHECK_THROWS_WITH_AS(parse_spec_text("speed = 9\n"), "speed: unknown field", SpecError);
  CHECK_THROWS_AS(parse_spec_text("pa = fast\n"), SpecError);
  CHECK_THROWS_AS(parse_spec_text("grid = 101\n"), SpecError);
  CHECK_THROWS_AS(parse_spec_text("mode =\n"), SpecError);

  auto bad = tiny_spec();
  bad.replicates = 0;
  CHECK_THROWS_AS(bad.validate(), SpecError);
  bad = tiny_spec();
  bad.mixing_levels = {1.5};
  CHECK_THROWS_AS(bad.validate(), SpecError);
  bad = tiny_spec();
  bad.mixing = MixingKind::None;
  CHECK_THROWS_AS(bad.validate(), SpecError);  // none with level 1.0
  bad = tiny_spec();
  bad.init.kind = InitKind::Droplet;
  bad.init.radius = 10.0;
  CHECK_THROWS_AS(bad.validate(), SpecError);  // too large for 7x7
}

TEST_CASE("step budgets default by regime") {
  CHECK(default_max_steps(MixingKind::None, 0.0, 0.1) == 1'000'000);
  CHECK(default_max_steps(MixingKind::Relocation, 0.02, 0.005) == 1'000'000);
  CHECK(default_max_steps(MixingKind::Relocation, 0.02, 0.1) == 100'000);
  CHECK(default_max_steps(MixingKind::Telephoning, 1.0, 0.1) == 100'000);
}

TEST_CASE("sweep outputs are deterministic for any worker count") {
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  auto spec = tiny_spec();
  spec.workers = 1;
  const auto r1 = run_spec(spec, dir1);
  spec.workers = 4;
  const auto r2 = run_spec(spec, dir2);
  CHECK(slurp(r1.samples_csv) == slurp(r2.samples_csv));
  CHECK(slurp(r1.summary_csv) == slurp(r2.summary_csv));
  CHECK(!slurp(r1.samples_csv).empty());
}

TEST_CASE("sweeps fill every cell with the requested replicates") {
  const auto dir = fresh_dir("cells");
  auto spec = tiny_spec();
  spec.amplification = {0.3, 0.6};
  const auto result = run_spec(spec, dir);
  REQUIRE(result.cells.size() == 2);
  for (const auto& cell : result.cells) {
    CHECK(cell.samples.size() == 3);
    CHECK(cell.summary.n_total == 3);
  }
  // distinct replicate seeds within a cell
  CHECK(result.cells[0].samples[0].seed != result.cells[0].samples[1].seed);
}

TEST_CASE("analyze rebuilds the summary byte-for-byte") {
  const auto dir = fresh_dir("analyze");
  const auto result = run_spec(tiny_spec(), dir);
  const auto rebuilt = dir / "summary-rebuilt.csv";
  analyze_samples(result.samples_csv, rebuilt);
  CHECK(slurp(rebuilt) == slurp(result.summary_csv));
}

TEST_CASE("per-replicate logs are written on request") {
  const auto dir = fresh_dir("logs");
  auto spec = tiny_spec();
  spec.replicates = 2;
  spec.write_run_logs = true;
  run_spec(spec, dir);
  CHECK(std::filesystem::exists(dir / "logs" / "cell0-rep0.csv"));
  CHECK(std::filesystem::exists(dir / "logs" / "cell0-rep1.csv"));
  const auto log = slurp(dir / "logs" / "cell0-rep0.csv");
  CHECK(log.rfind("step,f_m2,f_m1,f_p1,f_p2,interface_density,consensus\n", 0) == 0);
}

TEST_CASE("presets expand to runnable specs") {
  for (const auto& name : preset_names()) {
    for (const auto& [sub_name, spec] : preset_specs(name, true)) {
      CHECK(!sub_name.empty());
      spec.validate();
    }
  }
  CHECK(preset_specs("fig10", true).size() == 3);
  CHECK(preset_specs("fig10-droplet", true).size() == 3);
  CHECK(preset_specs("fig8", false)[0].spec.replicates == 50);
  CHECK(preset_specs("fig8", true)[0].spec.replicates < 50);
  CHECK_THROWS_AS(preset_specs("fig99", false), SpecError);
}
