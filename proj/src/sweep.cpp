#include "entrench/sweep.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "entrench/rng.hpp"
#include "format_util.hpp"

namespace entrench::sweep {

SpecError::SpecError(std::string field_, const std::string& message)
    : std::runtime_error(field_ + ": " + message), field(std::move(field_)) {}

void ExperimentSpec::validate() const {
  if (geometries.empty()) throw SpecError("grid", "at least one grid size is required");
  for (const auto& g : geometries)
    if (g.width < 3 || g.height < 3)
      throw SpecError("grid", "grids must be at least 3x3");
  if (spectrum_bound < 1 || spectrum_bound > 100)
    throw SpecError("L", "spectrum bound must lie in [1, 100]");
  if (amplification.empty()) throw SpecError("pa", "at least one amplification value is required");
  for (const double pa : amplification)
    if (!(pa >= 0.0 && pa <= 1.0)) throw SpecError("pa", "values must lie in [0, 1]");
  if (mixing_levels.empty()) throw SpecError("mix", "at least one mixing level is required");
  for (const double mix : mixing_levels) {
    if (!(mix >= 0.0 && mix <= 1.0)) throw SpecError("mix", "values must lie in [0, 1]");
    if (mixing == MixingKind::None && mix != 0.0)
      throw SpecError("mix", "mixing levels must be 0 when mode = none");
  }
  if (influences.empty())
    throw SpecError("influence", "at least one influence kind is required");
  if (replicates < 1) throw SpecError("reps", "at least one replicate is required");
  if (init.kind == InitKind::Droplet) {
    if (init.radius < 0) throw SpecError("radius", "droplet radius must be nonnegative");
    for (const auto& g : geometries)
      if (2 * init.radius >= std::min(g.width, g.height))
        throw SpecError("radius", "droplet radius too large for grid");
  }
  if (outer_threshold <= 0.5 || outer_threshold > 1.0)
    throw SpecError("outer_threshold", "must lie in (0.5, 1]");
  if (center_threshold <= 0.5 || center_threshold > 1.0)
    throw SpecError("center_threshold", "must lie in (0.5, 1]");
  if (workers < 0) throw SpecError("workers", "must be nonnegative");
}

std::uint64_t default_max_steps(MixingKind kind, double mix, double pa) {
  const bool no_mixing = kind == MixingKind::None || mix == 0.0;
  const bool low_amplification = pa <= 0.01;
  return no_mixing || low_amplification ? 1'000'000 : 100'000;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& field, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SpecError(field, "cannot parse number '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& field, const std::string& value) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    throw SpecError(field, "cannot parse integer '" + value + "'");
  return v;
}

TorusGeometry parse_grid(const std::string& field, const std::string& value) {
  const auto x = value.find('x');
  if (x == std::string::npos) throw SpecError(field, "expected WxH, got '" + value + "'");
  return {static_cast<std::uint32_t>(parse_u64(field, trim(value.substr(0, x)))),
          static_cast<std::uint32_t>(parse_u64(field, trim(value.substr(x + 1))))};
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw SpecError(stripped, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (value.empty()) throw SpecError(key, "missing value");

    if (key == "grid") {
      spec.geometries.clear();
      for (const auto& item : split_list(value)) spec.geometries.push_back(parse_grid(key, item));
    } else if (key == "L") {
      spec.spectrum_bound = static_cast<int>(parse_u64(key, value));
    } else if (key == "pa") {
      spec.amplification.clear();
      for (const auto& item : split_list(value)) spec.amplification.push_back(parse_double(key, item));
    } else if (key == "mode") {
      try {
        spec.mixing = mixing_kind_from_string(value);
      } catch (const std::exception& e) {
        throw SpecError(key, e.what());
      }
    } else if (key == "mix") {
      spec.mixing_levels.clear();
      for (const auto& item : split_list(value)) spec.mixing_levels.push_back(parse_double(key, item));
    } else if (key == "influence") {
      spec.influences.clear();
      for (const auto& item : split_list(value)) {
        try {
          spec.influences.push_back(influence_kind_from_string(item));
        } catch (const std::exception& e) {
          throw SpecError(key, e.what());
        }
      }
    } else if (key == "init") {
      if (value == "uniform")
        spec.init.kind = InitKind::Uniform;
      else if (value == "droplet")
        spec.init.kind = InitKind::Droplet;
      else
        throw SpecError(key, "expected uniform or droplet, got '" + value + "'");
    } else if (key == "radius") {
      spec.init.radius = parse_double(key, value);
    } else if (key == "reps") {
      spec.replicates = static_cast<std::uint32_t>(parse_u64(key, value));
    } else if (key == "max_steps") {
      spec.max_steps = parse_u64(key, value);
    } else if (key == "seed") {
      spec.master_seed = parse_u64(key, value);
    } else if (key == "workers") {
      spec.workers = static_cast<int>(parse_u64(key, value));
    } else if (key == "outer_threshold") {
      spec.outer_threshold = parse_double(key, value);
    } else if (key == "center_threshold") {
      spec.center_threshold = parse_double(key, value);
    } else if (key == "logs") {
      if (value == "true" || value == "1")
        spec.write_run_logs = true;
      else if (value == "false" || value == "0")
        spec.write_run_logs = false;
      else
        throw SpecError(key, "expected true/false");
    } else {
      throw SpecError(key, "unknown field");
    }
  }
  return spec;
}

ExperimentSpec parse_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("file", "cannot open spec file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_text(buffer.str());
}

namespace {

struct JobResult {
  ConsensusSample sample;
  std::vector<StepMetrics> metrics;  // only when logs are requested
};

void append_cell_fields(std::string& line, const CellKey& key, const ExperimentSpec& spec) {
  using detail::append_number;
  append_number(line, static_cast<std::uint64_t>(key.geometry.width));
  line += ',';
  append_number(line, static_cast<std::uint64_t>(key.geometry.height));
  line += ',';
  append_number(line, static_cast<std::uint64_t>(spec.spectrum_bound));
  line += ',';
  line += to_string(key.influence);
  line += ',';
  append_number(line, key.pa);
  line += ',';
  line += to_string(spec.mixing);
  line += ',';
  append_number(line, key.mix);
  line += ',';
  line += spec.init.kind == InitKind::Droplet ? "droplet" : "uniform";
}

constexpr std::string_view kCellHeader = "width,height,L,influence,pa,mode,mix,init";

}  // namespace

SweepResult run_spec(const ExperimentSpec& spec, const std::filesystem::path& output_dir) {
  spec.validate();
  std::filesystem::create_directories(output_dir);

  std::vector<CellKey> cells;
  for (const auto& geom : spec.geometries)
    for (const auto infl : spec.influences)
      for (const double pa : spec.amplification)
        for (const double mix : spec.mixing_levels)
          cells.push_back({geom, infl, pa, mix});

  // hash-derived replicate seeds; collisions are a hard error
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t cell = 0; cell < cells.size(); ++cell)
    for (std::uint32_t rep = 0; rep < spec.replicates; ++rep)
      if (!seen.insert(rng::derive_seed(spec.master_seed, cell, rep)).second)
        throw std::runtime_error("replicate seed collision; choose a different master seed");

  struct Job {
    std::size_t cell;
    std::uint32_t rep;
  };
  std::vector<Job> jobs;
  jobs.reserve(cells.size() * spec.replicates);
  for (std::size_t cell = 0; cell < cells.size(); ++cell)
    for (std::uint32_t rep = 0; rep < spec.replicates; ++rep) jobs.push_back({cell, rep});

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> cursor{0};
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      spec.workers > 0 ? static_cast<unsigned>(spec.workers) : hardware;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job job = jobs[i];
      const CellKey& key = cells[job.cell];
      const std::uint64_t seed = rng::derive_seed(spec.master_seed, job.cell, job.rep);

      ModelParams params;
      params.spectrum_bound = spec.spectrum_bound;
      params.amplification = key.pa;
      params.influence = key.influence;
      params.mixing = {spec.mixing, spec.mixing == MixingKind::None ? 0.0 : key.mix};
      params.geometry = key.geometry;
      params.seed = seed;

      Configuration init =
          spec.init.kind == InitKind::Droplet
              ? droplet_init(key.geometry, spec.spectrum_bound, spec.init.radius)
              : uniform_init(key.geometry, spec.spectrum_bound, seed);

      RunOptions options;
      options.max_steps = spec.max_steps > 0
                              ? spec.max_steps
                              : default_max_steps(spec.mixing, key.mix, key.pa);
      options.record = spec.write_run_logs;
      options.record_interface = spec.write_run_logs;

      RunResult run_result = run(params, std::move(init), options);

      ConsensusSample sample;
      sample.seed = seed;
      sample.time = run_result.consensus_step;
      sample.budget = options.max_steps;
      sample.final_label = classify(histogram(run_result.final_config), spec.outer_threshold,
                                    spec.center_threshold);
      results[i].sample = sample;
      if (spec.write_run_logs) results[i].metrics = std::move(run_result.metrics);
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  out.cells.resize(cells.size());
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    out.cells[cell].cell_index = cell;
    out.cells[cell].key = cells[cell];
  }
  for (std::size_t i = 0; i < jobs.size(); ++i)
    out.cells[jobs[i].cell].samples.push_back(results[i].sample);
  for (auto& cell : out.cells) cell.summary = summarize(cell.samples);

  using detail::append_number;
  out.samples_csv = output_dir / "samples.csv";
  {
    std::ofstream file(out.samples_csv);
    file << "cell," << kCellHeader << ",replicate,seed,time,censored,budget,label\n";
    for (const auto& cell : out.cells) {
      for (std::size_t rep = 0; rep < cell.samples.size(); ++rep) {
        const auto& s = cell.samples[rep];
        std::string line;
        append_number(line, static_cast<std::uint64_t>(cell.cell_index));
        line += ',';
        append_cell_fields(line, cell.key, spec);
        line += ',';
        append_number(line, static_cast<std::uint64_t>(rep));
        line += ',';
        append_number(line, s.seed);
        line += ',';
        if (s.time) append_number(line, *s.time);
        line += s.censored() ? ",1," : ",0,";
        append_number(line, s.budget);
        line += ',';
        line += to_string(s.final_label);
        line += '\n';
        file << line;
      }
    }
  }

  out.summary_csv = output_dir / "summary.csv";
  {
    std::ofstream file(out.summary_csv);
    file << "cell," << kCellHeader << ",n,mean,median,stderr,censored,lower_bound_only\n";
    for (const auto& cell : out.cells) {
      std::string line;
      append_number(line, static_cast<std::uint64_t>(cell.cell_index));
      line += ',';
      append_cell_fields(line, cell.key, spec);
      line += ',';
      append_number(line, static_cast<std::uint64_t>(cell.summary.n_total));
      line += ',';
      if (!cell.summary.lower_bound_only) {
        append_number(line, cell.summary.mean);
        line += ',';
        append_number(line, cell.summary.median);
        line += ',';
        append_number(line, cell.summary.stderr_mean);
      } else {
        line += ",,";
      }
      line += ',';
      append_number(line, static_cast<std::uint64_t>(cell.summary.n_censored));
      line += cell.summary.lower_bound_only ? ",1\n" : ",0\n";
      file << line;
    }
  }

  if (spec.write_run_logs) {
    const auto log_dir = output_dir / "logs";
    std::filesystem::create_directories(log_dir);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      RunResult shim;
      shim.metrics = std::move(results[i].metrics);
      std::ostringstream name;
      name << "cell" << jobs[i].cell << "-rep" << jobs[i].rep << ".csv";
      std::ofstream file(log_dir / name.str());
      write_run_log(file, shim, spec.spectrum_bound);
    }
  }

  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> mixing_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(0.005 * i);
  return grid;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig5", "fig6", "fig8", "fig9", "fig10", "fig12"};
}

std::vector<NamedSpec> preset_specs(std::string_view name, bool desk) {
  const auto both_modes = [&](ExperimentSpec base, std::string stem) {
    base.mixing = MixingKind::Relocation;
    ExperimentSpec tel = base;
    tel.mixing = MixingKind::Telephoning;
    return std::vector<NamedSpec>{{stem + "-relocation", base}, {stem + "-telephoning", tel}};
  };

  if (name == "fig5") {
    ExperimentSpec spec;
    spec.geometries = {desk ? TorusGeometry{51, 51} : TorusGeometry{101, 101}};
    spec.mixing = MixingKind::Telephoning;
    spec.mixing_levels = {1.0};
    spec.amplification = {0.1, 0.01, 0.001};
    spec.replicates = desk ? 8 : 20;
    spec.write_run_logs = true;
    return {{"fig5", spec}};
  }
  if (name == "fig6") {
    ExperimentSpec spec;
    if (desk) {
      spec.geometries = {TorusGeometry{51, 51}};
      spec.amplification = {0.005, 0.05, 0.1, 0.15};
      spec.mixing_levels = {0.005, 0.05, 0.1, 0.15};
      spec.replicates = 10;
    } else {
      spec.amplification = mixing_grid();
      spec.mixing_levels = mixing_grid();
      spec.replicates = 50;
    }
    return both_modes(spec, "fig6");
  }
  if (name == "fig8") {
    ExperimentSpec spec;
    spec.amplification = {0.01, 0.1};
    if (desk) {
      spec.mixing_levels = {0.005, 0.01, 0.03, 0.05, 0.1, 0.15};
      spec.replicates = 10;
    } else {
      spec.mixing_levels = mixing_grid();
      spec.replicates = 50;
    }
    return both_modes(spec, "fig8");
  }
  if (name == "fig9") {
    ExperimentSpec spec;
    spec.geometries = {TorusGeometry{51, 51}, TorusGeometry{101, 101}, TorusGeometry{201, 201}};
    if (!desk) spec.geometries.push_back(TorusGeometry{301, 301});
    spec.mixing = MixingKind::Telephoning;
    spec.mixing_levels = {1.0};
    spec.amplification = {0.1, 0.01};
    spec.replicates = desk ? 10 : 25;
    return {{"fig9", spec}};
  }
  if (name == "fig10" || name == "fig10-droplet") {
    ExperimentSpec base;
    base.init.kind = InitKind::Droplet;
    base.init.radius = 25.0;
    base.amplification = {0.001, 0.01};
    base.replicates = desk ? 4 : 10;
    base.write_run_logs = true;
    base.mixing_levels = {0.02};
    auto specs = both_modes(base, "fig10");
    ExperimentSpec none = base;
    none.mixing = MixingKind::None;
    none.mixing_levels = {0.0};
    specs.push_back({"fig10-none", none});
    return specs;
  }
  if (name == "fig12") {
    ExperimentSpec spec;
    spec.mixing = MixingKind::Relocation;
    spec.influences = {InfluenceKind::Uniform, InfluenceKind::Linear, InfluenceKind::Quadratic,
                       InfluenceKind::CoLinear, InfluenceKind::CoQuadratic};
    spec.amplification = {0.01, 0.1};
    if (desk) {
      spec.mixing_levels = {0.005, 0.02, 0.05, 0.1};
      spec.replicates = 8;
    } else {
      spec.mixing_levels = mixing_grid();
      spec.replicates = 50;
    }
    return {{"fig12", spec}};
  }
  throw SpecError("preset", "unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void analyze_samples(const std::filesystem::path& samples_csv,
                     const std::filesystem::path& summary_csv) {
  std::ifstream in(samples_csv);
  if (!in) throw std::runtime_error("cannot open samples file " + samples_csv.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("samples file is empty");
  const auto header = split_csv_row(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"cell", "time", "censored", "budget", "label"})
    if (!col.count(need))
      throw std::runtime_error(std::string("samples file missing column ") + need);

  struct Group {
    std::string params;  // verbatim cell-description fields
    std::vector<ConsensusSample> samples;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;

  const std::size_t cell_col = col["cell"], time_col = col["time"], cens_col = col["censored"],
                    budget_col = col["budget"], label_col = col["label"];
  const std::size_t param_end = col.count("replicate") ? col["replicate"] : cell_col + 1;

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv_row(line);
    const std::string& cell = fields.at(cell_col);
    if (!groups.count(cell)) {
      order.push_back(cell);
      std::string params;
      for (std::size_t i = cell_col; i < param_end; ++i) {
        if (i > cell_col) params += ',';
        params += fields.at(i);
      }
      groups[cell].params = params;
    }
    ConsensusSample s;
    s.budget = parse_u64("budget", fields.at(budget_col));
    if (fields.at(cens_col) == "1") {
      s.time.reset();
    } else {
      s.time = parse_u64("time", fields.at(time_col));
    }
    const std::string& label = fields.at(label_col);
    s.final_label = label == "consensus"  ? Label::Consensus
                    : label == "polarized" ? Label::Polarized
                    : label == "centered"  ? Label::Centered
                                           : Label::Mixed;
    groups[cell].samples.push_back(s);
  }

  std::ofstream out(summary_csv);
  if (!out) throw std::runtime_error("cannot open summary file " + summary_csv.string());
  std::string head = "cell";
  for (std::size_t i = cell_col + 1; i < param_end; ++i) head += ',' + header[i];
  out << head << ",n,mean,median,stderr,censored,lower_bound_only\n";
  using detail::append_number;
  for (const auto& cell : order) {
    const Group& group = groups[cell];
    const SampleSummary summary = summarize(group.samples);
    std::string row = group.params;
    row += ',';
    append_number(row, static_cast<std::uint64_t>(summary.n_total));
    row += ',';
    if (!summary.lower_bound_only) {
      append_number(row, summary.mean);
      row += ',';
      append_number(row, summary.median);
      row += ',';
      append_number(row, summary.stderr_mean);
    } else {
      row += ",,";
    }
    row += ',';
    append_number(row, static_cast<std::uint64_t>(summary.n_censored));
    row += summary.lower_bound_only ? ",1\n" : ",0\n";
    out << row;
  }
}

}  // namespace entrench::sweep
