// Command-line front end: assess, sweep, kde, converge, sample, synth, report.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "landbayes/bayes_metrics.hpp"
#include "landbayes/format.hpp"
#include "landbayes/kde.hpp"
#include "landbayes/raster.hpp"
#include "landbayes/report.hpp"
#include "landbayes/runs_io.hpp"
#include "landbayes/sampling.hpp"
#include "landbayes/synth.hpp"

namespace fs = std::filesystem;
using namespace landbayes;

namespace {

struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> convention;
  std::optional<std::string> alpha_grid;
  std::optional<double> bandwidth;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Job config file (key = value)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--out", o.out, "Output directory (or file, per command)");
  cmd->add_option("--convention", o.convention,
                  "paper | standard | paper,standard");
  cmd->add_option("--alpha-grid", o.alpha_grid, "Comma-separated alpha values");
  cmd->add_option("--bandwidth", o.bandwidth, "KDE bandwidth (default Silverman)")
      ->check(CLI::PositiveNumber);
}

// For subcommands other than report, --config supplies defaults for the
// common flags; flags given on the command line win. Keys that only a job
// understands (run, threshold, ...) are ignored here.
void apply_config_defaults(CommonOptions& o) {
  if (!o.config) return;
  std::ifstream in(*o.config);
  if (!in) throw std::runtime_error("cannot open config " + *o.config);
  const fs::path base = fs::path(*o.config).parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(std::string_view(line).substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key == "seed" && !o.seed) {
      const auto seed = parse_real(value);
      if (!seed || *seed < 0 || *seed != std::floor(*seed)) {
        throw ParseError(line_no, "seed must be a non-negative integer");
      }
      o.seed = static_cast<std::uint64_t>(*seed);
    } else if (key == "out" && !o.out) {
      const fs::path out(value);
      o.out = (out.is_absolute() ? out : base / out).string();
    } else if (key == "convention" && !o.convention) {
      o.convention = value;
    } else if (key == "alpha_grid" && !o.alpha_grid) {
      o.alpha_grid = value;
    } else if (key == "bandwidth" && !o.bandwidth) {
      const auto h = parse_real(value);
      if (!h || !(*h > 0.0)) throw ParseError(line_no, "bandwidth must be > 0");
      o.bandwidth = *h;
    }
  }
}

std::vector<Convention> conventions_of(const CommonOptions& o) {
  std::vector<Convention> out;
  for (const auto& c : split(o.convention.value_or("paper"), ',')) {
    out.push_back(parse_convention(trim(c)));
  }
  return out;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::optional<std::string>& path) {
    if (path) {
      if (fs::path(*path).has_parent_path()) {
        fs::create_directories(fs::path(*path).parent_path());
      }
      file_.open(*path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + *path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian accuracy assessment of binary land-change predictions"};
  app.require_subcommand(1);

  // assess / sweep
  CommonOptions assess_opts;
  AssessmentInput assess_input_spec;
  std::string sim_path, score_path, obs_path, excl_path, threshold = "match";
  std::string prevalence_text = "0.5";
  auto* assess = app.add_subcommand("assess", "Confusion matrix, rates and Bayes metrics of one map pair");
  auto* sweep = app.add_subcommand("sweep", "PPV/NPV over a prevalence grid for one map pair");
  std::size_t sweep_points = 101;
  for (auto* cmd : {assess, sweep}) {
    add_common(cmd, assess_opts);
    auto* sim = cmd->add_option("--sim", sim_path, "Simulated 0/1 grid");
    auto* scores = cmd->add_option("--scores", score_path, "Score grid in [0,1]");
    sim->excludes(scores);
    cmd->add_option("--obs", obs_path, "Observed 0/1 change grid")->required();
    cmd->add_option("--exclusion", excl_path, "Exclusion grid (nonzero = excluded)");
    cmd->add_option("--threshold", threshold, "match | value:<t> | quantity:<n>");
    cmd->add_option("--box-id", assess_input_spec.box_id, "Box id for output rows");
    cmd->add_option("--cycle", assess_input_spec.cycle, "Training cycle for output rows");
  }
  assess->add_option("--prevalence", prevalence_text, "Prevalence in [0,1] or 'observed'");
  sweep->add_option("--points", sweep_points, "Grid points on [0,1]")->check(CLI::Range(2, 100000));

  // kde
  CommonOptions kde_opts;
  std::string kde_input;
  double kde_lo = 0.0, kde_hi = 1.0;
  auto* kde = app.add_subcommand("kde", "Epanechnikov densities of pos/neg samples and their crossing");
  add_common(kde, kde_opts);
  kde->add_option("--input", kde_input, "CSV of label,value with label in {pos,neg}")->required();
  kde->add_option("--lo", kde_lo, "Search interval lower bound");
  kde->add_option("--hi", kde_hi, "Search interval upper bound");

  // converge
  CommonOptions conv_opts;
  std::string runs_path, fallback = "mean_variance";
  auto* converge = app.add_subcommand("converge", "Convergence factor fits, dominance and P-P analysis");
  add_common(converge, conv_opts);
  converge->add_option("--runs", runs_path, "Runs CSV: box_id,group,cycle,ppv,npv")->required();
  converge->add_option("--fallback", fallback, "mean_variance | location");

  // sample
  CommonOptions sample_opts;
  std::string change_path, sample_excl_path;
  std::size_t box_side = 83, quantiles = 30;
  auto* sample = app.add_subcommand("sample", "Tile a region, classify pools A/B/C and draw quantile samples");
  add_common(sample, sample_opts);
  sample->add_option("--change", change_path, "0/1 change grid")->required();
  sample->add_option("--exclusion", sample_excl_path, "0/1 exclusion grid")->required();
  sample->add_option("--box-side", box_side, "Box side in cells")->check(CLI::PositiveNumber);
  sample->add_option("--quantiles", quantiles, "Quantile bins per pool")->check(CLI::PositiveNumber);

  // synth
  CommonOptions synth_opts;
  SynthConfig synth_cfg;
  std::size_t synth_boxes = 30;
  std::string synth_cycles = "1000,5000,10000,50000,100000,500000";
  auto* synth = app.add_subcommand("synth", "Write a synthetic landscape and run table");
  add_common(synth, synth_opts);
  synth->add_option("--rows", synth_cfg.rows);
  synth->add_option("--cols", synth_cfg.cols);
  synth->add_option("--change-fraction", synth_cfg.change_fraction);
  synth->add_option("--exclusion-fraction", synth_cfg.exclusion_fraction);
  synth->add_option("--score-noise", synth_cfg.score_noise);
  synth->add_option("--planted-offset", synth_cfg.planted_offset);
  synth->add_option("--boxes", synth_boxes, "Boxes in the run table");
  synth->add_option("--cycles", synth_cycles, "Comma-separated training cycles");

  // report
  CommonOptions report_opts;
  std::string report_threshold, report_prevalence;
  auto* report = app.add_subcommand("report", "Run a full assessment job");
  add_common(report, report_opts);
  report->add_option("--threshold", report_threshold, "Overrides the config threshold policy");
  report->add_option("--prevalence", report_prevalence, "Overrides the config prevalence");

  CLI11_PARSE(app, argc, argv);

  try {
    for (CommonOptions* o : {&assess_opts, &kde_opts, &conv_opts, &sample_opts, &synth_opts}) {
      apply_config_defaults(*o);
    }
    if (assess->parsed() || sweep->parsed()) {
      if (sim_path.empty() == score_path.empty()) {
        throw std::invalid_argument("give exactly one of --sim or --scores");
      }
      AssessmentInput in = assess_input_spec;
      in.is_score = !score_path.empty();
      in.input = in.is_score ? score_path : sim_path;
      in.obs = obs_path;
      if (!excl_path.empty()) in.exclusion = excl_path;
      const auto conventions = conventions_of(assess_opts);
      const ThresholdPolicy policy = parse_threshold_policy(threshold);

      if (assess->parsed()) {
        std::optional<double> prevalence;
        if (prevalence_text != "observed") {
          prevalence = parse_real(prevalence_text);
          if (!prevalence) throw std::invalid_argument("bad --prevalence");
        }
        const Assessment a = assess_input(in, policy, conventions, prevalence);
        if (assess_opts.out) {
          fs::create_directories(*assess_opts.out);
          std::ofstream c(fs::path(*assess_opts.out) / "confusion.csv", std::ios::binary);
          std::ofstream b(fs::path(*assess_opts.out) / "bayes.csv", std::ios::binary);
          write_confusion_header(c);
          write_confusion_row(c, in.box_id, in.cycle, a.matrix, a.rates);
          write_bayes_header(b);
          for (const auto& row : a.bayes) write_bayes_row(b, in.box_id, in.cycle, row);
        } else {
          write_confusion_header(std::cout);
          write_confusion_row(std::cout, in.box_id, in.cycle, a.matrix, a.rates);
          write_bayes_header(std::cout);
          for (const auto& row : a.bayes) write_bayes_row(std::cout, in.box_id, in.cycle, row);
        }
        std::cerr << "specificity (standard naming) = tn_rate; "
                     "1 - specificity (paper naming) = tn_rate\n";
      } else {
        const Assessment a = assess_input(in, policy, conventions, 0.5);
        const auto grid = unit_grid(sweep_points);
        Sink sink(assess_opts.out);
        std::vector<PredictiveValues> all;
        for (const Convention c : conventions) {
          for (auto& pv : prevalence_sweep(a.rates, grid, c)) all.push_back(pv);
        }
        write_sweep(sink.stream(), all);
      }
      return 0;
    }

    if (kde->parsed()) {
      std::ifstream in(kde_input);
      if (!in) throw std::runtime_error("cannot open " + kde_input);
      std::vector<double> pos, neg;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split(text, ',');
        if (fields.size() != 2) throw ParseError(line_no, "expected label,value");
        const auto label = trim(fields[0]);
        if (label == "label") continue;
        const auto value = parse_real(fields[1]);
        if (!value) throw ParseError(line_no, "bad value");
        if (label == "pos") pos.push_back(*value);
        else if (label == "neg") neg.push_back(*value);
        else throw ParseError(line_no, "label must be pos or neg");
      }
      const KdeModel f_pos = fit_kde(pos, kde_opts.bandwidth);
      const KdeModel f_neg = fit_kde(neg, kde_opts.bandwidth);
      std::optional<Intersection> cross;
      try {
        cross = density_intersection(f_pos, f_neg, kde_lo, kde_hi);
      } catch (const NoCrossingError& e) {
        std::cerr << "warning: " << e.what() << '\n';
      }
      Sink sink(kde_opts.out);
      write_kde_csv(sink.stream(), f_pos, f_neg, cross);
      if (cross) std::cerr << "prevalence* = " << format_real(cross->root) << '\n';
      return cross ? 0 : 2;
    }

    if (converge->parsed()) {
      const auto runs = read_runs(fs::path(runs_path));
      ConvergeOptions options;
      if (conv_opts.alpha_grid) options.alpha_grid = parse_real_list(*conv_opts.alpha_grid);
      if (fallback == "location") options.fallback = SelectionFallback::kLocation;
      else if (fallback != "mean_variance") throw std::invalid_argument("bad --fallback");
      const auto analysis = analyze_convergence(runs, options);
      const fs::path dir = conv_opts.out.value_or("converge_out");
      for (const auto& f : write_convergence_outputs(analysis, runs, options, dir)) {
        std::cout << (dir / f).string() << '\n';
      }
      return 0;
    }

    if (sample->parsed()) {
      const BinaryGrid change = to_binary(load_grid(change_path), 1.0, 0.0);
      const BinaryGrid excl = to_binary(load_grid(sample_excl_path), 1.0, 0.0);
      const auto boxes = tile_region(change, excl, box_side);
      const auto pools = classify_pools(boxes);
      const std::uint64_t seed = sample_opts.seed.value_or(0);
      std::map<int, std::string> selected_for;
      for (const Pool pool : {Pool::kA, Pool::kB, Pool::kC}) {
        const auto members = pool_members(boxes, pools, pool);
        const std::string label(1, pool_letter(pool));
        if (members.size() < quantiles) {
          std::cerr << "warning: pool " << label << " has " << members.size()
                    << " boxes, fewer than " << quantiles << " bins; not drawn\n";
          continue;
        }
        for (const auto& box : draw_quantile_sample(members, quantiles, seed, label)) {
          auto& tag = selected_for[box.box_id];
          tag += tag.empty() ? label : ";" + label;
        }
      }
      Sink sink(sample_opts.out);
      write_sample_csv(sink.stream(), boxes, pools, selected_for);
      return 0;
    }

    if (synth->parsed()) {
      synth_cfg.seed = synth_opts.seed.value_or(synth_cfg.seed);
      const fs::path dir = synth_opts.out.value_or("synth_out");
      fs::create_directories(dir);
      const SynthPair pair = generate_pair(synth_cfg);
      write_grid(to_grid(pair.obs), dir / "obs.asc");
      write_grid(to_grid(pair.scores), dir / "scores.asc");
      std::vector<double> excl(pair.obs.size());
      for (std::size_t i = 0; i < excl.size(); ++i) {
        excl[i] = pair.obs.cells()[i] == Cell::kExcluded ? 1.0 : 0.0;
      }
      write_grid(Grid(pair.obs.info(), excl), dir / "exclusion.asc");
      std::vector<int> cycles;
      for (const double c : parse_real_list(synth_cycles)) cycles.push_back(static_cast<int>(c));
      const auto runs = generate_run_table(synth_cfg, synth_boxes, cycles);
      std::ofstream out(dir / "runs.csv", std::ios::binary);
      write_runs(runs, out);
      std::cout << dir.string() << '\n';
      return 0;
    }

    if (report->parsed()) {
      if (!report_opts.config) throw std::invalid_argument("report needs --config");
      AssessmentJob job = load_job(*report_opts.config);
      if (report_opts.seed) job.seed = *report_opts.seed;
      if (report_opts.out) job.out_dir = *report_opts.out;
      if (report_opts.convention) job.conventions = conventions_of(report_opts);
      if (report_opts.alpha_grid) job.alpha_grid = parse_real_list(*report_opts.alpha_grid);
      if (report_opts.bandwidth) job.bandwidth = report_opts.bandwidth;
      if (!report_threshold.empty()) job.threshold = parse_threshold_policy(report_threshold);
      if (!report_prevalence.empty()) {
        if (report_prevalence == "observed") job.prevalence.reset();
        else job.prevalence = parse_real(report_prevalence);
      }
      const Manifest manifest = run_job(job);
      for (const auto& f : manifest.files) {
        std::cout << f.sha256 << "  " << f.file << '\n';
      }
      for (const auto& f : manifest.failures) {
        std::cerr << "failed: box " << f.box_id << " cycle " << f.cycle << ": "
                  << f.reason << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
