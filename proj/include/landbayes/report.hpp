#ifndef LANDBAYES_REPORT_HPP_
#define LANDBAYES_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landbayes/bayes_metrics.hpp"
#include "landbayes/confusion.hpp"
#include "landbayes/convergence.hpp"
#include "landbayes/kde.hpp"
#include "landbayes/sampling.hpp"

namespace landbayes {

// How a score map becomes a binary prediction.
struct ThresholdPolicy {
  enum class Kind {
    kMatchObserved,  // quantity = number of observed change cells
    kValue,          // score >= value
    kQuantity,       // fixed number of cells
  };
  Kind kind = Kind::kMatchObserved;
  double value = 0.5;
  std::size_t count = 0;
};

// "match" | "value:<t>" | "quantity:<n>"
ThresholdPolicy parse_threshold_policy(std::string_view text);
std::string to_string(const ThresholdPolicy& policy);

// One simulated (or scored) map against its observed counterpart.
struct AssessmentInput {
  int box_id = 0;
  Pool group = Pool::kA;
  int cycle = 0;
  bool is_score = false;  // input holds scores in [0,1] rather than 0/1
  std::filesystem::path input;
  std::filesystem::path obs;
  std::optional<std::filesystem::path> exclusion;
};

struct BayesRow {
  PredictiveValues values;
  LikelihoodRatios ratios;
  std::optional<double> dor;
};

struct Assessment {
  ConfusionMatrix matrix;
  AgreementRates rates;
  double prevalence = 0.0;
  std::vector<BayesRow> bayes;  // one per convention
};

// Loads and assesses one input pair. prevalence = nullopt uses the observed
// prevalence of the pair.
Assessment assess_input(const AssessmentInput& input,
                        const ThresholdPolicy& policy,
                        std::span<const Convention> conventions,
                        std::optional<double> prevalence);

// The whole pipeline over many inputs. Parsed from a key = value file:
//
//   out        = results                  output directory
//   seed       = 7                        recorded in the summary
//   convention = paper                    paper | standard | paper,standard
//   alpha_grid = 0,0.25,0.5,0.75,1
//   bandwidth  = 0.05                     optional, Silverman otherwise
//   prevalence = 0.5                      or "observed"
//   threshold  = match                    match | value:<t> | quantity:<n>
//   fallback   = mean_variance            mean_variance | location
//   run        = <box> <group> <cycle> sim|score <input> <obs> [<exclusion>]
//
// '#' starts a comment. Relative paths resolve against the config file's
// directory. The first convention listed feeds PPV/NPV into the
// convergence analysis.
struct AssessmentJob {
  std::vector<AssessmentInput> inputs;
  ThresholdPolicy threshold;
  std::vector<Convention> conventions{Convention::kPaperLiteral};
  std::vector<double> alpha_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::optional<double> bandwidth;
  std::optional<double> prevalence = 0.5;
  SelectionFallback fallback = SelectionFallback::kMeanVarianceRatio;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
};

AssessmentJob parse_job(std::istream& in, const std::filesystem::path& base_dir);
AssessmentJob load_job(const std::filesystem::path& config);

struct ManifestEntry {
  std::string file;  // relative to the output directory
  std::string sha256;
};

struct RunFailure {
  int box_id = 0;
  int cycle = 0;
  std::string reason;
};

struct Manifest {
  std::vector<ManifestEntry> files;
  std::vector<RunFailure> failures;
  std::vector<std::string> notes;
};

// Fails fast (std::invalid_argument) if any referenced file is missing.
// Per-input load or metric failures are recorded and the job continues.
// Writes manifest.json last; it lists every other file with its SHA-256.
Manifest run_job(const AssessmentJob& job);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct CycleSummary {
  int cycle = 0;
  std::size_t runs = 0;
  double mean_ppv = 0.0;
  double mean_npv = 0.0;
  int dominance_sign = 0;  // sign(mean_ppv - mean_npv)
};

struct GroupSummary {
  std::string group;  // "all", "A", "B", "C"
  std::vector<CycleSummary> cycles;
  std::optional<ScopeAnalysis> convergence;
};

// Groups without runs are omitted and listed in `notes`.
std::vector<GroupSummary> group_summaries(std::span<const RunRecord> records,
                                          const ConvergeOptions& options,
                                          std::vector<std::string>* notes = nullptr);

// CSV emitters shared by the CLI and run_job.
void write_confusion_header(std::ostream& out);
void write_confusion_row(std::ostream& out, int box_id, int cycle,
                         const ConfusionMatrix& m, const AgreementRates& r);
void write_bayes_header(std::ostream& out);
void write_bayes_row(std::ostream& out, int box_id, int cycle, const BayesRow& row);
void write_sweep(std::ostream& out, std::span<const PredictiveValues> sweep);
void write_sample_csv(std::ostream& out, std::span<const SampleBox> boxes,
                      std::span<const PoolAssignment> pools,
                      const std::map<int, std::string>& selected_for);
// 512-point (x, f_pos, f_neg) table on [0,1] plus '#' summary lines.
void write_kde_csv(std::ostream& out, const KdeModel& pos, const KdeModel& neg,
                   const std::optional<Intersection>& intersection);

// Writes cb_values.csv, fits.csv, dominance.csv, timeline.csv,
// ppcurve_<scope>.csv and summary.json into dir; returns the file names.
std::vector<std::string> write_convergence_outputs(
    const ConvergeAnalysis& analysis, std::span<const RunRecord> runs,
    const ConvergeOptions& options, const std::filesystem::path& dir);

}  // namespace landbayes

#endif  // LANDBAYES_REPORT_HPP_
