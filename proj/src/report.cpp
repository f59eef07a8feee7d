#include "landbayes/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <set>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "landbayes/format.hpp"
#include "landbayes/raster.hpp"
#include "landbayes/runs_io.hpp"

namespace landbayes {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// JSON numbers pass through the same 6-significant-digit formatter as CSV.
ordered_json json_real(double value) {
  if (!std::isfinite(value)) return format_real(value);
  return std::stod(format_real(value));
}

ordered_json json_real(const std::optional<double>& value) {
  return value ? json_real(*value) : ordered_json(nullptr);
}

std::string dor_text(const std::optional<double>& dor) { return format_real(dor); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

BinaryGrid apply_exclusion(const ScoreGrid& scores, const Grid* exclusion,
                           const ThresholdMode& mode) {
  if (exclusion == nullptr) return threshold_scores(scores, mode);
  std::vector<double> values(scores.size());
  std::vector<bool> excluded(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    values[i] = scores.score(i);
    excluded[i] = scores.is_excluded(i) || exclusion->is_nodata(i) ||
                  exclusion->values()[i] != 0.0;
  }
  return threshold_scores(ScoreGrid(scores.info(), values, excluded), mode);
}

}  // namespace

ThresholdPolicy parse_threshold_policy(std::string_view text) {
  text = trim(text);
  ThresholdPolicy policy;
  if (text == "match") return policy;
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const auto number = parse_real(arg);
  if (kind == "value" && number && *number >= 0.0 && *number <= 1.0) {
    policy.kind = ThresholdPolicy::Kind::kValue;
    policy.value = *number;
    return policy;
  }
  if (kind == "quantity" && number && *number >= 0.0 &&
      *number == std::floor(*number)) {
    policy.kind = ThresholdPolicy::Kind::kQuantity;
    policy.count = static_cast<std::size_t>(*number);
    return policy;
  }
  throw std::invalid_argument("bad threshold policy '" + std::string(text) +
                              "' (match | value:<t> | quantity:<n>)");
}

std::string to_string(const ThresholdPolicy& policy) {
  switch (policy.kind) {
    case ThresholdPolicy::Kind::kMatchObserved: return "match";
    case ThresholdPolicy::Kind::kValue: return "value:" + format_real(policy.value);
    case ThresholdPolicy::Kind::kQuantity:
      return "quantity:" + std::to_string(policy.count);
  }
  return "";
}

Assessment assess_input(const AssessmentInput& input,
                        const ThresholdPolicy& policy,
                        std::span<const Convention> conventions,
                        std::optional<double> prevalence) {
  const Grid obs_grid = load_grid(input.obs);
  const Grid in_grid = load_grid(input.input);
  std::optional<Grid> exclusion;
  if (input.exclusion) exclusion = load_grid(*input.exclusion);

  const BinaryGrid obs = exclusion ? to_binary(obs_grid, 1.0, 0.0, *exclusion)
                                   : to_binary(obs_grid, 1.0, 0.0);
  std::optional<BinaryGrid> sim;
  if (!input.is_score) {
    sim = exclusion ? to_binary(in_grid, 1.0, 0.0, *exclusion)
                    : to_binary(in_grid, 1.0, 0.0);
  } else {
    if (!in_grid.info().same_shape(obs.info())) {
      throw std::invalid_argument("score and observed maps differ in shape");
    }
    const ScoreGrid scores(in_grid);
    ThresholdMode mode = ThresholdValue{policy.value};
    if (policy.kind == ThresholdPolicy::Kind::kQuantity) {
      mode = ThresholdQuantity{policy.count};
    } else if (policy.kind == ThresholdPolicy::Kind::kMatchObserved) {
      std::size_t observed = 0;
      for (std::size_t i = 0; i < obs.size(); ++i) {
        observed += obs.cells()[i] == Cell::kOne && !scores.is_excluded(i);
      }
      mode = ThresholdQuantity{observed};
    }
    sim = apply_exclusion(scores, exclusion ? &*exclusion : nullptr, mode);
  }

  Assessment a;
  a.matrix = build_confusion(*sim, obs);
  a.rates = agreement_rates(a.matrix);
  a.prevalence = prevalence ? *prevalence : a.rates.prevalence_observed;
  for (const Convention convention : conventions) {
    BayesRow row;
    row.values = predictive_values(a.rates, a.prevalence, convention);
    row.ratios = likelihood_ratios(a.rates, convention);
    row.dor = diagnostic_odds_ratio(row.ratios);
    a.bayes.push_back(row);
  }
  return a;
}

AssessmentJob parse_job(std::istream& in, const fs::path& base_dir) {
  AssessmentJob job;
  const auto resolve = [&base_dir](std::string_view p) {
    fs::path path{std::string(p)};
    return path.is_absolute() ? path : base_dir / path;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string_view text =
        trim(std::string_view(line).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected key = value");
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    try {
      if (key == "out") {
        job.out_dir = resolve(value);
      } else if (key == "seed") {
        const auto seed = parse_real(value);
        if (!seed || *seed < 0 || *seed != std::floor(*seed)) {
          throw std::invalid_argument("seed must be a non-negative integer");
        }
        job.seed = static_cast<std::uint64_t>(*seed);
      } else if (key == "convention") {
        job.conventions.clear();
        for (const auto& c : split(value, ',')) {
          job.conventions.push_back(parse_convention(trim(c)));
        }
      } else if (key == "alpha_grid") {
        job.alpha_grid = parse_real_list(value);
      } else if (key == "bandwidth") {
        const auto h = parse_real(value);
        if (!h || !(*h > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
        job.bandwidth = *h;
      } else if (key == "prevalence") {
        if (value == "observed") {
          job.prevalence.reset();
        } else {
          const auto p = parse_real(value);
          if (!p || !(*p >= 0.0 && *p <= 1.0)) {
            throw std::invalid_argument("prevalence must be in [0,1] or 'observed'");
          }
          job.prevalence = *p;
        }
      } else if (key == "threshold") {
        job.threshold = parse_threshold_policy(value);
      } else if (key == "fallback") {
        if (value == "mean_variance") {
          job.fallback = SelectionFallback::kMeanVarianceRatio;
        } else if (value == "location") {
          job.fallback = SelectionFallback::kLocation;
        } else {
          throw std::invalid_argument("fallback must be mean_variance or location");
        }
      } else if (key == "run") {
        std::istringstream fields{std::string(value)};
        std::string box, group, cycle, kind, input, obs, exclusion;
        if (!(fields >> box >> group >> cycle >> kind >> input >> obs)) {
          throw std::invalid_argument(
              "run needs: box group cycle sim|score input obs [exclusion]");
        }
        fields >> exclusion;
        AssessmentInput run;
        const auto box_id = parse_real(box);
        const auto cycle_no = parse_real(cycle);
        if (!box_id || !cycle_no) throw std::invalid_argument("bad box id or cycle");
        run.box_id = static_cast<int>(*box_id);
        run.cycle = static_cast<int>(*cycle_no);
        run.group = parse_pool(group);
        if (kind != "sim" && kind != "score") {
          throw std::invalid_argument("run kind must be sim or score");
        }
        run.is_score = kind == "score";
        run.input = resolve(input);
        run.obs = resolve(obs);
        if (!exclusion.empty()) run.exclusion = resolve(exclusion);
        job.inputs.push_back(std::move(run));
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (job.conventions.empty()) throw ParseError(line_no, "no convention given");
  return job;
}

AssessmentJob load_job(const fs::path& config) {
  std::ifstream in(config);
  if (!in) throw std::runtime_error("cannot open job config " + config.string());
  return parse_job(in, config.parent_path());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

void write_confusion_header(std::ostream& out) {
  out << "box_id,cycle,tp,fp,fn,tn,sens,tn_rate,prevalence,pcm\n";
}

void write_confusion_row(std::ostream& out, int box_id, int cycle,
                         const ConfusionMatrix& m, const AgreementRates& r) {
  out << box_id << ',' << cycle << ',' << m.tp << ',' << m.fp << ',' << m.fn
      << ',' << m.tn << ',' << format_real(r.sensitivity) << ','
      << format_real(r.tn_rate) << ',' << format_real(r.prevalence_observed)
      << ',' << format_real(r.pcm) << '\n';
}

void write_bayes_header(std::ostream& out) {
  out << "box_id,cycle,convention,prevalence,ppv,npv,lr_pos,lr_neg,dor\n";
}

void write_bayes_row(std::ostream& out, int box_id, int cycle, const BayesRow& row) {
  out << box_id << ',' << cycle << ',' << convention_name(row.values.convention)
      << ',' << format_real(row.values.prevalence) << ','
      << format_real(row.values.ppv) << ',' << format_real(row.values.npv) << ','
      << format_real(row.ratios.lr_pos) << ',' << format_real(row.ratios.lr_neg)
      << ',' << dor_text(row.dor) << '\n';
}

void write_sweep(std::ostream& out, std::span<const PredictiveValues> sweep) {
  out << "convention,prevalence,ppv,npv\n";
  for (const PredictiveValues& pv : sweep) {
    out << convention_name(pv.convention) << ',' << format_real(pv.prevalence)
        << ',' << format_real(pv.ppv) << ',' << format_real(pv.npv) << '\n';
  }
}

void write_sample_csv(std::ostream& out, std::span<const SampleBox> boxes,
                      std::span<const PoolAssignment> pools,
                      const std::map<int, std::string>& selected_for) {
  out << "box_id,row0,col0,pct_urban,pct_excl,index,pools,selected_for\n";
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const SampleBox& b = boxes[i];
    const auto it = selected_for.find(b.box_id);
    out << b.box_id << ',' << b.row0 << ',' << b.col0 << ','
        << format_real(b.pct_urban_change) << ','
        << format_real(b.pct_exclusionary) << ',' << format_real(b.index) << ','
        << pools[i].label() << ',' << (it == selected_for.end() ? "" : it->second)
        << '\n';
  }
}

void write_kde_csv(std::ostream& out, const KdeModel& pos, const KdeModel& neg,
                   const std::optional<Intersection>& intersection) {
  std::vector<double> xs(kIntersectionScanPoints);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = static_cast<double>(k) / static_cast<double>(xs.size() - 1);
  }
  const auto f_pos = pos.evaluate(xs);
  const auto f_neg = neg.evaluate(xs);
  out << "x,f_pos,f_neg\n";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    out << format_real(xs[k]) << ',' << format_real(f_pos[k]) << ','
        << format_real(f_neg[k]) << '\n';
  }
  out << "# bandwidth_pos=" << format_real(pos.bandwidth())
      << " bandwidth_neg=" << format_real(neg.bandwidth()) << '\n';
  if (intersection) {
    out << "# prevalence_star=" << format_real(intersection->root) << '\n';
    out << "# crossings=";
    for (std::size_t i = 0; i < intersection->crossings.size(); ++i) {
      out << (i ? ";" : "") << format_real(intersection->crossings[i].x);
    }
    out << '\n';
  } else {
    out << "# prevalence_star=NA (densities do not cross in [0,1])\n";
  }
}

std::vector<std::string> write_convergence_outputs(
    const ConvergeAnalysis& analysis, std::span<const RunRecord> runs,
    const ConvergeOptions& options, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  std::vector<CbForm> forms{CbForm::triangular()};
  for (const CbForm& f : asymmetric_forms(options.alpha_grid)) forms.push_back(f);

  {
    auto out = open_out(dir / "cb_values.csv");
    out << "box_id,group,cycle,ppv,npv";
    for (const CbForm& f : forms) out << ",cb_" << f.label();
    out << '\n';
    for (const RunRecord& run : runs) {
      out << run.box_id << ',' << pool_letter(run.group) << ',' << run.cycle << ','
          << format_real(run.ppv) << ',' << format_real(run.npv);
      for (const CbForm& f : forms) out << ',' << format_real(cb_value(run.ppv, run.npv, f));
      out << '\n';
    }
    files.push_back("cb_values.csv");
  }
  {
    auto out = open_out(dir / "fits.csv");
    out << "scope,robustness_group,form,alpha,mu_hat,sigma_hat,n\n";
    for (const ScopeAnalysis& s : analysis.scopes) {
      for (const FitResult& f : s.fits) {
        out << s.scope << ',' << f.group << ',' << f.form.kind_name() << ','
            << format_real(f.form.alpha) << ',' << format_real(f.mu_hat) << ','
            << format_real(f.sigma_hat) << ',' << f.n << '\n';
      }
    }
    files.push_back("fits.csv");
  }
  {
    auto out = open_out(dir / "dominance.csv");
    out << "scope,form,alpha";
    bool header_done = false;
    for (const ScopeAnalysis& s : analysis.scopes) {
      const DominanceTable& t = s.dominance;
      if (!header_done) {
        for (const auto& g : t.groups) out << ",z_" << g;
        for (const PairScore& p : t.rows.front().scores) {
          out << ",score_" << t.groups[p.m] << "_minus_" << t.groups[p.k];
        }
        out << ",location,scale,robustness,uniform_dominator,selected\n";
        header_done = true;
      }
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const DominanceRow& r = t.rows[i];
        out << s.scope << ',' << r.form.kind_name() << ',' << format_real(r.form.alpha);
        for (const double z : r.z) out << ',' << format_real(z);
        for (const PairScore& p : r.scores) out << ',' << format_real(p.score);
        out << ',' << format_real(r.location) << ',' << format_real(r.scale) << ','
            << format_real(r.robustness) << ','
            << (t.uniform_dominator == i ? 1 : 0) << ','
            << (t.selected == i ? 1 : 0) << '\n';
      }
    }
    if (!header_done) out << '\n';
    files.push_back("dominance.csv");
  }
  {
    const CbTimeline timeline = cb_dominance_timeline(runs, forms);
    auto out = open_out(dir / "timeline.csv");
    out << "cycle,runs";
    for (const CbForm& f : forms) out << ",mean_cb_" << f.label();
    out << '\n';
    for (std::size_t c = 0; c < timeline.cycles.size(); ++c) {
      out << timeline.cycles[c] << ',' << timeline.run_counts[c];
      for (const double m : timeline.mean_cb[c]) out << ',' << format_real(m);
      out << '\n';
    }
    files.push_back("timeline.csv");
  }
  ordered_json summary;
  summary["scopes"] = ordered_json::object();
  for (const ScopeAnalysis& s : analysis.scopes) {
    const std::string name = "ppcurve_" + s.scope + ".csv";
    auto out = open_out(dir / name);
    out << "empirical,fitted\n";
    for (const PPPoint& p : s.curve.points) {
      out << format_real(p.empirical) << ',' << format_real(p.fitted) << '\n';
    }
    files.push_back(name);

    ordered_json scope;
    scope["selected_alpha"] = json_real(s.selected.alpha);
    scope["prevalence_estimate"] = json_real(s.curve.prevalence_estimate);
    scope["net_gain"] = json_real(s.curve.net_gain);
    scope["uniform_dominator"] = s.dominance.uniform_dominator.has_value();
    scope["notes"] = s.dominance.notes;
    ordered_json crossings = ordered_json::array();
    for (const double c : s.curve.crossings) crossings.push_back(json_real(c));
    scope["crossings"] = crossings;
    scope["warnings"] = s.curve.warnings;
    summary["scopes"][s.scope] = scope;
  }
  summary["notes"] = analysis.notes;
  {
    auto out = open_out(dir / "summary.json");
    out << summary.dump(2) << '\n';
    files.push_back("summary.json");
  }
  return files;
}

std::vector<GroupSummary> group_summaries(std::span<const RunRecord> records,
                                          const ConvergeOptions& options,
                                          std::vector<std::string>* notes) {
  if (records.empty()) throw std::invalid_argument("no run records");
  ConvergeAnalysis analysis;
  try {
    analysis = analyze_convergence(records, options);
  } catch (const std::invalid_argument& e) {
    if (notes) notes->push_back(std::string("convergence: ") + e.what());
  }
  if (notes) {
    for (const std::string& note : analysis.notes) {
      if (!note.ends_with("no runs, omitted")) notes->push_back(note);
    }
  }

  std::vector<GroupSummary> out;
  const std::vector<std::pair<std::string, std::optional<Pool>>> scopes = {
      {"all", std::nullopt}, {"A", Pool::kA}, {"B", Pool::kB}, {"C", Pool::kC}};
  for (const auto& [name, pool] : scopes) {
    std::map<int, CycleSummary> by_cycle;
    for (const RunRecord& r : records) {
      if (pool && r.group != *pool) continue;
      CycleSummary& c = by_cycle[r.cycle];
      c.cycle = r.cycle;
      ++c.runs;
      c.mean_ppv += r.ppv;
      c.mean_npv += r.npv;
    }
    if (by_cycle.empty()) {
      if (notes) notes->push_back("group " + name + ": no runs, omitted");
      continue;
    }
    GroupSummary summary;
    summary.group = name;
    for (auto& [cycle, c] : by_cycle) {
      c.mean_ppv /= static_cast<double>(c.runs);
      c.mean_npv /= static_cast<double>(c.runs);
      c.dominance_sign = (c.mean_ppv > c.mean_npv) - (c.mean_ppv < c.mean_npv);
      summary.cycles.push_back(c);
    }
    for (const ScopeAnalysis& s : analysis.scopes) {
      if (s.scope == name) summary.convergence = s;
    }
    out.push_back(std::move(summary));
  }
  return out;
}

Manifest run_job(const AssessmentJob& job) {
  for (const AssessmentInput& input : job.inputs) {
    for (const fs::path* p : {&input.input, &input.obs}) {
      if (!fs::exists(*p)) {
        throw std::invalid_argument("missing input file " + p->string());
      }
    }
    if (input.exclusion && !fs::exists(*input.exclusion)) {
      throw std::invalid_argument("missing input file " + input.exclusion->string());
    }
  }
  if (job.conventions.empty()) throw std::invalid_argument("no convention");
  fs::create_directories(job.out_dir);

  // Independent work items; each writes only its own slot.
  const std::size_t n = job.inputs.size();
  std::vector<std::optional<Assessment>> results(n);
  std::vector<std::string> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      results[i] = assess_input(job.inputs[i], job.threshold, job.conventions,
                                job.prevalence);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  Manifest manifest;
  std::vector<std::string> files;
  std::vector<RunRecord> runs;
  {
    auto confusion = open_out(job.out_dir / "confusion.csv");
    auto bayes = open_out(job.out_dir / "bayes.csv");
    write_confusion_header(confusion);
    write_bayes_header(bayes);
    for (std::size_t i = 0; i < n; ++i) {
      const AssessmentInput& input = job.inputs[i];
      if (!results[i]) {
        manifest.failures.push_back({input.box_id, input.cycle, errors[i]});
        continue;
      }
      const Assessment& a = *results[i];
      write_confusion_row(confusion, input.box_id, input.cycle, a.matrix, a.rates);
      for (const BayesRow& row : a.bayes) {
        write_bayes_row(bayes, input.box_id, input.cycle, row);
      }
      const PredictiveValues& pv = a.bayes.front().values;
      if (pv.ppv && pv.npv) {
        runs.push_back({input.box_id, input.group, input.cycle, *pv.ppv, *pv.npv});
      } else {
        manifest.notes.push_back("box " + std::to_string(input.box_id) +
                                 " cycle " + std::to_string(input.cycle) +
                                 ": undefined PPV/NPV, left out of convergence");
      }
    }
    files.push_back("confusion.csv");
    files.push_back("bayes.csv");
  }
  {
    auto out = open_out(job.out_dir / "runs.csv");
    write_runs(runs, out);
    files.push_back("runs.csv");
  }

  ordered_json job_summary;
  job_summary["seed"] = job.seed;
  job_summary["threshold"] = to_string(job.threshold);
  std::vector<std::string> conventions;
  for (const Convention c : job.conventions) {
    conventions.emplace_back(convention_name(c));
  }
  job_summary["conventions"] = conventions;
  job_summary["prevalence"] =
      job.prevalence ? json_real(*job.prevalence) : ordered_json("observed");
  job_summary["runs"] = runs.size();
  job_summary["failures"] = manifest.failures.size();
  job_summary["kde"] = ordered_json::object();

  if (!runs.empty()) {
    std::set<Pool> groups;
    for (const RunRecord& r : runs) groups.insert(r.group);
    if (groups.size() > 1) {
      manifest.notes.emplace_back(
          "DOR is comparable across cycles within a group, not across groups");
    }

    const std::vector<std::pair<std::string, std::optional<Pool>>> scopes = {
        {"all", std::nullopt}, {"A", Pool::kA}, {"B", Pool::kB}, {"C", Pool::kC}};
    for (const auto& [name, pool] : scopes) {
      std::vector<double> ppv, npv;
      for (const RunRecord& r : runs) {
        if (pool && r.group != *pool) continue;
        ppv.push_back(r.ppv);
        npv.push_back(r.npv);
      }
      if (ppv.empty()) continue;
      try {
        const KdeModel pos = fit_kde(ppv, job.bandwidth);
        const KdeModel neg = fit_kde(npv, job.bandwidth);
        std::optional<Intersection> cross;
        try {
          cross = density_intersection(pos, neg);
        } catch (const NoCrossingError& e) {
          manifest.notes.push_back("kde " + name + ": " + e.what());
        }
        const std::string file = "kde_" + name + ".csv";
        auto out = open_out(job.out_dir / file);
        write_kde_csv(out, pos, neg, cross);
        files.push_back(file);
        job_summary["kde"][name] =
            cross ? json_real(cross->root) : ordered_json(nullptr);
      } catch (const std::invalid_argument& e) {
        manifest.notes.push_back("kde " + name + ": " + e.what());
      }
    }

    ConvergeOptions options;
    options.alpha_grid = job.alpha_grid;
    options.fallback = job.fallback;
    std::vector<std::string> notes;
    const auto summaries = group_summaries(runs, options, &notes);
    {
      auto out = open_out(job.out_dir / "group_summary.csv");
      out << "group,cycle,runs,mean_ppv,mean_npv,dominance_sign\n";
      for (const GroupSummary& g : summaries) {
        for (const CycleSummary& c : g.cycles) {
          out << g.group << ',' << c.cycle << ',' << c.runs << ','
              << format_real(c.mean_ppv) << ',' << format_real(c.mean_npv) << ','
              << c.dominance_sign << '\n';
        }
      }
      files.push_back("group_summary.csv");
    }
    for (auto& note : notes) manifest.notes.push_back(std::move(note));
    try {
      const ConvergeAnalysis analysis = analyze_convergence(runs, options);
      for (const auto& f :
           write_convergence_outputs(analysis, runs, options, job.out_dir)) {
        files.push_back(f);
      }
    } catch (const std::invalid_argument&) {
      // Already noted by group_summaries.
    }
  } else {
    manifest.notes.emplace_back("no successful runs; aggregate outputs skipped");
  }

  job_summary["notes"] = manifest.notes;
  {
    auto out = open_out(job.out_dir / "job_summary.json");
    out << job_summary.dump(2) << '\n';
    files.push_back("job_summary.json");
  }

  std::sort(files.begin(), files.end());
  for (const std::string& f : files) {
    manifest.files.push_back({f, sha256_file(job.out_dir / f)});
  }
  ordered_json m;
  m["files"] = ordered_json::array();
  for (const ManifestEntry& e : manifest.files) {
    m["files"].push_back({{"file", e.file}, {"sha256", e.sha256}});
  }
  m["failures"] = ordered_json::array();
  for (const RunFailure& f : manifest.failures) {
    m["failures"].push_back(
        {{"box_id", f.box_id}, {"cycle", f.cycle}, {"reason", f.reason}});
  }
  m["notes"] = manifest.notes;
  auto out = open_out(job.out_dir / "manifest.json");
  out << m.dump(2) << '\n';
  return manifest;
}

}  // namespace landbayes
