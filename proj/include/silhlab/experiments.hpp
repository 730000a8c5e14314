#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "silhlab/expectation.hpp"
#include "silhlab/generators.hpp"
#include "silhlab/hypotheses.hpp"

namespace silhlab {

struct InsufficientRecords : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonPositiveExpectation : std::domain_error {
  using std::domain_error::domain_error;
};
struct MissingSilhouetteLength : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SweepRecord {
  std::string family;
  int n = 0;  // face count
  double exact_expected = 0;
  double mc_mean = 0;
  double mc_std_error = 0;
  double mean_silhouette_length = 0;
  HypothesisReport hypothesis;
};

struct SweepOptions {
  long long mc_samples = 10000;
  std::uint64_t seed = 0;
  int grid_depth = 4;
  int threads = 0;
};

/// One record per family member, in size order. Member i draws from seed xor i,
/// so the whole sweep is deterministic given the seed and members stay
/// decoupled. The same directions serve the size and length estimates.
inline std::vector<SweepRecord> run_sweep(const std::function<FamilySpec(int)>& member_for_size,
                                          const std::vector<int>& sizes,
                                          const SweepOptions& opt = {}) {
  if (sizes.size() < 3)
    throw InsufficientRecords("sweep needs at least 3 sizes, got " + std::to_string(sizes.size()));
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw InsufficientRecords("sweep sizes must be strictly increasing");

  std::vector<SweepRecord> records;
  records.reserve(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i) {
    FamilySpec spec = member_for_size(sizes[i]);
    Generated gen = generate(spec);
    EdgeAdjacency adj = build_adjacency(gen.mesh);
    std::uint64_t member_seed = opt.seed ^ static_cast<std::uint64_t>(i);

    SweepRecord rec;
    rec.family = format_family_spec(spec);
    rec.n = static_cast<int>(gen.mesh.faces.size());
    rec.exact_expected = exact_expected_silhouette(gen.mesh, adj);
    ExpectationReport mc = mc_expected_silhouette(gen.mesh, adj, ViewpointModel::at_infinity(),
                                                  opt.mc_samples, member_seed, opt.threads);
    rec.mc_mean = mc.mc_mean;
    rec.mc_std_error = mc.mc_std_error;
    rec.mean_silhouette_length =
        mc_expected_silhouette_length(gen.mesh, adj, opt.mc_samples, member_seed, opt.threads).value;
    rec.hypothesis = measure_hypotheses(gen.mesh, gen.surface, opt.grid_depth);
    records.push_back(std::move(rec));
  }
  return records;
}

struct ExponentFit {
  double coefficient = 0;  // c in  expected ~ c * n^p
  double exponent = 0;     // p
  double r_squared = 0;
  int records_used = 0;
};

/// Least-squares power-law fit of the exact expectation against n in log-log
/// coordinates.
inline ExponentFit fit_exponent(const std::vector<SweepRecord>& records) {
  if (records.size() < 3)
    throw InsufficientRecords("fit needs at least 3 records, got " + std::to_string(records.size()));
  for (const auto& r : records)
    if (!(r.exact_expected > 0.0))
      throw NonPositiveExpectation("record with n=" + std::to_string(r.n) +
                                   " has non-positive expectation");
  auto m = static_cast<double>(records.size());
  std::vector<double> xs, ys;
  double sx = 0, sy = 0;
  for (const auto& r : records) {
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(r.exact_expected));
    sx += xs.back();
    sy += ys.back();
  }
  double mean_x = sx / m, mean_y = sy / m;

  ExponentFit fit;
  fit.records_used = static_cast<int>(records.size());
  if (*std::min_element(ys.begin(), ys.end()) == *std::max_element(ys.begin(), ys.end())) {
    // A constant family fits exactly with exponent 0.
    fit.exponent = 0.0;
    fit.coefficient = std::exp(mean_y);
    fit.r_squared = 1.0;
    return fit;
  }
  double cov = 0, var_x = 0, var_y = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mean_x, dy = ys[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  fit.exponent = cov / var_x;
  fit.coefficient = std::exp(mean_y - fit.exponent * mean_x);
  fit.r_squared = (cov * cov) / (var_x * var_y);
  return fit;
}

struct BoundCheck {
  bool holds = false;
  double lhs = 0;  // exact expected silhouette size
  double rhs = 0;  // (15 beta + (24 / alpha) * silhouette_length) * sqrt(n)
};

/// Checks the linear-in-witnesses upper bound on the expected silhouette size
/// against a record. silhouette_length is the mean silhouette length of the
/// smooth reference surface (2*pi*r for spheres).
inline BoundCheck check_theorem_bound(const SweepRecord& record,
                                      std::optional<double> silhouette_length) {
  if (!silhouette_length || !std::isfinite(*silhouette_length))
    throw MissingSilhouetteLength("no mean silhouette length available for the reference surface");
  BoundCheck check;
  check.lhs = record.exact_expected;
  check.rhs = (15.0 * record.hypothesis.beta_n +
               24.0 / record.hypothesis.alpha_n * *silhouette_length) *
              std::sqrt(static_cast<double>(record.n));
  check.holds = check.lhs <= check.rhs;
  return check;
}

inline const char* kSweepCsvHeader = "n,exact,mc_mean,mc_se,mean_len,alpha,beta,gamma,fatness";

inline std::string emit_csv(const std::vector<SweepRecord>& records) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.n);
    for (double v : {r.exact_expected, r.mc_mean, r.mc_std_error, r.mean_silhouette_length,
                     r.hypothesis.alpha_n, r.hypothesis.beta_n, r.hypothesis.gamma_n,
                     r.hypothesis.fatness_n}) {
      out += ',';
      out += fmt_g17(v);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json record_to_json(const SweepRecord& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["n"] = r.n;
  j["exact"] = r.exact_expected;
  j["mc_mean"] = r.mc_mean;
  j["mc_se"] = r.mc_std_error;
  j["mean_len"] = r.mean_silhouette_length;
  j["alpha"] = r.hypothesis.alpha_n;
  j["beta"] = r.hypothesis.beta_n;
  j["gamma"] = r.hypothesis.gamma_n;
  j["fatness"] = r.hypothesis.fatness_n;
  return j;
}

inline std::string emit_json(const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : records) j.push_back(record_to_json(r));
  return j.dump(2) + "\n";
}

inline std::vector<SweepRecord> parse_records_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<SweepRecord> records;
  for (const auto& item : j) {
    SweepRecord r;
    if (item.contains("family")) r.family = item["family"].get<std::string>();
    r.n = item.at("n").get<int>();
    r.exact_expected = item.at("exact").get<double>();
    r.mc_mean = item.at("mc_mean").get<double>();
    r.mc_std_error = item.at("mc_se").get<double>();
    r.mean_silhouette_length = item.at("mean_len").get<double>();
    r.hypothesis.n = r.n;
    r.hypothesis.alpha_n = item.at("alpha").get<double>();
    r.hypothesis.beta_n = item.at("beta").get<double>();
    r.hypothesis.gamma_n = item.at("gamma").get<double>();
    r.hypothesis.fatness_n = item.at("fatness").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<SweepRecord> parse_records_csv(const std::string& text) {
  std::vector<SweepRecord> records;
  size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string> {
    if (pos >= text.size()) return std::nullopt;
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    return line;
  };
  auto header = next_line();
  if (!header || *header != kSweepCsvHeader)
    throw InsufficientRecords("CSV header mismatch, expected: " + std::string(kSweepCsvHeader));
  while (auto line = next_line()) {
    if (line->empty()) continue;
    std::vector<std::string> cells;
    size_t cpos = 0;
    while (cpos <= line->size()) {
      size_t comma = line->find(',', cpos);
      cells.push_back(line->substr(cpos, comma == std::string::npos ? line->size() - cpos : comma - cpos));
      if (comma == std::string::npos) break;
      cpos = comma + 1;
    }
    if (cells.size() != 9) throw InsufficientRecords("CSV row with " + std::to_string(cells.size()) +
                                                     " cells, expected 9");
    SweepRecord r;
    r.n = std::stoi(cells[0]);
    r.exact_expected = std::stod(cells[1]);
    r.mc_mean = std::stod(cells[2]);
    r.mc_std_error = std::stod(cells[3]);
    r.mean_silhouette_length = std::stod(cells[4]);
    r.hypothesis.n = r.n;
    r.hypothesis.alpha_n = std::stod(cells[5]);
    r.hypothesis.beta_n = std::stod(cells[6]);
    r.hypothesis.gamma_n = std::stod(cells[7]);
    r.hypothesis.fatness_n = std::stod(cells[8]);
    records.push_back(std::move(r));
  }
  return records;
}

inline nlohmann::ordered_json to_json(const ExponentFit& fit) {
  nlohmann::ordered_json j;
  j["coefficient"] = fit.coefficient;
  j["exponent"] = fit.exponent;
  j["r_squared"] = fit.r_squared;
  j["records_used"] = fit.records_used;
  return j;
}

}  // namespace silhlab
