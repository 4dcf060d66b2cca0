#include "ffc/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace ffc::stats {

using classify::FaultClass;
using classify::kAllClasses;

namespace {

constexpr unsigned kDataFlowBits = (1u << static_cast<unsigned>(FaultClass::Def)) |
                                   (1u << static_cast<unsigned>(FaultClass::Use));

int type_index(unsigned mask) {
  bool df = (mask & kDataFlowBits) != 0;
  bool cf = (mask & ~kDataFlowBits) != 0;
  if (cf && df) return static_cast<int>(classify::FaultType::Mixed);
  return static_cast<int>(cf ? classify::FaultType::PureCF : classify::FaultType::PureDF);
}

void add_row(Tally& t, unsigned mask) {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (std::size_t j = 0; j < kClassCount; ++j) {
      if (mask >> j & 1u) ++t.pair[i][j];
    }
  }
  if (mask != 0) ++t.type[type_index(mask)];
  ++t.hist[std::popcount(mask)];
  ++t.n;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string trim_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::map<std::string, std::vector<unsigned>> group(const std::vector<dataset::LabelRow>& rows, bool by_project) {
  std::map<std::string, std::vector<unsigned>> out;
  for (const auto& r : rows) {
    if (by_project) out[r.project].push_back(r.classes.bits());
  }
  return out;
}

}  // namespace

// ---- tally -----------------------------------------------------------------

void Tally::merge(const Tally& o) {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    for (std::size_t j = 0; j < kClassCount; ++j) pair[i][j] += o.pair[i][j];
  }
  for (std::size_t i = 0; i < type.size(); ++i) type[i] += o.type[i];
  for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += o.hist[i];
  n += o.n;
}

std::vector<unsigned> masks_of(const std::vector<dataset::LabelRow>& rows) {
  std::vector<unsigned> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.classes.bits());
  return out;
}

Tally tally_serial(const std::vector<unsigned>& masks) {
  Tally t;
  for (unsigned m : masks) add_row(t, m);
  return t;
}

Tally tally_parallel(const std::vector<unsigned>& masks, int threads) {
  Tally total;
  const long n = static_cast<long>(masks.size());
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    Tally local;
#pragma omp for schedule(static) nowait
    for (long i = 0; i < n; ++i) add_row(local, masks[i]);
#pragma omp critical
    total.merge(local);
  }
  return total;
}

// ---- frequencies -----------------------------------------------------------

FrequencyRow frequency_row(const std::string& name, const Tally& t) {
  FrequencyRow row;
  row.name = name;
  for (std::size_t i = 0; i < kClassCount; ++i) row.classes[i] = t.count(i);
  row.pure_cf = t.type[static_cast<int>(classify::FaultType::PureCF)];
  row.pure_df = t.type[static_cast<int>(classify::FaultType::PureDF)];
  row.mixed = t.type[static_cast<int>(classify::FaultType::Mixed)];
  row.total = t.n;
  if (t.n > 0) {
    double sum = 0, sq = 0;
    for (std::size_t k = 0; k < t.hist.size(); ++k) {
      sum += static_cast<double>(k) * static_cast<double>(t.hist[k]);
      sq += static_cast<double>(k * k) * static_cast<double>(t.hist[k]);
    }
    double n = static_cast<double>(t.n);
    row.mean = sum / n;
    row.std = std::sqrt(std::max(0.0, sq / n - row.mean * row.mean));
  }
  return row;
}

std::vector<FrequencyRow> frequencies(const std::vector<dataset::LabelRow>& rows, bool by_project) {
  if (rows.empty()) throw std::invalid_argument("frequencies of an empty label set");
  std::vector<FrequencyRow> out;
  for (const auto& [project, masks] : group(rows, by_project)) out.push_back(frequency_row(project, tally_parallel(masks)));
  out.push_back(frequency_row("All", tally_parallel(masks_of(rows))));
  return out;
}

// ---- co-occurrence ---------------------------------------------------------

std::optional<double> Cooccurrence::cell(std::size_t i, std::size_t j) const {
  if (count[i] == 0) return std::nullopt;
  return 100.0 * static_cast<double>(both[i][j]) / static_cast<double>(count[i]);
}

Cooccurrence cooccurrence(const std::vector<dataset::LabelRow>& rows) {
  Tally t = tally_parallel(masks_of(rows));
  Cooccurrence m;
  for (std::size_t i = 0; i < kClassCount; ++i) {
    m.count[i] = t.count(i);
    m.both[i] = t.pair[i];
  }
  return m;
}

// ---- distribution ----------------------------------------------------------

namespace {

/// Median of sorted values v[lo, hi).
double median_of(const std::vector<int>& v, std::size_t lo, std::size_t hi) {
  std::size_t n = hi - lo;
  if (n == 0) return 0;
  if (n % 2 == 1) return v[lo + n / 2];
  return (v[lo + n / 2 - 1] + v[lo + n / 2]) / 2.0;
}

}  // namespace

DistributionRow distribution_of(const std::string& name, const std::array<std::int64_t, kClassCount + 1>& hist) {
  DistributionRow row;
  row.name = name;
  row.hist = hist;
  std::vector<int> v;
  for (std::size_t k = 0; k < hist.size(); ++k) v.insert(v.end(), static_cast<std::size_t>(hist[k]), static_cast<int>(k));
  if (v.empty()) return row;
  std::size_t n = v.size();
  row.min = v.front();
  row.max = v.back();
  row.median = median_of(v, 0, n);
  // Halves share the middle value when n is odd.
  const std::size_t half = (n + 1) / 2;
  row.q1 = median_of(v, 0, half);
  row.q3 = median_of(v, n - half, n);
  return row;
}

std::vector<DistributionRow> distribution(const std::vector<dataset::LabelRow>& rows, bool by_project) {
  std::vector<DistributionRow> out;
  for (const auto& [project, masks] : group(rows, by_project)) {
    out.push_back(distribution_of(project, tally_serial(masks).hist));
  }
  out.push_back(distribution_of("All", tally_parallel(masks_of(rows)).hist));
  return out;
}

// ---- partition -------------------------------------------------------------

double percent1(std::int64_t part, std::int64_t whole) {
  if (whole <= 0) return 0;
  // tenths of a percent, half-up: floor((2000 * part + whole) / (2 * whole))
  std::int64_t tenths = (2000 * part + whole) / (2 * whole);
  return static_cast<double>(tenths) / 10.0;
}

Partition percent_partition(const FrequencyRow& row) {
  return {percent1(row.pure_cf, row.total), percent1(row.pure_df, row.total), percent1(row.mixed, row.total)};
}

Partition percent_partition(const std::vector<dataset::LabelRow>& rows) {
  return percent_partition(frequency_row("All", tally_serial(masks_of(rows))));
}

// ---- aggregate input -------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

const std::vector<std::string>& aggregate_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"project"};
    for (FaultClass k : kAllClasses) c.emplace_back(classify::class_name(k));
    for (const char* s : {"avg", "std", "cf", "df", "cfdf", "total"}) c.emplace_back(s);
    return c;
  }();
  return cols;
}

}  // namespace

bool is_aggregate_csv(const std::string& text) {
  std::string first = text.substr(0, text.find('\n'));
  if (!first.empty() && first.back() == '\r') first.pop_back();
  auto cols = split(first);
  return cols.size() >= aggregate_columns().size() &&
         std::equal(aggregate_columns().begin(), aggregate_columns().end(), cols.begin());
}

std::vector<AggregateRow> parse_aggregate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<AggregateRow> out;
  bool has_kloc = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line);
    if (lineno == 1) {
      if (!is_aggregate_csv(line)) throw dataset::LabelError(lineno, "not an aggregate table header");
      has_kloc = f.size() > aggregate_columns().size() && f[aggregate_columns().size()] == "kloc";
      continue;
    }
    std::size_t want = aggregate_columns().size() + (has_kloc ? 1 : 0);
    if (f.size() != want) throw dataset::LabelError(lineno, "expected " + std::to_string(want) + " fields");
    if (f[0] == "All") continue;
    AggregateRow r;
    r.project = f[0];
    try {
      for (std::size_t i = 0; i < kClassCount; ++i) r.classes[i] = std::stoll(f[1 + i]);
      r.mean = std::stod(f[9]);
      r.std = std::stod(f[10]);
      r.pure_cf = std::stoll(f[11]);
      r.pure_df = std::stoll(f[12]);
      r.mixed = std::stoll(f[13]);
      r.total = std::stoll(f[14]);
      if (has_kloc && !f[15].empty()) r.kloc = std::stod(f[15]);
    } catch (const std::exception&) {
      throw dataset::LabelError(lineno, "malformed number");
    }
    if (r.pure_cf + r.pure_df + r.mixed != r.total) {
      throw dataset::LabelError(lineno, "fault types do not sum to the total");
    }
    out.push_back(std::move(r));
  }
  return out;
}

FrequencyRow to_frequency_row(const AggregateRow& a) {
  FrequencyRow row;
  row.name = a.project;
  row.classes = a.classes;
  row.pure_cf = a.pure_cf;
  row.pure_df = a.pure_df;
  row.mixed = a.mixed;
  row.total = a.total;
  row.mean = a.mean;
  row.std = a.std;
  return row;
}

FrequencyRow pool(const std::vector<AggregateRow>& rows) {
  FrequencyRow all;
  all.name = "All";
  double second_moment = 0;
  std::int64_t class_sum = 0;
  for (const AggregateRow& r : rows) {
    for (std::size_t i = 0; i < kClassCount; ++i) all.classes[i] += r.classes[i];
    all.pure_cf += r.pure_cf;
    all.pure_df += r.pure_df;
    all.mixed += r.mixed;
    all.total += r.total;
    std::int64_t project_sum = 0;
    for (auto c : r.classes) project_sum += c;
    class_sum += project_sum;
    // The printed mean is rounded; the exact one follows from the counts.
    double mu = r.total > 0 ? static_cast<double>(project_sum) / static_cast<double>(r.total) : 0;
    second_moment += static_cast<double>(r.total) * (r.std * r.std + mu * mu);
  }
  if (all.total > 0) {
    double n = static_cast<double>(all.total);
    all.mean = static_cast<double>(class_sum) / n;
    all.std = std::sqrt(std::max(0.0, second_moment / n - all.mean * all.mean));
  }
  return all;
}

// ---- output ----------------------------------------------------------------

std::string frequency_csv(const std::vector<FrequencyRow>& rows) {
  std::string out = "project";
  for (FaultClass c : kAllClasses) out += "," + std::string(classify::class_name(c));
  out += ",avg,std,cf,df,cfdf,total\n";
  for (const FrequencyRow& r : rows) {
    out += r.name;
    for (auto c : r.classes) out += "," + std::to_string(c);
    out += "," + fixed2(r.mean) + "," + fixed2(r.std);
    out += "," + std::to_string(r.pure_cf) + "," + std::to_string(r.pure_df) + "," + std::to_string(r.mixed);
    out += "," + std::to_string(r.total) + "\n";
  }
  return out;
}

std::string partition_csv(const std::vector<FrequencyRow>& rows) {
  std::string out = "project,pure_cf_pct,pure_df_pct,mixed_pct\n";
  for (const FrequencyRow& r : rows) {
    Partition p = percent_partition(r);
    out += r.name + "," + fixed1(p.pure_cf) + "," + fixed1(p.pure_df) + "," + fixed1(p.mixed) + "\n";
  }
  return out;
}

std::string cooccurrence_csv(const Cooccurrence& m) {
  std::string out = "class";
  for (FaultClass c : kAllClasses) out += "," + std::string(classify::class_name(c));
  out += "\n";
  for (std::size_t i = 0; i < kClassCount; ++i) {
    out += classify::class_name(kAllClasses[i]);
    for (std::size_t j = 0; j < kClassCount; ++j) {
      auto v = m.cell(i, j);
      out += "," + (v ? fixed1(*v) : std::string());
    }
    out += "\n";
  }
  return out;
}

std::string distribution_csv(const std::vector<DistributionRow>& rows) {
  std::string out = "project,min,q1,median,q3,max";
  for (std::size_t k = 1; k <= kClassCount; ++k) out += ",n" + std::to_string(k);
  out += "\n";
  for (const DistributionRow& r : rows) {
    out += r.name + "," + trim_number(r.min) + "," + trim_number(r.q1) + "," + trim_number(r.median) + "," +
           trim_number(r.q3) + "," + trim_number(r.max);
    for (std::size_t k = 1; k <= kClassCount; ++k) out += "," + std::to_string(r.hist[k]);
    out += "\n";
  }
  return out;
}

}  // namespace ffc::stats
