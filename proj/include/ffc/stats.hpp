// Frequencies, class-count distribution and co-occurrence over label rows.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffc/dataset.hpp"

namespace ffc::stats {

using classify::kClassCount;

/// Integer counters everything else is derived from. pair[i][j] counts rows
/// carrying both class i and j; the diagonal is the per-class count.
struct Tally {
  std::array<std::array<std::int64_t, kClassCount>, kClassCount> pair{};
  std::array<std::int64_t, 3> type{};              // indexed by FaultType
  std::array<std::int64_t, kClassCount + 1> hist{};  // classes-per-row, 0..8
  std::int64_t n = 0;

  std::int64_t count(std::size_t c) const { return pair[c][c]; }
  void merge(const Tally& o);
  bool operator==(const Tally&) const = default;
};

/// Row class sets as bitmasks (bit i = kAllClasses[i]).
std::vector<unsigned> masks_of(const std::vector<dataset::LabelRow>& rows);

Tally tally_serial(const std::vector<unsigned>& masks);
/// OpenMP fold over per-thread tallies; equal to tally_serial for any thread count.
Tally tally_parallel(const std::vector<unsigned>& masks, int threads = 0);

struct FrequencyRow {
  std::string name;  // project, or "All"
  std::array<std::int64_t, kClassCount> classes{};
  std::int64_t pure_cf = 0, pure_df = 0, mixed = 0;
  std::int64_t total = 0;
  double mean = 0;  // classes per fault
  double std = 0;   // population
};

FrequencyRow frequency_row(const std::string& name, const Tally& t);

/// One row per project (sorted) followed by "All". Throws on empty input.
std::vector<FrequencyRow> frequencies(const std::vector<dataset::LabelRow>& rows, bool by_project = true);

struct Cooccurrence {
  std::array<std::int64_t, kClassCount> count{};
  std::array<std::array<std::int64_t, kClassCount>, kClassCount> both{};

  /// 100 * |i and j| / |i|; empty when class i never occurs.
  std::optional<double> cell(std::size_t i, std::size_t j) const;
};

Cooccurrence cooccurrence(const std::vector<dataset::LabelRow>& rows);

struct DistributionRow {
  std::string name;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::array<std::int64_t, kClassCount + 1> hist{};  // index = classes per fault
};

/// Quartiles are medians of the lower and upper halves; for odd n both
/// halves include the median.
DistributionRow distribution_of(const std::string& name, const std::array<std::int64_t, kClassCount + 1>& hist);
std::vector<DistributionRow> distribution(const std::vector<dataset::LabelRow>& rows, bool by_project);

struct Partition {
  double pure_cf = 0, pure_df = 0, mixed = 0;  // percent, one decimal
};

/// Round-half-up to one decimal on exact integer ratios.
double percent1(std::int64_t part, std::int64_t whole);
Partition percent_partition(const std::vector<dataset::LabelRow>& rows);
Partition percent_partition(const FrequencyRow& row);

// ---- Table 1 aggregate input ----------------------------------------------

/// Per-project aggregate as printed in the frequency table: class counts,
/// avg and std per fault, fault-type counts, total.
struct AggregateRow {
  std::string project;
  std::array<std::int64_t, kClassCount> classes{};
  double mean = 0, std = 0;
  std::int64_t pure_cf = 0, pure_df = 0, mixed = 0, total = 0;
  std::optional<double> kloc;
};

/// CSV with header project,order,...,use,avg,std,cf,df,cfdf,total[,kloc].
/// Rows named "All" are ignored (the pooled row is recomputed).
std::vector<AggregateRow> parse_aggregate(const std::string& text);
bool is_aggregate_csv(const std::string& text);

/// Sums counts; mean is exact (class total / faults), std pooled from the
/// per-project mean and std.
FrequencyRow pool(const std::vector<AggregateRow>& rows);
FrequencyRow to_frequency_row(const AggregateRow& row);

// ---- output ----------------------------------------------------------------

/// Table-1 column order: project, eight classes, avg, std, CF, DF, CF/DF, All.
std::string frequency_csv(const std::vector<FrequencyRow>& rows);
std::string partition_csv(const std::vector<FrequencyRow>& rows);
std::string cooccurrence_csv(const Cooccurrence& m);
std::string distribution_csv(const std::vector<DistributionRow>& rows);

}  // namespace ffc::stats
