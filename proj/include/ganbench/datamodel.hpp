#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ganbench/image.hpp"

namespace ganbench::data {

struct Entry {
  std::string path;  // relative to Manifest::root unless absolute
  Label label = Label::REAL;
  std::string subject_id;  // empty for synthetic images
  std::string source;
};

// Declarative listing of a dataset. Immutable after construction; cheap
// to copy. Persisted as one tab-separated record per line.
struct Manifest {
  std::string root;
  std::vector<Entry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::string resolve(const Entry& e) const;
};

struct LoadReport {
  int loaded = 0;
  int skipped = 0;  // undecodable files
};

struct SplitSpec {
  double dev_fraction = 0.70;
  double train_fraction_within_dev = 0.75;
  std::uint64_t seed = 0;
  bool subject_disjoint = false;
};

// Scans a directory tree; one entry per decodable image. subject_id is
// the first path component under root when the file sits in a
// subdirectory, empty for flat layouts.
Manifest load_manifest(const std::string& root, Label label,
                       const std::string& source,
                       LoadReport* report = nullptr);

void save_manifest(const std::string& path, const Manifest& m);
Manifest load_manifest_file(const std::string& path);
std::string serialize_manifest(const Manifest& m);

FaceImage load_entry(const Manifest& m, const Entry& e);

// Partitions into (train, val, eval). Sizes: |eval| = N - floor(dev_f*N),
// |val| = floor((1-train_f)*|dev|), |train| = |dev| - |val|. When
// subject_disjoint, whole subjects are assigned to dev or eval.
std::tuple<Manifest, Manifest, Manifest> make_splits(const Manifest& m,
                                                     const SplitSpec& spec);

// Train/val split of a single pool, honouring subject grouping.
std::pair<Manifest, Manifest> split_train_val(const Manifest& m,
                                              double val_fraction,
                                              std::uint64_t seed,
                                              bool subject_disjoint);

// Uniform random subsampling of the larger side to min(|real|, |fake|).
// When sizes already match, both manifests are returned unchanged.
std::pair<Manifest, Manifest> balance(const Manifest& real,
                                      const Manifest& fake,
                                      std::uint64_t seed);

}  // namespace ganbench::data
