#include "ganbench/datamodel.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <opencv2/imgcodecs.hpp>
#include <set>
#include <sstream>

#include "ganbench/error.hpp"
#include "ganbench/rng.hpp"

namespace fs = std::filesystem;

namespace ganbench::data {

std::string Manifest::resolve(const Entry& e) const {
  if (root.empty() || fs::path(e.path).is_absolute()) return e.path;
  return (fs::path(root) / e.path).string();
}

Manifest load_manifest(const std::string& root, Label label,
                       const std::string& source, LoadReport* report) {
  require(fs::is_directory(root), "dataset root does not exist: ", root);
  std::vector<std::string> files;
  for (const auto& de : fs::recursive_directory_iterator(root))
    if (de.is_regular_file()) {
      files.push_back(fs::relative(de.path(), root).generic_string());
    }
  std::sort(files.begin(), files.end());

  Manifest m;
  m.root = root;
  LoadReport rep;
  for (const auto& rel : files) {
    cv::Mat img = cv::imread((fs::path(root) / rel).string(), cv::IMREAD_COLOR);
    if (img.empty()) {
      std::cerr << "warning: skipping undecodable file: " << rel << "\n";
      ++rep.skipped;
      continue;
    }
    Entry e;
    e.path = rel;
    e.label = label;
    e.source = source;
    const auto slash = rel.find('/');
    if (slash != std::string::npos) e.subject_id = rel.substr(0, slash);
    m.entries.push_back(std::move(e));
    ++rep.loaded;
  }
  if (m.entries.empty())
    std::cerr << "warning: no decodable images under " << root << "\n";
  if (report) *report = rep;
  return m;
}

std::string serialize_manifest(const Manifest& m) {
  std::ostringstream os;
  os << "# root\t" << m.root << "\n";
  for (const auto& e : m.entries)
    os << e.path << "\t" << to_string(e.label) << "\t" << e.subject_id << "\t"
       << e.source << "\n";
  return os.str();
}

void save_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write manifest: ", path);
  out << serialize_manifest(m);
  require(out.good(), "short write on manifest: ", path);
}

Manifest load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open manifest: ", path);
  Manifest m;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# root\t", 0) == 0) m.root = line.substr(7);
      continue;
    }
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    require(f.size() == 4, "malformed manifest line in ", path, ": ", line);
    require(seen.insert(f[0]).second, "duplicate path in manifest: ", f[0]);
    m.entries.push_back({f[0], label_from_string(f[1]), f[2], f[3]});
  }
  return m;
}

FaceImage load_entry(const Manifest& m, const Entry& e) {
  FaceImage img;
  img.pixels = load_image(m.resolve(e));
  img.label = e.label;
  img.subject_id = e.subject_id;
  img.source = e.source;
  return img;
}

namespace {

Manifest take(const Manifest& m, const std::vector<std::size_t>& idx) {
  Manifest out;
  out.root = m.root;
  out.entries.reserve(idx.size());
  for (auto i : idx) out.entries.push_back(m.entries[i]);
  std::sort(out.entries.begin(), out.entries.end(),
            [](const Entry& a, const Entry& b) { return a.path < b.path; });
  return out;
}

// Shuffled whole-subject assignment: subjects go to the first bucket
// until its image quota is met.
void split_by_subject(const Manifest& m, std::size_t first_target,
                      std::uint64_t seed, std::uint64_t stream,
                      std::vector<std::size_t>* first,
                      std::vector<std::size_t>* second) {
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < m.entries.size(); ++i)
    by_subject[m.entries[i].subject_id].push_back(i);
  require(by_subject.size() >= 2,
          "subject-disjoint split impossible: all ", m.entries.size(),
          " entries share one subject_id");
  std::vector<std::string> subjects;
  for (const auto& [s, _] : by_subject) subjects.push_back(s);
  auto rng = make_rng(seed, stream);
  std::shuffle(subjects.begin(), subjects.end(), rng);
  for (const auto& s : subjects) {
    auto& dst = (first->size() < first_target) ? *first : *second;
    for (auto i : by_subject[s]) dst.push_back(i);
  }
  require(!first->empty() && !second->empty(),
          "subject-disjoint split produced an empty partition");
}

void split_by_image(const Manifest& m, std::size_t first_target,
                    std::uint64_t seed, std::uint64_t stream,
                    std::vector<std::size_t>* first,
                    std::vector<std::size_t>* second) {
  std::vector<std::size_t> idx(m.entries.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto rng = make_rng(seed, stream);
  std::shuffle(idx.begin(), idx.end(), rng);
  first->assign(idx.begin(), idx.begin() + first_target);
  second->assign(idx.begin() + first_target, idx.end());
}

}  // namespace

std::tuple<Manifest, Manifest, Manifest> make_splits(const Manifest& m,
                                                     const SplitSpec& spec) {
  require(!m.empty(), "cannot split an empty manifest");
  require(spec.dev_fraction > 0 && spec.dev_fraction < 1,
          "dev_fraction out of (0,1)");
  require(spec.train_fraction_within_dev > 0 &&
              spec.train_fraction_within_dev < 1,
          "train_fraction_within_dev out of (0,1)");

  // +1e-9 so that decimal fractions like 0.70*100 floor to 70, not 69.
  const auto n = m.entries.size();
  const auto dev_target = static_cast<std::size_t>(
      spec.dev_fraction * static_cast<double>(n) + 1e-9);

  std::vector<std::size_t> dev_idx, eval_idx;
  if (spec.subject_disjoint)
    split_by_subject(m, dev_target, spec.seed, 1, &dev_idx, &eval_idx);
  else
    split_by_image(m, dev_target, spec.seed, 1, &dev_idx, &eval_idx);

  // Within dev: floor the validation share, remainder to train.
  const auto val_target = static_cast<std::size_t>(
      (1.0 - spec.train_fraction_within_dev) *
          static_cast<double>(dev_idx.size()) +
      1e-9);
  auto rng = make_rng(spec.seed, 2);
  std::shuffle(dev_idx.begin(), dev_idx.end(), rng);
  std::vector<std::size_t> val_idx(dev_idx.begin(), dev_idx.begin() + val_target);
  std::vector<std::size_t> train_idx(dev_idx.begin() + val_target,
                                     dev_idx.end());
  return {take(m, train_idx), take(m, val_idx), take(m, eval_idx)};
}

std::pair<Manifest, Manifest> split_train_val(const Manifest& m,
                                              double val_fraction,
                                              std::uint64_t seed,
                                              bool subject_disjoint) {
  require(!m.empty(), "cannot split an empty manifest");
  require(val_fraction > 0 && val_fraction < 1, "val_fraction out of (0,1)");
  const auto val_target = static_cast<std::size_t>(
      val_fraction * static_cast<double>(m.entries.size()) + 1e-9);
  std::vector<std::size_t> val_idx, train_idx;
  if (subject_disjoint)
    split_by_subject(m, val_target, seed, 3, &val_idx, &train_idx);
  else
    split_by_image(m, val_target, seed, 3, &val_idx, &train_idx);
  return {take(m, train_idx), take(m, val_idx)};
}

std::pair<Manifest, Manifest> balance(const Manifest& real,
                                      const Manifest& fake,
                                      std::uint64_t seed) {
  require(!real.empty() && !fake.empty(), "balance: empty manifest");
  if (real.size() == fake.size()) return {real, fake};
  const auto target = std::min(real.size(), fake.size());
  auto subsample = [&](const Manifest& m, std::uint64_t stream) {
    if (m.size() == target) return m;
    std::vector<std::size_t> idx(m.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto rng = make_rng(seed, stream);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(target);
    return take(m, idx);
  };
  return {subsample(real, 4), subsample(fake, 5)};
}

}  // namespace ganbench::data
