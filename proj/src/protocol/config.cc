// Copyright 2026 The fairdl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairdl/protocol/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fairdl/privacy/accountant.h"
#include "json.hpp"

namespace fairdl {

using nlohmann::json;

namespace {

constexpr std::string_view kFrameworkNames[] = {"standalone", "centralised",
                                                "distributed", "fdpddl"};

// Reads fields from a JSON object, keeping defaults for missing keys and
// collecting unknown keys and type errors.
class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(path_ + " must be an object");
  }
  ~Reader() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        errors_.push_back(absl::StrFormat("unknown field %s.%s", path_, it.key()));
      }
    }
  }

  template <typename T>
  void Get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(absl::StrFormat("%s.%s has the wrong type", path_, key));
    }
  }

  const json* Child(const char* key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

json BlobsToJson(const BlobSpec& b) {
  return {{"num_classes", b.num_classes}, {"dim", b.dim},
          {"center_low", b.center_low},   {"center_high", b.center_high},
          {"spread", b.spread}};
}

}  // namespace

std::string_view FrameworkName(FrameworkKind kind) {
  return kFrameworkNames[static_cast<int>(kind)];
}

absl::StatusOr<FrameworkKind> ParseFramework(std::string_view name) {
  for (int k = 0; k < 4; ++k) {
    if (kFrameworkNames[k] == name) return static_cast<FrameworkKind>(k);
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown framework '%s'", std::string(name)));
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json adversaries = json::array();
  for (const AdversaryConfig& a : c.adversaries) {
    adversaries.push_back({{"party", a.party},
                           {"kind", std::string(AdversaryKindName(a.kind))},
                           {"scale", a.scale},
                           {"adversary_classes", a.adversary_classes},
                           {"non_iid", a.non_iid}});
  }
  json frameworks = json::array();
  for (FrameworkKind f : c.frameworks) frameworks.push_back(std::string(FrameworkName(f)));
  json j = {
      {"name", c.name},
      {"dataset",
       {{"name", c.dataset.name},
        {"source", c.dataset.source},
        {"blobs", BlobsToJson(c.dataset.blobs)},
        {"csv_path", c.dataset.csv_path},
        {"idx_images", c.dataset.idx_images},
        {"idx_labels", c.dataset.idx_labels},
        {"num_classes", c.dataset.num_classes},
        {"test_size", c.dataset.test_size},
        {"augment", c.dataset.augment},
        {"rotation_range", c.dataset.rotation_range},
        {"shift_range", c.dataset.shift_range},
        {"augmentation_factor", c.dataset.augmentation_factor}}},
      {"partition",
       {{"setting", c.partition.setting},
        {"parties", c.partition.parties},
        {"examples_per_party", c.partition.examples_per_party},
        {"min_party_size", c.partition.min_party_size},
        {"dirichlet_alpha", c.partition.dirichlet_alpha},
        {"lambda", c.partition.lambda},
        {"lambda_low", c.partition.lambda_low},
        {"lambda_high", c.partition.lambda_high},
        {"validation_fraction", c.partition.validation_fraction}}},
      {"training",
       {{"hidden", c.training.hidden},
        {"learning_rate", c.training.learning_rate},
        {"decay", c.training.decay},
        {"batch_size", c.training.batch_size},
        {"pretrain_epochs", c.training.pretrain_epochs}}},
      {"privacy",
       {{"epsilon_per_step", c.privacy.epsilon_per_step},
        {"delta_per_step", c.privacy.delta_per_step},
        {"clip_norm", c.privacy.clip_norm},
        {"strategy", c.privacy.strategy},
        {"steps_per_round", c.privacy.steps_per_round},
        {"lot_size", c.privacy.lot_size},
        {"learning_rate", c.privacy.learning_rate}}},
      {"release",
       {{"epsilon", c.release.epsilon},
        {"delta", c.release.delta},
        {"jitter", c.release.jitter}}},
      {"protocol",
       {{"rounds", c.protocol.rounds},
        {"threshold", c.protocol.threshold},
        {"token_reserve", c.protocol.token_reserve},
        {"fine_factor", c.protocol.fine_factor},
        {"latency", c.protocol.latency},
        {"timeout", c.protocol.timeout}}},
      {"dssgd",
       {{"upload_rate", c.dssgd.upload_rate},
        {"download_rate", c.dssgd.download_rate},
        {"local_epochs", c.dssgd.local_epochs}}},
      {"adversaries", adversaries},
      {"frameworks", frameworks},
      {"seeds", c.seeds},
      {"max_parties", c.max_parties}};
  return j.dump(2) + "\n";
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("config is not valid JSON");
  ExperimentConfig c;
  std::vector<std::string> errors;
  {
    Reader r(j, "config", errors);
    r.Get("name", c.name);
    r.Get("seeds", c.seeds);
    r.Get("max_parties", c.max_parties);
    if (const json* d = r.Child("dataset")) {
      Reader rd(*d, "dataset", errors);
      rd.Get("name", c.dataset.name);
      rd.Get("source", c.dataset.source);
      rd.Get("csv_path", c.dataset.csv_path);
      rd.Get("idx_images", c.dataset.idx_images);
      rd.Get("idx_labels", c.dataset.idx_labels);
      rd.Get("num_classes", c.dataset.num_classes);
      rd.Get("test_size", c.dataset.test_size);
      rd.Get("augment", c.dataset.augment);
      rd.Get("rotation_range", c.dataset.rotation_range);
      rd.Get("shift_range", c.dataset.shift_range);
      rd.Get("augmentation_factor", c.dataset.augmentation_factor);
      if (const json* b = rd.Child("blobs")) {
        Reader rb(*b, "dataset.blobs", errors);
        rb.Get("num_classes", c.dataset.blobs.num_classes);
        rb.Get("dim", c.dataset.blobs.dim);
        rb.Get("center_low", c.dataset.blobs.center_low);
        rb.Get("center_high", c.dataset.blobs.center_high);
        rb.Get("spread", c.dataset.blobs.spread);
      }
    }
    if (const json* p = r.Child("partition")) {
      Reader rp(*p, "partition", errors);
      rp.Get("setting", c.partition.setting);
      rp.Get("parties", c.partition.parties);
      rp.Get("examples_per_party", c.partition.examples_per_party);
      rp.Get("min_party_size", c.partition.min_party_size);
      rp.Get("dirichlet_alpha", c.partition.dirichlet_alpha);
      rp.Get("lambda", c.partition.lambda);
      rp.Get("lambda_low", c.partition.lambda_low);
      rp.Get("lambda_high", c.partition.lambda_high);
      rp.Get("validation_fraction", c.partition.validation_fraction);
    }
    if (const json* t = r.Child("training")) {
      Reader rt(*t, "training", errors);
      rt.Get("hidden", c.training.hidden);
      rt.Get("learning_rate", c.training.learning_rate);
      rt.Get("decay", c.training.decay);
      rt.Get("batch_size", c.training.batch_size);
      rt.Get("pretrain_epochs", c.training.pretrain_epochs);
    }
    if (const json* p = r.Child("privacy")) {
      Reader rp(*p, "privacy", errors);
      rp.Get("epsilon_per_step", c.privacy.epsilon_per_step);
      rp.Get("delta_per_step", c.privacy.delta_per_step);
      rp.Get("clip_norm", c.privacy.clip_norm);
      rp.Get("strategy", c.privacy.strategy);
      rp.Get("steps_per_round", c.privacy.steps_per_round);
      rp.Get("lot_size", c.privacy.lot_size);
      rp.Get("learning_rate", c.privacy.learning_rate);
    }
    if (const json* p = r.Child("release")) {
      Reader rp(*p, "release", errors);
      rp.Get("epsilon", c.release.epsilon);
      rp.Get("delta", c.release.delta);
      rp.Get("jitter", c.release.jitter);
    }
    if (const json* p = r.Child("protocol")) {
      Reader rp(*p, "protocol", errors);
      rp.Get("rounds", c.protocol.rounds);
      rp.Get("threshold", c.protocol.threshold);
      rp.Get("token_reserve", c.protocol.token_reserve);
      rp.Get("fine_factor", c.protocol.fine_factor);
      rp.Get("latency", c.protocol.latency);
      rp.Get("timeout", c.protocol.timeout);
    }
    if (const json* p = r.Child("dssgd")) {
      Reader rp(*p, "dssgd", errors);
      rp.Get("upload_rate", c.dssgd.upload_rate);
      rp.Get("download_rate", c.dssgd.download_rate);
      rp.Get("local_epochs", c.dssgd.local_epochs);
    }
    if (const json* f = r.Child("frameworks")) {
      c.frameworks.clear();
      if (!f->is_array()) errors.push_back("frameworks must be an array");
      for (const json& name : *f) {
        absl::StatusOr<FrameworkKind> k =
            name.is_string() ? ParseFramework(name.get<std::string>())
                             : absl::InvalidArgumentError("framework must be a string");
        if (k.ok()) {
          c.frameworks.push_back(*k);
        } else {
          errors.push_back(std::string(k.status().message()));
        }
      }
    }
    if (const json* a = r.Child("adversaries")) {
      if (!a->is_array()) errors.push_back("adversaries must be an array");
      for (size_t i = 0; a->is_array() && i < a->size(); ++i) {
        AdversaryConfig adv;
        Reader ra((*a)[i], absl::StrFormat("adversaries[%d]", i), errors);
        ra.Get("party", adv.party);
        std::string kind = std::string(AdversaryKindName(adv.kind));
        ra.Get("kind", kind);
        absl::StatusOr<AdversaryKind> k = ParseAdversaryKind(kind);
        if (k.ok()) {
          adv.kind = *k;
        } else {
          errors.push_back(std::string(k.status().message()));
        }
        ra.Get("scale", adv.scale);
        ra.Get("adversary_classes", adv.adversary_classes);
        ra.Get("non_iid", adv.non_iid);
        c.adversaries.push_back(adv);
      }
    }
  }
  if (!errors.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(errors, "; "));
  }
  return c;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrFormat("cannot open %s", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ConfigFromJson(ss.str());
}

std::vector<std::string> ExperimentConfig::Validate() const {
  std::vector<std::string> e;
  auto require = [&e](bool ok, std::string msg) {
    if (!ok) e.push_back(std::move(msg));
  };
  const size_t n = partition.parties;
  require(!name.empty(), "name must not be empty");
  require(dataset.source == "blobs" || dataset.source == "csv" ||
              dataset.source == "idx",
          "dataset.source must be blobs, csv or idx");
  if (dataset.source == "blobs") {
    require(dataset.blobs.num_classes >= 2, "dataset.blobs.num_classes must be >= 2");
    require(dataset.blobs.dim >= 1, "dataset.blobs.dim must be >= 1");
    require(dataset.blobs.spread >= 0, "dataset.blobs.spread must be >= 0");
    require(dataset.blobs.center_low <= dataset.blobs.center_high,
            "dataset.blobs.center_low must not exceed center_high");
  }
  require(dataset.source != "csv" || !dataset.csv_path.empty(),
          "dataset.csv_path is required for csv sources");
  require(dataset.source != "idx" ||
              (!dataset.idx_images.empty() && !dataset.idx_labels.empty()),
          "dataset.idx_images and idx_labels are required for idx sources");
  require(dataset.test_size >= 1, "dataset.test_size must be >= 1");
  require(dataset.augment == "tabular" || dataset.augment == "image",
          "dataset.augment must be tabular or image");
  require(dataset.augmentation_factor >= 1, "dataset.augmentation_factor must be >= 1");
  require(dataset.rotation_range >= 0 && dataset.shift_range >= 0,
          "dataset augmentation ranges must be >= 0");

  require(partition.setting >= 1 && partition.setting <= 3,
          "partition.setting must be 1, 2 or 3");
  require(n >= 2, "partition.parties must be >= 2");
  require(n <= max_parties, absl::StrFormat("partition.parties exceeds max_parties (%d)",
                                            max_parties));
  require(partition.examples_per_party >= 5, "partition.examples_per_party must be >= 5");
  require(partition.setting != 3 ||
              partition.min_party_size * n <= partition.examples_per_party * n,
          "partition.min_party_size exceeds examples_per_party");
  require(partition.setting != 3 || partition.min_party_size >= 5,
          "partition.min_party_size must be >= 5");
  require(partition.dirichlet_alpha > 0, "partition.dirichlet_alpha must be > 0");
  require(partition.lambda > 0 && partition.lambda <= 1, "partition.lambda must be in (0, 1]");
  require(partition.lambda_low > 0 && partition.lambda_low <= partition.lambda_high &&
              partition.lambda_high <= 1,
          "partition.lambda_low/high must satisfy 0 < low <= high <= 1");
  require(partition.validation_fraction > 0 && partition.validation_fraction < 1,
          "partition.validation_fraction must be in (0, 1)");

  require(!training.hidden.empty(), "training.hidden must list at least one layer");
  for (int h : training.hidden) require(h >= 1, "training.hidden widths must be >= 1");
  require(training.learning_rate > 0, "training.learning_rate must be > 0");
  require(training.decay >= 0, "training.decay must be >= 0");
  require(training.batch_size >= 1, "training.batch_size must be >= 1");

  require(CalibrateSigma(privacy.epsilon_per_step, privacy.delta_per_step).ok(),
          "privacy.epsilon_per_step must be in (0, 1] and delta_per_step in (0, 1)");
  require(privacy.clip_norm > 0, "privacy.clip_norm must be > 0");
  require(privacy.learning_rate >= 0, "privacy.learning_rate must be >= 0");
  require(ParseStrategy(privacy.strategy).ok(),
          "privacy.strategy must be basic or amplified-basic");
  require(CalibrateSigma(release.epsilon, release.delta).ok(),
          "release.epsilon must be in (0, 1] and delta in (0, 1)");
  require(release.jitter >= 0, "release.jitter must be >= 0");

  require(protocol.threshold >= 0 && protocol.threshold < 1,
          "protocol.threshold must be in [0, 1)");
  require(protocol.token_reserve >= 1,
          "protocol.token_reserve must be >= 1 so the download budget stays below the balance");
  require(protocol.fine_factor >= 0, "protocol.fine_factor must be >= 0");
  require(protocol.latency.empty() || protocol.latency.size() == n,
          "protocol.latency must be empty or list one value per party");
  require(protocol.timeout >= 0, "protocol.timeout must be >= 0");

  require(dssgd.upload_rate > 0 && dssgd.upload_rate <= 1,
          "dssgd.upload_rate must be in (0, 1]");
  require(dssgd.download_rate > 0 && dssgd.download_rate <= 1,
          "dssgd.download_rate must be in (0, 1]");
  require(dssgd.local_epochs >= 1, "dssgd.local_epochs must be >= 1");

  std::set<PartyId> adversary_parties;
  size_t gan = 0;
  for (const AdversaryConfig& a : adversaries) {
    require(a.party < n, absl::StrFormat("adversary party %d out of range", a.party));
    require(adversary_parties.insert(a.party).second,
            absl::StrFormat("party %d has more than one adversary role", a.party));
    require(a.scale >= 0, "adversary scale must be >= 0");
    if (a.kind == AdversaryKind::kGanAttacker) {
      ++gan;
      const int classes =
          dataset.source == "blobs" ? dataset.blobs.num_classes : dataset.num_classes;
      std::set<int> own(a.adversary_classes.begin(), a.adversary_classes.end());
      require(!own.empty() && static_cast<int>(own.size()) < classes,
              "gan adversary_classes must be a non-empty proper subset of classes");
      for (int cls : own) {
        require(cls >= 0 && cls < classes, "gan adversary class out of range");
      }
    }
  }
  require(gan <= 1, "at most one gan_attacker is supported");
  for (const AdversaryConfig& a : adversaries) {
    require(a.kind != AdversaryKind::kGanAttacker || !a.non_iid ||
                partition.setting != 3,
            "a non-IID gan_attacker needs equal party sizes (setting 1 or 2)");
  }
  require(adversaries.size() < n, "at least one party must be honest");
  require(!frameworks.empty(), "frameworks must not be empty");
  require(std::set<FrameworkKind>(frameworks.begin(), frameworks.end()).size() ==
              frameworks.size(),
          "frameworks must not repeat");
  require(!seeds.empty(), "seeds must not be empty");
  return e;
}

}  // namespace fairdl
