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

#include "fairdl/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "fairdl/protocol/baselines.h"
#include "json.hpp"

namespace fairdl {

using nlohmann::json;

namespace {

constexpr EventKind kEventKinds[] = {EventKind::kExcluded, EventKind::kTokensExhausted,
                                     EventKind::kPrivacyExhausted, EventKind::kJoined,
                                     EventKind::kDeparted};
constexpr DetectionStage kStages[] = {DetectionStage::kInit, DetectionStage::kUpdate,
                                      DetectionStage::kNever};

EventKind ParseEventKind(const std::string& name) {
  for (EventKind k : kEventKinds) {
    if (EventKindName(k) == name) return k;
  }
  throw std::invalid_argument("unknown event kind " + name);
}

DetectionStage ParseStage(const std::string& name) {
  for (DetectionStage s : kStages) {
    if (DetectionStageName(s) == name) return s;
  }
  throw std::invalid_argument("unknown detection stage " + name);
}

template <typename T>
T Unwrap(absl::StatusOr<T> v) {
  if (!v.ok()) throw std::invalid_argument(std::string(v.status().message()));
  return *std::move(v);
}

std::set<PartyId> AdversaryIds(const ExperimentConfig& config) {
  std::set<PartyId> ids;
  for (const AdversaryConfig& a : config.adversaries) ids.insert(a.party);
  return ids;
}

absl::StatusOr<FairnessReport> HonestFairness(const ExperimentConfig& config,
                                              const SettingSpec& spec,
                                              const std::vector<double>& standalone,
                                              const std::vector<double>& final_acc) {
  const std::set<PartyId> adversaries = AdversaryIds(config);
  std::vector<double> lambda, sacc, y;
  for (size_t i = 0; i < final_acc.size(); ++i) {
    if (adversaries.count(static_cast<PartyId>(i))) continue;
    lambda.push_back(spec.sharing_levels[i]);
    sacc.push_back(standalone[i]);
    y.push_back(final_acc[i]);
  }
  absl::StatusOr<std::vector<double>> x = BuildXAxis(spec.setting, lambda, sacc);
  if (!x.ok()) return x.status();
  return Fairness(*x, y);
}

void FillFdpddl(const ExperimentConfig& config, CellData cell, CellResult& out) {
  absl::StatusOr<FdpddlSimulation> sim =
      FdpddlSimulation::Create(config, std::move(cell.parties), std::move(cell.test), out.seed);
  if (!sim.ok()) {
    out.error = sim.status().ToString();
    return;
  }
  absl::StatusOr<FdpddlResult> r = sim->Run();
  // A failed initialisation still leaves pretraining results and events.
  const FdpddlResult res = r.ok() ? *std::move(r) : sim->Result();
  if (!r.ok()) out.error = r.status().ToString();
  out.standalone_accuracy = res.standalone_accuracy;
  out.final_accuracy = res.final_accuracy;
  for (const RoundRecord& rec : res.rounds) {
    if (rec.round == 0) continue;
    if (out.trace.size() < static_cast<size_t>(rec.round)) {
      out.trace.resize(rec.round, std::vector<double>(res.final_accuracy.size()));
    }
    out.trace[rec.round - 1][rec.party] = rec.test_accuracy;
  }
  out.rounds = res.rounds;
  out.credibility = res.credibility;
  out.events = res.events;
  out.detections = DetectionReport(config.adversaries, res.events);
  out.chain_jsonl = ChainToJsonl(res.chain);
}

std::string Fixed(double v) { return absl::StrFormat("%.6f", v); }
std::string Str(std::string_view v) { return std::string(v); }

json DoublesToJson(const std::vector<double>& v) { return json(v); }

json CellToJson(const CellResult& c) {
  json j;
  j["framework"] = FrameworkName(c.framework);
  j["seed"] = c.seed;
  j["spec"] = {{"setting", c.spec.setting},
               {"parties", c.spec.parties},
               {"sizes", c.spec.sizes},
               {"sharing_levels", c.spec.sharing_levels}};
  j["error"] = c.error;
  j["standalone_accuracy"] = DoublesToJson(c.standalone_accuracy);
  j["final_accuracy"] = DoublesToJson(c.final_accuracy);
  j["trace"] = c.trace;
  if (c.fairness) {
    j["fairness"] = {{"x", c.fairness->x},
                     {"y", c.fairness->y},
                     {"r", c.fairness->r},
                     {"defined", c.fairness->defined},
                     {"note", c.fairness->note}};
  } else {
    j["fairness"] = nullptr;
  }
  json rounds = json::array();
  for (const RoundRecord& r : c.rounds) {
    rounds.push_back({r.round, r.party, r.test_accuracy, r.validation_accuracy,
                      r.tokens, r.downloaded, r.offered, r.credible});
  }
  j["rounds"] = std::move(rounds);
  json cred = json::array();
  for (const CredibilityRecord& r : c.credibility) {
    cred.push_back({r.round, r.owner, r.peer, r.value});
  }
  j["credibility"] = std::move(cred);
  json events = json::array();
  for (const RunEvent& e : c.events) {
    events.push_back({EventKindName(e.kind), e.party, e.round});
  }
  j["events"] = std::move(events);
  json det = json::array();
  for (const Detection& d : c.detections) {
    det.push_back({d.party, AdversaryKindName(d.kind), d.detected,
                   DetectionStageName(d.stage), d.round});
  }
  j["detections"] = std::move(det);
  j["chain_jsonl"] = c.chain_jsonl;
  return j;
}

CellResult CellFromJson(const json& j) {
  CellResult c;
  c.framework = Unwrap(ParseFramework(j.at("framework").get<std::string>()));
  c.seed = j.at("seed").get<uint64_t>();
  const json& spec = j.at("spec");
  c.spec.setting = spec.at("setting").get<int>();
  c.spec.parties = spec.at("parties").get<size_t>();
  c.spec.sizes = spec.at("sizes").get<std::vector<size_t>>();
  c.spec.sharing_levels = spec.at("sharing_levels").get<std::vector<double>>();
  c.error = j.at("error").get<std::string>();
  c.standalone_accuracy = j.at("standalone_accuracy").get<std::vector<double>>();
  c.final_accuracy = j.at("final_accuracy").get<std::vector<double>>();
  c.trace = j.at("trace").get<std::vector<std::vector<double>>>();
  if (const json& f = j.at("fairness"); !f.is_null()) {
    FairnessReport r;
    r.x = f.at("x").get<std::vector<double>>();
    r.y = f.at("y").get<std::vector<double>>();
    r.r = f.at("r").get<double>();
    r.defined = f.at("defined").get<bool>();
    r.note = f.at("note").get<std::string>();
    c.fairness = std::move(r);
  }
  for (const json& r : j.at("rounds")) {
    c.rounds.push_back({r.at(0).get<int>(), r.at(1).get<PartyId>(), r.at(2).get<double>(),
                        r.at(3).get<double>(), r.at(4).get<int64_t>(),
                        r.at(5).get<int64_t>(), r.at(6).get<int64_t>(),
                        r.at(7).get<bool>()});
  }
  for (const json& r : j.at("credibility")) {
    c.credibility.push_back({r.at(0).get<int>(), r.at(1).get<PartyId>(),
                             r.at(2).get<PartyId>(), r.at(3).get<double>()});
  }
  for (const json& e : j.at("events")) {
    c.events.push_back({ParseEventKind(e.at(0).get<std::string>()),
                        e.at(1).get<PartyId>(), e.at(2).get<int>()});
  }
  for (const json& d : j.at("detections")) {
    c.detections.push_back({d.at(0).get<PartyId>(),
                            Unwrap(ParseAdversaryKind(d.at(1).get<std::string>())),
                            d.at(2).get<bool>(), ParseStage(d.at(3).get<std::string>()),
                            d.at(4).get<int>()});
  }
  c.chain_jsonl = j.at("chain_jsonl").get<std::string>();
  return c;
}

std::string AccuracyCsv(const RunTrace& t) {
  std::string out = "framework,seed,party,size,sharing_level,standalone_accuracy,final_accuracy\n";
  for (const CellResult& c : t.cells) {
    for (size_t i = 0; i < c.final_accuracy.size(); ++i) {
      absl::StrAppend(&out, Str(FrameworkName(c.framework)), ",", c.seed, ",", i, ",",
                      i < c.spec.sizes.size() ? c.spec.sizes[i] : 0, ",",
                      i < c.spec.sharing_levels.size() ? Fixed(c.spec.sharing_levels[i])
                                                       : Fixed(0),
                      ",", Fixed(c.standalone_accuracy[i]), ",",
                      Fixed(c.final_accuracy[i]), "\n");
    }
  }
  return out;
}

std::string FairnessCsv(const RunTrace& t) {
  std::string out = "framework,seed,r,defined,note\n";
  for (const CellResult& c : t.cells) {
    if (!c.fairness) continue;
    absl::StrAppend(&out, Str(FrameworkName(c.framework)), ",", c.seed, ",",
                    c.fairness->defined ? Fixed(c.fairness->r) : "", ",",
                    c.fairness->defined ? "true" : "false", ",", c.fairness->note, "\n");
  }
  return out;
}

std::string RoundsCsv(const RunTrace& t) {
  std::string out =
      "seed,round,party,test_accuracy,validation_accuracy,tokens,downloaded,offered,"
      "credible\n";
  for (const CellResult& c : t.cells) {
    for (const RoundRecord& r : c.rounds) {
      absl::StrAppend(&out, c.seed, ",", r.round, ",", r.party, ",",
                      Fixed(r.test_accuracy), ",", Fixed(r.validation_accuracy), ",",
                      r.tokens, ",", r.downloaded, ",", r.offered, ",",
                      r.credible ? "true" : "false", "\n");
    }
  }
  return out;
}

std::string CredibilityCsv(const RunTrace& t) {
  std::string out = "seed,round,owner,peer,credibility\n";
  for (const CellResult& c : t.cells) {
    for (const CredibilityRecord& r : c.credibility) {
      absl::StrAppend(&out, c.seed, ",", r.round, ",", r.owner, ",", r.peer, ",",
                      Fixed(r.value), "\n");
    }
  }
  return out;
}

std::string DetectionCsv(const RunTrace& t) {
  std::string out = "seed,party,kind,detected,stage,round\n";
  for (const CellResult& c : t.cells) {
    for (const Detection& d : c.detections) {
      absl::StrAppend(&out, c.seed, ",", d.party, ",", Str(AdversaryKindName(d.kind)), ",",
                      d.detected ? "true" : "false", ",", Str(DetectionStageName(d.stage)),
                      ",", d.round, "\n");
    }
  }
  return out;
}

std::string SummaryJson(const RunTrace& t) {
  json j;
  j["name"] = t.config.name;
  j["setting"] = t.config.partition.setting;
  j["parties"] = t.config.partition.parties;
  j["seeds"] = t.config.seeds;
  json frameworks = json::object();
  for (const FrameworkSummary& s : Summarize(t)) {
    json f;
    f["cells"] = s.cells;
    f["failed"] = s.failed;
    f["mean_standalone_accuracy"] = s.mean_standalone_accuracy;
    f["mean_final_accuracy"] = s.mean_final_accuracy;
    f["mean_fairness"] = s.mean_fairness ? json(*s.mean_fairness) : json(nullptr);
    f["fairness_defined"] = s.fairness_defined;
    frameworks[std::string(FrameworkName(s.framework))] = std::move(f);
  }
  j["frameworks"] = std::move(frameworks);
  json detection = json::array();
  for (const AdversaryConfig& a : t.config.adversaries) {
    size_t runs = 0, init = 0, update = 0;
    for (const CellResult& c : t.cells) {
      for (const Detection& d : c.detections) {
        if (d.party != a.party) continue;
        ++runs;
        init += d.stage == DetectionStage::kInit;
        update += d.stage == DetectionStage::kUpdate;
      }
    }
    detection.push_back({{"party", a.party},
                         {"kind", AdversaryKindName(a.kind)},
                         {"runs", runs},
                         {"detected_at_init", init},
                         {"detected_at_update", update},
                         {"undetected", runs - init - update}});
  }
  j["detection"] = std::move(detection);
  json errors = json::array();
  for (const CellResult& c : t.cells) {
    if (!c.error.empty()) {
      errors.push_back({{"framework", FrameworkName(c.framework)},
                        {"seed", c.seed},
                        {"error", c.error}});
    }
  }
  j["errors"] = std::move(errors);
  return j.dump(2) + "\n";
}

}  // namespace

CellResult RunCell(const ExperimentConfig& config, FrameworkKind framework,
                   uint64_t seed) {
  CellResult out;
  out.framework = framework;
  out.seed = seed;
  absl::StatusOr<CellData> cell = BuildCell(config, seed);
  if (!cell.ok()) {
    out.error = cell.status().ToString();
    return out;
  }
  out.spec = cell->spec;
  if (framework == FrameworkKind::kFdpddl) {
    FillFdpddl(config, *std::move(cell), out);
  } else {
    absl::StatusOr<BaselineResult> r;
    switch (framework) {
      case FrameworkKind::kStandalone:
        r = RunStandalone(config, cell->parties, cell->test, seed);
        break;
      case FrameworkKind::kCentralised:
        r = RunCentralised(config, cell->parties, cell->test, seed);
        break;
      default:
        r = RunDistributed(config, cell->parties, cell->test, seed);
        break;
    }
    if (!r.ok()) {
      out.error = r.status().ToString();
      return out;
    }
    out.standalone_accuracy = r->standalone_accuracy;
    out.final_accuracy = r->final_accuracy;
    out.trace = r->trace;
  }
  if (out.error.empty() && (framework == FrameworkKind::kFdpddl ||
                            framework == FrameworkKind::kDistributed)) {
    absl::StatusOr<FairnessReport> f =
        HonestFairness(config, out.spec, out.standalone_accuracy, out.final_accuracy);
    if (f.ok()) {
      out.fairness = *std::move(f);
    } else {
      out.fairness.emplace();
      out.fairness->note = std::string(f.status().message());
    }
  }
  return out;
}

absl::StatusOr<RunTrace> RunExperiment(const ExperimentConfig& config, size_t threads) {
  if (std::vector<std::string> errors = config.Validate(); !errors.empty()) {
    return absl::InvalidArgumentError(absl::StrJoin(errors, "; "));
  }
  RunTrace trace;
  trace.config = config;
  std::vector<std::pair<FrameworkKind, uint64_t>> jobs;
  for (uint64_t seed : config.seeds) {
    for (FrameworkKind f : config.frameworks) jobs.emplace_back(f, seed);
  }
  trace.cells.resize(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      trace.cells[i] = RunCell(config, jobs[i].first, jobs[i].second);
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return trace;
}

std::vector<FrameworkSummary> Summarize(const RunTrace& trace) {
  std::vector<FrameworkSummary> out;
  for (FrameworkKind f : trace.config.frameworks) {
    FrameworkSummary s;
    s.framework = f;
    size_t ok = 0;
    double r_sum = 0;
    for (const CellResult& c : trace.cells) {
      if (c.framework != f) continue;
      ++s.cells;
      if (!c.error.empty()) {
        ++s.failed;
        continue;
      }
      ++ok;
      if (s.mean_final_accuracy.size() < c.final_accuracy.size()) {
        s.mean_final_accuracy.resize(c.final_accuracy.size());
        s.mean_standalone_accuracy.resize(c.final_accuracy.size());
      }
      for (size_t i = 0; i < c.final_accuracy.size(); ++i) {
        s.mean_final_accuracy[i] += c.final_accuracy[i];
        s.mean_standalone_accuracy[i] += c.standalone_accuracy[i];
      }
      if (c.fairness && c.fairness->defined) {
        ++s.fairness_defined;
        r_sum += c.fairness->r;
      }
    }
    for (double& v : s.mean_final_accuracy) v /= static_cast<double>(ok);
    for (double& v : s.mean_standalone_accuracy) v /= static_cast<double>(ok);
    if (s.fairness_defined > 0) {
      s.mean_fairness = r_sum / static_cast<double>(s.fairness_defined);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string TraceToJson(const RunTrace& trace) {
  json j;
  j["config"] = json::parse(ConfigToJson(trace.config));
  json cells = json::array();
  for (const CellResult& c : trace.cells) cells.push_back(CellToJson(c));
  j["cells"] = std::move(cells);
  return j.dump(1) + "\n";
}

absl::StatusOr<RunTrace> TraceFromJson(std::string_view text) {
  try {
    const json j = json::parse(text);
    absl::StatusOr<ExperimentConfig> config = ConfigFromJson(j.at("config").dump());
    if (!config.ok()) return config.status();
    RunTrace trace;
    trace.config = *std::move(config);
    for (const json& c : j.at("cells")) trace.cells.push_back(CellFromJson(c));
    return trace;
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad trace: ", e.what()));
  }
}

std::vector<ReportFile> RenderReport(const RunTrace& trace) {
  std::vector<ReportFile> files = {
      {"accuracy.csv", AccuracyCsv(trace)},       {"fairness.csv", FairnessCsv(trace)},
      {"rounds.csv", RoundsCsv(trace)},           {"credibility.csv", CredibilityCsv(trace)},
      {"detection.csv", DetectionCsv(trace)},     {"summary.json", SummaryJson(trace)},
  };
  for (const CellResult& c : trace.cells) {
    if (c.framework == FrameworkKind::kFdpddl && !c.chain_jsonl.empty()) {
      files.push_back({absl::StrCat("chain_seed", c.seed, ".jsonl"), c.chain_jsonl});
    }
  }
  files.push_back({"trace.json", TraceToJson(trace)});
  return files;
}

absl::Status WriteReport(const RunTrace& trace, const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrFormat("cannot create %s: %s", directory, ec.message()));
  }
  for (const ReportFile& f : RenderReport(trace)) {
    const std::filesystem::path path = std::filesystem::path(directory) / f.name;
    std::ofstream out(path, std::ios::binary);
    out << f.contents;
    if (!out) return absl::InternalError("cannot write " + path.string());
  }
  return absl::OkStatus();
}

}  // namespace fairdl
