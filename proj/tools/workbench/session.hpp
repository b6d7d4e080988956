#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <ecluster/ar_space.hpp>
#include <ecluster/infinity_gon.hpp>
#include <ecluster/mutation.hpp>
#include <ecluster/polygon.hpp>

namespace workbench {

using namespace ecluster;

struct Config {
  std::uint64_t seed = 1;
  Window window{-4, 4};
  long budget = 20000;
  Ladder ladder = defaultLadder();
};

inline Window parseWindow(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("window must look like a,b");
  Window w{parseRational(text.substr(0, comma)), parseRational(text.substr(comma + 1))};
  if (!(w.lo < w.hi)) throw DomainError("window needs lo < hi");
  return w;
}

inline Json toJson(const Config& c) {
  return Json{{"seed", c.seed},
              {"window", {c.window.lo.get_str(), c.window.hi.get_str()}},
              {"budget", c.budget},
              {"ladder", {{"lower", c.ladder.lowerLimit().get_str()}, {"upper", c.ladder.upperLimit().get_str()}}}};
}

inline Config configFromJson(const Json& j) {
  Config c;
  if (!j.is_object()) return c;
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("window")) {
    const Json& w = j["window"];
    if (w.is_string()) c.window = parseWindow(w.get<std::string>());
    else c.window = {rationalFromJson(w.at(0)), rationalFromJson(w.at(1))};
  }
  if (j.contains("budget")) c.budget = j["budget"].get<long>();
  if (j.contains("ladder"))
    c.ladder = Ladder(rationalFromJson(j["ladder"].at("lower")), rationalFromJson(j["ladder"].at("upper")));
  return c;
}

// Mutation payloads shared by the CLI and the server, so both print the same bytes.

inline Json polygonFlipJson(const Ladder& L, const Triangulation& t, const Diagonal& d, Triangulation* next = nullptr) {
  auto [u, e] = flip(t, d);
  MutationResult ex = mutate(embedTriangulation(L, t), embedDiagonal(L, d));
  if (ex.added != embedDiagonal(L, e)) throw std::logic_error("flip and E-mutation disagree at " + d.str());
  Json j{{"schemaVersion", kSchemaVersion},
         {"removed", d.str()},
         {"added", e.str()},
         {"exchange", toJson(ex, false)},
         {"triangulation", toJson(u)}};
  if (next) *next = u;
  return j;
}

inline Json arcFlipJson(const Ladder& L, const ArcSetDescription& A, const Arc& a, ArcSetDescription* next = nullptr) {
  auto [B, b] = mutateArc(A, a);
  MutationResult ex = mutate(embedArcSet(L, A), embedArc(L, a));
  Json j{{"schemaVersion", kSchemaVersion},
         {"removed", a.str()},
         {"added", b.str()},
         {"exchange", toJson(ex, false)},
         {"arcs", toJson(B)}};
  if (ex.added != embedArc(L, b)) j["note"] = "E-mutation replaces the image by " + notation(ex.added);
  if (next) *next = B;
  return j;
}

inline Json clusterMutationJson(const ClusterDescription& T, const Interval& v, ClusterDescription* next = nullptr) {
  MutationResult r = mutate(T, v);
  if (next) *next = r.newCluster;
  return toJson(r, true);
}

inline ArcSetDescription exampleFountain() {
  ArcSetDescription A;
  A.leftTails.push_back({0, -2});
  A.rightTails.push_back({1, 3});
  return A;
}

class Session {
 public:
  using State = std::variant<Triangulation, ArcSetDescription, ClusterDescription>;

  Session(std::string id, Json initial) : id_(std::move(id)), initial_(std::move(initial)) {
    kind_ = initial_.contains("kind") ? jsonText(initial_["kind"], "kind") : "polygon";
    config_ = configFromJson(initial_.value("config", Json::object()));
    state_ = initialState();
  }

  const std::string& id() const { return id_; }
  const std::string& kind() const { return kind_; }
  const State& state() const { return state_; }
  const Config& config() const { return config_; }
  const std::vector<std::string>& history() const { return history_; }

  Json mutate(const std::string& at) {
    Json r = step(state_, at);
    history_.push_back(at);
    results_.push_back(r);
    return r;
  }

  // Replays the remaining history from the initial object.
  void undo() {
    if (history_.empty()) throw DomainError("nothing to undo");
    std::vector<std::string> keep(history_.begin(), history_.end() - 1);
    history_.clear();
    results_.clear();
    state_ = initialState();
    for (const auto& at : keep) mutate(at);
  }

  Json currentJson() const {
    return std::visit([](const auto& s) { return ecluster::toJson(s); }, state_);
  }

  Json toJson() const {
    Json hist = Json::array();
    for (std::size_t k = 0; k < history_.size(); ++k) hist.push_back({{"at", history_[k]}, {"result", results_[k]}});
    return Json{{"schemaVersion", kSchemaVersion}, {"id", id_},          {"kind", kind_},
                {"config", workbench::toJson(config_)}, {"current", currentJson()}, {"history", hist}};
  }

  Json persisted() const {
    return Json{{"schemaVersion", kSchemaVersion}, {"id", id_}, {"initial", initial_}, {"history", history_}};
  }

  static Session restore(const Json& j) {
    Session s(j.at("id").get<std::string>(), j.at("initial"));
    for (const auto& at : j.at("history")) s.mutate(at.get<std::string>());
    return s;
  }

  ClusterDescription embedded() const {
    const Ladder& L = config_.ladder;
    if (auto t = std::get_if<Triangulation>(&state_)) return embedTriangulation(L, *t);
    if (auto a = std::get_if<ArcSetDescription>(&state_)) return embedArcSet(L, *a);
    return std::get<ClusterDescription>(state_);
  }

  Json embedding() const {
    const Ladder& L = config_.ladder;
    Json items = Json::array();
    if (auto t = std::get_if<Triangulation>(&state_))
      for (const auto& d : t->diagonals) items.push_back({{"label", d.str()}, {"interval", notation(embedDiagonal(L, d))}});
    if (auto a = std::get_if<ArcSetDescription>(&state_))
      for (const auto& arc : a->finite) items.push_back({{"label", arc.str()}, {"interval", notation(embedArc(L, arc))}});
    return Json{{"schemaVersion", kSchemaVersion}, {"kind", kind_}, {"items", items}, {"cluster", ecluster::toJson(embedded())}};
  }

  std::string svg() const {
    const Ladder& L = config_.ladder;
    std::vector<std::pair<Interval, long>> objs;
    if (auto t = std::get_if<Triangulation>(&state_)) {
      for (const auto& d : t->diagonals) objs.push_back({embedDiagonal(L, d), 0});
    } else if (auto a = std::get_if<ArcSetDescription>(&state_)) {
      for (const auto& arc : a->finite) objs.push_back({embedArc(L, arc), 0});
    } else {
      std::mt19937_64 rng(config_.seed);
      for (const auto& m : sampleMembers(std::get<ClusterDescription>(state_), config_.window, 6, rng)) objs.push_back({m, 0});
    }
    if (!results_.empty()) {
      const Json& r = results_.back();
      const Json& ex = r.contains("exchange") ? r["exchange"] : r;
      for (const char* key : {"removed", "added"}) objs.push_back({parseInterval(ex[key].get<std::string>()), 0});
      for (const auto& m : ex["middle"]) objs.push_back({parseInterval(m.get<std::string>()), 0});
    }
    return stripSvg(objs);
  }

 private:
  State initialState() const {
    if (kind_ == "polygon") {
      long n = initial_.value("n", 2L);
      if (initial_.contains("diagonals")) {
        std::vector<Diagonal> ds;
        for (const auto& d : initial_["diagonals"]) ds.push_back(parseDiagonal(jsonText(d, "diagonal")));
        return makeTriangulation(n, ds);
      }
      return fanTriangulation(n);
    }
    if (kind_ == "infgon") {
      ArcSetDescription A = initial_.contains("arcs") ? arcSetFromJson(initial_["arcs"]) : exampleFountain();
      validate(A);
      fountainReport(A);
      return A;
    }
    if (kind_ == "projectives") return buildProjectiveCluster();
    if (kind_ == "tinf") return buildTInfinity(config_.ladder);
    if (kind_ == "cluster") return clusterFromJson(initial_.at("cluster"));
    throw ParseError("unknown session kind: " + kind_);
  }

  Json step(State& s, const std::string& at) const {
    const Ladder& L = config_.ladder;
    if (auto t = std::get_if<Triangulation>(&s)) return polygonFlipJson(L, *t, parseDiagonal(at), t);
    if (auto a = std::get_if<ArcSetDescription>(&s)) {
      Diagonal d = parseDiagonal(at);
      return arcFlipJson(L, *a, {d.i, d.j}, a);
    }
    auto& T = std::get<ClusterDescription>(s);
    return clusterMutationJson(T, parseInterval(at), &T);
  }

  std::string id_;
  Json initial_;
  std::string kind_;
  Config config_;
  State state_;
  std::vector<std::string> history_;
  std::vector<Json> results_;
};

// Sessions live in memory and as one JSON file each under the data directory.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  std::shared_ptr<Session> create(const Json& initial) {
    std::unique_lock lock(mu_);
    std::string id;
    do id = "s" + std::to_string(++counter_);
    while (sessions_.count(id) || std::filesystem::exists(file(id)));
    auto s = std::make_shared<Session>(id, initial);
    sessions_[id] = s;
    save(*s);
    return s;
  }

  std::shared_ptr<Session> find(const std::string& id) {
    if (id.empty() || !std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c); }))
      return nullptr;
    {
      std::shared_lock lock(mu_);
      if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
    std::ifstream in(file(id));
    if (!in) return nullptr;
    auto s = std::make_shared<Session>(Session::restore(Json::parse(in)));
    sessions_[id] = s;
    return s;
  }

  // Readers run concurrently; mutations are serialized and exclusive.
  template <class F>
  auto read(const Session& s, F&& f) {
    std::shared_lock lock(stateMu_);
    return f(s);
  }

  template <class F>
  auto write(Session& s, F&& f) {
    std::unique_lock lock(stateMu_);
    auto out = f(s);
    save(s);
    return out;
  }

 private:
  std::filesystem::path file(const std::string& id) const { return dir_ / (id + ".json"); }

  void save(const Session& s) const {
    std::ofstream out(file(s.id()));
    out << s.persisted().dump(2) << '\n';
  }

  std::filesystem::path dir_;
  std::shared_mutex mu_;
  std::shared_mutex stateMu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  long counter_ = 0;
};

}  // namespace workbench
