#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "server.hpp"

namespace workbench {

inline Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// A cluster argument is a JSON file or one of the built-in names.
inline ClusterDescription clusterArg(const std::string& arg, const Ladder& L) {
  if (std::filesystem::exists(arg)) return clusterFromJson(readJsonFile(arg));
  if (arg == "projectives") return buildProjectiveCluster();
  if (arg == "tinf") return buildTInfinity(L);
  if (arg.rfind("tn:", 0) == 0) return buildTn(L, std::stol(arg.substr(3)));
  throw ParseError("no cluster file or built-in named " + arg);
}

inline Interval intervalArg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return intervalFromJson(readJsonFile(arg));
  return parseInterval(arg);
}

inline std::string directionName(ExtDirection d) {
  switch (d) {
    case ExtDirection::VSub: return "A_SUB";
    case ExtDirection::WSub: return "B_SUB";
    default: return "NONE";
  }
}

inline Json compatJson(const Interval& a, const Interval& b) {
  ExtDirection d = extDirection(a, b);
  Json mid = Json::array();
  if (d != ExtDirection::None)
    for (const auto& m : (d == ExtDirection::VSub ? exchangeMiddle(a, b) : exchangeMiddle(b, a)).middle)
      mid.push_back(notation(m));
  return Json{{"compatible", eCompatible(a, b)}, {"extDirection", directionName(d)}, {"middle", mid}};
}

inline CPiObject cpiArg(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("C_pi object must look like x,y");
  return {parseRational(text.substr(0, comma)), parseRational(text.substr(comma + 1))};
}

struct Globals {
  std::uint64_t seed = 1;
  std::string ladder = "default";
  std::string window = "-4,4";
  long budget = 20000;
  std::string dataDir = "workbench-data";
  int port = 8080;
  std::string host = "127.0.0.1";

  Ladder ladderValue() const {
    if (ladder == "default") return defaultLadder();
    Json j = readJsonFile(ladder);
    return Ladder(rationalFromJson(j.at("lower")), rationalFromJson(j.at("upper")));
  }
};

inline int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact E-cluster workbench for the straight continuous type-A quiver", "ecluster"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--ladder", g.ladder, "'default' or a JSON file with lower/upper");
  app.add_option("--window", g.window, "verification window a,b");
  app.add_option("--budget", g.budget, "pair budget before sampling");
  app.add_option("--data-dir", g.dataDir, "session directory for serve");
  app.add_option("--port", g.port, "port for serve");
  app.add_option("--host", g.host, "bind address for serve");

  std::function<void()> action;
  auto emit = [&](const Json& j) { out << j.dump() << '\n'; };

  // compat
  auto* compat = app.add_subcommand("compat", "E-compatibility of two intervals");
  std::string a, b;
  compat->add_option("--a", a)->required();
  compat->add_option("--b", b)->required();
  compat->callback([&] { action = [&] { emit(compatJson(intervalArg(a), intervalArg(b))); }; });

  // cluster
  auto* cluster = app.add_subcommand("cluster", "build, verify and query cluster descriptions");
  cluster->require_subcommand(1);
  std::string kind = "projectives", clusterPath, intervalText, diagText, arcsPath;
  long n = 2;
  auto* build = cluster->add_subcommand("build", "emit a description");
  build->add_option("--kind", kind, "projectives|tinf|tn|polygon|infgon");
  build->add_option("--n", n);
  build->add_option("--diagonals", diagText, "comma-separated i-j list");
  build->add_option("--arcs", arcsPath, "arc set JSON");
  build->callback([&] {
    action = [&] {
      Ladder L = g.ladderValue();
      if (kind == "projectives") return emit(toJson(buildProjectiveCluster()));
      if (kind == "tinf") return emit(toJson(buildTInfinity(L)));
      if (kind == "tn") return emit(toJson(buildTn(L, n)));
      if (kind == "polygon") {
        Triangulation t = diagText.empty() ? fanTriangulation(n) : makeTriangulation(n, parseDiagonalList(diagText));
        return emit(toJson(embedTriangulation(L, t)));
      }
      if (kind == "infgon")
        return emit(toJson(embedArcSet(L, arcsPath.empty() ? exampleFountain() : arcSetFromJson(readJsonFile(arcsPath)))));
      throw ParseError("unknown cluster kind: " + kind);
    };
  });
  auto* verify = cluster->add_subcommand("verify", "check maximality on a window");
  verify->add_option("--cluster", clusterPath)->required();
  verify->callback([&] {
    action = [&] {
      emit(toJson(verifyWindow(clusterArg(clusterPath, g.ladderValue()), parseWindow(g.window), g.budget, g.seed)));
    };
  });
  auto* member = cluster->add_subcommand("member", "membership of one interval");
  member->add_option("--cluster", clusterPath)->required();
  member->add_option("--interval", intervalText)->required();
  member->callback([&] {
    action = [&] {
      Interval v = intervalArg(intervalText);
      emit(Json{{"schemaVersion", kSchemaVersion},
                {"interval", notation(v)},
                {"member", ecluster::member(clusterArg(clusterPath, g.ladderValue()), v)}});
    };
  });
  auto* witness = cluster->add_subcommand("witness", "a member incompatible with the interval");
  witness->add_option("--cluster", clusterPath)->required();
  witness->add_option("--interval", intervalText)->required();
  witness->callback([&] {
    action = [&] {
      Interval v = intervalArg(intervalText);
      auto w = incompatibleWitness(clusterArg(clusterPath, g.ladderValue()), v);
      emit(Json{{"schemaVersion", kSchemaVersion},
                {"interval", notation(v)},
                {"witness", w ? Json(notation(*w)) : Json()}});
    };
  });

  // mutate
  auto* mut = app.add_subcommand("mutate", "E-mutation of a cluster at one member");
  std::string at;
  mut->add_option("--cluster", clusterPath)->required();
  mut->add_option("--at", at)->required();
  mut->callback([&] { action = [&] { emit(clusterMutationJson(clusterArg(clusterPath, g.ladderValue()), parseInterval(at))); }; });

  // polygon
  auto* poly = app.add_subcommand("polygon", "triangulations of the (n+3)-gon");
  bool enumerate = false, graph = false, embed = false;
  std::string flipAt;
  poly->add_option("--n", n)->required();
  poly->add_option("--diagonals", diagText, "start triangulation, fan by default");
  poly->add_flag("--enumerate", enumerate);
  poly->add_flag("--flip-graph", graph);
  poly->add_flag("--embed", embed);
  poly->add_option("--flip", flipAt);
  poly->callback([&] {
    action = [&] {
      Triangulation t = diagText.empty() ? fanTriangulation(n) : makeTriangulation(n, parseDiagonalList(diagText));
      if (enumerate) {
        Json ts = Json::array();
        for (const auto& u : enumerateTriangulations(n)) ts.push_back(u.str());
        return emit(Json{{"schemaVersion", kSchemaVersion}, {"n", n}, {"count", ts.size()}, {"triangulations", ts}});
      }
      if (graph) {
        FlipGraph fg = flipGraph(n);
        std::size_t edges = 0;
        for (const auto& adj : fg.adjacency) edges += adj.size();
        return emit(Json{{"schemaVersion", kSchemaVersion},
                         {"n", n},
                         {"nodes", fg.nodes.size()},
                         {"edges", edges / 2},
                         {"connected", fg.connected()},
                         {"regular", fg.regular(n)}});
      }
      if (!flipAt.empty()) return emit(polygonFlipJson(g.ladderValue(), t, parseDiagonal(flipAt)));
      if (embed) return emit(toJson(embedTriangulation(g.ladderValue(), t)));
      emit(toJson(t));
    };
  });

  // infgon
  auto* inf = app.add_subcommand("infgon", "arc sets of the infinity-gon");
  inf->require_subcommand(1);
  long l = 0, bound = 12;
  auto arcSet = [&] { return arcsPath.empty() ? exampleFountain() : arcSetFromJson(readJsonFile(arcsPath)); };
  auto* infEmbed = inf->add_subcommand("embed", "the E-cluster of an arc set");
  auto* infReport = inf->add_subcommand("report", "fountain classification");
  auto* infMutate = inf->add_subcommand("mutate", "flip a finite arc");
  auto* infSkip = inf->add_subcommand("noskip", "whether no arc passes over vertex l");
  auto* infWindow = inf->add_subcommand("window", "compatible non-members with both ends in [-B, B]");
  for (auto* c : {infEmbed, infReport, infMutate, infSkip, infWindow}) c->add_option("--arcs", arcsPath, "arc set JSON");
  infMutate->add_option("--at", at)->required();
  infSkip->add_option("--l", l)->required();
  infWindow->add_option("--bound", bound);
  bool noExtras = false;
  infEmbed->add_flag("--no-fountain-extras", noExtras);
  infEmbed->callback([&] { action = [&] { emit(toJson(embedArcSet(g.ladderValue(), arcSet(), !noExtras))); }; });
  infReport->callback([&] {
    action = [&] {
      ArcSetDescription A = arcSet();
      validate(A);
      Json j = toJson(fountainReport(A));
      j["schemaVersion"] = kSchemaVersion;
      emit(j);
    };
  });
  infMutate->callback([&] {
    action = [&] {
      Diagonal d = parseDiagonal(at);
      emit(arcFlipJson(g.ladderValue(), arcSet(), {d.i, d.j}));
    };
  });
  infSkip->callback([&] {
    action = [&] { emit(Json{{"schemaVersion", kSchemaVersion}, {"l", l}, {"noSkip", noSkipCheck(arcSet(), l)}}); };
  });
  infWindow->callback([&] {
    action = [&] {
      Json arcs = Json::array();
      for (const auto& c : compatibleNonMembers(arcSet(), bound)) arcs.push_back(c.str());
      emit(Json{{"schemaVersion", kSchemaVersion}, {"bound", bound}, {"compatibleNonMembers", arcs}});
    };
  });

  // cpi
  auto* cpi = app.add_subcommand("cpi", "the bridge from the older continuous cluster category");
  cpi->require_subcommand(1);
  std::string oraclePath, u, v;
  double na = 0, nb = 0;
  auto* cpiEmbed = cpi->add_subcommand("embed", "T_ER for an oracle");
  cpiEmbed->add_option("--oracle", oraclePath)->required();
  cpiEmbed->callback([&] { action = [&] { emit(toJson(buildTER(oracleFromJson(readJsonFile(oraclePath))))); }; });
  auto* cpiMap = cpi->add_subcommand("fmap", "image of M(x,y), coordinates in units of pi");
  cpiMap->add_option("--object", u, "x,y")->required();
  cpiMap->callback([&] {
    action = [&] {
      CPiObject o = cpiArg(u);
      NumericInterval ni = fMap(o);
      emit(Json{{"schemaVersion", kSchemaVersion},
                {"object", toJson(o)},
                {"symbolic", notation(fMapSymbolic(o))},
                {"a", std::isinf(ni.a) ? Json("-inf") : Json(ni.a)},
                {"b", ni.b}});
    };
  });
  auto* cpiInv = cpi->add_subcommand("finverse", "the object with image M_(a,b)");
  cpiInv->add_option("--a", na)->required();
  cpiInv->add_option("--b", nb)->required();
  cpiInv->callback([&] {
    action = [&] {
      NumericCPi o = fInverse(na, nb);
      emit(Json{{"schemaVersion", kSchemaVersion}, {"x", o.x}, {"y", o.y}});
    };
  });
  auto* cpiCompat = cpi->add_subcommand("compat", "N_R-compatibility of two objects");
  cpiCompat->add_option("--u", u, "x,y")->required();
  cpiCompat->add_option("--v", v, "x,y")->required();
  cpiCompat->callback([&] {
    action = [&] {
      CPiObject p = cpiArg(u), q = cpiArg(v);
      requireDomain(p);
      requireDomain(q);
      emit(Json{{"schemaVersion", kSchemaVersion}, {"compatible", !nrIncompatible(p, q)}});
    };
  });

  // arspace
  auto* ar = app.add_subcommand("arspace", "AR-space coordinates and quiver classes");
  ar->require_subcommand(1);
  long shiftBy = 0;
  std::string quiverPath, otherPath;
  auto* gamma = ar->add_subcommand("gamma", "Gamma^b of an interval");
  gamma->add_option("--interval", intervalText)->required();
  gamma->add_option("--shift", shiftBy);
  gamma->callback([&] {
    action = [&] {
      Interval iv = intervalArg(intervalText);
      Json j = toJson(gammaB(iv, shiftBy));
      j["schemaVersion"] = kSchemaVersion;
      j["interval"] = notation(iv);
      j["shift"] = shiftBy;
      j["degenerate"] = isDegenerate(iv);
      emit(j);
    };
  });
  auto* classify = ar->add_subcommand("classify", "derived class of a sink/source specification");
  classify->add_option("--quiver", quiverPath)->required();
  classify->add_option("--other", otherPath, "second spec for an equivalence check");
  classify->callback([&] {
    action = [&] {
      QuiverSpec q = quiverFromJson(readJsonFile(quiverPath));
      Json j{{"schemaVersion", kSchemaVersion}, {"class", className(classifyDerived(q))}};
      if (!otherPath.empty()) j["derivedEquivalent"] = derivedEquivalent(q, quiverFromJson(readJsonFile(otherPath)));
      emit(j);
    };
  });
  auto* svgCmd = ar->add_subcommand("svg", "strip picture of sampled cluster members");
  svgCmd->add_option("--cluster", clusterPath)->required();
  svgCmd->callback([&] {
    action = [&] {
      std::mt19937_64 rng(g.seed);
      std::vector<std::pair<Interval, long>> objs;
      for (const auto& m : sampleMembers(clusterArg(clusterPath, g.ladderValue()), parseWindow(g.window), 6, rng))
        objs.push_back({m, 0});
      out << stripSvg(objs);
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP/JSON sessions for the explorer");
  serve->callback([&] {
    action = [&] {
      SessionStore store(g.dataDir);
      httplib::Server svr;
      installRoutes(svr, store);
      err << "listening on " << g.host << ':' << g.port << '\n';
      if (!svr.listen(g.host, g.port)) throw DomainError("cannot listen on port " + std::to_string(g.port));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  try {
    action();
    return 0;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    err << "parse error: " << e.what() << '\n';
    return 1;
  }
}

inline int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ecluster"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return runCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace workbench
