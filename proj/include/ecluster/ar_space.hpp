#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cpi.hpp"

namespace ecluster {

inline constexpr double kPi = std::numbers::pi;

// lambda(2n pi + w) = w - pi/2 on [0, pi], -w + 3pi/2 on [pi, 2pi].
inline double lambda(double z) {
  double w = std::fmod(z, 2 * kPi);
  if (w < 0) w += 2 * kPi;
  return w <= kPi ? w - kPi / 2 : -w + 3 * kPi / 2;
}

inline double lambdaShifted(double kappa, double x) {
  if (kappa < -kPi || kappa > kPi) throw DomainError("lambdaShifted needs kappa in [-pi, pi]");
  return lambda(x - kappa);
}

struct ARPoint {
  double alpha = 0, beta = 0;
  int position = 4;
};

inline int closurePosition(const Interval& v) {
  bool l = v.leftClosed(), r = v.rightClosed();
  if (l && r) return 1;
  if (l) return 2;
  if (r) return 3;
  return 4;
}

inline double atanExt(const ExtRational& v) {
  if (v.isNegInf()) return -kPi / 2;
  if (v.isPosInf()) return kPi / 2;
  return std::atan(v.value().get_d());
}

// Gamma^b for the straight orientation; each shift sends (a, b) to (a + pi, -b).
inline ARPoint gammaB(const Interval& v, long shift = 0) {
  double ta = atanExt(v.left().value), tb = atanExt(v.right().value);
  ARPoint p{tb + ta + kPi / 2, tb - ta - kPi / 2, closurePosition(v)};
  for (long k = 0; k < shift; ++k) p = {p.alpha + kPi, -p.beta, p.position};
  for (long k = 0; k > shift; --k) p = {p.alpha - kPi, -p.beta, p.position};
  return p;
}

struct NumericObject {
  double x, y;  // units of pi
};

inline NumericObject gCoordinateMap(const ARPoint& p) {
  if (std::abs(std::abs(p.beta) - kPi / 2) < 1e-12)
    throw DegenerateObject("points on the boundary of the strip are degenerate");
  return {(p.alpha - p.beta) / kPi, (p.alpha + p.beta) / kPi};
}

// ----------------------------------------------------------------------------
// Sink/source specifications.

struct QuiverSpec {
  enum class Kind { FiniteSS, HalfBounded, UnboundedBoth } kind = Kind::FiniteSS;
  std::vector<Rational> points;  // strictly increasing; seeds for HalfBounded
  bool firstIsSink = true;
  enum class Side { Left, Right } unboundedSide = Side::Right;

  static QuiverSpec straight() { return {}; }
  static QuiverSpec finite(std::vector<Rational> pts, bool firstIsSink = true) {
    QuiverSpec q;
    q.points = std::move(pts);
    q.firstIsSink = firstIsSink;
    q.validate();
    return q;
  }
  static QuiverSpec halfBounded(Side unbounded, std::vector<Rational> seeds, bool firstIsSink = true) {
    QuiverSpec q;
    q.kind = Kind::HalfBounded;
    q.unboundedSide = unbounded;
    q.points = std::move(seeds);
    q.firstIsSink = firstIsSink;
    q.validate();
    return q;
  }
  static QuiverSpec unboundedBoth() {
    QuiverSpec q;
    q.kind = Kind::UnboundedBoth;
    return q;
  }

  void validate() const {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i - 1] < points[i])) throw DomainError("sinks and sources must be strictly increasing");
  }

  // Sinks and sources alternate, so the parity fixes the type of each point.
  bool isSink(std::size_t i) const { return (i % 2 == 0) == firstIsSink; }
};

enum class DerivedClass { Finite, HalfBounded, Unbounded };

inline DerivedClass classifyDerived(const QuiverSpec& q) {
  switch (q.kind) {
    case QuiverSpec::Kind::FiniteSS: return DerivedClass::Finite;
    case QuiverSpec::Kind::HalfBounded: return DerivedClass::HalfBounded;
    default: return DerivedClass::Unbounded;
  }
}

inline bool derivedEquivalent(const QuiverSpec& a, const QuiverSpec& b) { return classifyDerived(a) == classifyDerived(b); }

inline std::string className(DerivedClass c) {
  switch (c) {
    case DerivedClass::Finite: return "CLASS_FINITE";
    case DerivedClass::HalfBounded: return "CLASS_HALF_BOUNDED";
    default: return "CLASS_UNBOUNDED";
  }
}

inline QuiverSpec quiverFromJson(const Json& j) {
  std::string kind = j.contains("kind") ? jsonText(j["kind"], "kind") : "finite";
  std::vector<Rational> pts;
  for (const char* key : {"points", "seeds"})
    if (j.contains(key))
      for (const auto& p : j[key]) pts.push_back(rationalFromJson(p));
  bool sink = !j.contains("first") || jsonText(j["first"], "first") == "sink";
  if (kind == "finite") return QuiverSpec::finite(std::move(pts), sink);
  if (kind == "half-bounded") {
    std::string side = j.contains("unbounded") ? jsonText(j["unbounded"], "unbounded") : "right";
    if (side != "left" && side != "right") throw ParseError("unbounded must be left or right");
    return QuiverSpec::halfBounded(side == "left" ? QuiverSpec::Side::Left : QuiverSpec::Side::Right, std::move(pts),
                                   sink);
  }
  if (kind == "unbounded") return QuiverSpec::unboundedBoth();
  throw ParseError("unknown quiver kind: " + kind);
}

inline Json toJson(const ARPoint& p) {
  return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"position", p.position}};
}

// ----------------------------------------------------------------------------
// SVG picture of the strip R x [-pi/2, pi/2] with a set of objects plotted.

struct StripPlot {
  double alphaMin = 0, alphaMax = 2 * kPi;
  double width = 720, height = 240;
};

inline std::string stripSvg(const std::vector<std::pair<Interval, long>>& objects, const StripPlot& plot = {}) {
  static const char* colours[] = {"", "#1b6ca8", "#4c9a2a", "#b5651d", "#7a3e9d"};
  auto sx = [&](double a) { return 20 + (a - plot.alphaMin) / (plot.alphaMax - plot.alphaMin) * (plot.width - 40); };
  auto sy = [&](double b) { return plot.height / 2 - b / (kPi / 2) * (plot.height / 2 - 20); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
     << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << plot.width << "\" height=\"" << plot.height << "\" fill=\"white\"/>\n";
  for (double b : {-kPi / 2, kPi / 2})
    os << "<line x1=\"" << sx(plot.alphaMin) << "\" y1=\"" << sy(b) << "\" x2=\"" << sx(plot.alphaMax) << "\" y2=\""
       << sy(b) << "\" stroke=\"black\"/>\n";
  for (double a = std::ceil(plot.alphaMin / kPi) * kPi; a <= plot.alphaMax + 1e-12; a += kPi)
    os << "<line x1=\"" << sx(a) << "\" y1=\"" << sy(-kPi / 2) << "\" x2=\"" << sx(a) << "\" y2=\"" << sy(kPi / 2)
       << "\" stroke=\"#ccc\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& [v, shift] : objects) {
    ARPoint p = gammaB(v, shift);
    if (p.alpha < plot.alphaMin - 1e-12 || p.alpha > plot.alphaMax + 1e-12) continue;
    os << "<circle cx=\"" << sx(p.alpha) << "\" cy=\"" << sy(p.beta) << "\" r=\"3\" fill=\"" << colours[p.position]
       << "\"><title>" << notation(v) << '[' << shift << "]</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ecluster
