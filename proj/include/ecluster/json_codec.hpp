#pragma once

#include <json.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "error.hpp"
#include "ordered_line.hpp"

namespace ecluster {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline ExtRational parseExtRational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "-inf" || s == "-oo") return ExtRational::negInf();
  if (s == "+inf" || s == "inf" || s == "+oo" || s == "oo") return ExtRational::posInf();
  return parseRational(s);
}

inline Json toJson(const Rational& q) { return q.get_str(); }
inline Json toJson(const ExtRational& v) { return v.str(); }

inline Json toJson(const DoubledPoint& p) {
  return Json{{"value", p.value.str()}, {"side", p.side == Side::Minus ? "-" : "+"}};
}

inline Json toJson(const Interval& v) {
  return Json{{"left", toJson(v.left())}, {"right", toJson(v.right())}};
}

inline std::string jsonText(const Json& j, std::string_view what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError(std::string("expected a string for ") + std::string(what));
}

inline Rational rationalFromJson(const Json& j) { return parseRational(jsonText(j, "rational")); }

inline ExtRational extRationalFromJson(const Json& j) { return parseExtRational(jsonText(j, "value")); }

inline DoubledPoint pointFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("value") || !j.contains("side"))
    throw ParseError("doubled point needs value and side");
  std::string side = jsonText(j["side"], "side");
  if (side != "-" && side != "+") throw ParseError("side must be \"-\" or \"+\"");
  DoubledPoint p(extRationalFromJson(j["value"]), side == "-" ? Side::Minus : Side::Plus);
  if (!p.valid()) throw DomainError("infinite endpoints must be open");
  return p;
}

inline Interval parseInterval(std::string_view text);

inline Interval intervalFromJson(const Json& j) {
  if (j.is_string()) return parseInterval(j.get<std::string>());
  if (!j.is_object() || !j.contains("left") || !j.contains("right"))
    throw ParseError("interval needs left and right");
  return Interval(pointFromJson(j["left"]), pointFromJson(j["right"]));
}

// Accepts "(0,2]", "[1/2,+inf)", "M_(0,2)", "M_{1}", "{1}", "P_3", "P_3)", "P_+inf".
inline Interval parseInterval(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty interval");

  if (s.rfind("P_", 0) == 0) {
    std::string body = s.substr(2);
    if (!body.empty() && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
    bool open = !body.empty() && body.back() == ')';
    if (open) body.pop_back();
    ExtRational a = parseExtRational(body);
    if (a.isPosInf()) return Interval::projectiveInf();
    if (!a.finite()) throw DomainError("P_-inf is zero");
    return open ? Interval::projectiveOpen(a) : Interval::projective(a.value());
  }
  if (s.rfind("M_", 0) == 0) s = s.substr(2);
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') {
    ExtRational x = parseExtRational(s.substr(1, s.size() - 2));
    if (!x.finite()) throw DomainError("singletons must be finite");
    return Interval::singleton(x.value());
  }
  if (s.size() < 5) throw ParseError("bad interval: " + s);
  char l = s.front(), r = s.back();
  if ((l != '(' && l != '[') || (r != ')' && r != ']')) throw ParseError("bad interval brackets: " + s);
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("interval needs a comma: " + s);
  ExtRational a = parseExtRational(s.substr(1, comma - 1));
  ExtRational b = parseExtRational(s.substr(comma + 1, s.size() - comma - 2));
  DoubledPoint lp(a, l == '[' ? Side::Minus : Side::Plus);
  DoubledPoint rp(b, r == ']' ? Side::Plus : Side::Minus);
  if (!lp.valid() || !rp.valid()) throw DomainError("infinite endpoints must be open: " + s);
  return Interval(lp, rp);
}

}  // namespace ecluster
