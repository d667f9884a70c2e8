// Copyright (c) 2026 the fracap authors
// SPDX-License-Identifier: Apache-2.0

#include "fracap/dsl.hpp"

#include <cstdlib>
#include <map>
#include <vector>

namespace fracap {

namespace {

struct KeyValues {
  std::string key;
  std::vector<double> values;
  std::size_t position;
};

double parse_number(const std::string& token, std::size_t position) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("expected a number, got '" + token + "'", position);
  return v;
}

// parses "k1=v,v,...,k2=v,..." where bare numbers extend the previous key
std::vector<KeyValues> parse_pairs(const std::string& body, std::size_t offset) {
  std::vector<KeyValues> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string token = body.substr(pos, comma - pos);
    if (token.empty() && pos >= body.size()) break;
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      if (out.empty())
        throw ParseError("expected key=value", offset + pos);
      out.back().values.push_back(parse_number(token, offset + pos));
    } else {
      KeyValues kv;
      kv.key = token.substr(0, eq);
      kv.position = offset + pos;
      kv.values.push_back(parse_number(token.substr(eq + 1), offset + pos + eq + 1));
      out.push_back(std::move(kv));
    }
    pos = comma + 1;
    if (comma == body.size()) break;
  }
  return out;
}

struct ParamMap {
  std::map<std::string, KeyValues> map;
  std::size_t offset;

  bool has(const std::string& k) const { return map.count(k) > 0; }
  double scalar(const std::string& k) const {
    auto it = map.find(k);
    if (it == map.end())
      throw ParseError("missing parameter '" + k + "'", offset);
    if (it->second.values.size() != 1)
      throw ParseError("parameter '" + k + "' expects one value", it->second.position);
    return it->second.values.front();
  }
  double scalar_or(const std::string& k, double fallback) const {
    return has(k) ? scalar(k) : fallback;
  }
  std::vector<double> list(const std::string& k) const {
    auto it = map.find(k);
    if (it == map.end())
      throw ParseError("missing parameter '" + k + "'", offset);
    return it->second.values;
  }
};

ParamMap to_params(const std::string& body, std::size_t offset) {
  ParamMap p;
  p.offset = offset;
  for (auto& kv : parse_pairs(body, offset)) {
    if (p.map.count(kv.key))
      throw ParseError("duplicate parameter '" + kv.key + "'", kv.position);
    p.map.emplace(kv.key, std::move(kv));
  }
  return p;
}

BoxGeom parse_box_body(const std::string& body, std::size_t offset) {
  const std::size_t semi = body.find(';');
  if (semi == std::string::npos)
    throw ParseError("box expects 'lo=...;hi=...'", offset);
  const ParamMap lo_part = to_params(body.substr(0, semi), offset);
  const ParamMap hi_part = to_params(body.substr(semi + 1), offset + semi + 1);
  BoxGeom b;
  b.lo = lo_part.list("lo");
  b.hi = hi_part.list("hi");
  if (b.lo.size() != b.hi.size())
    throw ParseError("box corners have different dimensions", offset);
  return b;
}

}  // namespace

Shape parse_shape(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("expected '<kind>:<params>'", 0);
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  const std::size_t offset = colon + 1;

  if (kind == "interval") {
    const ParamMap p = to_params(body, offset);
    return Shape::interval(p.scalar("a"), p.scalar("b"));
  }
  if (kind == "ball") {
    const ParamMap p = to_params(body, offset);
    const int n = static_cast<int>(p.scalar("n"));
    const double r = p.scalar("r");
    Point c(n, 0.0);
    if (p.has("c")) {
      c = p.list("c");
      if (static_cast<int>(c.size()) != n)
        throw ParseError("ball center has wrong dimension", offset);
    }
    return Shape::ball(std::move(c), r);
  }
  if (kind == "box") {
    BoxGeom b = parse_box_body(body, offset);
    return Shape::box(std::move(b.lo), std::move(b.hi));
  }
  if (kind == "boxunion") {
    std::vector<BoxGeom> boxes;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t bar = body.find('|', pos);
      if (bar == std::string::npos) bar = body.size();
      const std::string part = body.substr(pos, bar - pos);
      const std::size_t sub_colon = part.find(':');
      if (sub_colon == std::string::npos || part.substr(0, sub_colon) != "box")
        throw ParseError("boxunion members must be box:...", offset + pos);
      boxes.push_back(parse_box_body(part.substr(sub_colon + 1), offset + pos + sub_colon + 1));
      if (bar == body.size()) break;
      pos = bar + 1;
    }
    return Shape::box_union(std::move(boxes));
  }
  throw ParseError("unknown shape kind '" + kind + "'", 0);
}

SampledFunction parse_function(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("expected '<kind>:<params>' or 'file:<path>'", 0);
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  const std::size_t offset = colon + 1;

  if (kind == "file") {
    try {
      return load_grid_file(body);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), offset);
    }
  }
  if (kind == "tent") {
    const ParamMap p = to_params(body, offset);
    if (p.has("n") && static_cast<int>(p.scalar("n")) != 1)
      throw ParseError("tent is one-dimensional", offset);
    return make_tent(p.scalar_or("spacing", 1.0 / 2048));
  }
  if (kind == "bump") {
    const ParamMap p = to_params(body, offset);
    if (p.has("n") && static_cast<int>(p.scalar("n")) != 2)
      throw ParseError("bump is two-dimensional", offset);
    return make_bump(p.scalar_or("r", 1.0), p.scalar_or("spacing", 1.0 / 24));
  }
  if (kind == "pyramid") {
    const ParamMap p = to_params(body, offset);
    if (p.has("n") && static_cast<int>(p.scalar("n")) != 2)
      throw ParseError("pyramid is two-dimensional", offset);
    return make_pyramid(p.scalar_or("spacing", 1.0 / 32));
  }
  if (kind == "cutoff") {
    // shape=<shape-dsl> consumes everything up to the trailing ,eps=...
    const std::size_t shape_at = body.find("shape=");
    if (shape_at == std::string::npos)
      throw ParseError("cutoff expects shape=<shape-dsl>", offset);
    std::string rest = body.substr(shape_at + 6);
    double eps = -1.0, spacing = 0.0;
    auto strip_tail = [&](const std::string& key) -> double {
      const std::size_t at = rest.rfind("," + key + "=");
      if (at == std::string::npos) return -1.0;
      const std::string value = rest.substr(at + key.size() + 2);
      const double v = parse_number(value, offset + shape_at + 6 + at);
      rest = rest.substr(0, at);
      return v;
    };
    spacing = strip_tail("spacing");
    if (spacing < 0.0) spacing = 0.0;
    eps = strip_tail("eps");
    // eps may also be written before shape=
    const ParamMap head = to_params(shape_at > 0 ? body.substr(0, shape_at - 1) : "", offset);
    if (eps < 0.0 && head.has("eps")) eps = head.scalar("eps");
    if (spacing == 0.0 && head.has("spacing")) spacing = head.scalar("spacing");
    if (eps <= 0.0) throw ParseError("cutoff expects eps=<positive>", offset);
    Shape s = parse_shape(rest);
    GridSpec grid;
    grid.spacing = spacing;
    return build_cutoff(s, eps, grid);
  }
  throw ParseError("unknown function kind '" + kind + "'", 0);
}

}  // namespace fracap
