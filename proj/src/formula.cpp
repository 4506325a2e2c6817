#include "mpdag/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <json.hpp>

#include "mpdag/error.hpp"

namespace mpdag {

void validate(const IdFormula& f) {
  NameSet all_targets;
  std::map<std::string, int> response_hits;
  NameSet available = f.intervened;
  for (const auto& factor : f.factors) {
    if (factor.targets.empty()) throw ArgumentError("factor without targets");
    for (const auto& t : factor.targets) {
      if (factor.given.count(t)) throw ArgumentError("factor conditions on its own target " + t);
      if (f.intervened.count(t)) throw ArgumentError("intervened node " + t + " is a target");
      if (!all_targets.insert(t).second) throw ArgumentError("node " + t + " is a target twice");
      if (f.response.count(t)) ++response_hits[t];
      available.insert(t);
    }
    for (const auto& c : factor.given)
      if (!available.count(c))
        throw ArgumentError("conditioner " + c + " is neither intervened nor an earlier target");
  }
  for (const auto& y : f.response) {
    if (f.intervened.count(y)) throw ArgumentError("response node " + y + " is intervened");
    if (response_hits[y] != 1) throw ArgumentError("response node " + y + " has no factor");
  }
  NameSet expected;
  std::set_difference(all_targets.begin(), all_targets.end(), f.response.begin(),
                      f.response.end(), std::inserter(expected, expected.end()));
  if (expected != f.integrate_over)
    throw ArgumentError("integration set must be the factor targets outside the response");
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string join_lower(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += lower(names[i]);
  }
  return out;
}

std::vector<std::string> ordered_given(const Factor& factor, const NameSet& intervened) {
  std::vector<std::string> out;
  for (const auto& c : factor.given)
    if (intervened.count(c)) out.push_back(c);
  for (const auto& c : factor.given)
    if (!intervened.count(c)) out.push_back(c);
  return out;
}

std::string density(const std::vector<std::string>& targets,
                    const std::vector<std::string>& given, const std::string& bar) {
  std::string out = "f(" + join_lower(targets);
  if (!given.empty()) out += bar + join_lower(given);
  return out + ")";
}

std::string render_symbolic(const IdFormula& f, bool latex) {
  const std::string bar = latex ? " \\mid " : "|";
  std::string lhs = "f(" + join_lower({f.response.begin(), f.response.end()});
  if (!f.intervened.empty())
    lhs += bar + "do(" + join_lower({f.intervened.begin(), f.intervened.end()}) + ")";
  lhs += ")";

  std::string rhs;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    if (i) rhs += latex ? " \\, " : " ";
    const auto& factor = f.factors[i];
    rhs += density({factor.targets.begin(), factor.targets.end()},
                   ordered_given(factor, f.intervened), bar);
  }
  if (f.factors.empty()) rhs = "1";
  if (!f.integrate_over.empty()) {
    const std::string vars = join_lower({f.integrate_over.begin(), f.integrate_over.end()});
    rhs = latex ? "\\int " + rhs + " \\, d(" + vars + ")" : "∫ " + rhs + " d(" + vars + ")";
  }
  return lhs + " = " + rhs;
}

nlohmann::json sorted_array(const NameSet& s) { return nlohmann::json(std::vector<std::string>(s.begin(), s.end())); }

NameSet read_names(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ParseError(0, std::string("formula json: missing array '") + key + "'");
  NameSet out;
  for (const auto& v : j.at(key)) {
    if (!v.is_string()) throw ParseError(0, std::string("formula json: non-string in '") + key + "'");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string render(const IdFormula& f, RenderStyle style) {
  switch (style) {
    case RenderStyle::text: return render_symbolic(f, false);
    case RenderStyle::latex: return render_symbolic(f, true);
    case RenderStyle::json: {
      nlohmann::json j;
      j["factors"] = nlohmann::json::array();
      for (const auto& factor : f.factors)
        j["factors"].push_back({{"targets", sorted_array(factor.targets)},
                                {"given", sorted_array(factor.given)}});
      j["integrate_over"] = sorted_array(f.integrate_over);
      j["do"] = sorted_array(f.intervened);
      j["response"] = sorted_array(f.response);
      return j.dump();
    }
  }
  return {};
}

IdFormula parse_formula_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("formula json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_array())
    throw ParseError(0, "formula json: missing array 'factors'");
  IdFormula f;
  for (const auto& jf : j.at("factors"))
    f.factors.push_back({read_names(jf, "targets"), read_names(jf, "given")});
  f.integrate_over = read_names(j, "integrate_over");
  f.intervened = read_names(j, "do");
  f.response = read_names(j, "response");
  return f;
}

bool structurally_equal(const IdFormula& a, const IdFormula& b) {
  if (a.integrate_over != b.integrate_over || a.intervened != b.intervened ||
      a.response != b.response || a.factors.size() != b.factors.size())
    return false;
  auto key = [](const Factor& f) { return std::make_pair(f.targets, f.given); };
  std::vector<std::pair<NameSet, NameSet>> ka, kb;
  for (const auto& f : a.factors) ka.push_back(key(f));
  for (const auto& f : b.factors) kb.push_back(key(f));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace mpdag
