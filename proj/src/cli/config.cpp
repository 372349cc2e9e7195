#include "nsdyn/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nsdyn::cli {

std::string SystemConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = experiment.find(key);
  return it == experiment.end() ? fallback : it->second;
}

namespace {

struct Located {
  std::size_t line = 0;
  std::size_t col = 0;
};

[[noreturn]] void fail(const std::string& source, Located at, const std::string& msg) {
  throw Error(ErrorKind::Config, source + ":" + std::to_string(at.line) + ":" +
                                     std::to_string(at.col) + ": " + msg);
}

struct Value {
  bool is_list = false;
  bool quoted = false;
  std::string scalar;
  std::vector<std::string> items;
  Located at;                  // start of the value
  std::vector<Located> item_at;  // first character inside each item's quotes
};

struct Entry {
  std::string section;
  std::string key;
  Value value;
  Located key_at;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineParser {
 public:
  LineParser(const std::string& source, std::string_view line, std::size_t lineno)
      : source_(source), s_(line), lineno_(lineno) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r'))
      ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  Located here() const { return {lineno_, pos_ + 1}; }
  [[noreturn]] void error(const std::string& msg) const { fail(source_, here(), msg); }

  std::string identifier(const char* what) {
    skip_ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) error(std::string("expected ") + what);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c)
      error(std::string("expected '") + c + "'" +
            (pos_ < s_.size() ? std::string(", found '") + s_[pos_] + "'" : ", found end of line"));
    ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  std::string quoted(Located& inner) {
    expect('"');
    inner = here();
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) error("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) error("unterminated escape");
        out.push_back(s_[pos_++]);
      } else {
        out.push_back(c);
      }
    }
    return out;
  }
  Value value() {
    skip_ws();
    Value v;
    v.at = here();
    if (peek('"')) {
      Located inner;
      v.quoted = true;
      v.scalar = quoted(inner);
      v.item_at.push_back(inner);
    } else if (peek('[')) {
      ++pos_;
      v.is_list = true;
      if (!peek(']')) {
        while (true) {
          Located inner;
          v.items.push_back(quoted(inner));
          v.item_at.push_back(inner);
          if (peek(',')) {
            ++pos_;
            continue;
          }
          break;
        }
      }
      expect(']');
    } else {
      std::size_t end = s_.find('#', pos_);
      if (end == std::string_view::npos) end = s_.size();
      std::string_view raw = s_.substr(pos_, end - pos_);
      while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
        raw.remove_suffix(1);
      if (raw.empty()) error("expected a value");
      v.scalar = std::string(raw);
      pos_ = end;
    }
    if (!at_end()) error("unexpected text after value");
    return v;
  }

 private:
  const std::string& source_;
  std::string_view s_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

std::vector<Entry> tokenize(std::string_view text, const std::string& source) {
  static const std::set<std::string> kSections{"system", "parameters", "transition",
                                               "experiment"};
  std::vector<Entry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++lineno;
    LineParser lp(source, line, lineno);
    if (!lp.at_end() && !lp.peek(';')) {
      if (lp.peek('[')) {
        lp.expect('[');
        const Located at = lp.here();
        section = lp.identifier("section name");
        if (!kSections.count(section))
          fail(source, at, "unknown section '" + section +
                               "' (expected system, parameters, transition or experiment)");
        lp.expect(']');
        if (!lp.at_end()) lp.error("unexpected text after section header");
      } else {
        Entry e;
        lp.skip_ws();
        e.key_at = lp.here();
        e.key = lp.identifier("key");
        if (section.empty()) fail(source, e.key_at, "key outside of any [section]");
        lp.expect('=');
        e.value = lp.value();
        e.section = section;
        if (!seen.insert({section, e.key}).second)
          fail(source, e.key_at, "duplicate key '" + e.key + "' in [" + section + "]");
        entries.push_back(std::move(e));
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return entries;
}

double to_number(const Entry& e, const std::string& source) {
  const std::string& s = e.value.scalar;
  if (e.value.is_list || s.empty()) fail(source, e.value.at, "expected a number for '" + e.key + "'");
  char* endp = nullptr;
  const double v = std::strtod(s.c_str(), &endp);
  if (endp != s.c_str() + s.size() || !std::isfinite(v))
    fail(source, e.value.at, "expected a number for '" + e.key + "', found '" + s + "'");
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct FieldPositions {
  std::map<std::string, Entry> by_key;
};

void check_expression(const std::string& text, const Located& at, const std::string& field,
                      const std::set<std::string>& allowed, const std::string& source) {
  expr::Expr e;
  try {
    e = expr::parse(text);
  } catch (const ParseError& pe) {
    fail(source, {at.line, at.col + pe.offset()}, "in '" + field + "': " + pe.what());
  } catch (const Error& err) {
    fail(source, at, "in '" + field + "': " + err.what());
  }
  for (const std::string& v : expr::variables(e))
    if (!allowed.count(v))
      fail(source, at, "in '" + field + "': unknown variable '" + v + "'");
}

}  // namespace

SystemConfig parse_config(std::string_view text, const std::string& source) {
  const std::vector<Entry> entries = tokenize(text, source);
  SystemConfig cfg;
  std::map<std::string, const Entry*> sys;
  const Entry* transition_phi = nullptr;
  std::map<std::string, const Entry*> psi_keys;

  auto want_string = [&](const Entry& e) {
    if (e.value.is_list) fail(source, e.value.at, "'" + e.key + "' expects a single value");
    return e.value.scalar;
  };
  auto want_list = [&](const Entry& e) {
    if (!e.value.is_list)
      fail(source, e.value.at, "'" + e.key + "' expects a bracketed list [ \"...\", ... ]");
    return e.value.items;
  };

  for (const Entry& e : entries) {
    if (e.section == "system") {
      static const std::set<std::string> kKeys{"name", "description", "kind", "dim", "h",
                                               "xplus", "xminus", "F", "G", "H", "xtilde"};
      if (!kKeys.count(e.key)) fail(source, e.key_at, "unknown key '" + e.key + "' in [system]");
      sys[e.key] = &e;
      if (e.key == "name") cfg.name = want_string(e);
      else if (e.key == "description") cfg.description = want_string(e);
      else if (e.key == "kind") cfg.kind = want_string(e);
      else if (e.key == "dim") {
        const double d = to_number(e, source);
        if (d != std::floor(d) || d < 2 || d > 6)
          fail(source, e.value.at, "dim must be an integer between 2 and 6");
        cfg.dim = static_cast<std::size_t>(d);
      } else if (e.key == "h") cfg.h = want_string(e);
      else if (e.key == "H") cfg.H = want_string(e);
      else if (e.key == "xplus") cfg.xplus = want_list(e);
      else if (e.key == "xminus") cfg.xminus = want_list(e);
      else if (e.key == "F") cfg.F = want_list(e);
      else if (e.key == "G") cfg.G = want_list(e);
      else if (e.key == "xtilde") cfg.xtilde = want_list(e);
    } else if (e.section == "parameters") {
      cfg.params[e.key] = to_number(e, source);
    } else if (e.section == "transition") {
      if (e.key == "phi") {
        transition_phi = &e;
        cfg.transition.phi = want_string(e);
      } else if (e.key == "a0" || e.key == "b0" || e.key == "coord" || e.key == "amp" ||
                 e.key == "width") {
        psi_keys[e.key] = &e;
      } else {
        fail(source, e.key_at, "unknown key '" + e.key + "' in [transition]");
      }
    } else {
      cfg.experiment[e.key] = e.value.is_list ? [&] {
        std::string joined;
        for (std::size_t i = 0; i < e.value.items.size(); ++i)
          joined += (i ? "," : "") + e.value.items[i];
        return joined;
      }() : e.value.scalar;
    }
  }

  const Located top{1, 1};
  auto where = [&](const std::string& key) {
    const auto it = sys.find(key);
    return it == sys.end() ? top : it->second->value.at;
  };
  if (cfg.kind != "piecewise" && cfg.kind != "nsff" && cfg.kind != "ccomb")
    fail(source, where("kind"), "kind must be piecewise, nsff or ccomb");
  auto require = [&](const std::string& key, bool present) {
    if (!present) fail(source, top, "[system] is missing '" + key + "' for kind " + cfg.kind);
  };
  require("h", sys.count("h"));
  std::set<std::string> vars;
  for (const auto& nm : state_names(cfg.dim)) vars.insert(nm);
  for (const auto& [k, v] : cfg.params) {
    if (vars.count(k) || k == "y" || k == "eps" || k == "lambda")
      fail(source, top, "parameter '" + k + "' shadows a state variable");
  }
  for (const auto& [k, v] : cfg.params) vars.insert(k);
  auto check_list = [&](const std::string& key, const std::vector<std::string>& list,
                        const std::set<std::string>& allowed) {
    require(key, sys.count(key));
    if (list.size() != cfg.dim)
      fail(source, where(key),
           "dimension mismatch: '" + key + "' has " + std::to_string(list.size()) +
               " components but dim = " + std::to_string(cfg.dim));
    const Entry& e = *sys.at(key);
    for (std::size_t i = 0; i < list.size(); ++i)
      check_expression(list[i], e.value.item_at[i], key + "[" + std::to_string(i + 1) + "]",
                       allowed, source);
  };
  auto check_scalar = [&](const std::string& key, const std::string& text,
                          const std::set<std::string>& allowed) {
    require(key, sys.count(key));
    const Entry& e = *sys.at(key);
    const Located at = e.value.quoted ? e.value.item_at[0] : e.value.at;
    check_expression(text, at, key, allowed, source);
  };

  if (cfg.kind == "piecewise") {
    check_scalar("h", cfg.h, vars);
    check_list("xplus", cfg.xplus, vars);
    check_list("xminus", cfg.xminus, vars);
    if (sys.count("xtilde")) {
      auto with_lambda = vars;
      with_lambda.insert("lambda");
      check_list("xtilde", cfg.xtilde, with_lambda);
    }
    for (const char* k : {"F", "G", "H"})
      if (sys.count(k))
        fail(source, sys.at(k)->key_at, std::string("'") + k + "' is only valid for nsff/ccomb");
  } else {
    auto sf = vars;
    sf.insert("y");
    sf.insert("eps");
    check_scalar("h", cfg.h, sf);
    if (!expr::parse(cfg.h).is_variable("x1"))
      fail(source, where("h"),
           "nsff systems need h = x1 (straighten the switching manifold first)");
    check_list("F", cfg.F, sf);
    check_list("G", cfg.G, sf);
    check_scalar("H", cfg.H, sf);
    if (cfg.kind == "ccomb") {
      auto with_lambda = sf;
      with_lambda.insert("lambda");
      check_list("xtilde", cfg.xtilde, with_lambda);
    } else if (sys.count("xtilde")) {
      fail(source, sys.at("xtilde")->key_at, "'xtilde' is only valid for ccomb or piecewise");
    }
    for (const char* k : {"xplus", "xminus"})
      if (sys.count(k))
        fail(source, sys.at(k)->key_at, std::string("'") + k + "' is only valid for piecewise");
  }

  const std::string& phi = cfg.transition.phi;
  if (phi != "cubic" && phi != "quintic" && phi != "sine" && phi != "psi")
    fail(source, transition_phi ? transition_phi->value.at : top,
         "phi must be cubic, quintic, sine or psi");
  if (phi != "psi" && !psi_keys.empty())
    fail(source, psi_keys.begin()->second->key_at, "psi parameters given but phi is not psi");
  if (phi == "psi") {
    for (const auto& [k, e] : psi_keys) {
      const double v = to_number(*e, source);
      if (k == "a0") {
        if (!(std::fabs(v) < 1.0)) fail(source, e->value.at, "a0 must satisfy |a0| < 1");
        cfg.transition.psi.a0 = v;
      } else if (k == "b0") {
        cfg.transition.psi.b0 = v;
      } else if (k == "amp") {
        cfg.transition.psi.amp = v;
      } else if (k == "width") {
        if (!(v > 0.0)) fail(source, e->value.at, "width must be > 0");
        cfg.transition.psi.width = v;
      } else {
        const std::size_t limit = cfg.dim + (cfg.kind == "piecewise" ? 0 : 1);
        if (v != std::floor(v) || v < 1 || v > static_cast<double>(limit))
          fail(source, e->value.at,
               "coord must be an integer between 1 and " + std::to_string(limit));
        cfg.transition.psi.coord = static_cast<std::size_t>(v) - 1;
      }
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize(const SystemConfig& cfg) {
  std::ostringstream out;
  auto list = [](const std::vector<std::string>& v) {
    std::string s = "[ ";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + quote(v[i]);
    return s + " ]";
  };
  out << "[system]\n";
  if (!cfg.name.empty()) out << "name = " << quote(cfg.name) << "\n";
  if (!cfg.description.empty()) out << "description = " << quote(cfg.description) << "\n";
  out << "kind = " << cfg.kind << "\n";
  out << "dim = " << cfg.dim << "\n";
  out << "h = " << quote(cfg.h) << "\n";
  if (cfg.kind == "piecewise") {
    out << "xplus = " << list(cfg.xplus) << "\n";
    out << "xminus = " << list(cfg.xminus) << "\n";
  } else {
    out << "F = " << list(cfg.F) << "\n";
    out << "G = " << list(cfg.G) << "\n";
    out << "H = " << quote(cfg.H) << "\n";
  }
  if (!cfg.xtilde.empty()) out << "xtilde = " << list(cfg.xtilde) << "\n";
  if (!cfg.params.empty()) {
    out << "\n[parameters]\n";
    for (const auto& [k, v] : cfg.params) out << k << " = " << fmt17(v) << "\n";
  }
  out << "\n[transition]\n";
  out << "phi = " << cfg.transition.phi << "\n";
  if (cfg.transition.phi == "psi") {
    const PsiParams& p = cfg.transition.psi;
    out << "a0 = " << fmt17(p.a0) << "\nb0 = " << fmt17(p.b0)
        << "\ncoord = " << p.coord + 1 << "\namp = " << fmt17(p.amp)
        << "\nwidth = " << fmt17(p.width) << "\n";
  }
  if (!cfg.experiment.empty()) {
    out << "\n[experiment]\n";
    for (const auto& [k, v] : cfg.experiment) out << k << " = " << v << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const SystemConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize(cfg))));
  return buf;
}

PiecewiseSystem build_piecewise(const SystemConfig& cfg) {
  if (cfg.kind == "piecewise")
    return PiecewiseSystem::from_expressions(cfg.dim, cfg.xplus, cfg.xminus, cfg.h,
                                             cfg.params);
  return reduce(build_nsff(cfg)).system;
}

NonsmoothSlowFast build_nsff(const SystemConfig& cfg) {
  if (cfg.kind == "piecewise")
    throw Error(ErrorKind::InvalidArgument, "system kind piecewise has no fast variable");
  return NonsmoothSlowFast::from_expressions(cfg.dim, cfg.F, cfg.G, cfg.H, cfg.h, cfg.params);
}

SlowFastCombination build_ccomb(const SystemConfig& cfg) {
  if (cfg.kind != "ccomb")
    throw Error(ErrorKind::InvalidArgument, "system kind " + cfg.kind + " has no xtilde");
  return SlowFastCombination::from_expressions(build_nsff(cfg), cfg.xtilde, cfg.params);
}

ContinuousCombination build_combination(const SystemConfig& cfg) {
  if (cfg.kind == "ccomb") return build_ccomb(cfg).reduced();
  if (cfg.kind == "piecewise" && !cfg.xtilde.empty()) {
    auto slots = state_names(cfg.dim);
    slots.push_back("lambda");
    std::vector<expr::Expr> es;
    for (const auto& s : cfg.xtilde) es.push_back(expr::parse(s));
    const VectorFn f = compile_vector(es, slots, cfg.params);
    ContinuousCombination cc;
    cc.base = build_piecewise(cfg);
    cc.xtilde = [f](double lambda, std::span<const double> x) {
      Vec z(x.begin(), x.end());
      z.push_back(lambda);
      return f(z);
    };
    return cc;
  }
  if (cfg.kind == "piecewise") return ContinuousCombination::linear(build_piecewise(cfg));
  throw Error(ErrorKind::InvalidArgument, "system kind " + cfg.kind + " has no xtilde");
}

Transition build_transition(const SystemConfig& cfg) {
  if (cfg.transition.phi == "psi") return builtin_psi(cfg.transition.psi);
  return builtin_phi(cfg.transition.phi);
}

std::vector<std::pair<std::string, std::string>> all_expressions(const SystemConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const std::string& key, const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.emplace_back(key + "[" + std::to_string(i + 1) + "]", v[i]);
  };
  out.emplace_back("h", cfg.h);
  add("xplus", cfg.xplus);
  add("xminus", cfg.xminus);
  add("F", cfg.F);
  add("G", cfg.G);
  if (!cfg.H.empty()) out.emplace_back("H", cfg.H);
  add("xtilde", cfg.xtilde);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  auto num = [&](const std::string& s) {
    char* endp = nullptr;
    const double v = std::strtod(s.c_str(), &endp);
    if (s.empty() || endp != s.c_str() + s.size() || !std::isfinite(v))
      throw Error(ErrorKind::InvalidArgument, "not a number: '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ' ') continue;
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() == 1 && parts[0].find(':') != std::string::npos) {
    std::vector<std::string> f;
    std::stringstream ss(parts[0]);
    std::string item;
    while (std::getline(ss, item, ':')) f.push_back(item);
    if (f.size() != 3)
      throw Error(ErrorKind::InvalidArgument, "grid must be start:stop:count, got '" + text + "'");
    const double a = num(f[0]), b = num(f[1]), c = num(f[2]);
    if (c < 1 || c != std::floor(c))
      throw Error(ErrorKind::InvalidArgument, "grid count must be a positive integer");
    std::vector<double> out;
    const int n = static_cast<int>(c);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(num(p));
  return out;
}

RangeSpec parse_range(const std::string& text, std::size_t dim) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos)
    throw Error(ErrorKind::InvalidArgument, "range must look like x2=-1:2, got '" + text + "'");
  const std::string var = text.substr(0, eq);
  RangeSpec r;
  bool found = false;
  const auto names = state_names(dim);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == var) {
      r.coord = i;
      found = true;
    }
  if (!found) throw Error(ErrorKind::InvalidArgument, "unknown range variable '" + var + "'");
  const auto v = parse_list(text.substr(eq + 1, colon - eq - 1));
  const auto w = parse_list(text.substr(colon + 1));
  if (v.size() != 1 || w.size() != 1 || !(w[0] > v[0]))
    throw Error(ErrorKind::InvalidArgument, "range bounds must satisfy lo < hi in '" + text + "'");
  r.lo = v[0];
  r.hi = w[0];
  return r;
}

}  // namespace nsdyn::cli
