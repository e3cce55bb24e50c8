#include "vibronic/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace vibronic {

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      field_(std::move(field)) {}

std::string to_string(PrefactorConvention convention) {
  return convention == PrefactorConvention::paper ? "paper" : "unity";
}

PrefactorConvention parse_prefactor(std::string_view name) {
  if (name == "paper") return PrefactorConvention::paper;
  if (name == "unity") return PrefactorConvention::unity;
  throw ArgumentError("prefactor must be 'paper' or 'unity', got '" + std::string(name) + "'");
}

namespace {

struct Entry {
  std::string value;                     // inline value (may be empty)
  std::vector<std::string> rows;         // indented continuation lines
  std::vector<int> row_lines;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"system", {"n_levels", "omega", "energies", "displacements", "mu0", "mu1"}},
      {"pathway", {"states", "diagram"}},
      {"grid", {"n_points", "dt", "t2", "omega_min", "zero_pad"}},
      {"run",
       {"times", "max_ht_order", "gamma", "fock_dim", "seed", "output", "prefactor",
        "peak_threshold"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& token, int line, const std::string& field) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(field + ": '" + t + "' is not a finite number", line, field);
  }
  return v;
}

long long parse_int(const std::string& token, int line, const std::string& field) {
  const std::string t = trim(token);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(field + ": '" + t + "' is not an integer", line, field);
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<double> parse_list(const std::string& s, int line, const std::string& field) {
  if (trim(s).empty()) throw ConfigError(field + ": empty list", line, field);
  std::vector<double> out;
  for (const auto& t : split_commas(s)) out.push_back(parse_double(t, line, field));
  return out;
}

std::map<std::string, Section> tokenize(std::string_view text) {
  std::map<std::string, Section> sections;
  Section* current = nullptr;
  std::string current_name;
  Entry* block = nullptr;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                         : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      block = nullptr;
      continue;
    }
    const bool indented = raw.front() == ' ' || raw.front() == '\t';

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", lineno);
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!schema().count(name)) throw ConfigError("unknown section [" + name + "]", lineno);
      if (sections.count(name)) throw ConfigError("section [" + name + "] repeated", lineno);
      current = &sections[name];
      current_name = name;
      block = nullptr;
      continue;
    }
    if (indented && block) {
      block->rows.push_back(line);
      block->row_lines.push_back(lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(indented ? "indented line outside a block" : "expected 'key = value'",
                        lineno);
    }
    if (!current) throw ConfigError("key outside any section", lineno);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!schema().at(current_name).count(key)) {
      throw ConfigError("unknown key '" + key + "' in [" + current_name + "]", lineno, key);
    }
    if (current->count(key)) throw ConfigError("duplicate key '" + key + "'", lineno, key);
    Entry& e = (*current)[key];
    e.value = value;
    e.line = lineno;
    block = value.empty() ? &e : nullptr;
  }
  return sections;
}

const Entry* find(const std::map<std::string, Section>& s, const std::string& section,
                  const std::string& key) {
  const auto it = s.find(section);
  if (it == s.end()) return nullptr;
  const auto jt = it->second.find(key);
  return jt == it->second.end() ? nullptr : &jt->second;
}

const Entry& require(const std::map<std::string, Section>& s, const std::string& section,
                     const std::string& key) {
  const Entry* e = find(s, section, key);
  if (!e) throw ConfigError("missing required key '" + key + "' in [" + section + "]", 0, key);
  return *e;
}

std::string scalar(const Entry& e, const std::string& key) {
  if (!e.rows.empty() || e.value.empty()) {
    throw ConfigError(key + ": expected a single value", e.line, key);
  }
  return e.value;
}

std::vector<std::vector<double>> parse_rows(const Entry& e, const std::string& key) {
  if (!e.value.empty()) throw ConfigError(key + ": rows must start on the next line", e.line, key);
  if (e.rows.empty()) throw ConfigError(key + ": block has no rows", e.line, key);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    rows.push_back(parse_list(e.rows[i], e.row_lines[i], key));
  }
  return rows;
}

Eigen::MatrixXd parse_matrix(const Entry& e, const std::string& key, int n) {
  const auto rows = parse_rows(e, key);
  if (static_cast<int>(rows.size()) != n) {
    throw ConfigError(key + ": expected " + std::to_string(n) + " rows, got " +
                          std::to_string(rows.size()),
                      e.line, key);
  }
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != n) {
      throw ConfigError(key + ": row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(n),
                        e.row_lines[static_cast<std::size_t>(r)], key);
    }
    for (int c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

// Maps a model invariant back onto the config key that carries it.
std::string field_for_invariant(const std::string& invariant) {
  for (const char* key : {"n_levels", "omega", "energies", "displacements", "mu0", "mu1"}) {
    if (invariant.rfind(key, 0) == 0) return key;
  }
  if (invariant.find("ground displacement") != std::string::npos) return "displacements";
  return {};
}

std::pair<double, double> one_or_two(const Entry& e, const std::string& key) {
  const auto v = parse_list(scalar(e, key), e.line, key);
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() == 2) return {v[0], v[1]};
  throw ConfigError(key + ": expected one value or two (axis 1, axis 3)", e.line, key);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class Range>
std::string join(const Range& values) {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += fmt(v);
    first = false;
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const auto s = tokenize(text);
  RunConfig c;

  // [system]
  {
    const Entry& n = require(s, "system", "n_levels");
    const long long levels = parse_int(scalar(n, "n_levels"), n.line, "n_levels");
    if (levels < 2 || levels > 64) throw ConfigError("n_levels must be in 2..64", n.line, "n_levels");
    c.system.n_levels = static_cast<int>(levels);
    const Entry& w = require(s, "system", "omega");
    c.system.omega = parse_double(scalar(w, "omega"), w.line, "omega");
    const Entry& en = require(s, "system", "energies");
    c.system.energies = parse_list(scalar(en, "energies"), en.line, "energies");
    const Entry& d = require(s, "system", "displacements");
    c.system.displacements = parse_list(scalar(d, "displacements"), d.line, "displacements");
    c.system.mu0 = parse_matrix(require(s, "system", "mu0"), "mu0", c.system.n_levels);
    if (const Entry* m1 = find(s, "system", "mu1")) {
      c.system.mu1 = parse_matrix(*m1, "mu1", c.system.n_levels);
    } else {
      c.system.mu1 = Eigen::MatrixXd::Zero(c.system.n_levels, c.system.n_levels);
    }
    if (const auto issue = validate(c.system)) {
      const std::string field = field_for_invariant(issue->invariant);
      const Entry* e = field.empty() ? nullptr : find(s, "system", field);
      throw ConfigError(issue->invariant + (issue->detail.empty() ? "" : ": " + issue->detail),
                        e ? e->line : 0, field);
    }
  }

  // [pathway]
  if (const Entry* st = find(s, "pathway", "states")) {
    std::vector<int> states;
    for (const auto& t : split_commas(scalar(*st, "states"))) {
      const long long v = parse_int(t, st->line, "states");
      if (v < 0 || v >= c.system.n_levels) {
        throw ConfigError("states: index " + std::to_string(v) + " outside 0.." +
                              std::to_string(c.system.n_levels - 1),
                          st->line, "states");
      }
      states.push_back(static_cast<int>(v));
    }
    c.pathway = Pathway(std::move(states));
  }
  if (const Entry* dg = find(s, "pathway", "diagram")) {
    try {
      c.diagram = parse_diagram_kind(scalar(*dg, "diagram"));
    } catch (const ArgumentError& ex) {
      throw ConfigError(ex.what(), dg->line, "diagram");
    }
    if (!c.pathway) throw ConfigError("diagram given without states", dg->line, "diagram");
    try {
      make_diagram(c.pathway->order(), c.diagram);
    } catch (const UnsupportedError& ex) {
      throw ConfigError(ex.what(), dg->line, "diagram");
    }
  }

  // [grid]
  if (s.count("grid")) {
    TimeGrid g;
    const Entry& np = require(s, "grid", "n_points");
    const auto [n1, n3] = one_or_two(np, "n_points");
    if (n1 != std::floor(n1) || n3 != std::floor(n3) || n1 > 1 << 14 || n3 > 1 << 14) {
      throw ConfigError("n_points must be integers up to 16384", np.line, "n_points");
    }
    g.n1 = static_cast<int>(n1);
    g.n3 = static_cast<int>(n3);
    std::tie(g.dt1, g.dt3) = one_or_two(require(s, "grid", "dt"), "dt");
    if (const Entry* e = find(s, "grid", "t2")) g.t2 = parse_double(scalar(*e, "t2"), e->line, "t2");
    if (const Entry* e = find(s, "grid", "omega_min")) {
      std::tie(g.omega1_min, g.omega3_min) = one_or_two(*e, "omega_min");
    }
    if (const Entry* e = find(s, "grid", "zero_pad")) {
      const long long p = parse_int(scalar(*e, "zero_pad"), e->line, "zero_pad");
      if (p < 1 || p > 16) throw ConfigError("zero_pad must be in 1..16", e->line, "zero_pad");
      g.pad = static_cast<int>(p);
    }
    try {
      g.validate();
    } catch (const ArgumentError& ex) {
      throw ConfigError(ex.what(), np.line, "grid");
    }
    if (g.t2 < 0.0) throw ConfigError("t2 must be non-negative", 0, "t2");
    c.grid = g;
  }

  // [run]
  if (const Entry* e = find(s, "run", "times")) {
    if (!c.pathway) throw ConfigError("times given without [pathway] states", e->line, "times");
    c.times = parse_rows(*e, "times");
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const int line = e->row_lines[i];
      if (static_cast<int>(c.times[i].size()) != c.pathway->order()) {
        throw ConfigError("times: row " + std::to_string(i) + " has " +
                              std::to_string(c.times[i].size()) + " entries, expected " +
                              std::to_string(c.pathway->order()),
                          line, "times");
      }
      for (double t : c.times[i]) {
        if (t < 0.0) throw ConfigError("times: waiting times must be non-negative", line, "times");
      }
    }
  }
  if (c.has_times() && c.grid) {
    throw ConfigError("give either [run] times or a [grid], not both", 0, "times");
  }
  if (const Entry* e = find(s, "run", "max_ht_order")) {
    const long long p = parse_int(scalar(*e, "max_ht_order"), e->line, "max_ht_order");
    const int slots = c.pathway ? c.pathway->order() + 1 : 64;
    if (p < 0 || p > slots) {
      throw ConfigError("max_ht_order must be in 0.." + std::to_string(slots), e->line,
                        "max_ht_order");
    }
    c.max_ht_order = static_cast<int>(p);
  }
  if (const Entry* e = find(s, "run", "gamma")) {
    c.gamma = parse_double(scalar(*e, "gamma"), e->line, "gamma");
    if (*c.gamma < 0.0) throw ConfigError("gamma must be non-negative", e->line, "gamma");
  }
  if (const Entry* e = find(s, "run", "fock_dim")) {
    const long long d = parse_int(scalar(*e, "fock_dim"), e->line, "fock_dim");
    if (d < 2 || d > 4096) throw ConfigError("fock_dim must be in 2..4096", e->line, "fock_dim");
    c.fock_dim = static_cast<int>(d);
  }
  if (const Entry* e = find(s, "run", "seed")) {
    const long long v = parse_int(scalar(*e, "seed"), e->line, "seed");
    if (v < 0) throw ConfigError("seed must be non-negative", e->line, "seed");
    c.seed = static_cast<std::uint64_t>(v);
  }
  if (const Entry* e = find(s, "run", "output")) c.output = scalar(*e, "output");
  if (const Entry* e = find(s, "run", "prefactor")) {
    try {
      c.prefactor = parse_prefactor(scalar(*e, "prefactor"));
    } catch (const ArgumentError& ex) {
      throw ConfigError(ex.what(), e->line, "prefactor");
    }
  }
  if (const Entry* e = find(s, "run", "peak_threshold")) {
    c.peak_threshold = parse_double(scalar(*e, "peak_threshold"), e->line, "peak_threshold");
    if (!(c.peak_threshold > 0.0 && c.peak_threshold < 1.0)) {
      throw ConfigError("peak_threshold must lie in (0, 1)", e->line, "peak_threshold");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  const VibronicSystem& s = c.system;
  o << "[system]\n";
  o << "n_levels = " << s.n_levels << "\n";
  o << "omega = " << fmt(s.omega) << "\n";
  o << "energies = " << join(s.energies) << "\n";
  o << "displacements = " << join(s.displacements) << "\n";
  for (const auto& [name, m] : {std::pair{"mu0", &s.mu0}, std::pair{"mu1", &s.mu1}}) {
    o << name << " =\n";
    for (int r = 0; r < m->rows(); ++r) {
      std::vector<double> row(m->row(r).begin(), m->row(r).end());
      o << "  " << join(row) << "\n";
    }
  }
  if (c.pathway) {
    o << "\n[pathway]\n";
    o << "states = ";
    for (int k = 1; k <= c.pathway->order(); ++k) {
      o << (k > 1 ? ", " : "") << c.pathway->state(k);
    }
    o << "\ndiagram = " << to_string(c.diagram) << "\n";
  }
  if (c.grid) {
    const TimeGrid& g = *c.grid;
    o << "\n[grid]\n";
    o << "n_points = " << g.n1 << ", " << g.n3 << "\n";
    o << "dt = " << fmt(g.dt1) << ", " << fmt(g.dt3) << "\n";
    o << "t2 = " << fmt(g.t2) << "\n";
    o << "omega_min = " << fmt(g.omega1_min) << ", " << fmt(g.omega3_min) << "\n";
    o << "zero_pad = " << g.pad << "\n";
  }
  o << "\n[run]\n";
  if (c.has_times()) {
    o << "times =\n";
    for (const auto& row : c.times) o << "  " << join(row) << "\n";
  }
  if (c.max_ht_order) o << "max_ht_order = " << *c.max_ht_order << "\n";
  if (c.gamma) o << "gamma = " << fmt(*c.gamma) << "\n";
  o << "fock_dim = " << c.fock_dim << "\n";
  o << "seed = " << c.seed << "\n";
  if (!c.output.empty()) o << "output = " << c.output << "\n";
  o << "prefactor = " << to_string(c.prefactor) << "\n";
  o << "peak_threshold = " << fmt(c.peak_threshold) << "\n";
  return o.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const VibronicSystem &x = a.system, &y = b.system;
  const bool same_system = x.n_levels == y.n_levels && x.omega == y.omega &&
                           x.energies == y.energies && x.displacements == y.displacements &&
                           x.mu0 == y.mu0 && x.mu1 == y.mu1;
  auto same_grid = [](const std::optional<TimeGrid>& g, const std::optional<TimeGrid>& h) {
    if (g.has_value() != h.has_value()) return false;
    if (!g) return true;
    return g->n1 == h->n1 && g->n3 == h->n3 && g->dt1 == h->dt1 && g->dt3 == h->dt3 &&
           g->t2 == h->t2 && g->omega1_min == h->omega1_min &&
           g->omega3_min == h->omega3_min && g->pad == h->pad;
  };
  return same_system && a.pathway == b.pathway && a.diagram == b.diagram && a.times == b.times &&
         same_grid(a.grid, b.grid) && a.max_ht_order == b.max_ht_order && a.gamma == b.gamma &&
         a.fock_dim == b.fock_dim && a.seed == b.seed && a.output == b.output &&
         a.prefactor == b.prefactor && a.peak_threshold == b.peak_threshold;
}

}  // namespace vibronic
