#pragma once

#include <sstream>

#include "sesq/cohomology.hpp"

namespace sesq {

// ---------------------------------------------------------------------------
// Definition files: a line-oriented text format for sesquiads, modules,
// homs, spaces, schemes, sheaves and tasks. Parsing is split from
// resolution: the parsed model is plain text and serializes canonically, so
// parse(serialize(f)) == f; resolution builds the algebraic objects and
// reports semantic errors with the line of the offending block.
// ---------------------------------------------------------------------------

struct RawEntry {
  std::string key;
  std::string rest;
  int line;
};

struct RawBlock {
  std::string kind;
  std::vector<std::string> header;  // tokens after the kind
  std::vector<RawEntry> entries;
  int line;

  bool operator==(const RawBlock& o) const {
    if (kind != o.kind || header != o.header || entries.size() != o.entries.size()) return false;
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].key != o.entries[i].key || entries[i].rest != o.entries[i].rest)
        return false;
    return true;
  }
};

struct DefinitionFile {
  std::vector<RawBlock> blocks;
  bool operator==(const DefinitionFile& o) const { return blocks == o.blocks; }
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline std::string joined(const std::vector<std::string>& ts) {
  std::string out;
  for (size_t i = 0; i < ts.size(); ++i) out += (i ? " " : "") + ts[i];
  return out;
}

[[noreturn]] inline void syntax_error(int line, const std::string& msg) {
  fail(Errc::syntax_error, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace detail

inline DefinitionFile parse_definition_text(const std::string& text) {
  DefinitionFile file;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  RawBlock* current = nullptr;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto ts = detail::tokens(line);
    if (ts.empty()) continue;
    if (ts[0].front() == '[') {
      std::string merged = detail::joined(ts);
      if (merged.back() != ']') detail::syntax_error(lineno, "unterminated section header");
      merged = merged.substr(1, merged.size() - 2);
      auto hts = detail::tokens(merged);
      if (hts.empty()) detail::syntax_error(lineno, "empty section header");
      RawBlock b;
      b.kind = hts[0];
      b.header.assign(hts.begin() + 1, hts.end());
      b.line = lineno;
      file.blocks.push_back(std::move(b));
      current = &file.blocks.back();
      continue;
    }
    if (!current) detail::syntax_error(lineno, "content before the first section");
    RawEntry e;
    e.key = ts[0];
    e.rest = detail::joined({ts.begin() + 1, ts.end()});
    e.line = lineno;
    current->entries.push_back(std::move(e));
  }
  return file;
}

inline std::string serialize(const DefinitionFile& file) {
  std::string out;
  for (const RawBlock& b : file.blocks) {
    out += "[" + b.kind;
    for (const auto& h : b.header) out += " " + h;
    out += "]\n";
    for (const RawEntry& e : b.entries) {
      out += e.key;
      if (!e.rest.empty()) out += " " + e.rest;
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolution.
// ---------------------------------------------------------------------------

struct NamedModule {
  ModulePtr mod;
  std::vector<std::string> point_name;  // per canonical point index
  int point_by_name(const std::string& n) const {
    for (int i = 0; i < int(point_name.size()); ++i)
      if (point_name[size_t(i)] == n) return i;
    fail(Errc::unknown_reference, "no point named " + n);
  }
};

struct NamedSheaf {
  SheafPtr sheaf;
  std::vector<std::string> module_name;  // per point of the space
};

struct TaskSpec {
  std::string name;
  std::string op;
  std::map<std::string, std::vector<std::string>> args;
  int line;
};

struct Resolved {
  std::map<std::string, SesquiadPtr> sesquiads;
  std::map<std::string, SesquiadHom> sesquiad_homs;
  std::map<std::string, NamedModule> modules;
  std::map<std::string, Hom> homs;
  std::map<std::string, FiniteSpace> spaces;
  std::map<std::string, SchemePtr> schemes;
  std::map<std::string, NamedSheaf> sheaves;
  std::map<std::string, SheafHom> sheaf_homs;
  std::vector<TaskSpec> tasks;
  std::vector<std::string> order;  // names in definition order, prefixed by kind
};

namespace detail {

inline Int parse_int(const std::string& s, int line) {
  try {
    return Int(s);
  } catch (...) {
    syntax_error(line, "bad integer " + s);
  }
}

inline long parse_long(const std::string& s, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::runtime_error("trailing");
    return v;
  } catch (...) {
    syntax_error(line, "bad integer " + s);
  }
}

// "a -> b" possibly inside comma-separated lists
inline std::vector<std::pair<std::string, std::string>> parse_arrows(const std::string& rest,
                                                                     int line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string piece;
  std::istringstream is(rest);
  std::vector<std::string> pieces;
  while (std::getline(is, piece, ',')) pieces.push_back(piece);
  for (const auto& p : pieces) {
    auto ts = tokens(p);
    if (ts.size() != 3 || ts[1] != "->") syntax_error(line, "expected 'a -> b'");
    out.emplace_back(ts[0], ts[2]);
  }
  return out;
}

template <typename M>
const typename M::mapped_type& look(const M& m, const std::string& name, int line) {
  auto it = m.find(name);
  if (it == m.end())
    fail(Errc::unknown_reference,
         "line " + std::to_string(line) + ": unknown reference " + name);
  return it->second;
}

inline SesquiadPtr resolve_sesquiad(const RawBlock& b) {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::vector<std::vector<int>> table;
  std::vector<AdditionFact> facts;
  std::vector<std::tuple<int, int, int, int>> mults;  // a, b, c, line
  bool have_elements = false;

  auto elt = [&](const std::string& n, int line) {
    auto it = index.find(n);
    if (it == index.end())
      fail(Errc::unknown_reference, "line " + std::to_string(line) + ": unknown element " + n);
    return it->second;
  };

  for (const RawEntry& e : b.entries) {
    if (e.key == "ring") {
      auto ts = tokens(e.rest);
      if (ts.size() == 2 && ts[0] == "zmod") {
        long n = parse_long(ts[1], e.line);
        require(n >= 2, Errc::invariant_violation, "zmod needs a modulus of at least 2");
        return zmod(int(n));
      }
      syntax_error(e.line, "unknown ring form " + e.rest);
    } else if (e.key == "elements") {
      names = tokens(e.rest);
      if (names.empty() || names[0] != "0") syntax_error(e.line, "elements must start with 0");
      for (int i = 0; i < int(names.size()); ++i) {
        if (!index.emplace(names[size_t(i)], i).second)
          fail(Errc::invariant_violation,
               "line " + std::to_string(e.line) + ": duplicate element " + names[size_t(i)]);
      }
      have_elements = true;
    } else if (e.key == "mult") {
      // a*b = c with optional spaces around * and =
      std::string s = e.rest;
      auto star = s.find('*');
      auto eq = s.find('=');
      if (star == std::string::npos || eq == std::string::npos || eq < star)
        syntax_error(e.line, "expected a*b = c");
      auto trim = [](std::string t) {
        auto ts2 = tokens(t);
        return joined(ts2);
      };
      std::string a = trim(s.substr(0, star));
      std::string bn = trim(s.substr(star + 1, eq - star - 1));
      std::string c = trim(s.substr(eq + 1));
      if (!have_elements) syntax_error(e.line, "mult before elements");
      mults.emplace_back(elt(a, e.line), elt(bn, e.line), elt(c, e.line), e.line);
    } else if (e.key == "fact") {
      if (!have_elements) syntax_error(e.line, "fact before elements");
      std::string s = e.rest;
      auto eq = s.find('=');
      if (eq == std::string::npos) syntax_error(e.line, "fact needs '='");
      std::string lhs = s.substr(0, eq), rhs = s.substr(eq + 1);
      auto rts = tokens(rhs);
      if (rts.size() != 1) syntax_error(e.line, "fact result must be one element");
      AdditionFact f;
      f.result = elt(rts[0], e.line);
      // terms separated by +, each [k*]name
      std::string term;
      std::istringstream ls(lhs);
      while (std::getline(ls, term, '+')) {
        auto ts2 = tokens(term);
        if (ts2.empty()) syntax_error(e.line, "empty term in fact");
        std::string t = joined(ts2);
        auto star = t.find('*');
        Int k = 1;
        std::string name = t;
        if (star != std::string::npos) {
          k = parse_int(t.substr(0, star), e.line);
          name = t.substr(star + 1);
          auto nts = tokens(name);
          name = joined(nts);
        }
        f.coeff.push_back(k);
        f.arg.push_back(elt(name, e.line));
      }
      facts.push_back(std::move(f));
    } else {
      syntax_error(e.line, "unknown key " + e.key + " in sesquiad");
    }
  }
  if (!have_elements) fail(Errc::syntax_error, "sesquiad without elements");
  int n = int(names.size());
  auto it_one = index.find("1");
  require(it_one != index.end(), Errc::invariant_violation, "sesquiad needs an element named 1");
  int one = it_one->second;

  table.assign(size_t(n), std::vector<int>(static_cast<size_t>(n), -1));
  for (int i = 0; i < n; ++i) {
    table[0][size_t(i)] = table[size_t(i)][0] = 0;
    table[size_t(one)][size_t(i)] = table[size_t(i)][size_t(one)] = i;
  }
  for (auto [a, b2, c, line] : mults) {
    if (table[size_t(a)][size_t(b2)] >= 0 && table[size_t(a)][size_t(b2)] != c)
      fail(Errc::invariant_violation,
           "line " + std::to_string(line) + ": conflicting product for " + names[size_t(a)] +
               "*" + names[size_t(b2)]);
    table[size_t(a)][size_t(b2)] = table[size_t(b2)][size_t(a)] = c;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      require(table[size_t(i)][size_t(j)] >= 0, Errc::invariant_violation,
              "missing product " + names[size_t(i)] + "*" + names[size_t(j)]);
  return make_sesquiad(names, one, table, facts);
}

inline NamedModule resolve_module(const RawBlock& b, const SesquiadPtr& base) {
  int rank = -1;
  std::vector<Vec> relations;
  std::map<int, IntMatrix> action_by_elt;
  std::vector<std::pair<std::string, Vec>> named_points;
  for (const RawEntry& e : b.entries) {
    auto ts = tokens(e.rest);
    if (e.key == "rank") {
      if (ts.size() != 1) syntax_error(e.line, "rank needs one number");
      rank = int(parse_long(ts[0], e.line));
    } else if (e.key == "relation") {
      require(rank >= 0, Errc::syntax_error, "relation before rank");
      if (int(ts.size()) != rank) syntax_error(e.line, "relation entries must match the rank");
      Vec col;
      for (auto& t : ts) col.push_back(parse_int(t, e.line));
      relations.push_back(std::move(col));
    } else if (e.key == "action") {
      require(rank >= 0, Errc::syntax_error, "action before rank");
      auto eq = e.rest.find('=');
      if (eq == std::string::npos) syntax_error(e.line, "action needs '='");
      std::string en = joined(tokens(e.rest.substr(0, eq)));
      int elt = base->element_index(en);
      require(elt != 0, Errc::invariant_violation, "the action of 0 is implied");
      std::string rows = e.rest.substr(eq + 1);
      IntMatrix m(rank, rank);
      std::istringstream rs(rows);
      std::string row;
      int r = 0;
      while (std::getline(rs, row, ';')) {
        auto rts = tokens(row);
        if (int(rts.size()) != rank || r >= rank) syntax_error(e.line, "action matrix shape");
        for (int c = 0; c < rank; ++c) m.at(r, c) = parse_int(rts[size_t(c)], e.line);
        ++r;
      }
      if (r != rank) syntax_error(e.line, "action matrix shape");
      action_by_elt.emplace(elt, std::move(m));
    } else if (e.key == "point") {
      require(rank >= 0, Errc::syntax_error, "point before rank");
      auto eq = e.rest.find('=');
      if (eq == std::string::npos) syntax_error(e.line, "point needs '='");
      std::string pn = joined(tokens(e.rest.substr(0, eq)));
      auto cts = tokens(e.rest.substr(eq + 1));
      if (int(cts.size()) != rank) syntax_error(e.line, "point entries must match the rank");
      Vec v;
      for (auto& t : cts) v.push_back(parse_int(t, e.line));
      named_points.emplace_back(pn, std::move(v));
    } else {
      syntax_error(e.line, "unknown key " + e.key + " in module");
    }
  }
  require(rank >= 0, Errc::syntax_error, "module without rank");

  std::vector<IntMatrix> action;
  for (int a = 1; a < base->size(); ++a) {
    auto it = action_by_elt.find(a);
    if (it != action_by_elt.end())
      action.push_back(it->second);
    else if (a == base->one)
      action.push_back(IntMatrix::identity(rank));
    else
      fail(Errc::invariant_violation,
           "line " + std::to_string(b.line) + ": missing action for element " +
               base->names[size_t(a)]);
  }
  FgModule carrier(rank, IntMatrix::from_cols(rank, relations), action);
  std::vector<Vec> pts{zero_vec(rank)};
  for (auto& [pn, v] : named_points) pts.push_back(v);
  ModulePtr mod = make_module(base, carrier, pts);

  NamedModule nm;
  nm.mod = mod;
  nm.point_name.assign(size_t(mod->point_count()), "");
  nm.point_name[size_t(mod->zero_index())] = "0";
  for (auto& [pn, v] : named_points) {
    int idx = mod->point_index(mod->carrier.reduce(v));
    internal_check(idx >= 0, "constructed point disappeared");
    if (nm.point_name[size_t(idx)].empty()) nm.point_name[size_t(idx)] = pn;
  }
  for (int i = 0; i < mod->point_count(); ++i)
    if (nm.point_name[size_t(i)].empty()) {
      // points created by stability closure get coordinate names
      std::string s = "<";
      for (size_t t = 0; t < mod->points[size_t(i)].size(); ++t)
        s += (t ? " " : "") + mod->points[size_t(i)][t].get_str();
      nm.point_name[size_t(i)] = s + ">";
    }
  return nm;
}

}  // namespace detail

inline Resolved resolve(const DefinitionFile& file) {
  Resolved r;
  for (const RawBlock& b : file.blocks) {
    auto need_header = [&](size_t n, const char* what) {
      if (b.header.size() != n)
        detail::syntax_error(b.line, std::string("expected header: ") + what);
    };
    auto fresh = [&](const std::string& name) {
      bool clash = r.sesquiads.count(name) || r.modules.count(name) || r.homs.count(name) ||
                   r.sesquiad_homs.count(name) || r.spaces.count(name) ||
                   r.schemes.count(name) || r.sheaves.count(name) || r.sheaf_homs.count(name);
      require(!clash, Errc::invariant_violation,
              "line " + std::to_string(b.line) + ": duplicate name " + name);
    };

    if (b.kind == "sesquiad") {
      need_header(1, "[sesquiad NAME]");
      fresh(b.header[0]);
      r.sesquiads.emplace(b.header[0], detail::resolve_sesquiad(b));
      r.order.push_back("sesquiad " + b.header[0]);
    } else if (b.kind == "module") {
      need_header(3, "[module NAME over SESQUIAD]");
      require(b.header[1] == "over", Errc::syntax_error, "expected 'over'");
      fresh(b.header[0]);
      const SesquiadPtr& base = detail::look(r.sesquiads, b.header[2], b.line);
      r.modules.emplace(b.header[0], detail::resolve_module(b, base));
      r.order.push_back("module " + b.header[0]);
    } else if (b.kind == "sesquiadhom") {
      need_header(5, "[sesquiadhom NAME from A to B]");
      require(b.header[1] == "from" && b.header[3] == "to", Errc::syntax_error,
              "expected 'from ... to ...'");
      fresh(b.header[0]);
      const SesquiadPtr& src = detail::look(r.sesquiads, b.header[2], b.line);
      const SesquiadPtr& dst = detail::look(r.sesquiads, b.header[4], b.line);
      std::vector<int> map(static_cast<size_t>(src->size()), -1);
      map[0] = 0;
      map[size_t(src->one)] = dst->one;
      for (const RawEntry& e : b.entries) {
        if (e.key != "map") detail::syntax_error(e.line, "unknown key in sesquiadhom");
        for (auto& [a, bb] : detail::parse_arrows(e.rest, e.line))
          map[size_t(src->element_index(a))] = dst->element_index(bb);
      }
      for (int i = 0; i < src->size(); ++i)
        require(map[size_t(i)] >= 0, Errc::invariant_violation,
                "line " + std::to_string(b.line) + ": element " + src->names[size_t(i)] +
                    " has no image");
      r.sesquiad_homs.emplace(b.header[0], make_sesquiad_hom(src, dst, map));
      r.order.push_back("sesquiadhom " + b.header[0]);
    } else if (b.kind == "hom") {
      need_header(5, "[hom NAME from M to N]");
      require(b.header[1] == "from" && b.header[3] == "to", Errc::syntax_error,
              "expected 'from ... to ...'");
      fresh(b.header[0]);
      const NamedModule& src = detail::look(r.modules, b.header[2], b.line);
      const NamedModule& dst = detail::look(r.modules, b.header[4], b.line);
      std::vector<int> pmap(static_cast<size_t>(src.mod->point_count()), -1);
      pmap[size_t(src.mod->zero_index())] = dst.mod->zero_index();
      for (const RawEntry& e : b.entries) {
        if (e.key != "map") detail::syntax_error(e.line, "unknown key in hom");
        for (auto& [p, q] : detail::parse_arrows(e.rest, e.line))
          pmap[size_t(src.point_by_name(p))] = dst.point_by_name(q);
      }
      for (int i = 0; i < src.mod->point_count(); ++i)
        require(pmap[size_t(i)] >= 0, Errc::invariant_violation,
                "line " + std::to_string(b.line) + ": point " + src.point_name[size_t(i)] +
                    " has no image");
      r.homs.emplace(b.header[0], make_hom(src.mod, dst.mod, pmap));
      r.order.push_back("hom " + b.header[0]);
    } else if (b.kind == "space") {
      need_header(1, "[space NAME]");
      fresh(b.header[0]);
      std::vector<std::string> pts;
      std::vector<std::pair<int, int>> below;
      std::map<std::string, int> index;
      for (const RawEntry& e : b.entries) {
        auto ts = detail::tokens(e.rest);
        if (e.key == "points") {
          pts = ts;
          for (int i = 0; i < int(pts.size()); ++i) index.emplace(pts[size_t(i)], i);
        } else if (e.key == "below") {
          if (ts.size() != 2) detail::syntax_error(e.line, "below needs two points");
          auto a = index.find(ts[0]);
          auto bb = index.find(ts[1]);
          if (a == index.end() || bb == index.end())
            fail(Errc::unknown_reference, "line " + std::to_string(e.line) + ": unknown point");
          below.emplace_back(a->second, bb->second);
        } else {
          detail::syntax_error(e.line, "unknown key in space");
        }
      }
      r.spaces.emplace(b.header[0], make_space(pts, below));
      r.order.push_back("space " + b.header[0]);
    } else if (b.kind == "scheme") {
      need_header(1, "[scheme NAME]");
      fresh(b.header[0]);
      std::string space_name;
      std::string spec_name;
      std::map<int, std::string> stalk_names;
      std::map<std::pair<int, int>, std::vector<std::pair<std::string, std::string>>> restr;
      const FiniteSpace* sp = nullptr;
      for (const RawEntry& e : b.entries) {
        auto ts = detail::tokens(e.rest);
        if (e.key == "spec") {
          if (ts.size() != 1) detail::syntax_error(e.line, "spec needs a sesquiad");
          spec_name = ts[0];
        } else if (e.key == "space") {
          if (ts.size() != 1) detail::syntax_error(e.line, "space needs a name");
          space_name = ts[0];
          sp = &detail::look(r.spaces, space_name, e.line);
        } else if (e.key == "stalk") {
          if (ts.size() != 3 || ts[1] != "=") detail::syntax_error(e.line, "stalk x = S");
          require(sp != nullptr, Errc::syntax_error, "stalk before space");
          int x = -1;
          for (int i = 0; i < sp->size(); ++i)
            if (sp->names[size_t(i)] == ts[0]) x = i;
          require(x >= 0, Errc::unknown_reference, "unknown space point " + ts[0]);
          stalk_names.emplace(x, ts[2]);
        } else if (e.key == "restriction") {
          require(sp != nullptr, Errc::syntax_error, "restriction before space");
          auto colon = e.rest.find(':');
          if (colon == std::string::npos) detail::syntax_error(e.line, "restriction needs ':'");
          auto head = detail::tokens(e.rest.substr(0, colon));
          if (head.size() != 3 || head[1] != "->")
            detail::syntax_error(e.line, "restriction x -> y : ...");
          int x = -1, y = -1;
          for (int i = 0; i < sp->size(); ++i) {
            if (sp->names[size_t(i)] == head[0]) x = i;
            if (sp->names[size_t(i)] == head[2]) y = i;
          }
          require(x >= 0 && y >= 0, Errc::unknown_reference, "unknown space point");
          restr.emplace(std::make_pair(x, y),
                        detail::parse_arrows(e.rest.substr(colon + 1), e.line));
        } else {
          detail::syntax_error(e.line, "unknown key in scheme");
        }
      }
      if (!spec_name.empty()) {
        const SesquiadPtr& a = detail::look(r.sesquiads, spec_name, b.line);
        r.schemes.emplace(b.header[0], spec_scheme(a));
      } else {
        require(sp != nullptr, Errc::syntax_error, "scheme needs a space or a spec");
        std::vector<SesquiadPtr> stalks;
        for (int x = 0; x < sp->size(); ++x) {
          auto it = stalk_names.find(x);
          require(it != stalk_names.end(), Errc::invariant_violation,
                  "missing stalk for point " + sp->names[size_t(x)]);
          stalks.push_back(detail::look(r.sesquiads, it->second, b.line));
        }
        std::map<std::pair<int, int>, SesquiadHom> rs;
        for (int x = 0; x < sp->size(); ++x)
          for (int y = 0; y < sp->size(); ++y) {
            if (x == y || !sp->leq(y, x)) continue;
            std::vector<int> map(static_cast<size_t>(stalks[size_t(x)]->size()), -1);
            map[0] = 0;
            map[size_t(stalks[size_t(x)]->one)] = stalks[size_t(y)]->one;
            auto it = restr.find({x, y});
            if (it != restr.end())
              for (auto& [a, bb] : it->second)
                map[size_t(stalks[size_t(x)]->element_index(a))] =
                    stalks[size_t(y)]->element_index(bb);
            for (int i = 0; i < stalks[size_t(x)]->size(); ++i)
              require(map[size_t(i)] >= 0, Errc::invariant_violation,
                      "line " + std::to_string(b.line) + ": restriction misses element " +
                          stalks[size_t(x)]->names[size_t(i)]);
            rs.emplace(std::make_pair(x, y),
                       make_sesquiad_hom(stalks[size_t(x)], stalks[size_t(y)], map));
          }
        r.schemes.emplace(b.header[0], make_scheme(*sp, stalks, rs));
      }
      r.order.push_back("scheme " + b.header[0]);
    } else if (b.kind == "sheaf") {
      need_header(3, "[sheaf NAME over SCHEME]");
      require(b.header[1] == "over", Errc::syntax_error, "expected 'over'");
      fresh(b.header[0]);
      const SchemePtr& sc = detail::look(r.schemes, b.header[2], b.line);
      int n = sc->space.size();
      std::vector<std::string> module_names(static_cast<size_t>(n));
      std::vector<ModulePtr> at(static_cast<size_t>(n));
      std::map<std::pair<int, int>, std::vector<std::pair<std::string, std::string>>> restr;
      for (const RawEntry& e : b.entries) {
        if (e.key == "module") {
          auto ts = detail::tokens(e.rest);
          if (ts.size() != 3 || ts[1] != "=") detail::syntax_error(e.line, "module x = M");
          int x = -1;
          for (int i = 0; i < n; ++i)
            if (sc->space.names[size_t(i)] == ts[0]) x = i;
          require(x >= 0, Errc::unknown_reference, "unknown scheme point " + ts[0]);
          module_names[size_t(x)] = ts[2];
          at[size_t(x)] = detail::look(r.modules, ts[2], e.line).mod;
        } else if (e.key == "restriction") {
          auto colon = e.rest.find(':');
          if (colon == std::string::npos) detail::syntax_error(e.line, "restriction needs ':'");
          auto head = detail::tokens(e.rest.substr(0, colon));
          if (head.size() != 3 || head[1] != "->")
            detail::syntax_error(e.line, "restriction x -> y : ...");
          int x = -1, y = -1;
          for (int i = 0; i < n; ++i) {
            if (sc->space.names[size_t(i)] == head[0]) x = i;
            if (sc->space.names[size_t(i)] == head[2]) y = i;
          }
          require(x >= 0 && y >= 0, Errc::unknown_reference, "unknown scheme point");
          restr.emplace(std::make_pair(x, y),
                        detail::parse_arrows(e.rest.substr(colon + 1), e.line));
        } else {
          detail::syntax_error(e.line, "unknown key in sheaf");
        }
      }
      for (int x = 0; x < n; ++x)
        require(at[size_t(x)] != nullptr, Errc::invariant_violation,
                "missing module at point " + sc->space.names[size_t(x)]);
      std::map<std::pair<int, int>, SemiHom> rs;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (x == y || !sc->space.leq(y, x)) continue;
          const NamedModule& mx = detail::look(r.modules, module_names[size_t(x)], b.line);
          const NamedModule& my = detail::look(r.modules, module_names[size_t(y)], b.line);
          std::vector<int> pmap(static_cast<size_t>(mx.mod->point_count()), -1);
          pmap[size_t(mx.mod->zero_index())] = my.mod->zero_index();
          auto it = restr.find({x, y});
          if (it != restr.end())
            for (auto& [p, q] : it->second)
              pmap[size_t(mx.point_by_name(p))] = my.point_by_name(q);
          for (int i = 0; i < mx.mod->point_count(); ++i)
            require(pmap[size_t(i)] >= 0, Errc::invariant_violation,
                    "line " + std::to_string(b.line) + ": sheaf restriction misses point " +
                        mx.point_name[size_t(i)]);
          rs.emplace(std::make_pair(x, y),
                     make_semi_hom(*mx.mod, *my.mod, sc->restriction(x, y), pmap));
        }
      NamedSheaf ns;
      ns.sheaf = make_module_sheaf(sc, at, rs);
      ns.module_name = module_names;
      r.sheaves.emplace(b.header[0], ns);
      r.order.push_back("sheaf " + b.header[0]);
    } else if (b.kind == "sheafhom") {
      need_header(5, "[sheafhom NAME from F to G]");
      fresh(b.header[0]);
      const NamedSheaf& f = detail::look(r.sheaves, b.header[2], b.line);
      const NamedSheaf& g = detail::look(r.sheaves, b.header[4], b.line);
      int n = f.sheaf->scheme->space.size();
      std::vector<std::vector<int>> pmaps(static_cast<size_t>(n));
      for (int x = 0; x < n; ++x) {
        pmaps[size_t(x)].assign(static_cast<size_t>(f.sheaf->at[size_t(x)]->point_count()), -1);
        pmaps[size_t(x)][size_t(f.sheaf->at[size_t(x)]->zero_index())] =
            g.sheaf->at[size_t(x)]->zero_index();
      }
      for (const RawEntry& e : b.entries) {
        if (e.key != "at") detail::syntax_error(e.line, "unknown key in sheafhom");
        auto colon = e.rest.find(':');
        if (colon == std::string::npos) detail::syntax_error(e.line, "at x : p -> q");
        auto head = detail::tokens(e.rest.substr(0, colon));
        if (head.size() != 1) detail::syntax_error(e.line, "at x : ...");
        int x = -1;
        for (int i = 0; i < n; ++i)
          if (f.sheaf->scheme->space.names[size_t(i)] == head[0]) x = i;
        require(x >= 0, Errc::unknown_reference, "unknown scheme point " + head[0]);
        const NamedModule& mf = detail::look(r.modules, f.module_name[size_t(x)], e.line);
        const NamedModule& mg = detail::look(r.modules, g.module_name[size_t(x)], e.line);
        for (auto& [p, q] : detail::parse_arrows(e.rest.substr(colon + 1), e.line))
          pmaps[size_t(x)][size_t(mf.point_by_name(p))] = mg.point_by_name(q);
      }
      std::vector<Hom> comps;
      for (int x = 0; x < n; ++x) {
        for (int i = 0; i < f.sheaf->at[size_t(x)]->point_count(); ++i)
          require(pmaps[size_t(x)][size_t(i)] >= 0, Errc::invariant_violation,
                  "line " + std::to_string(b.line) + ": sheaf hom misses a point");
        comps.push_back(make_hom(f.sheaf->at[size_t(x)], g.sheaf->at[size_t(x)], pmaps[size_t(x)]));
      }
      r.sheaf_homs.emplace(b.header[0], make_sheaf_hom(f.sheaf, g.sheaf, comps));
      r.order.push_back("sheafhom " + b.header[0]);
    } else if (b.kind == "task") {
      need_header(1, "[task NAME]");
      TaskSpec t;
      t.name = b.header[0];
      t.line = b.line;
      for (const RawEntry& e : b.entries) {
        if (e.key == "op") {
          auto ts = detail::tokens(e.rest);
          if (ts.size() != 1) detail::syntax_error(e.line, "op needs one name");
          t.op = ts[0];
        } else {
          t.args[e.key] = detail::tokens(e.rest);
        }
      }
      require(!t.op.empty(), Errc::syntax_error,
              "line " + std::to_string(b.line) + ": task without op");
      r.tasks.push_back(std::move(t));
      r.order.push_back("task " + b.header[0]);
    } else {
      detail::syntax_error(b.line, "unknown section kind " + b.kind);
    }
  }
  return r;
}

}  // namespace sesq
