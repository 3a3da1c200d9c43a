#include "pms/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "pms/errors.hpp"

namespace pms {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  int line = 0;
  int col = 0;
};

const std::set<std::string> kDirectives = {"type", "component", "boundaries", "phase",
                                           "option"};

class Lexer {
 public:
  explicit Lexer(std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      lex_line(line, lineno);
    }
    tokens_.push_back({Token::Kind::End, "<end of file>", 0.0, lineno + 1, 1});
  }

  const Token& peek(int ahead = 0) const {
    size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

 private:
  void lex_line(const std::string& line, int lineno) {
    size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == '#') return;  // comment to end of line
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      int col = static_cast<int>(i) + 1;
      if (c == '(' || c == ')' || c == ',') {
        tokens_.push_back({Token::Kind::Punct, std::string(1, c), 0.0, lineno, col});
        ++i;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
          (c == '.' && i + 1 < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '(' && line[i] != ')' && line[i] != ',' && line[i] != '#')
          ++i;
        std::string text = line.substr(start, i - start);
        char* endp = nullptr;
        double v = std::strtod(text.c_str(), &endp);
        if (endp == nullptr || *endp != '\0')
          throw ParseError("malformed number '" + text + "'", lineno, col);
        tokens_.push_back({Token::Kind::Number, text, v, lineno, col});
        continue;
      }
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
             line[i] != '(' && line[i] != ')' && line[i] != ',' && line[i] != '#')
        ++i;
      tokens_.push_back(
          {Token::Kind::Ident, line.substr(start, i - start), 0.0, lineno, col});
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  std::ostringstream m;
  m << "line " << t.line << ", column " << t.col << ": " << msg << " (got '" << t.text
    << "')";
  throw ParseError(m.str(), t.line, t.col);
}

class Parser {
 public:
  explicit Parser(std::istream& in) : lex_(in) {}

  ParsedSpec parse() {
    while (lex_.peek().kind != Token::Kind::End) {
      const Token& t = lex_.next();
      if (t.kind != Token::Kind::Ident) fail(t, "expected a directive");
      if (t.text == "type")
        parse_type();
      else if (t.text == "component")
        parse_component();
      else if (t.text == "boundaries")
        parse_boundaries();
      else if (t.text == "phase")
        parse_phase();
      else if (t.text == "option")
        parse_option(t);
      else
        fail(t, "unknown directive");
    }
    return assemble();
  }

 private:
  std::string expect_ident(const std::string& what) {
    const Token& t = lex_.next();
    if (t.kind != Token::Kind::Ident) fail(t, "expected " + what);
    return t.text;
  }
  double expect_number(const std::string& what) {
    const Token& t = lex_.next();
    if (t.kind != Token::Kind::Number) fail(t, "expected " + what);
    return t.number;
  }
  void expect_punct(const std::string& p) {
    const Token& t = lex_.next();
    if (t.kind != Token::Kind::Punct || t.text != p) fail(t, "expected '" + p + "'");
  }
  bool at_directive() const {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::End ||
           (t.kind == Token::Kind::Ident && kDirectives.count(t.text) > 0);
  }

  void parse_type() {
    const Token& name_tok = lex_.peek();
    std::string name = expect_ident("a type name");
    if (type_index_.count(name)) fail(name_tok, "type '" + name + "' declared twice");
    std::string mode = expect_ident("a lifetime mode");
    LifetimeModel lm;
    if (mode == "global") {
      std::string dist = expect_ident("exponential or weibull");
      if (dist == "exponential")
        lm = LifetimeModel::global_exponential(expect_number("a rate"));
      else if (dist == "weibull") {
        double scale = expect_number("a scale");
        lm = LifetimeModel::global_weibull(scale, expect_number("a shape"));
      } else
        fail(lex_.peek(), "unknown global distribution '" + dist + "'");
    } else if (mode == "phase_hazard") {
      std::vector<double> rates;
      while (lex_.peek().kind == Token::Kind::Number) rates.push_back(lex_.next().number);
      lm = LifetimeModel::phase_hazard(std::move(rates));
    } else if (mode == "phase_conditional") {
      std::vector<LifetimeModel::PhaseLaw> laws;
      while (!at_directive()) {
        std::string dist = expect_ident("exponential or weibull");
        LifetimeModel::PhaseLaw law;
        if (dist == "exponential") {
          law.dist = LifetimeModel::PhaseLaw::Dist::Exponential;
          law.rate = expect_number("a rate");
        } else if (dist == "weibull") {
          law.dist = LifetimeModel::PhaseLaw::Dist::Weibull;
          law.scale = expect_number("a scale");
          law.shape = expect_number("a shape");
        } else
          fail(lex_.peek(), "unknown phase law '" + dist + "'");
        laws.push_back(law);
      }
      lm = LifetimeModel::phase_conditional(std::move(laws));
    } else {
      fail(lex_.peek(), "unknown lifetime mode '" + mode + "'");
    }
    type_index_[name] = static_cast<int>(spec_.system.types.size());
    spec_.system.types.push_back({name, std::move(lm)});
  }

  void parse_component() {
    const Token& name_tok = lex_.peek();
    std::string name = expect_ident("a component name");
    if (comp_index_.count(name)) fail(name_tok, "component '" + name + "' declared twice");
    const Token& type_tok = lex_.peek();
    std::string type = expect_ident("a physical type name");
    auto it = type_index_.find(type);
    if (it == type_index_.end()) fail(type_tok, "unknown physical type '" + type + "'");
    comp_index_[name] = static_cast<int>(spec_.system.components.size());
    spec_.system.components.push_back({name, it->second});
  }

  void parse_boundaries() {
    if (!boundaries_.empty()) fail(lex_.peek(), "boundaries declared twice");
    while (lex_.peek().kind == Token::Kind::Number) boundaries_.push_back(lex_.next().number);
    if (boundaries_.size() < 3)
      fail(lex_.peek(), "boundaries needs at least tau_1, tau_2, tau_3 (two phases)");
  }

  void parse_phase() {
    PhaseDecl decl;
    decl.tok = lex_.peek();
    decl.index = static_cast<int>(expect_number("a phase index"));
    std::string kw = expect_ident("'components'");
    if (kw != "components") fail(lex_.peek(), "expected 'components'");
    while (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text != "structure") {
      const Token& t = lex_.next();
      auto it = comp_index_.find(t.text);
      if (it == comp_index_.end()) fail(t, "unknown component '" + t.text + "'");
      decl.components.push_back(it->second);
    }
    kw = expect_ident("'structure'");
    if (kw != "structure") fail(lex_.peek(), "expected 'structure'");
    decl.structure = parse_expr();
    phase_decls_.push_back(std::move(decl));
  }

  StructureExpr parse_expr() {
    const Token& t = lex_.next();
    if (t.kind != Token::Kind::Ident) fail(t, "expected a structure expression");
    if (t.text == "comp") {
      const Token& name = lex_.next();
      if (name.kind != Token::Kind::Ident) fail(name, "expected a component name");
      auto it = comp_index_.find(name.text);
      if (it == comp_index_.end()) fail(name, "unknown component '" + name.text + "'");
      return StructureExpr::atom_of(it->second);
    }
    if (t.text == "and" || t.text == "or") {
      expect_punct("(");
      std::vector<StructureExpr> children;
      children.push_back(parse_expr());
      while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
        lex_.next();
        children.push_back(parse_expr());
      }
      expect_punct(")");
      return t.text == "and" ? StructureExpr::and_of(std::move(children))
                             : StructureExpr::or_of(std::move(children));
    }
    if (t.text == "koutofn") {
      expect_punct("(");
      int k = static_cast<int>(expect_number("a threshold"));
      std::vector<StructureExpr> children;
      while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
        lex_.next();
        children.push_back(parse_expr());
      }
      expect_punct(")");
      return StructureExpr::k_of_n(k, std::move(children));
    }
    fail(t, "expected comp/and/or/koutofn");
  }

  void parse_option(const Token& at) {
    std::string key = expect_ident("an option name");
    RunOptions& o = spec_.options;
    if (key == "relax_exponential") {
      std::string v = expect_ident("on/off");
      if (v == "on" || v == "true")
        o.relax_exponential = true;
      else if (v == "off" || v == "false")
        o.relax_exponential = false;
      else
        fail(at, "relax_exponential expects on/off");
    } else if (key == "trials") {
      o.trials = static_cast<std::uint64_t>(expect_number("a trial count"));
    } else if (key == "seed") {
      o.seed = static_cast<std::uint64_t>(expect_number("a seed"));
    } else if (key == "grid_points") {
      o.grid_points = static_cast<int>(expect_number("a grid size"));
    } else if (key == "threads") {
      o.threads = static_cast<int>(expect_number("a thread count"));
    } else {
      fail(at, "unknown option '" + key + "'");
    }
  }

  ParsedSpec assemble() {
    if (boundaries_.empty()) throw ParseError("missing boundaries directive", 0, 0);
    const int n = static_cast<int>(boundaries_.size()) - 1;
    std::map<int, PhaseDecl*> by_index;
    for (auto& d : phase_decls_) {
      if (by_index.count(d.index)) fail(d.tok, "phase declared twice");
      by_index[d.index] = &d;
    }
    if (static_cast<int>(phase_decls_.size()) != n)
      throw ParseError("expected " + std::to_string(n) + " phase declarations, found " +
                           std::to_string(phase_decls_.size()),
                       0, 0);
    for (int i = 1; i <= n; ++i) {
      auto it = by_index.find(i);
      if (it == by_index.end())
        throw ParseError("missing declaration for phase " + std::to_string(i), 0, 0);
      PhaseSpec ph;
      ph.index = i;
      ph.start = boundaries_[i - 1];
      ph.end = boundaries_[i];
      ph.components = it->second->components;
      std::sort(ph.components.begin(), ph.components.end());
      ph.components.erase(std::unique(ph.components.begin(), ph.components.end()),
                          ph.components.end());
      ph.structure = std::move(it->second->structure);
      spec_.system.phases.push_back(std::move(ph));
    }
    return std::move(spec_);
  }

  struct PhaseDecl {
    Token tok;
    int index = 0;
    std::vector<int> components;
    StructureExpr structure;
  };

  Lexer lex_;
  ParsedSpec spec_;
  std::map<std::string, int> type_index_;
  std::map<std::string, int> comp_index_;
  std::vector<double> boundaries_;
  std::vector<PhaseDecl> phase_decls_;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_expr(const PhasedSystem& sys, const StructureExpr& e, std::ostream& os) {
  using K = StructureExpr::Kind;
  switch (e.kind) {
    case K::Atom:
      os << "comp " << sys.components[e.atom].name;
      return;
    case K::And:
    case K::Or:
      os << (e.kind == K::And ? "and(" : "or(");
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << ", ";
        emit_expr(sys, e.children[i], os);
      }
      os << ")";
      return;
    case K::KofN:
      os << "koutofn(" << e.k;
      for (const auto& c : e.children) {
        os << ", ";
        emit_expr(sys, c, os);
      }
      os << ")";
      return;
  }
}

}  // namespace

ParsedSpec parse_spec(std::istream& in) { return Parser(in).parse(); }

ParsedSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file: " + path);
  return parse_spec(in);
}

std::string canonical_spec(const ParsedSpec& spec) {
  const PhasedSystem& sys = spec.system;
  std::ostringstream os;
  for (const auto& t : sys.types) {
    os << "type " << t.name << " ";
    const LifetimeModel& lm = t.lifetime;
    switch (lm.kind) {
      case LifetimeModel::Kind::GlobalExponential:
        os << "global exponential " << fmt_double(lm.rate);
        break;
      case LifetimeModel::Kind::GlobalWeibull:
        os << "global weibull " << fmt_double(lm.scale) << " " << fmt_double(lm.shape);
        break;
      case LifetimeModel::Kind::PhaseHazard:
        os << "phase_hazard";
        for (double r : lm.phase_rates) os << " " << fmt_double(r);
        break;
      case LifetimeModel::Kind::PhaseConditional:
        os << "phase_conditional";
        for (const auto& law : lm.phase_laws) {
          if (law.dist == LifetimeModel::PhaseLaw::Dist::Exponential)
            os << " exponential " << fmt_double(law.rate);
          else
            os << " weibull " << fmt_double(law.scale) << " " << fmt_double(law.shape);
        }
        break;
    }
    os << "\n";
  }
  for (const auto& c : sys.components)
    os << "component " << c.name << " " << sys.types[c.type].name << "\n";
  os << "boundaries";
  for (double b : sys.boundaries()) os << " " << fmt_double(b);
  os << "\n";
  for (const auto& ph : sys.phases) {
    os << "phase " << ph.index << " components";
    for (int c : ph.components) os << " " << sys.components[c].name;
    os << " structure ";
    emit_expr(sys, ph.structure, os);
    os << "\n";
  }
  const RunOptions& o = spec.options;
  os << "option relax_exponential " << (o.relax_exponential ? "on" : "off") << "\n";
  os << "option trials " << o.trials << "\n";
  os << "option seed " << o.seed << "\n";
  os << "option grid_points " << o.grid_points << "\n";
  os << "option threads " << o.threads << "\n";
  return os.str();
}

}  // namespace pms
