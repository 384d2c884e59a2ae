#include "cwb/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "cwb/errors.hpp"

namespace cwb {

namespace {

bool ident_char(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; }

class Cursor {
public:
  explicit Cursor(std::string_view s) : s_(s) {}

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char peek_raw(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  // A keyword not followed by an identifier character.
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) != w || ident_char(peek_raw(w.size()))) return false;
    pos_ += w.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  void finish() {
    if (!eof()) fail("unexpected trailing input");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::uint64_t natural() {
    skip_ws();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(*begin))) fail("expected a natural number");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec == std::errc::result_out_of_range) fail("natural number out of range");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  bool at_number() {
    skip_ws();
    char c = peek_raw();
    if (c == '-' || c == '+') c = peek_raw(1);
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double number() {
    skip_ws();
    std::size_t start = pos_;
    if (peek_raw() == '+') ++start;
    const char* begin = s_.data() + start;
    const char* end = s_.data() + s_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || !std::isfinite(v)) fail("expected a finite number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      fail("expected an identifier");
    }
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// --- ordinals ---------------------------------------------------------------

Ordinal ordinal_expr(Cursor& c);

Ordinal exponent(Cursor& c) {
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) return Ordinal(c.natural());
  if (c.accept("(")) {
    Ordinal e = ordinal_expr(c);
    c.expect(")");
    return e;
  }
  if (c.accept_word("w")) {
    if (c.accept("^")) return Ordinal::monomial(exponent(c));
    return Ordinal::omega();
  }
  c.fail("expected an exponent");
}

Ordinal ordinal_term(Cursor& c) {
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) return Ordinal(c.natural());
  if (!c.accept_word("w")) c.fail("expected a natural number or 'w'");
  Ordinal e(1);
  if (c.accept("^")) e = exponent(c);
  std::uint64_t coefficient = 1;
  if (c.accept("*")) {
    coefficient = c.natural();
    if (coefficient == 0) c.fail("coefficient must be >= 1");
  }
  return Ordinal::monomial(e, coefficient);
}

Ordinal ordinal_expr(Cursor& c) {
  Ordinal acc = ordinal_term(c);
  while (c.accept("+")) acc = add(acc, ordinal_term(c));
  return acc;
}

// --- first-order formulas ---------------------------------------------------

class FoParser {
public:
  FoParser(Cursor& c, const std::vector<std::string>& free) : c_(c), free_(free.begin(), free.end()) {}

  FoFormula formula() {
    if (c_.accept_word("forall")) return quantifier(true);
    if (c_.accept_word("exists")) return quantifier(false);
    FoFormula left = disjunction();
    if (c_.accept("->")) return FoFormula::implies(std::move(left), formula());
    return left;
  }

private:
  Cursor& c_;
  std::set<std::string> free_;
  std::vector<std::string> bound_;

  FoFormula quantifier(bool universal) {
    const std::string v = variable_name();
    c_.expect(".");
    bound_.push_back(v);
    FoFormula body = formula();
    bound_.pop_back();
    return universal ? FoFormula::forall(v, std::move(body)) : FoFormula::exists(v, std::move(body));
  }

  std::string variable_name() {
    const std::size_t at = c_.pos();
    std::string v = c_.identifier();
    if (v == "forall" || v == "exists" || v == "i") {
      c_.reset(at);
      c_.fail("'" + v + "' is reserved");
    }
    return v;
  }

  FoFormula disjunction() {
    FoFormula acc = conjunction();
    while (c_.accept("|")) acc = FoFormula::disj(std::move(acc), conjunction());
    return acc;
  }

  FoFormula conjunction() {
    FoFormula acc = unary();
    while (c_.accept("&")) acc = FoFormula::conj(std::move(acc), unary());
    return acc;
  }

  FoFormula unary() {
    if (c_.peek() == '!' && c_.peek_raw(1) != '=') {
      c_.accept("!");
      return FoFormula::negation(unary());
    }
    if (c_.accept_word("forall")) return quantifier(true);
    if (c_.accept_word("exists")) return quantifier(false);
    if (c_.peek() == '(') {
      // Either a parenthesized term starting an atom, or a parenthesized formula.
      const std::size_t start = c_.pos();
      try {
        return atom();
      } catch (const ParseError& first) {
        c_.reset(start);
        try {
          c_.expect("(");
          FoFormula f = formula();
          c_.expect(")");
          return f;
        } catch (const ParseError& second) {
          if (first.position() >= second.position()) throw first;
          throw;
        }
      }
    }
    return atom();
  }

  FoFormula atom() {
    FoTerm a = term();
    if (c_.accept("<=")) return FoFormula::leq(std::move(a), term());
    if (c_.accept("!=")) return FoFormula::negation(FoFormula::eq(std::move(a), term()));
    if (c_.accept("=")) return FoFormula::eq(std::move(a), term());
    c_.fail("expected '=', '<=' or '!='");
  }

  FoTerm term() {
    FoTerm acc = meet();
    while (c_.accept("\\/")) acc = FoTerm::join(std::move(acc), meet());
    return acc;
  }

  FoTerm meet() {
    FoTerm acc = term_unary();
    while (c_.accept("/\\")) acc = FoTerm::meet(std::move(acc), term_unary());
    return acc;
  }

  FoTerm term_unary() {
    if (c_.accept("~")) return FoTerm::complement(term_unary());
    if (c_.accept("(")) {
      FoTerm t = term();
      c_.expect(")");
      return t;
    }
    if (c_.accept_word("0")) return FoTerm::zero();
    if (c_.accept_word("1")) return FoTerm::one();
    const std::size_t at = c_.pos();
    std::string v = variable_name();
    if (std::find(bound_.begin(), bound_.end(), v) == bound_.end() && !free_.count(v)) {
      c_.reset(at);
      c_.fail("unbound variable '" + v + "'");
    }
    return FoTerm::variable(std::move(v));
  }
};

// --- continuous formulas ----------------------------------------------------

class CParser {
public:
  CParser(Cursor& c, const std::vector<std::string>& free) : c_(c), free_(free.begin(), free.end()) {}

  CFormula formula() {
    if (c_.at_number()) {
      const std::size_t at = c_.pos();
      const double v = c_.number();
      if (!(v >= 0.0 && v <= 1.0)) {
        c_.reset(at);
        c_.fail("formula constants lie in [0, 1]");
      }
      return CFormula::constant(v);
    }
    c_.expect("(");
    const std::size_t at = c_.pos();
    const std::string head = symbol();
    CFormula out;
    if (head == "norm") {
      out = CFormula::norm(term());
    } else if (head == "+") {
      CFormula a = formula();
      out = CFormula::add(std::move(a), formula());
    } else if (head == "-.") {
      CFormula a = formula();
      out = CFormula::monus(std::move(a), formula());
    } else if (head == "absdiff") {
      CFormula a = formula();
      out = CFormula::absdiff(std::move(a), formula());
    } else if (head == "max" || head == "min") {
      std::vector<CFormula> args;
      while (c_.peek() != ')' && !c_.eof()) args.push_back(formula());
      if (args.empty()) c_.fail(head + " needs an argument");
      out = head == "max" ? CFormula::max(std::move(args)) : CFormula::min(std::move(args));
    } else if (head == "*") {
      const std::size_t rat = c_.pos();
      const double r = c_.number();
      if (!(r >= 0.0)) {
        c_.reset(rat);
        c_.fail("scalars must be >= 0");
      }
      out = CFormula::scale(r, formula());
    } else if (head == "sup" || head == "inf") {
      const std::string v = variable_name();
      const Sort s = sort();
      bound_.push_back(v);
      CFormula body = formula();
      bound_.pop_back();
      out = head == "sup" ? CFormula::sup(v, s, std::move(body)) : CFormula::inf(v, s, std::move(body));
    } else {
      c_.reset(at);
      c_.fail("unknown connective '" + head + "'");
    }
    c_.expect(")");
    return out;
  }

private:
  Cursor& c_;
  std::set<std::string> free_;
  std::vector<std::string> bound_;

  std::string symbol() {
    c_.skip_ws();
    std::string out;
    while (true) {
      const char ch = c_.peek_raw();
      if (ch == '\0' || ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) break;
      out += ch;
      c_.reset(c_.pos() + 1);
    }
    if (out.empty()) c_.fail("expected a symbol");
    return out;
  }

  std::string variable_name() {
    const std::size_t at = c_.pos();
    std::string v = c_.identifier();
    if (v == "i" || v == "c" || v == "star" || v == "norm") {
      c_.reset(at);
      c_.fail("'" + v + "' is reserved");
    }
    return v;
  }

  Sort sort() {
    if (c_.accept_word(":ball")) return Sort::Ball;
    if (c_.accept_word(":sa")) return Sort::SelfAdjoint;
    if (c_.accept_word(":pos")) return Sort::Positive;
    if (c_.accept_word(":proj")) return Sort::Projection;
    c_.fail("expected a sort (:ball, :sa, :pos, :proj)");
  }

  CTerm term() {
    if (c_.at_number()) return CTerm::constant(c_.number());
    if (c_.accept_word("i")) return CTerm::constant(Complex(0.0, 1.0));
    if (!c_.accept("(")) {
      const std::size_t at = c_.pos();
      std::string v = variable_name();
      if (std::find(bound_.begin(), bound_.end(), v) == bound_.end() && !free_.count(v)) {
        c_.reset(at);
        c_.fail("unbound variable '" + v + "'");
      }
      return CTerm::variable(std::move(v));
    }
    const std::size_t at = c_.pos();
    const std::string head = symbol();
    CTerm out;
    if (head == "c") {
      const double re = c_.number();
      out = CTerm::constant(Complex(re, c_.number()));
    } else if (head == "star") {
      out = CTerm::star(term());
    } else if (head == "+" || head == "*" || head == "-") {
      std::vector<CTerm> args;
      while (c_.peek() != ')' && !c_.eof()) args.push_back(term());
      if (args.empty()) c_.fail("'" + head + "' needs an argument");
      if (head == "+") {
        out = CTerm::add(std::move(args));
      } else if (head == "*") {
        out = CTerm::mul(std::move(args));
      } else if (args.size() == 1) {
        out = CTerm::neg(std::move(args[0]));
      } else if (args.size() == 2) {
        out = CTerm::sub(std::move(args[0]), std::move(args[1]));
      } else {
        c_.fail("'-' takes one or two arguments");
      }
    } else {
      c_.reset(at);
      c_.fail("unknown term operator '" + head + "'");
    }
    c_.expect(")");
    return out;
  }
};

// --- descriptors ------------------------------------------------------------

BADescriptor descriptor(Cursor& c) {
  const std::size_t at = c.pos();
  try {
    if (c.accept_word("trivial")) return BADescriptor::trivial();
    if (c.accept_word("fincof")) return BADescriptor::fincof();
    if (c.accept_word("free")) return BADescriptor::free_atomless();
    if (c.accept_word("P")) {
      c.expect("(");
      if (!c.accept_word("omega")) c.fail("expected 'omega'");
      c.expect(")");
      if (c.accept("/")) {
        if (!c.accept_word("fin")) c.fail("expected 'fin'");
        return BADescriptor::powerset_mod_fin();
      }
      return BADescriptor::powerset_omega();
    }
    if (c.accept_word("finite")) {
      c.expect("(");
      const std::uint64_t n = c.natural();
      c.expect(")");
      return BADescriptor::finite(n);
    }
    if (c.accept_word("intalg")) {
      c.expect("(");
      Ordinal alpha = ordinal_expr(c);
      c.expect(")");
      return BADescriptor::interval_algebra(std::move(alpha));
    }
    if (c.accept_word("prod")) {
      c.expect("(");
      std::vector<BADescriptor> factors{descriptor(c)};
      while (c.accept(",")) factors.push_back(descriptor(c));
      c.expect(")");
      return BADescriptor::product(std::move(factors));
    }
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), at);
  }
  c.fail("expected a Boolean algebra descriptor");
}

// --- complex numbers --------------------------------------------------------

// [sign] (number [i] | i). Returns the value and whether it was imaginary.
std::pair<double, bool> signed_part(Cursor& c, bool sign_required) {
  c.skip_ws();
  double sign = 1.0;
  if (c.peek_raw() == '+' || c.peek_raw() == '-') {
    sign = c.peek_raw() == '-' ? -1.0 : 1.0;
    c.reset(c.pos() + 1);
  } else if (sign_required) {
    c.fail("expected '+' or '-'");
  }
  c.skip_ws();
  if (c.peek_raw() == 'i' && !ident_char(c.peek_raw(1))) {
    c.reset(c.pos() + 1);
    return {sign, true};
  }
  if (!c.at_number() || c.peek_raw() == '-' || c.peek_raw() == '+') c.fail("expected a number");
  const double v = c.number();
  if (c.peek_raw() == 'i' && !ident_char(c.peek_raw(1))) {
    c.reset(c.pos() + 1);
    return {sign * v, true};
  }
  return {sign * v, false};
}

Complex complex_value(Cursor& c) {
  auto [first, imaginary] = signed_part(c, false);
  if (imaginary) return Complex(0.0, first);
  c.skip_ws();
  if (c.peek_raw() == '+' || c.peek_raw() == '-') {
    const std::size_t at = c.pos();
    auto [second, im2] = signed_part(c, true);
    if (!im2) {
      c.reset(at);
      c.fail("expected an imaginary part");
    }
    return Complex(first, second);
  }
  return Complex(first, 0.0);
}

CElement element_value(Cursor& c) {
  const bool bracket = c.accept("[");
  CElement out{complex_value(c)};
  while (c.accept(",")) out.push_back(complex_value(c));
  if (bracket) c.expect("]");
  return out;
}

std::string number_text(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

// --- type conditions --------------------------------------------------------

CElement coefficient(Cursor& c, std::size_t points) {
  if (c.peek() == '[') {
    const std::size_t at = c.pos();
    CElement e = element_value(c);
    if (e.size() != points) {
      c.reset(at);
      c.fail("element has " + std::to_string(e.size()) + " coordinates, expected " + std::to_string(points));
    }
    return e;
  }
  if (c.accept("(")) {
    const Complex z = complex_value(c);
    c.expect(")");
    return CElement(points, z);
  }
  if (c.accept_word("i")) return CElement(points, Complex(0.0, 1.0));
  if (c.at_number()) return CElement(points, Complex(c.number(), 0.0));
  c.fail("expected a coefficient");
}

bool at_variable(Cursor& c) { return c.peek() == 'x' && std::isdigit(static_cast<unsigned char>(c.peek_raw(1))); }

std::size_t variable_index(Cursor& c) {
  c.expect("x");
  const std::size_t at = c.pos();
  const std::uint64_t k = c.natural();
  if (k >= kMaxTypeVariables) {
    c.reset(at);
    c.fail("at most 3 variables (x0, x1, x2)");
  }
  return static_cast<std::size_t>(k);
}

}  // namespace

Ordinal parse_ordinal(std::string_view text) {
  Cursor c(text);
  Ordinal out = ordinal_expr(c);
  c.finish();
  return out;
}

FoFormula parse_fo_formula(std::string_view text, const std::vector<std::string>& free) {
  Cursor c(text);
  FoParser p(c, free);
  FoFormula out = p.formula();
  c.finish();
  return out;
}

CFormula parse_cformula(std::string_view text, const std::vector<std::string>& free) {
  Cursor c(text);
  CParser p(c, free);
  CFormula out = p.formula();
  c.finish();
  return out;
}

BADescriptor parse_descriptor(std::string_view text) {
  Cursor c(text);
  BADescriptor out = descriptor(c);
  c.finish();
  return out;
}

Complex parse_complex(std::string_view text) {
  Cursor c(text);
  const Complex z = complex_value(c);
  c.finish();
  return z;
}

std::string format_complex(Complex z) {
  const double re = z.real(), im = z.imag();
  auto imag_text = [](double v) {
    if (v == 1.0) return std::string("i");
    if (v == -1.0) return std::string("-i");
    return number_text(v) + "i";
  };
  if (im == 0.0) return number_text(re);
  if (re == 0.0) return imag_text(im);
  std::string tail = imag_text(im);
  if (tail[0] != '-') tail = "+" + tail;
  return number_text(re) + tail;
}

CElement parse_element(std::string_view text) {
  Cursor c(text);
  CElement e = element_value(c);
  c.finish();
  return e;
}

std::string format_element(const CElement& e) {
  std::string out = "[";
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? ", " : "") + format_complex(e[i]);
  return out + "]";
}

CylinderSet parse_cylinder(std::string_view text) {
  Cursor c(text);
  CylinderSet out = CylinderSet::bottom();
  if (c.accept_word("top")) {
    out = CylinderSet::top();
  } else if (c.accept_word("bot")) {
    out = CylinderSet::bottom();
  } else {
    do {
      c.skip_ws();
      std::string word;
      while (c.peek_raw() == '0' || c.peek_raw() == '1') {
        word += c.peek_raw();
        c.reset(c.pos() + 1);
      }
      if (word.empty()) c.fail("expected a word over {0,1}, 'top' or 'bot'");
      if (word.size() > CylinderSet::kMaxDepth) c.fail("cylinder deeper than 20");
      out = out.join(CylinderSet::cylinder(word));
    } while (c.accept("|"));
  }
  c.finish();
  return out;
}

TypeCondition parse_type_condition(std::string_view text, std::size_t points) {
  Cursor c(text);
  TypeCondition out;
  out.polynomial.constant = CElement(points);
  if (!c.accept_word("norm")) c.fail("expected 'norm('");
  c.expect("(");
  bool first = true;
  while (first || c.peek() == '+' || c.peek() == '-') {
    double sign = 1.0;
    if (c.accept("-")) {
      sign = -1.0;
    } else if (!first) {
      c.expect("+");
    }
    first = false;
    CElement coeff(points, Complex(1.0));
    bool has_coeff = false;
    if (!at_variable(c)) {
      coeff = coefficient(c, points);
      has_coeff = true;
    }
    for (auto& z : coeff) z *= sign;
    if (has_coeff && !c.accept("*")) {
      out.polynomial.constant = out.polynomial.constant + coeff;
      continue;
    }
    if (!at_variable(c)) c.fail("expected a variable x0, x1 or x2");
    const std::size_t var = variable_index(c);
    const bool star = c.accept("^*");
    out.polynomial.terms.push_back(LinearTerm{var, star, std::move(coeff)});
  }
  c.expect(")");
  if (!c.accept_word("in")) c.fail("expected 'in'");
  do {
    if (c.accept("{")) {
      const double v = c.number();
      c.expect("}");
      out.target.push_back(ClosedInterval{v, v});
    } else {
      c.expect("[");
      const double lo = c.number();
      c.expect(",");
      const std::size_t at = c.pos();
      const double hi = c.number();
      c.expect("]");
      if (!(0.0 <= lo && lo <= hi)) {
        c.reset(at);
        c.fail("target intervals need 0 <= lo <= hi");
      }
      out.target.push_back(ClosedInterval{lo, hi});
    }
  } while (c.accept_word("u"));
  for (const auto& k : out.target) {
    if (k.lo < 0.0) c.fail("targets must be nonnegative");
  }
  c.finish();
  return out;
}

}  // namespace cwb
