#include "serval/field.hpp"

#include <stdexcept>
#include <vector>

namespace serval {

namespace {

[[noreturn]] void parse_fail(std::string_view what, std::string_view text) {
  throw std::invalid_argument(std::string(what) + ": \"" + std::string(text) + "\"");
}

// Split on " + " at parenthesis depth zero; exponents contain " + " inside
// their parens.
std::vector<std::string_view> split_terms(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (depth == 0 && s.compare(i, 3, " + ") == 0) {
      parts.push_back(s.substr(start, i - start));
      i += 2;
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

void MonomialSum::insert_term(const GroupScalar& e, const Rat& c) {
  if (sgn(c) == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

MonomialSum MonomialSum::monomial(const GroupScalar& exponent, const Rat& coeff) {
  MonomialSum m;
  m.insert_term(exponent, coeff);
  return m;
}

ExtScalar MonomialSum::val() const {
  if (terms_.empty()) return ExtScalar::infinity();
  return ExtScalar(terms_.begin()->first);
}

const GroupScalar& MonomialSum::leading_exponent() const {
  if (terms_.empty()) throw std::domain_error("zero sum has no leading term");
  return terms_.begin()->first;
}

const Rat& MonomialSum::leading_coeff() const {
  if (terms_.empty()) throw std::domain_error("zero sum has no leading term");
  return terms_.begin()->second;
}

bool MonomialSum::exponents_in(ValueGroup g) const {
  for (const auto& [e, c] : terms_)
    if (!e.in_group(g)) return false;
  return true;
}

MonomialSum MonomialSum::operator+(const MonomialSum& o) const {
  MonomialSum out = *this;
  for (const auto& [e, c] : o.terms_) out.insert_term(e, c);
  return out;
}

MonomialSum MonomialSum::operator-(const MonomialSum& o) const {
  MonomialSum out = *this;
  for (const auto& [e, c] : o.terms_) out.insert_term(e, -c);
  return out;
}

MonomialSum MonomialSum::operator-() const {
  MonomialSum out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

MonomialSum MonomialSum::operator*(const MonomialSum& o) const {
  MonomialSum out;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) out.insert_term(e1 + e2, c1 * c2);
  return out;
}

MonomialSum MonomialSum::scaled(const Rat& c) const {
  MonomialSum out;
  if (sgn(c) == 0) return out;
  for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
  return out;
}

MonomialSum MonomialSum::shifted(const GroupScalar& g, const Rat& c) const {
  MonomialSum out;
  if (sgn(c) == 0) return out;
  for (const auto& [e, k] : terms_) out.terms_.emplace(e + g, k * c);
  return out;
}

std::string MonomialSum::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += rat_str(c) + "*t^(" + e.str() + ")";
  }
  return out;
}

MonomialSum MonomialSum::parse(std::string_view text) {
  text = strip(text);
  if (text == "0") return {};
  MonomialSum out;
  for (std::string_view term : split_terms(text)) {
    term = strip(term);
    if (term.empty()) parse_fail("empty monomial", text);
    Rat coeff(1);
    std::string_view expo_part;
    const auto caret = term.find("t^(");
    if (caret == std::string_view::npos) {
      out.insert_term(GroupScalar(), parse_rat(term));
      continue;
    }
    if (term.back() != ')') parse_fail("bad monomial", term);
    expo_part = term.substr(caret + 3, term.size() - caret - 4);
    std::string_view head = strip(term.substr(0, caret));
    if (!head.empty()) {
      if (head.back() != '*') parse_fail("bad monomial", term);
      head.remove_suffix(1);
      coeff = parse_rat(head);
    }
    out.insert_term(GroupScalar::parse(expo_part), coeff);
  }
  return out;
}

FieldElem::FieldElem(MonomialSum num, MonomialSum den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

void FieldElem::normalize() {
  if (num_.is_zero()) {
    den_ = MonomialSum::one();
    return;
  }
  if (den_.term_count() == 1) {
    const GroupScalar& e = den_.leading_exponent();
    const Rat& c = den_.leading_coeff();
    num_ = num_.shifted(-e, Rat(1) / c);
    den_ = MonomialSum::one();
  }
}

FieldElem FieldElem::monomial(const GroupScalar& exponent, const Rat& coeff) {
  return FieldElem(MonomialSum::monomial(exponent, coeff));
}

ExtScalar FieldElem::val() const {
  if (num_.is_zero()) return ExtScalar::infinity();
  return ExtScalar(num_.leading_exponent() - den_.leading_exponent());
}

bool FieldElem::in_valuation_ring() const {
  const ExtScalar v = val();
  return v.is_infinite() || v.finite().sign() >= 0;
}

bool FieldElem::exponents_in(ValueGroup g) const {
  return num_.exponents_in(g) && den_.exponents_in(g);
}

Rat FieldElem::leading_rat() const {
  if (num_.is_zero()) throw std::domain_error("zero element has no leading part");
  return num_.leading_coeff() / den_.leading_coeff();
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  return FieldElem(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
  return FieldElem(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

FieldElem FieldElem::operator-() const {
  FieldElem out = *this;
  out.num_ = -out.num_;
  return out;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  return FieldElem(num_ * o.num_, den_ * o.den_);
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero");
  return FieldElem(num_ * o.den_, den_ * o.num_);
}

FieldElem FieldElem::inv() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return FieldElem(den_, num_);
}

bool FieldElem::operator==(const FieldElem& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

std::string FieldElem::str() const {
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

FieldElem FieldElem::parse(std::string_view text) {
  text = strip(text);
  if (text.empty()) parse_fail("empty field element", text);
  if (text.front() != '(') return FieldElem(MonomialSum::parse(text));
  // scan the matched close paren of the numerator
  int depth = 0;
  size_t close = std::string_view::npos;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')' && --depth == 0) { close = i; break; }
  }
  if (close == std::string_view::npos) parse_fail("unbalanced parens", text);
  if (close + 1 == text.size())  // "(num)" with no denominator
    return FieldElem(MonomialSum::parse(text.substr(1, close - 1)));
  if (text[close + 1] != '/' || close + 2 >= text.size() ||
      text[close + 2] != '(' || text.back() != ')')
    parse_fail("bad fraction", text);
  MonomialSum num = MonomialSum::parse(text.substr(1, close - 1));
  MonomialSum den =
      MonomialSum::parse(text.substr(close + 3, text.size() - close - 4));
  if (den.is_zero()) parse_fail("zero denominator", text);
  return FieldElem(std::move(num), std::move(den));
}

FieldElem divide_in_R(const FieldElem& a, const FieldElem& b) {
  if (a.is_zero()) throw std::domain_error("divide_in_R: divisor is zero");
  if (!a.in_valuation_ring())
    throw std::domain_error("divide_in_R: divisor not in R");
  if (b.val() < a.val())
    throw std::domain_error("divide_in_R: quotient would leave R");
  return b / a;
}

FieldElem element_with_value(const GroupScalar& g) {
  return FieldElem::monomial(g);
}

}  // namespace serval
