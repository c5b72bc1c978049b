#include "serval/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace serval {

namespace {

// strip ASCII whitespace at both ends
std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(std::string_view what, std::string_view text) {
  throw std::invalid_argument(std::string(what) + ": \"" + std::string(text) + "\"");
}

}  // namespace

Rat parse_rat(std::string_view text) {
  text = trimmed(text);
  if (text.empty()) parse_fail("empty rational", text);
  Rat q;
  if (q.set_str(std::string(text), 10) != 0) parse_fail("bad rational", text);
  if (sgn(q.get_den()) <= 0) parse_fail("bad rational denominator", text);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Int rat_height(const Rat& q) {
  return abs(q.get_num()) + q.get_den();
}

std::string_view group_name(ValueGroup g) {
  switch (g) {
    case ValueGroup::rationals: return "RATIONALS";
    case ValueGroup::z_plus_z_sqrt2: return "Z_PLUS_Z_SQRT2";
  }
  throw std::logic_error("unreachable group");
}

ValueGroup parse_group(std::string_view name) {
  name = trimmed(name);
  if (name == "RATIONALS") return ValueGroup::rationals;
  if (name == "Z_PLUS_Z_SQRT2") return ValueGroup::z_plus_z_sqrt2;
  parse_fail("unknown value group", name);
}

int GroupScalar::sign() const {
  const int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 against 2 b^2.  They cannot be equal because
  // sqrt2 is irrational and both parts are nonzero here.
  const int c = cmp(a_ * a_, 2 * b_ * b_);
  assert(c != 0);
  return sa > 0 ? c : -c;
}

std::strong_ordering GroupScalar::operator<=>(const GroupScalar& o) const {
  const int s = (*this - o).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

GroupScalar GroupScalar::operator*(const GroupScalar& o) const {
  return {a_ * o.a_ + 2 * b_ * o.b_, a_ * o.b_ + b_ * o.a_};
}

GroupScalar GroupScalar::operator/(const GroupScalar& o) const {
  // multiply by the conjugate; norm c^2 - 2 d^2 vanishes only at zero
  const Rat norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero scalar");
  return {(a_ * o.a_ - 2 * b_ * o.b_) / norm, (b_ * o.a_ - a_ * o.b_) / norm};
}

Int GroupScalar::floor() const {
  if (is_rational()) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a_.get_num().get_mpz_t(), a_.get_den().get_mpz_t());
    return q;
  }
  // x = (P + Q*sqrt2)/D with D > 0; isqrt brackets Q*sqrt2 within one unit,
  // the final loops correct by at most a couple of exact comparisons
  const Int P = a_.get_num() * b_.get_den();
  const Int Q = b_.get_num() * a_.get_den();
  const Int D = a_.get_den() * b_.get_den();
  Int u, two_q_sq = 2 * Q * Q;
  mpz_sqrt(u.get_mpz_t(), two_q_sq.get_mpz_t());
  const Int num = sgn(Q) > 0 ? Int(P + u) : Int(P - u - 1);
  Int n;
  mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), D.get_mpz_t());
  while (*this < GroupScalar(Rat(n))) --n;
  while (*this >= GroupScalar(Rat(n + 1))) ++n;
  return n;
}

bool GroupScalar::in_group(ValueGroup g) const {
  switch (g) {
    case ValueGroup::rationals:
      return is_rational();
    case ValueGroup::z_plus_z_sqrt2:
      return a_.get_den() == 1 && b_.get_den() == 1;
  }
  throw std::logic_error("unreachable group");
}

std::string GroupScalar::str() const {
  return rat_str(a_) + " + " + rat_str(b_) + "*sqrt2";
}

GroupScalar GroupScalar::parse(std::string_view text) {
  text = trimmed(text);
  const auto parse_part = [](std::string_view part, Rat& a, Rat& b) {
    part = trimmed(part);
    if (part.empty()) parse_fail("empty scalar part", part);
    if (const auto star = part.rfind("*sqrt2"); star != std::string_view::npos &&
        star + 6 == part.size()) {
      b += parse_rat(part.substr(0, star));
    } else if (part == "sqrt2") {
      b += 1;
    } else if (part == "-sqrt2") {
      b -= 1;
    } else {
      a += parse_rat(part);
    }
  };
  Rat a(0), b(0);
  // split on " + " only; minus signs live inside the rational parts
  size_t pos = 0;
  while (true) {
    const auto sep = text.find(" + ", pos);
    if (sep == std::string_view::npos) {
      parse_part(text.substr(pos), a, b);
      break;
    }
    parse_part(text.substr(pos, sep - pos), a, b);
    pos = sep + 3;
  }
  return {a, b};
}

const GroupScalar& ExtScalar::finite() const {
  if (!fin_) throw std::domain_error("infinite value has no finite part");
  return *fin_;
}

bool ExtScalar::operator==(const ExtScalar& o) const {
  if (is_infinite() || o.is_infinite()) return is_infinite() == o.is_infinite();
  return *fin_ == *o.fin_;
}

std::strong_ordering ExtScalar::operator<=>(const ExtScalar& o) const {
  if (is_infinite()) return o.is_infinite() ? std::strong_ordering::equal
                                            : std::strong_ordering::greater;
  if (o.is_infinite()) return std::strong_ordering::less;
  return *fin_ <=> *o.fin_;
}

ExtScalar ExtScalar::operator+(const ExtScalar& o) const {
  if (is_infinite() || o.is_infinite()) return infinity();
  return ExtScalar(*fin_ + *o.fin_);
}

ExtScalar ExtScalar::operator-() const {
  return ExtScalar(-finite());
}

std::string ExtScalar::str() const {
  return fin_ ? fin_->str() : std::string("inf");
}

ExtScalar ExtScalar::parse(std::string_view text) {
  if (trimmed(text) == "inf") return infinity();
  return ExtScalar(GroupScalar::parse(text));
}

ExtScalar min(const ExtScalar& x, const ExtScalar& y) {
  return y < x ? y : x;
}

GroupScalar excluded_scalar(ValueGroup g) {
  switch (g) {
    case ValueGroup::rationals: return GroupScalar(Rat(-1), Rat(1));  // sqrt2 - 1
    case ValueGroup::z_plus_z_sqrt2: return GroupScalar(Rat(1, 2));
  }
  throw std::logic_error("unreachable group");
}

namespace {

// Shared best-candidate tracker: minimal height first, then lexicographic
// on (a, b).
struct BestScalar {
  std::optional<GroupScalar> value;
  Int height;

  void offer(GroupScalar cand) {
    const Int h = cand.height();
    if (!value || h < height ||
        (h == height && (cand.rational_part() < value->rational_part() ||
                         (cand.rational_part() == value->rational_part() &&
                          cand.sqrt2_part() < value->sqrt2_part())))) {
      value = std::move(cand);
      height = h;
    }
  }
};

// Integer range (lo, hi) exclusive on both ends: [floor(lo)+1, ceil(hi)-1].
struct IntRange {
  Int lo, hi;  // empty when lo > hi
  bool empty() const { return lo > hi; }
};

// Candidates of minimal |p| within [r.lo, r.hi]: one value, or both signs of
// the same magnitude when the range straddles zero.  For a fixed second
// coordinate the height grows with |p|, so nothing else can matter.
template <typename Sink>
void offer_min_abs(const IntRange& r, Sink&& offer) {
  if (r.empty()) return;
  if (r.lo > 0) {
    offer(r.lo);
  } else if (r.hi < 0) {
    offer(r.hi);
  } else {
    offer(Int(0));
  }
}

// Simplest fraction in (lo, hi) for 0 <= lo < hi by Stern-Brocot descent:
// the first tree node inside an interval is componentwise minimal in
// numerator and denominator among all fractions there, hence minimal in
// height, and unique.  Continued-fraction jumps keep the recursion depth at
// the length of the answer's expansion.
Rat simplest_positive(const GroupScalar& lo, const GroupScalar& hi) {
  const Int a = lo.floor();
  if (GroupScalar{Rat(a + 1)} < hi) return Rat(a + 1);
  const GroupScalar flo = lo - GroupScalar{Rat(a)};
  const GroupScalar fhi = hi - GroupScalar{Rat(a)};
  const GroupScalar one{Rat(1)};
  if (flo.is_zero()) {
    // only a + 1/m remain; smallest admissible m
    const Int m = (one / fhi).floor() + 1;
    Rat r(1, m);
    r.canonicalize();
    return Rat(a) + r;
  }
  const Rat inner = simplest_positive(one / fhi, one / flo);
  return Rat(a) + Rat(1) / inner;
}

GroupScalar find_rational(const GroupScalar& lo, const GroupScalar& hi) {
  const GroupScalar zero;
  if (lo < zero && zero < hi) return zero;  // height 2 beats everything else
  if (zero <= lo) return GroupScalar(simplest_positive(lo, hi));
  return GroupScalar(-simplest_positive(-hi, -lo));
}

// Keeps floor(val + m*sqrt2) or floor(val - m*sqrt2) as m advances: each
// step moves the floor by 1 or 2, decided by one exact comparison, so the
// scan never recomputes a floor from scratch.
struct FloorWalk {
  GroupScalar val;
  Int fl;

  explicit FloorWalk(GroupScalar v) : val(std::move(v)), fl(val.floor()) {}

  void step_up(const GroupScalar& root) {
    val += root;
    fl += 2;
    if (val < GroupScalar{Rat(fl)}) fl -= 1;
  }
  void step_down(const GroupScalar& root) {
    val -= root;
    fl -= 2;
    if (!(val < GroupScalar{Rat(fl + 1)})) fl += 1;
  }
};

GroupScalar find_z_sqrt2(const GroupScalar& lo, const GroupScalar& hi) {
  BestScalar best;
  const GroupScalar root = GroupScalar::sqrt2();
  GroupScalar maxend = lo.sign() < 0 ? -lo : lo;
  if (GroupScalar habs = hi.sign() < 0 ? -hi : hi; habs > maxend)
    maxend = habs;

  // b = -m: a ranges over (lo + m r, hi + m r); b = +m over (lo - m r,
  // hi - m r).  Upper ends are tracked negated so ceil comes from a floor.
  FloorWalk neg_lo(lo), neg_hi(-hi), pos_lo(lo), pos_hi(-hi);
  std::optional<Int> m_limit;
  Int limit_for_height;  // the best height m_limit was computed from
  auto update_limit = [&]() {
    if (!best.value) return;
    if (m_limit && limit_for_height == best.height) return;
    // any candidate with |b| = m has |a| >= m*sqrt2 - maxend, so its height
    // is at least m(1 + sqrt2) - maxend + 2
    GroupScalar t = (GroupScalar{Rat(best.height - 2)} + maxend) /
                    (GroupScalar{Rat(1)} + root);
    m_limit = t.floor();
    limit_for_height = best.height;
  };

  for (Int m = 0;; ++m) {
    if (m_limit && m > *m_limit) break;
    if (m > 0) {
      neg_lo.step_up(root);
      neg_hi.step_down(root);
      pos_lo.step_down(root);
      pos_hi.step_up(root);
    }
    offer_min_abs({neg_lo.fl + 1, -neg_hi.fl - 1}, [&](const Int& a) {
      best.offer(GroupScalar(Rat(a), Rat(-m)));
    });
    if (m > 0)
      offer_min_abs({pos_lo.fl + 1, -pos_hi.fl - 1}, [&](const Int& a) {
        best.offer(GroupScalar(Rat(a), Rat(m)));
      });
    update_limit();
  }
  assert(best.value);
  return *best.value;
}

}  // namespace

GroupScalar find_in_interval(const GroupScalar& lo, const GroupScalar& hi,
                             ValueGroup g) {
  if (lo >= hi) throw std::invalid_argument("find_in_interval: empty interval");
  GroupScalar found = g == ValueGroup::rationals ? find_rational(lo, hi)
                                                 : find_z_sqrt2(lo, hi);
  assert(lo < found && found < hi && found.in_group(g));
  return found;
}

std::vector<GroupScalar> decreasing_sequence(const GroupScalar& target,
                                             ValueGroup g, int count) {
  if (count < 0) throw std::invalid_argument("decreasing_sequence: count < 0");
  DescentSequence seq(target, g);
  std::vector<GroupScalar> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(seq.at(k));
  return out;
}

DescentSequence::DescentSequence(GroupScalar target, ValueGroup g)
    : target_(std::move(target)), group_(g) {
  if (target_.in_group(g))
    throw std::invalid_argument("descent target must lie outside the group");
  if (target_.sign() < 0)
    throw std::invalid_argument("descent target must be nonnegative");
}

GroupScalar DescentSequence::at(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("descent index < 0");
  std::lock_guard<std::mutex> lock(mu_);
  while (static_cast<std::int64_t>(cache_.size()) <= k) {
    const auto i = static_cast<std::int64_t>(cache_.size());
    Int pow2;
    mpz_ui_pow_ui(pow2.get_mpz_t(), 2, static_cast<unsigned long>(i + 1));
    Rat eps(1, pow2);
    eps.canonicalize();
    GroupScalar hi = target_ + GroupScalar(eps);
    if (!cache_.empty() && cache_.back() < hi) hi = cache_.back();
    cache_.push_back(find_in_interval(target_, hi, group_));
  }
  return cache_[k];
}

}  // namespace serval
