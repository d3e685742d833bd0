#include "tzeta/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tzeta/error.hpp"

namespace tzeta {

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw Error(ErrorKind::InvalidArgument, "variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1);
}

Polynomial Polynomial::monomial(const Exponent& exponent, const Rational& c) {
  Polynomial p(exponent.size());
  p.add_term(exponent, c);
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                                              terms_.begin()->first.end(),
                                                              [](int k) { return k == 0; }));
}

Rational Polynomial::constant_term() const { return coefficient(Exponent(nvars_, 0)); }

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::coefficient_in(std::size_t var, int power) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(var) != power) continue;
    Exponent f = e;
    f[var] = 0;
    out.add_term(f, c);
  }
  return out;
}

Polynomial Polynomial::leading_coefficient_in(std::size_t var) const {
  const int d = degree_in(var);
  return d < 0 ? Polynomial(nvars_) : coefficient_in(var, d);
}

namespace {

Rational rational_pow(const Rational& base, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw Error(ErrorKind::InvalidArgument, "evaluation point has wrong arity");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i]) t *= rational_pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

Rational Polynomial::evaluate(std::span<const long> point) const {
  std::vector<Rational> q(point.begin(), point.end());
  return evaluate(std::span<const Rational>(q));
}

Polynomial Polynomial::substitute(std::size_t var, const Rational& value) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.at(var) = 0;
    out.add_term(f, c * rational_pow(value, e[var]));
  }
  return out;
}

Polynomial Polynomial::shift(std::size_t var, const Rational& offset) const {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < nvars_; ++i) {
    Polynomial x = variable(nvars_, i);
    if (i == var) x += constant(nvars_, offset);
    images.push_back(std::move(x));
  }
  return compose(images);
}

Polynomial Polynomial::remove_variable(std::size_t var) const {
  if (degree_in(var) > 0) throw Error(ErrorKind::InvalidArgument, "remove_variable: variable still present");
  Polynomial out(nvars_ - 1);
  for (const auto& [e, c] : terms_) {
    Exponent f;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (i != var) f.push_back(e[i]);
    out.add_term(f, c);
  }
  return out;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
  if (images.size() != nvars_) throw Error(ErrorKind::InvalidArgument, "compose: wrong number of images");
  const std::size_t m = images.empty() ? 0 : images.front().nvars();
  for (const auto& im : images)
    if (im.nvars() != m) throw Error(ErrorKind::InvalidArgument, "compose: image arity mismatch");
  // Cache powers of each image.
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    const int d = std::max(degree_in(i), 0);
    powers[i].push_back(constant(m, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(m, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i]) t = t * powers[i][static_cast<std::size_t>(e[i])];
    out += t;
  }
  return out;
}

Polynomial Polynomial::difference(std::size_t var) const { return shift(var, 1) - *this; }

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw Error(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw Error(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw Error(ErrorKind::InvalidArgument, "polynomial arity mismatch");
  Polynomial out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(a.nvars_);
      for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(nvars_, 1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string Polynomial::str(std::string_view prefix) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first reads naturally.
  std::vector<std::pair<Exponent, Rational>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int k : a.first) da += k;
    for (int k : b.first) db += k;
    return da > db;
  });
  for (const auto& [e, c] : ordered) {
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool has_var = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
    if (!has_var || mag != 1) {
      os << mag.get_str();
      if (has_var) os << '*';
    }
    bool first_var = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!first_var) os << '*';
      os << prefix;
      if (nvars_ > 1) os << (i + 1);
      if (e[i] > 1) os << '^' << e[i];
      first_var = false;
    }
    first = false;
  }
  return os.str();
}

long cauchy_root_bound(const std::vector<Rational>& ascending) {
  std::size_t deg = ascending.size();
  while (deg > 0 && ascending[deg - 1] == 0) --deg;
  if (deg <= 1) return 0;
  const Rational lead = abs(ascending[deg - 1]);
  Rational worst = 0;
  for (std::size_t i = 0; i + 1 < deg; ++i) worst = std::max(worst, Rational(abs(ascending[i]) / lead));
  Rational bound = worst + 1;
  mpz_class ceil_bound;
  mpz_cdiv_q(ceil_bound.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  if (!ceil_bound.fits_slong_p()) throw Error(ErrorKind::ThresholdExceeded, "root bound exceeds machine range");
  return ceil_bound.get_si();
}

std::string rational_str(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0) throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
  if (r.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

// --- parser ---------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  // First pass collects the variable count, second pass builds.
  std::size_t scan_arity() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text_.size(); ++i) {
      const char ch = text_[i];
      if (ch == 'x' && i + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i + 1]))) {
        std::size_t j = i + 1;
        std::size_t idx = 0;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j])))
          idx = idx * 10 + static_cast<std::size_t>(text_[j++] - '0');
        n = std::max(n, idx);
      } else if (ch == 'x' || ch == 'y' || ch == 'z') {
        n = std::max<std::size_t>(n, ch == 'x' ? 1 : (ch == 'y' ? 2 : 3));
      }
    }
    return n;
  }

  Polynomial parse(std::size_t nvars) {
    nvars_ = nvars;
    pos_ = 0;
    Polynomial p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc(nvars_);
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    Polynomial t = term();
    acc += negate ? -t : t;
    while (true) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else break;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (true) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        Polynomial d = factor();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc *= Rational(1) / d.constant_term();
      } else {
        break;
      }
    }
    return acc;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (ch == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial::constant(nvars_, Rational(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (ch == 'x' || ch == 'y' || ch == 'z') {
      ++pos_;
      std::size_t idx = 0;
      if (ch == 'x' && pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          idx = idx * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
        if (idx == 0) fail("variables are numbered from x1");
      } else {
        idx = ch == 'x' ? 1 : (ch == 'y' ? 2 : 3);
      }
      if (idx > nvars_) fail("variable index exceeds declared arity");
      return Polynomial::variable(nvars_, idx - 1);
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t nvars_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::size_t nvars) {
  Parser parser(text);
  if (nvars == 0) nvars = std::max<std::size_t>(parser.scan_arity(), 1);
  return parser.parse(nvars);
}

}  // namespace tzeta
