#ifndef FKM_POLYNOMIAL_HPP
#define FKM_POLYNOMIAL_HPP

#include <fkm/matrix.hpp>
#include <fkm/rational.hpp>

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkm {

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are keyed by exponent vectors of fixed length nvars; the map order
// (lexicographic on exponents) makes serialization deterministic.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Rational>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("Polynomial: negative nvars");
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static Polynomial variable(int nvars, int i) {
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (int(e.size()) != nvars_) throw std::invalid_argument("Polynomial: exponent length");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const Rational coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  friend Polynomial operator*(const Rational& s, const Polynomial& p) {
    Polynomial r(p.nvars_);
    if (s == 0) return r;
    for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, s * c);
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_vars(b);
    Polynomial r(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Rational eval(const std::vector<Rational>& x) const {
    if (int(x.size()) != nvars_) throw std::invalid_argument("Polynomial::eval: point size");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      acc += t;
    }
    return acc;
  }

  Polynomial derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("Polynomial::derivative");
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      r.add_term(d, c * e[var]);
    }
    return r;
  }

  Polynomial laplacian() const {
    Polynomial r(nvars_);
    for (int i = 0; i < nvars_; ++i) r += derivative(i).derivative(i);
    return r;
  }

  Polynomial gradient_norm_squared() const {
    Polynomial r(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      Polynomial d = derivative(i);
      r += d * d;
    }
    return r;
  }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (int x : e) t += x;
      if (t > d) d = t;
    }
    return d;  // -1 for the zero polynomial
  }

  // Total degree if every term has the same one.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (int x : e) t += x;
      if (!d)
        d = t;
      else if (*d != t)
        return std::nullopt;
    }
    return d;
  }

  // |x|^{2k} = (sum_i x_i^2)^k.
  static Polynomial norm_power(int nvars, int k) {
    Polynomial base(nvars);
    Exponents e(nvars, 0);
    for (int i = 0; i < nvars; ++i) {
      e[i] = 2;
      base.add_term(e, 1);
      e[i] = 0;
    }
    Polynomial r = constant(nvars, 1);
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
  }

  // <Px, x> as a polynomial, P symmetric or not (the symmetric part acts).
  static Polynomial quadratic_form(const Mat& p) {
    if (!p.is_square()) throw std::invalid_argument("quadratic_form: not square");
    const int n = p.rows();
    Polynomial r(n);
    Exponents e(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (p(i, j) == 0) continue;
        e[i] += 1;
        e[j] += 1;
        r.add_term(e, p(i, j));
        e[i] = 0;
        e[j] = 0;
      }
    return r;
  }

  // Text format: first line "nvars N", then one term per line
  // "coeff : e_1 e_2 ... e_n" in map (deterministic) order.
  void write_text(std::ostream& os) const {
    os << "nvars " << nvars_ << '\n';
    for (const auto& [e, c] : terms_) {
      os << rational_to_string(c) << " :";
      for (int x : e) os << ' ' << x;
      os << '\n';
    }
  }

  static Polynomial read_text(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("Polynomial::read_text: empty input");
    std::istringstream hdr(line);
    std::string kw;
    int n = -1;
    if (!(hdr >> kw >> n) || kw != "nvars" || n < 0)
      throw std::invalid_argument("Polynomial::read_text: bad header");
    Polynomial p(n);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string ctok, colon;
      if (!(ls >> ctok >> colon) || colon != ":")
        throw std::invalid_argument("Polynomial::read_text: bad term line '" + line + "'");
      Exponents e(n);
      for (int i = 0; i < n; ++i)
        if (!(ls >> e[i]) || e[i] < 0)
          throw std::invalid_argument("Polynomial::read_text: bad exponents in '" + line + "'");
      p.add_term(e, parse_rational(ctok));
    }
    return p;
  }

  std::string to_text() const {
    std::ostringstream os;
    write_text(os);
    return os.str();
  }
  static Polynomial from_text(const std::string& s) {
    std::istringstream is(s);
    return read_text(is);
  }

 private:
  void check_vars(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Polynomial: nvars mismatch");
  }

  int nvars_;
  TermMap terms_;
};

}  // namespace fkm

#endif
